"""Two-condition / two-choice interference probability toolkit.

Closed-form conditional probabilities with interference phases, an
amplitude-level oracle on small Hilbert spaces, level-set geometry of the
phase plane, and dataset/report tooling around the classic disjunction
experiments.
"""

__version__ = "0.1.0"

from .amplitudes import (
    ConditionDensity,
    IntermediateEvent,
    JointState,
    build_state,
    completeness_check,
    conditional_from_amplitudes,
    conditional_from_density,
    phase_parameter_count,
    project,
)
from .core import (
    ExtremalWeights,
    PhasePair,
    ProbabilityInterval,
    TwoChoiceExperiment,
    classical_bounds,
    conditional_classical,
    conditional_quantum,
    extremal_weights,
    interference_correction,
    quantum_bounds,
    two_level_bounds,
    two_level_mix,
)
from .datasets import (
    ExperimentFile,
    ReportRow,
    bundled_fixture_path,
    load_experiments,
    report,
)
from .geometry import (
    ConcurrencyReport,
    ContourGrid,
    TrajectoryLine,
    concurrency,
    contour,
    intersect,
    sample_trajectory,
    trajectory,
)

__all__ = [
    "ConditionDensity",
    "ConcurrencyReport",
    "ContourGrid",
    "ExperimentFile",
    "ExtremalWeights",
    "IntermediateEvent",
    "JointState",
    "PhasePair",
    "ProbabilityInterval",
    "ReportRow",
    "TrajectoryLine",
    "TwoChoiceExperiment",
    "build_state",
    "bundled_fixture_path",
    "classical_bounds",
    "completeness_check",
    "concurrency",
    "conditional_classical",
    "conditional_from_amplitudes",
    "conditional_from_density",
    "conditional_quantum",
    "contour",
    "extremal_weights",
    "interference_correction",
    "intersect",
    "load_experiments",
    "phase_parameter_count",
    "project",
    "quantum_bounds",
    "report",
    "sample_trajectory",
    "trajectory",
    "two_level_bounds",
    "two_level_mix",
]
