"""Geometry of the interference-phase plane.

In the coordinates (c0, c1) = (cos(theta0), cos(theta1)) the level set of the
conditional probability at a fixed target value is exactly a straight line,

    alpha*c0 + beta*c1 + gamma = 0,

so fitting observed values, intersecting level sets across experiments, and
measuring how far a third experiment is from a common phase point are all
plain linear algebra.  Contour grids over the (theta0, theta1) square carry
the same information in angle space for rendering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    EPS,
    PhasePair,
    ProbabilityInterval,
    TwoChoiceExperiment,
    classical_bounds,
    conditional_classical,
    quantum_bounds,
)
from .errors import (
    DegenerateExperimentError,
    DomainError,
    ParallelLinesError,
    SingularityError,
)

#: cells whose |c1| solution exceeds 1 by more than this are dropped, not clamped
_CLAMP_TOL = 1e-12

#: default resolution is odd so theta = pi/2 and pi land exactly on grid points
DEFAULT_RESOLUTION = 201

REGION_BELOW = "below"
REGION_CLASSICAL = "classical"
REGION_ABOVE = "above"
REGION_SINGULAR = "singular"


@dataclass(frozen=True)
class TrajectoryLine:
    """Level-set line alpha*c0 + beta*c1 + gamma = 0 for a target probability."""

    alpha: float
    beta: float
    gamma: float
    target: float
    label: str = ""

    def residual(self, c0: float, c1: float) -> float:
        """Signed distance functional alpha*c0 + beta*c1 + gamma."""
        return self.alpha * c0 + self.beta * c1 + self.gamma

    def c1_at(self, c0: float) -> float:
        if abs(self.beta) <= EPS:
            raise SingularityError("line is vertical in c0; c1 is unconstrained")
        return -(self.alpha * c0 + self.gamma) / self.beta

    def c0_at(self, c1: float) -> float:
        if abs(self.alpha) <= EPS:
            raise SingularityError("line is horizontal in c0; c0 is unconstrained")
        return -(self.beta * c1 + self.gamma) / self.alpha


@dataclass(frozen=True)
class ContourGrid:
    """Conditional probability sampled on a uniform (theta0, theta1) grid."""

    thetas: np.ndarray
    values: np.ndarray
    regions: np.ndarray
    classical: ProbabilityInterval
    classical_value: float

    @property
    def resolution(self) -> int:
        return self.thetas.shape[0]

    def region_fractions(self) -> dict:
        """Fraction of grid cells carrying each region label."""
        total = self.regions.size
        return {
            label: int(np.sum(self.regions == label)) / total
            for label in (REGION_BELOW, REGION_CLASSICAL, REGION_ABOVE, REGION_SINGULAR)
        }

    def outside_classical_fraction(self) -> float:
        f = self.region_fractions()
        return f[REGION_BELOW] + f[REGION_ABOVE]


@dataclass(frozen=True)
class ConcurrencyReport:
    """Common phase point fitted from two experiments, judged against all."""

    point: Tuple[float, float]
    in_range: bool
    labels: Tuple[str, ...]
    residuals: Tuple[float, ...]
    fit_pair: Tuple[int, int]


def trajectory(
    exp: TwoChoiceExperiment, target: Optional[float] = None
) -> TrajectoryLine:
    """Level-set line of the choice-0 conditional probability at ``target``.

    With A, B the two interference amplitudes and C the classical prediction,
    solving (C + A*c0) / (1 + A*c0 + B*c1) = P for a line gives
    alpha = A*(1-P), beta = -B*P, gamma = C - P.
    """
    if target is None:
        target = exp.observed_pk
    if target is None:
        raise DomainError(f"experiment {exp.label!r} has no observed_pk and no target")
    if not 0.0 < target < 1.0:
        raise DomainError(f"target must lie in (0, 1), got {target!r}")
    a = exp.interference_amplitude(0)
    b = exp.interference_amplitude(1)
    if a <= EPS and b <= EPS:
        raise DegenerateExperimentError(
            f"experiment {exp.label!r} has no interference amplitude; "
            "the phase plane is featureless"
        )
    return TrajectoryLine(
        alpha=a * (1.0 - target),
        beta=-b * target,
        gamma=conditional_classical(exp, 0) - target,
        target=target,
        label=exp.label,
    )


def _admissible_c0_interval(line: TrajectoryLine) -> Optional[Tuple[float, float]]:
    """Sub-interval of c0 in [-1, 1] where the line stays inside the unit square."""
    if abs(line.alpha) <= EPS and abs(line.beta) <= EPS:
        return None
    if abs(line.beta) <= EPS:
        # vertical line: single admissible c0, any c1
        c0 = -line.gamma / line.alpha
        if abs(c0) > 1.0 + _CLAMP_TOL:
            return None
        c0 = min(max(c0, -1.0), 1.0)
        return (c0, c0)
    if abs(line.alpha) <= EPS:
        # horizontal line: fixed c1, any c0
        if abs(line.c1_at(0.0)) > 1.0 + _CLAMP_TOL:
            return None
        return (-1.0, 1.0)
    # c1(c0) is affine; intersect the preimage of c1 in [-1, 1] with c0 in [-1, 1]
    lo_c0 = line.c0_at(-1.0)
    hi_c0 = line.c0_at(1.0)
    lo, hi = min(lo_c0, hi_c0), max(lo_c0, hi_c0)
    lo = max(lo, -1.0)
    hi = min(hi, 1.0)
    if lo > hi + _CLAMP_TOL:
        return None
    return (lo, hi)


def sample_trajectory(line: TrajectoryLine, count: int) -> List[PhasePair]:
    """Uniform sweep of the admissible segment, as principal-branch phase pairs.

    Returns an empty list when the line misses the unit square, which happens
    exactly when the target is outside the quantum bounds.  Phases use
    arccos into [0, pi]; the mirror symmetry supplies the other copies.
    """
    if count < 2:
        raise DomainError(f"count must be >= 2, got {count}")
    span = _admissible_c0_interval(line)
    if span is None:
        return []
    pairs: List[PhasePair] = []
    if span[0] == span[1] and abs(line.beta) <= EPS:
        # vertical line: sweep c1 instead
        for c1 in np.linspace(-1.0, 1.0, count):
            pairs.append(PhasePair(math.acos(span[0]), math.acos(float(c1))))
        return pairs
    for c0 in np.linspace(span[0], span[1], count):
        c1 = line.c1_at(float(c0))
        if abs(c1) > 1.0 + _CLAMP_TOL:
            continue
        c1 = min(max(c1, -1.0), 1.0)
        pairs.append(PhasePair(math.acos(float(c0)), math.acos(c1)))
    return pairs


def intersect(a: TrajectoryLine, b: TrajectoryLine) -> Tuple[float, float, bool]:
    """Unique intersection of two level-set lines in (c0, c1) coordinates."""
    det = a.alpha * b.beta - b.alpha * a.beta
    if abs(det) <= EPS:
        raise ParallelLinesError(
            f"lines {a.label!r} and {b.label!r} are parallel (det = {det!r})"
        )
    c0 = (-a.gamma * b.beta + b.gamma * a.beta) / det
    c1 = (-a.alpha * b.gamma + b.alpha * a.gamma) / det
    in_range = abs(c0) <= 1.0 and abs(c1) <= 1.0
    return c0, c1, in_range


def concurrency(
    exps: Sequence[TwoChoiceExperiment], fit_pair: Tuple[int, int] = (0, 1)
) -> ConcurrencyReport:
    """Fit a common phase point on two experiments, report all line residuals."""
    if len(exps) < 2:
        raise DomainError(f"need at least 2 experiments, got {len(exps)}")
    i, j = fit_pair
    if i == j or not (0 <= i < len(exps)) or not (0 <= j < len(exps)):
        raise DomainError(f"fit_pair {fit_pair!r} is not a valid index pair")
    lines = [trajectory(e) for e in exps]
    c0, c1, in_range = intersect(lines[i], lines[j])
    residuals = tuple(line.residual(c0, c1) for line in lines)
    return ConcurrencyReport(
        point=(c0, c1),
        in_range=in_range,
        labels=tuple(e.label for e in exps),
        residuals=residuals,
        fit_pair=(i, j),
    )


def contour(
    exp: TwoChoiceExperiment, resolution: int = DEFAULT_RESOLUTION
) -> ContourGrid:
    """Conditional probability and region labels on a (theta0, theta1) grid.

    values[i, j] is the choice-0 probability at (theta0 = thetas[i],
    theta1 = thetas[j]); singular denominators are recorded as NaN with the
    cell labeled accordingly.
    """
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    thetas = np.linspace(0.0, 2.0 * math.pi, resolution)
    a = exp.interference_amplitude(0)
    b = exp.interference_amplitude(1)
    classical0 = conditional_classical(exp, 0)
    c0 = np.cos(thetas)[:, None]
    c1 = np.cos(thetas)[None, :]
    num = classical0 + a * c0 + np.zeros_like(c1)
    den = 1.0 + a * c0 + b * c1
    singular = den <= EPS
    values = np.where(singular, np.nan, num / np.where(singular, 1.0, den))
    band = classical_bounds(exp, 0)
    regions = np.full(values.shape, REGION_CLASSICAL, dtype=object)
    regions[values < band.lo - EPS] = REGION_BELOW
    regions[values > band.hi + EPS] = REGION_ABOVE
    regions[singular] = REGION_SINGULAR
    values.setflags(write=False)
    regions.setflags(write=False)
    thetas.setflags(write=False)
    return ContourGrid(
        thetas=thetas,
        values=values,
        regions=regions,
        classical=band,
        classical_value=classical0,
    )


def target_reachable(exp: TwoChoiceExperiment, target: float, tol: float = 1e-9) -> bool:
    """Whether the target lies within the quantum bounds (trajectory non-empty)."""
    interval = quantum_bounds(exp, 0).interval
    return interval.lo - tol <= target <= interval.hi + tol
