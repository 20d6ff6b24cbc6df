"""Closed-form probability formulas for the two-condition / two-choice setting.

Everything here is a pure function of its arguments.  The central object is
the renormalized conditional probability for a mixed condition,

    P_j = (q0*p0_j + q1*p1_j + 2*sqrt(q0*q1*p0_j*p1_j)*cos(theta_j)) / D,
    D   = 1 + 2*sqrt(q0*q1*p0_0*p1_0)*cos(theta_0)
            + 2*sqrt(q0*q1*p0_1*p1_1)*cos(theta_1),

together with its classical limit (cos(theta) = 0), the classical and quantum
intervals that bound it, and the condition weights that stretch the quantum
interval to [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DomainError, SingularityError

#: absolute tolerance for all internal probability comparisons
EPS = 1e-12


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or value < -EPS or value > 1.0 + EPS:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class TwoChoiceExperiment:
    """Classical observables of one two-condition / two-choice experiment.

    ``p0`` and ``p1`` are the probabilities of choice j=0 under the two pure
    conditions; choice j=1 probabilities are their complements.  ``q0`` is
    the weight of condition k=0 in the mixed condition (q1 = 1 - q0).
    ``observed_pk`` is the measured mixed-condition probability, if any.
    """

    label: str
    p0: float
    p1: float
    q0: float = 0.5
    observed_pk: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "p0", _check_probability("p0", self.p0))
        object.__setattr__(self, "p1", _check_probability("p1", self.p1))
        object.__setattr__(self, "q0", _check_probability("q0", self.q0))
        if self.observed_pk is not None:
            object.__setattr__(
                self, "observed_pk", _check_probability("observed_pk", self.observed_pk)
            )

    @property
    def q1(self) -> float:
        return 1.0 - self.q0

    def p(self, k: int, j: int) -> float:
        """Choice-j probability under pure condition k."""
        if k not in (0, 1) or j not in (0, 1):
            raise DomainError(f"condition/choice indices must be 0 or 1, got ({k}, {j})")
        base = self.p0 if k == 0 else self.p1
        return base if j == 0 else 1.0 - base

    def q(self, k: int) -> float:
        if k not in (0, 1):
            raise DomainError(f"condition index must be 0 or 1, got {k}")
        return self.q0 if k == 0 else self.q1

    def interference_amplitude(self, j: int) -> float:
        """2*sqrt(q0*q1*p0_j*p1_j), the geometric-mean coefficient for choice j."""
        return 2.0 * math.sqrt(self.q0 * self.q1 * self.p(0, j) * self.p(1, j))


@dataclass(frozen=True)
class PhasePair:
    """The two interference phases, in radians, attached to choices j=0, j=1.

    Any real value is accepted; every formula depends only on the cosines.
    """

    theta0: float
    theta1: float

    def __post_init__(self):
        for name in ("theta0", "theta1"):
            v = float(getattr(self, name))
            if math.isnan(v) or math.isinf(v):
                raise DomainError(f"{name} must be a finite angle, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def c0(self) -> float:
        return math.cos(self.theta0)

    @property
    def c1(self) -> float:
        return math.cos(self.theta1)

    def theta(self, j: int) -> float:
        return self.theta0 if j == 0 else self.theta1


@dataclass(frozen=True)
class ProbabilityInterval:
    """A closed sub-interval [lo, hi] of [0, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        lo = _check_probability("lo", self.lo)
        hi = _check_probability("hi", self.hi)
        if lo > hi + EPS:
            raise DomainError(f"interval requires lo <= hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", min(max(hi, lo), 1.0))

    def contains(self, value: float, tol: float = EPS) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class ExtremalWeights:
    """Condition weights that push the quantum bounds to 1 (q_max) and 0 (q_min)."""

    q_max: float
    q_min: float
    x_j: float


class TwoLevelMix(NamedTuple):
    """Result of the unnormalized two-level mix; may leave [0, 1]."""

    value: float
    in_range: bool


class TwoLevelBounds(NamedTuple):
    """Two-level interval, with the raw (possibly > 1) upper bound kept."""

    interval: ProbabilityInterval
    hi_raw: float


class QuantumBounds(NamedTuple):
    """Quantum interval plus the phase assignments that attain each end."""

    interval: ProbabilityInterval
    phases_max: PhasePair
    phases_min: PhasePair
    f_j: float


def two_level_mix(q0: float, p0: float, p1: float, theta: float) -> TwoLevelMix:
    """Probability of an intermediate state in the single two-level system.

    Arithmetic mean of the joint probabilities plus a geometric-mean
    interference term.  There is no renormalizing denominator here, so the
    value can leave [0, 1]; ``in_range`` reports that instead of clamping.
    Values within EPS of a boundary are snapped onto it.
    """
    q0 = _check_probability("q0", q0)
    p0 = _check_probability("p0", p0)
    p1 = _check_probability("p1", p1)
    q1 = 1.0 - q0
    value = q0 * p0 + q1 * p1 + 2.0 * math.sqrt(q0 * p0 * q1 * p1) * math.cos(theta)
    if -EPS <= value <= 1.0 + EPS:
        return TwoLevelMix(min(max(value, 0.0), 1.0), True)
    return TwoLevelMix(value, False)


def two_level_bounds(q0: float, p0: float, p1: float) -> TwoLevelBounds:
    """Range of two_level_mix over all phases.

    The raw upper bound (sqrt(q0*p0) + sqrt(q1*p1))**2 can exceed 1; the
    reported interval clamps it while ``hi_raw`` keeps the exact value.
    """
    q0 = _check_probability("q0", q0)
    p0 = _check_probability("p0", p0)
    p1 = _check_probability("p1", p1)
    q1 = 1.0 - q0
    a = math.sqrt(q0 * p0)
    b = math.sqrt(q1 * p1)
    lo = (a - b) ** 2
    hi_raw = (a + b) ** 2
    return TwoLevelBounds(ProbabilityInterval(lo, min(hi_raw, 1.0)), hi_raw)


def _mix_terms(exp: TwoChoiceExperiment, phases: PhasePair):
    """Per-choice numerators and the shared denominator of the conditional formula."""
    cos = (phases.c0, phases.c1)
    nums = []
    for j in (0, 1):
        classical = exp.q0 * exp.p(0, j) + exp.q1 * exp.p(1, j)
        nums.append(classical + exp.interference_amplitude(j) * cos[j])
    # the denominator is exactly the sum of the two numerators
    return nums, nums[0] + nums[1]


def conditional_quantum(exp: TwoChoiceExperiment, phases: PhasePair, j: int) -> float:
    """Renormalized conditional probability of choice j under the mixed condition."""
    if j not in (0, 1):
        raise DomainError(f"choice index must be 0 or 1, got {j}")
    nums, den = _mix_terms(exp, phases)
    if den <= EPS:
        raise SingularityError(
            f"renormalizing denominator {den!r} <= {EPS} at phases "
            f"({phases.theta0}, {phases.theta1})"
        )
    return nums[j] / den


def conditional_classical(exp: TwoChoiceExperiment, j: int = 0) -> float:
    """Classical (dephased) prediction: the q-weighted arithmetic mean."""
    if j not in (0, 1):
        raise DomainError(f"choice index must be 0 or 1, got {j}")
    return exp.q0 * exp.p(0, j) + exp.q1 * exp.p(1, j)


def classical_bounds(exp: TwoChoiceExperiment, j: int = 0) -> ProbabilityInterval:
    """Sure-thing interval: the classical value must fall between the pure-condition values."""
    a, b = exp.p(0, j), exp.p(1, j)
    return ProbabilityInterval(min(a, b), max(a, b))


def interference_correction(exp: TwoChoiceExperiment, j: int = 0) -> float:
    """Denominator shift f_j = 2*sqrt(q0*q1)*(sqrt(p0_j*p1_j) - sqrt(p0_jb*p1_jb))."""
    jb = 1 - j
    return 2.0 * math.sqrt(exp.q0 * exp.q1) * (
        math.sqrt(exp.p(0, j) * exp.p(1, j)) - math.sqrt(exp.p(0, jb) * exp.p(1, jb))
    )


def quantum_bounds(exp: TwoChoiceExperiment, j: int = 0) -> QuantumBounds:
    """Extremal values of conditional_quantum over all phases.

    Maximum at (theta_j, theta_jbar) = (0, pi), minimum at (pi, 0); the
    returned phase pairs record those assignments in (theta0, theta1) order.
    """
    if j not in (0, 1):
        raise DomainError(f"choice index must be 0 or 1, got {j}")
    f_j = interference_correction(exp, j)
    if abs(1.0 - f_j) <= EPS or abs(1.0 + f_j) <= EPS:
        raise SingularityError(f"quantum-bound denominator vanishes (f_j = {f_j!r})")
    a = math.sqrt(exp.q0 * exp.p(0, j))
    b = math.sqrt(exp.q1 * exp.p(1, j))
    lo = (a - b) ** 2 / (1.0 - f_j)
    hi = (a + b) ** 2 / (1.0 + f_j)
    if j == 0:
        phases_max = PhasePair(0.0, math.pi)
        phases_min = PhasePair(math.pi, 0.0)
    else:
        phases_max = PhasePair(math.pi, 0.0)
        phases_min = PhasePair(0.0, math.pi)
    return QuantumBounds(ProbabilityInterval(lo, hi), phases_max, phases_min, f_j)


def extremal_weights(p0_j: float, p1_j: float) -> ExtremalWeights:
    """Condition weights at which the quantum bounds reach 1 and 0.

    The upper bound equals 1 exactly when the complementary choice's minimal
    numerator vanishes, q_max = (1-p1_j) / ((1-p0_j) + (1-p1_j)); this is
    identical (verified to machine precision) to the published ratio of
    (sqrt(p0_j) - sqrt(p1_j)*X)**2 and (sqrt(p1_j) - sqrt(p0_j)*X)**2 with
    X = sqrt(p0_j*p1_j) - sqrt((1-p0_j)*(1-p1_j)).  The lower bound equals 0
    exactly when choice j's own numerator vanishes, at
    q_min = p1_j / (p0_j + p1_j).  Requires both probabilities strictly
    inside (0, 1); boundary values collapse a denominator.
    """
    p0_j = _check_probability("p0_j", p0_j)
    p1_j = _check_probability("p1_j", p1_j)
    if p0_j in (0.0, 1.0) or p1_j in (0.0, 1.0):
        raise DomainError(
            f"extremal weights undefined at the boundary (p0_j={p0_j}, p1_j={p1_j})"
        )
    x_j = math.sqrt(p0_j * p1_j) - math.sqrt((1.0 - p0_j) * (1.0 - p1_j))
    q_max = (1.0 - p1_j) / ((1.0 - p0_j) + (1.0 - p1_j))
    q_min = p1_j / (p0_j + p1_j)
    return ExtremalWeights(q_max=q_max, q_min=q_min, x_j=x_j)
