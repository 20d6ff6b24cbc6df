"""Amplitude-level (Hilbert-space) implementation of the conditional probability.

This is the brute-force route: explicit complex amplitudes for an m-condition,
n-choice joint state, an explicit projection onto an intermediate condition
event, and density-matrix variants.  For m = n = 2 it must agree with the
closed forms in :mod:`qdecision.core` to machine precision, which is what makes
it useful as an oracle.

State convention.  A fresh joint state is
``|Psi> = sum_k |k) (x) |psi_k>`` with each row ``psi_k`` a unit vector of
choice amplitudes (the condition register carries no weights; those enter
only through the measured event).  After a projection the state is the
product ``|K) (x) |a_hat>``; such collapsed states keep the common choice
vector in every row and mark themselves so that the physical joint matrix
``kappa_k * a_hat_j`` is used in subsequent inner products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import EPS, PhasePair, TwoChoiceExperiment, conditional_classical
from .errors import (
    DomainError,
    UnsupportedDimensionError,
    ValidationError,
    ZeroNormError,
)

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class IntermediateEvent:
    """A normalized intermediate condition event |K) = sum_k kappa_k |k)."""

    kappa: np.ndarray

    def __post_init__(self):
        kappa = np.asarray(self.kappa, dtype=complex).reshape(-1)
        norm = np.linalg.norm(kappa)
        if norm <= EPS:
            raise DomainError("event amplitudes must not all vanish")
        if abs(norm - 1.0) > _NORM_TOL:
            raise DomainError(f"event amplitudes must have unit norm, got {norm!r}")
        kappa = kappa / norm
        kappa.setflags(write=False)
        object.__setattr__(self, "kappa", kappa)

    @property
    def m(self) -> int:
        return self.kappa.shape[0]

    @property
    def weights(self) -> np.ndarray:
        """Condition probabilities q_k = |kappa_k|**2."""
        return np.abs(self.kappa) ** 2

    def complement(self) -> "IntermediateEvent":
        """The orthogonal event (kappa1*, -kappa0*); two conditions only."""
        if self.m != 2:
            raise UnsupportedDimensionError(
                f"complement is defined for 2 conditions, got {self.m}"
            )
        return IntermediateEvent(
            np.array([np.conj(self.kappa[1]), -np.conj(self.kappa[0])])
        )


@dataclass(frozen=True)
class JointState:
    """Joint state of the condition and choice registers.

    ``psi`` is the m x n matrix of choice amplitudes (unit rows); ``kappa``
    is the unit vector of event amplitudes bundled with the state (the event
    that realizes the state's interference phases).  ``collapsed`` marks a
    post-measurement product state |K) (x) |row>.
    """

    psi: np.ndarray
    kappa: np.ndarray
    collapsed: bool = field(default=False)

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        if psi.ndim != 2 or psi.shape[0] < 1 or psi.shape[1] < 1:
            raise ValidationError(f"psi must be a 2-D matrix, got shape {psi.shape}")
        row_norms = np.linalg.norm(psi, axis=1)
        if np.any(np.abs(row_norms - 1.0) > _NORM_TOL):
            raise ValidationError(
                f"every psi row must have unit norm, got norms {row_norms!r}"
            )
        psi = psi / row_norms[:, None]
        kappa = np.asarray(self.kappa, dtype=complex).reshape(-1)
        if kappa.shape[0] != psi.shape[0]:
            raise ValidationError(
                f"kappa length {kappa.shape[0]} != condition count {psi.shape[0]}"
            )
        knorm = np.linalg.norm(kappa)
        if abs(knorm - 1.0) > _NORM_TOL:
            raise ValidationError(f"kappa must have unit norm, got {knorm!r}")
        kappa = kappa / knorm
        psi.setflags(write=False)
        kappa.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "kappa", kappa)

    @property
    def m(self) -> int:
        return self.psi.shape[0]

    @property
    def n(self) -> int:
        return self.psi.shape[1]

    def event(self) -> IntermediateEvent:
        """The bundled intermediate event."""
        return IntermediateEvent(self.kappa)

    def joint_matrix(self) -> np.ndarray:
        """Physical (condition x choice) amplitude matrix.

        Fresh states follow the unweighted sum-over-conditions convention;
        collapsed states weight each row by the event amplitude.
        """
        if self.collapsed:
            return self.kappa[:, None] * self.psi
        return self.psi

    def weighted_joint(self) -> np.ndarray:
        """Unit-norm joint matrix with condition weights kappa_k applied.

        This is the normalized two-register vector used by the completeness
        identity; collapsed states already carry their weights.
        """
        if self.collapsed:
            return self.joint_matrix()
        return self.kappa[:, None] * self.psi


def build_state(
    exp: TwoChoiceExperiment,
    phases: PhasePair,
    gauge: tuple = (0.0, 0.0, 0.0, 0.0),
) -> JointState:
    """Construct amplitudes realizing the experiment's probabilities and phases.

    Moduli are the positive square roots of the probabilities.  The six phase
    angles carry four gauge freedoms; ``gauge`` fixes (chi0, chi1, phi0_0,
    phi0_1) and the remaining angles are solved from
    arg(kappa0 * conj(kappa1) * conj(psi0_j) * psi1_j) = theta_j.
    """
    if len(gauge) != 4:
        raise DomainError(f"gauge must supply 4 angles, got {len(gauge)}")
    chi0, chi1, phi00, phi01 = (float(g) for g in gauge)
    phi1 = (
        phases.theta0 - chi0 + chi1 + phi00,
        phases.theta1 - chi0 + chi1 + phi01,
    )
    psi = np.array(
        [
            [
                math.sqrt(exp.p(0, 0)) * np.exp(1j * phi00),
                math.sqrt(exp.p(0, 1)) * np.exp(1j * phi01),
            ],
            [
                math.sqrt(exp.p(1, 0)) * np.exp(1j * phi1[0]),
                math.sqrt(exp.p(1, 1)) * np.exp(1j * phi1[1]),
            ],
        ]
    )
    kappa = np.array(
        [
            math.sqrt(exp.q0) * np.exp(1j * chi0),
            math.sqrt(exp.q1) * np.exp(1j * chi1),
        ]
    )
    return JointState(psi=psi, kappa=kappa)


def _partial_element(state: JointState, event: IntermediateEvent) -> np.ndarray:
    """Choice amplitudes (K| |Psi> = sum_k conj(kappa_k) * joint[k, :]."""
    if event.m != state.m:
        raise ValidationError(
            f"event dimension {event.m} != state condition count {state.m}"
        )
    return np.conj(event.kappa) @ state.joint_matrix()


def project(state: JointState, event: IntermediateEvent) -> JointState:
    """Post-measurement state after observing the intermediate event.

    Applies the renormalized projection |K)(K| to the condition register and
    returns the collapsed product state.
    """
    a = _partial_element(state, event)
    norm = np.linalg.norm(a)
    if norm <= EPS:
        raise ZeroNormError("projection annihilated the state")
    a_hat = a / norm
    return JointState(
        psi=np.tile(a_hat, (state.m, 1)), kappa=event.kappa, collapsed=True
    )


def conditional_from_amplitudes(
    state: JointState, event: IntermediateEvent
) -> np.ndarray:
    """Choice probabilities conditioned on the intermediate event.

    |a_j|**2 / sum_j' |a_j'|**2 with a_j the partial matrix element; valid
    for any number of conditions and choices.
    """
    a = _partial_element(state, event)
    w = np.abs(a) ** 2
    total = w.sum()
    if total <= EPS:
        raise ZeroNormError("projection annihilated the state")
    return w / total


def completeness_check(state: JointState, event: IntermediateEvent) -> float:
    """|sum of the K- and Kbar-branch partial norms - 1| (two conditions only).

    Uses the unit-norm weighted joint vector; since |K)(K| + |Kbar)(Kbar| is
    the identity on the condition register, the two branch norms add up to 1
    for any valid state and event.
    """
    if state.m != 2:
        raise UnsupportedDimensionError(
            f"completeness check is defined for 2 conditions, got {state.m}"
        )
    if event.m != 2:
        raise UnsupportedDimensionError(
            f"completeness check needs a 2-condition event, got {event.m}"
        )
    joint = state.weighted_joint()
    a = np.conj(event.kappa) @ joint
    b = np.conj(event.complement().kappa) @ joint
    return abs(float(np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2)) - 1.0)


@dataclass(frozen=True)
class ConditionDensity:
    """Density matrix over the condition register."""

    rho: np.ndarray

    hermiticity_tol = 1e-14
    trace_tol = 1e-12
    eigen_floor = -1e-12

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValidationError(f"rho must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > self.hermiticity_tol:
            raise ValidationError("rho is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > self.trace_tol or abs(np.trace(rho).imag) > self.trace_tol:
            raise ValidationError(f"rho must have unit trace, got {np.trace(rho)!r}")
        if np.min(np.linalg.eigvalsh(rho)) < self.eigen_floor:
            raise ValidationError("rho has a negative eigenvalue")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def pure(cls, event: IntermediateEvent) -> "ConditionDensity":
        return cls(np.outer(event.kappa, np.conj(event.kappa)))

    @classmethod
    def diagonal(cls, weights) -> "ConditionDensity":
        return cls(np.diag(np.asarray(weights, dtype=complex)))

    @property
    def m(self) -> int:
        return self.rho.shape[0]

    def dephased(self) -> "ConditionDensity":
        """Zero the off-diagonal (condition-basis) elements."""
        return ConditionDensity(np.diag(np.diag(self.rho)))


def conditional_from_density(
    state: JointState, rho: ConditionDensity, dephase: bool = False
) -> np.ndarray:
    """Choice probabilities for a (possibly mixed) condition density matrix.

    w_j = sum_{k,k'} conj(joint[k',j]) rho[k',k] joint[k,j], normalized over j.
    A pure rho = |K)(K| reproduces conditional_from_amplitudes; a dephased
    diagonal rho reproduces the classical arithmetic mean exactly.
    """
    if rho.m != state.m:
        raise ValidationError(
            f"rho dimension {rho.m} != state condition count {state.m}"
        )
    if dephase:
        rho = rho.dephased()
    joint = state.joint_matrix()
    w = np.einsum("kj,lk,lj->j", joint, rho.rho, np.conj(joint)).real
    total = w.sum()
    if total <= EPS:
        raise ZeroNormError("density projection annihilated the state")
    return w / total


def phase_parameter_count(m: int, n: int) -> int:
    """Number of free interference phases for m conditions and n choices."""
    if m < 1 or n < 1:
        raise DomainError(f"counts must be >= 1, got m={m}, n={n}")
    return m * n * (n - 1) // 2


def classical_limit(exp: TwoChoiceExperiment) -> np.ndarray:
    """Dephased-density route to the classical prediction, as a vector."""
    state = build_state(exp, PhasePair(0.0, 0.0))
    rho = ConditionDensity.diagonal([exp.q0, exp.q1])
    return conditional_from_density(state, rho, dephase=True)
