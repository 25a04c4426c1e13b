"""The 2×2 effective Hamiltonian H_eff(ω) = [[ω, −m], [m, −ω]] and its PT phases.

Treating the spatial coordinate as the evolution parameter turns the energy
ω into a parameter and the momentum k into the eigenvalue of H_eff. The
eigenmomenta k = ±√(ω² − m²) are real (unbroken PT symmetry), coalesce at
zero (exceptional point) or are purely imaginary (broken PT symmetry).
"""

import cmath
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import DomainError

__all__ = [
    "EffectiveParams",
    "PTPhase",
    "PTClassification",
    "EigenSystem",
    "effective_hamiltonian",
    "eigenmomenta",
    "classify_pt",
    "right_eigenvectors",
]


class EffectiveParams(BaseModel):
    """Energy ω and mass m of H_eff, natural units."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    omega: float
    mass: float = Field(ge=0.0)


class PTPhase(str, Enum):
    UNBROKEN = "Unbroken"
    EXCEPTIONAL_POINT = "ExceptionalPoint"
    BROKEN = "Broken"


@dataclass(frozen=True)
class PTClassification:
    """PT phase together with the eigenmomentum pair (k₊, k₋)."""

    phase: PTPhase
    eigenmomenta: tuple[complex, complex]


@dataclass(frozen=True)
class EigenSystem:
    """Right eigenvectors of H_eff.

    Attributes:
        eigenvalues: One eigenmomentum per returned vector.
        vectors: Unit vectors whose first nonzero entry is real positive.
        defective: True at an exceptional point, where a single vector exists.
        degenerate: True for H_eff = 0, where every vector is an eigenvector
            and the standard basis is returned.
    """

    eigenvalues: tuple[complex, ...]
    vectors: tuple[np.ndarray, ...]
    defective: bool = False
    degenerate: bool = False


def effective_hamiltonian(p: EffectiveParams) -> np.ndarray:
    """Return H_eff(ω) = [[ω, −m], [m, −ω]] as a complex 2×2 array."""
    return np.array([[p.omega, -p.mass], [p.mass, -p.omega]], dtype=complex)


def eigenmomenta(p: EffectiveParams) -> tuple[complex, complex]:
    """Return (k₊, k₋) = ±√(ω² − m²).

    The principal root is taken, so k₊ has a non-negative real part and, when
    that is zero, a non-negative imaginary part.
    """
    k = cmath.sqrt(complex(p.omega * p.omega - p.mass * p.mass, 0.0))
    return k, -k


def classify_pt(p: EffectiveParams, tol: float = 1e-9) -> PTClassification:
    """Classify the PT phase of H_eff by comparing |ω| with m.

    Args:
        p: Parameters of H_eff.
        tol: Absolute tolerance on ||ω| − m| defining the exceptional point.

    Returns:
        The phase and the eigenmomenta. At the exceptional point the
        eigenmomenta are reported as exactly (0, 0).
    """
    if not tol > 0.0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    gap = abs(p.omega) - p.mass
    if gap > tol:
        return PTClassification(PTPhase.UNBROKEN, eigenmomenta(p))
    if gap < -tol:
        return PTClassification(PTPhase.BROKEN, eigenmomenta(p))
    return PTClassification(PTPhase.EXCEPTIONAL_POINT, (0j, 0j))


def _fix_gauge(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    for entry in v:
        if abs(entry) > 1e-14:
            return v * (abs(entry) / entry)
    return v


def right_eigenvectors(p: EffectiveParams, tol: float = 1e-9) -> EigenSystem:
    """Right eigenvectors of H_eff, gauge fixed.

    Away from the exceptional point two non-orthogonal eigenvectors are
    returned, ordered like :func:`eigenmomenta`. At the exceptional point the
    matrix is defective and a single vector ∝ (m, ω) spans its kernel.
    """
    omega, mass = p.omega, p.mass
    if abs(omega) <= tol and mass <= tol:
        basis = (np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex))
        return EigenSystem((0j, 0j), basis, degenerate=True)
    if classify_pt(p, tol).phase is PTPhase.EXCEPTIONAL_POINT:
        return EigenSystem(
            (0j,), (_fix_gauge(np.array([mass, omega], dtype=complex)),), defective=True
        )

    vectors = []
    ks = eigenmomenta(p)
    for k in ks:
        # (ω − k) v₁ − m v₂ = 0 and m v₁ − (ω + k) v₂ = 0; keep the better conditioned
        first_row = np.array([mass, omega - k], dtype=complex)
        second_row = np.array([omega + k, mass], dtype=complex)
        v = first_row if np.linalg.norm(first_row) >= np.linalg.norm(second_row) else second_row
        vectors.append(_fix_gauge(v))
    return EigenSystem(ks, tuple(vectors))

