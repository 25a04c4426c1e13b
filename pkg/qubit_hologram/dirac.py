"""The 4×4 Dirac Hamiltonian, its hologram along z and their symmetry identities.

All operators are plain complex matrices in the chiral block form. The
effective time reversal T_eff = M_z is unitary rather than anti-unitary;
the identity (PT)_eff H_eff(ω, kx, ky) (PT)_eff = H_eff(ω, −kx, −ky) is
checked as a literal matrix identity and maps the transverse momenta to
their negatives, not onto themselves.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cache
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import DomainError
from .logging import get_logger
from .pt_core import EffectiveParams, eigenmomenta

__all__ = [
    "PAULI",
    "IDENTITY_2",
    "DiracParams",
    "SymmetryOperator",
    "symmetry_operators",
    "dirac_hamiltonian",
    "parity_check",
    "mirror_decomposition_check",
    "dirac_hologram_hamiltonian",
    "pt_identity_check",
    "hologram_eigenmomenta",
    "IdentitySweep",
    "identity_sweep",
]

logger = get_logger("dirac")

IDENTITY_2 = np.eye(2, dtype=complex)
_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (_SIGMA_X, _SIGMA_Y, _SIGMA_Z)
_ZERO_2 = np.zeros((2, 2), dtype=complex)

for _matrix in (IDENTITY_2, *PAULI):
    _matrix.setflags(write=False)


class DiracParams(BaseModel):
    """Parameters of the z-hologram H_eff(ω, kx, ky), natural units."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    omega: float
    kx: float = 0.0
    ky: float = 0.0
    mass: float = Field(ge=0.0)


type OperatorName = Literal["P", "Mx", "My", "Mz", "P_eff", "T_eff"]


@dataclass(frozen=True)
class SymmetryOperator:
    name: OperatorName
    matrix: np.ndarray


def _blocks(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.block([[a, b], [c, d]])


def _mirror(sigma: np.ndarray) -> np.ndarray:
    return _blocks(_ZERO_2, sigma, sigma, _ZERO_2)


@cache
def symmetry_operators() -> dict[str, SymmetryOperator]:
    """Parity, the three mirror reflections and the effective P and T.

    P = i·[[0, I], [I, 0]] (so P² = −I), M_j = [[0, σ_j], [σ_j, 0]],
    P_eff = M_x·M_y = i·diag(σz, σz) and T_eff = M_z.
    """
    mx, my, mz = (_mirror(s) for s in PAULI)
    operators: dict[OperatorName, np.ndarray] = {
        "P": 1j * _blocks(_ZERO_2, IDENTITY_2, IDENTITY_2, _ZERO_2),
        "Mx": mx,
        "My": my,
        "Mz": mz,
        "P_eff": 1j * _blocks(_SIGMA_Z, _ZERO_2, _ZERO_2, _SIGMA_Z),
        "T_eff": mz,
    }
    for matrix in operators.values():
        matrix.setflags(write=False)
    return {name: SymmetryOperator(name, matrix) for name, matrix in operators.items()}


def _sigma_dot(k: Sequence[float]) -> np.ndarray:
    return k[0] * _SIGMA_X + k[1] * _SIGMA_Y + k[2] * _SIGMA_Z


def _check_momentum(k: Sequence[float]) -> np.ndarray:
    vector = np.asarray(k, dtype=float)
    if vector.shape != (3,) or not np.all(np.isfinite(vector)):
        raise DomainError(f"momentum must be a finite 3-vector, got {k!r}")
    return vector


def dirac_hamiltonian(k: Sequence[float], mass: float) -> np.ndarray:
    """H(k) = [[−σ·k, m·I], [m·I, σ·k]]."""
    vector = _check_momentum(k)
    if not math.isfinite(mass):
        raise DomainError(f"mass must be finite, got {mass!r}")
    sk = _sigma_dot(vector)
    return _blocks(-sk, mass * IDENTITY_2, mass * IDENTITY_2, sk)


def parity_check(k: Sequence[float], mass: float) -> float:
    """‖P⁻¹ H(k) P − H(−k)‖_F."""
    p = symmetry_operators()["P"].matrix
    vector = _check_momentum(k)
    # P is unitary, so P⁻¹ = P†
    transformed = p.conj().T @ dirac_hamiltonian(vector, mass) @ p
    return float(np.linalg.norm(transformed - dirac_hamiltonian(-vector, mass)))


def mirror_decomposition_check() -> float:
    """Largest of ‖P − M_x M_y M_z‖_F and ‖M_j² − I‖_F."""
    ops = symmetry_operators()
    mx, my, mz = (ops[name].matrix for name in ("Mx", "My", "Mz"))
    identity = np.eye(4)
    residuals = [float(np.linalg.norm(ops["P"].matrix - mx @ my @ mz))]
    residuals += [float(np.linalg.norm(m @ m - identity)) for m in (mx, my, mz)]
    return max(residuals)


def dirac_hologram_hamiltonian(p: DiracParams) -> np.ndarray:
    """H_eff(ω, kx, ky) with z as the evolution parameter.

    [[ω σz + i(kx σy − ky σx), −m σz], [m σz, −ω σz + i(kx σy − ky σx)]]
    """
    transverse = 1j * (p.kx * _SIGMA_Y - p.ky * _SIGMA_X)
    return _blocks(
        p.omega * _SIGMA_Z + transverse,
        -p.mass * _SIGMA_Z,
        p.mass * _SIGMA_Z,
        -p.omega * _SIGMA_Z + transverse,
    )


def pt_identity_check(p: DiracParams) -> float:
    """‖O H_eff(ω, kx, ky) O − H_eff(ω, −kx, −ky)‖_F with O = P_eff·T_eff."""
    ops = symmetry_operators()
    o = ops["P_eff"].matrix @ ops["T_eff"].matrix
    mirrored = p.model_copy(update={"kx": -p.kx, "ky": -p.ky})
    residual = o @ dirac_hologram_hamiltonian(p) @ o - dirac_hologram_hamiltonian(mirrored)
    return float(np.linalg.norm(residual))


def _spectral_key(z: complex) -> tuple[float, float]:
    # round-off in the real part of imaginary pairs must not decide the order
    return round(z.real, 9), round(z.imag, 9)


def hologram_eigenmomenta(p: DiracParams) -> np.ndarray:
    """Eigenvalues of H_eff(ω, kx, ky) sorted by (Re, Im), each rounded to 1e-9."""
    values = np.linalg.eigvals(dirac_hologram_hamiltonian(p))
    return np.array(sorted(values, key=_spectral_key))


def _restriction_residual(p: DiracParams) -> float:
    """Distance of the kx = ky = 0 spectrum from the doubled two-level eigenmomenta."""
    restricted = p.model_copy(update={"kx": 0.0, "ky": 0.0})
    k_plus, k_minus = eigenmomenta(EffectiveParams(omega=p.omega, mass=p.mass))
    expected = sorted([k_plus, k_plus, k_minus, k_minus], key=_spectral_key)
    return float(np.max(np.abs(hologram_eigenmomenta(restricted) - np.array(expected))))


@dataclass(frozen=True)
class IdentitySweep:
    """Largest residual of each identity over a seeded random sweep.

    The restriction residual compares the kx = ky = 0 spectrum with the
    doubled two-level eigenmomenta. It is reported only and does not enter
    :meth:`passed`.
    """

    seed: int
    draws: int
    parity: float
    mirror_decomposition: float
    pt_identity: float
    restriction: float

    def passed(self, threshold: float = 1e-12) -> bool:
        return max(self.parity, self.mirror_decomposition, self.pt_identity) <= threshold

    def report_lines(self) -> list[str]:
        return [
            f"seed: {self.seed}",
            f"draws: {self.draws}",
            f"parity_residual_max: {self.parity:.6e}",
            f"mirror_decomposition_residual: {self.mirror_decomposition:.6e}",
            f"pt_identity_residual_max: {self.pt_identity:.6e}",
            f"restriction_residual_max: {self.restriction:.6e}",
        ]


def _unit_ball(rng: np.random.Generator) -> np.ndarray:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return direction * rng.uniform() ** (1.0 / 3.0)


def identity_sweep(seed: int = 42, draws: int = 1000) -> IdentitySweep:
    """Check the parity and PT identities on ``draws`` random parameter sets.

    Momenta are drawn from the unit ball, masses from [0, 2] and the
    hologram energy from [−2, 2]; the same seed reproduces the same draws.
    """
    if draws < 1:
        raise DomainError(f"draws must be >= 1, got {draws!r}")
    rng = np.random.default_rng(seed)
    parity = pt = restriction = 0.0
    for _ in range(draws):
        k = _unit_ball(rng)
        mass = float(rng.uniform(0.0, 2.0))
        parity = max(parity, parity_check(k, mass))
        p = DiracParams(
            omega=float(rng.uniform(-2.0, 2.0)),
            kx=float(rng.uniform(-1.0, 1.0)),
            ky=float(rng.uniform(-1.0, 1.0)),
            mass=mass,
        )
        pt = max(pt, pt_identity_check(p))
        restriction = max(restriction, _restriction_residual(p))
    sweep = IdentitySweep(
        seed=seed,
        draws=draws,
        parity=parity,
        mirror_decomposition=mirror_decomposition_check(),
        pt_identity=pt,
        restriction=restriction,
    )
    logger.info("identity sweep (seed=%d, draws=%d) passed: %s", seed, draws, sweep.passed())
    return sweep
