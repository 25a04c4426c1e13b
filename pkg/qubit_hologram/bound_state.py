"""Shooting solver for the zero mode bound to a mass domain wall.

The trial energy E enters the generator H(x) = [[E, −m(x)], [m(x), −E]] and
the qubit is started in |y−⟩ = (|L⟩ − i|R⟩)/√2 at the left edge of the
window. Only at an eigenenergy does the evolution end on the decaying
solution, so the final amplitude is minimal there.
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.optimize import bisect

from .errors import DomainError, EnergyScanError, NoInteriorMinimumError
from .logging import get_logger
from .numerics import HamiltonianEvaluator, Trajectory, integrate_schrodinger
from .pt_core import EffectiveParams, PTPhase, classify_pt

__all__ = [
    "MassProfile",
    "TanhProfile",
    "ConstantProfile",
    "MassProfileSpec",
    "MajoranaHamiltonian",
    "majorana_hamiltonian",
    "TrialResult",
    "evolve_trial",
    "bloch_components",
    "EnergyScan",
    "scan_energies",
    "find_bound_state",
    "turning_points",
    "region_phases",
    "INITIAL_STATE",
]

logger = get_logger("bound_state")

# |y−⟩ in the {|L⟩, |R⟩} basis
INITIAL_STATE = np.array([1.0, -1.0j], dtype=complex) / math.sqrt(2.0)
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class MassProfile(BaseModel, ABC):
    """A real mass profile x ↦ m(x) with finite nonzero asymptotes."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    @abstractmethod
    def mass(self, x: float) -> float:
        pass

    @property
    @abstractmethod
    def asymptotes(self) -> tuple[float, float]:
        """(m(−∞), m(+∞))."""
        pass

    @property
    def max_abs_mass(self) -> float:
        return max(abs(m) for m in self.asymptotes)


class TanhProfile(MassProfile):
    """m(x) = −amplitude·tanh((x − center)/width); a sign change at ``center``."""

    kind: Literal["tanh"] = "tanh"
    amplitude: float = 1.0
    center: float = 0.0
    width: float = Field(default=1.0, gt=0.0)

    @field_validator("amplitude")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("amplitude must be nonzero")
        return value

    def mass(self, x: float) -> float:
        return -self.amplitude * math.tanh((x - self.center) / self.width)

    @property
    def asymptotes(self) -> tuple[float, float]:
        return self.amplitude, -self.amplitude


class ConstantProfile(MassProfile):
    """m(x) = value everywhere; no domain wall."""

    kind: Literal["constant"] = "constant"
    value: float

    @field_validator("value")
    @classmethod
    def _nonzero(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("value must be nonzero")
        return value

    def mass(self, x: float) -> float:
        return self.value

    @property
    def asymptotes(self) -> tuple[float, float]:
        return self.value, self.value


MassProfileSpec = Annotated[TanhProfile | ConstantProfile, Field(discriminator="kind")]


class MajoranaHamiltonian(HamiltonianEvaluator):
    """x ↦ [[E, −m(x)], [m(x), −E]]."""

    def __init__(self, energy: float, profile: MassProfile):
        if not math.isfinite(energy):
            raise DomainError(f"trial energy must be finite, got {energy!r}")
        self.energy = energy
        self.profile = profile

    @property
    def dimension(self) -> int:
        return 2

    def matrix(self, t: float) -> np.ndarray:
        m = self.profile.mass(t)
        e = self.energy
        return np.array([[e, -m], [m, -e]], dtype=complex)


def majorana_hamiltonian(E: float, profile: MassProfile) -> MajoranaHamiltonian:
    return MajoranaHamiltonian(E, profile)


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one trial evolution.

    Attributes:
        energy: Trial energy.
        final_state: ψ(x1), unnormalized.
        final_amplitude: ‖ψ(x1)‖.
        trajectory: The sampled evolution.
    """

    energy: float
    final_state: np.ndarray
    final_amplitude: float
    trajectory: Trajectory


def evolve_trial(
    E: float,
    profile: MassProfile,
    x0: float = -5.0,
    x1: float = 5.0,
    tolerance: float = 1e-10,
    sample_xs: Sequence[float] | None = None,
) -> TrialResult:
    """Evolve |y−⟩ from x0 to x1 at trial energy E.

    Args:
        E: Trial energy.
        profile: Mass profile.
        x0: Left edge of the window.
        x1: Right edge of the window, > x0.
        tolerance: Integrator tolerance.
        sample_xs: Positions at which to record the state besides x0 and x1.
    """
    if not x0 < x1:
        raise DomainError(f"require x0 < x1, got {x0!r}, {x1!r}")
    trajectory = integrate_schrodinger(
        majorana_hamiltonian(E, profile),
        INITIAL_STATE,
        x0,
        x1,
        tolerance=tolerance,
        sample_times=() if sample_xs is None else sample_xs,
    )
    final = trajectory.final_state
    amplitude = float(np.linalg.norm(final))
    logger.debug("trial E=%.10g: final amplitude %.10g", E, amplitude)
    return TrialResult(
        energy=E, final_state=final, final_amplitude=amplitude, trajectory=trajectory
    )


def bloch_components(states: np.ndarray) -> np.ndarray:
    """⟨σx⟩, ⟨σy⟩, ⟨σz⟩ of each row of ``states``, normalized by ‖ψ‖².

    Returns:
        Array of shape ``(len(states), 3)``.
    """
    states = np.atleast_2d(np.asarray(states, dtype=complex))
    a, b = states[:, 0], states[:, 1]
    norm2 = np.abs(a) ** 2 + np.abs(b) ** 2
    overlap = np.conj(a) * b
    return np.column_stack(
        (
            2.0 * overlap.real / norm2,
            2.0 * overlap.imag / norm2,
            (np.abs(a) ** 2 - np.abs(b) ** 2) / norm2,
        )
    )


@dataclass(frozen=True)
class EnergyScan:
    """Final amplitudes over a grid of trial energies.

    Attributes:
        energies: Strictly increasing trial energies.
        amplitudes: Final amplitude for every trial energy.
        window: (x0, x1) of the evolutions.
    """

    energies: np.ndarray
    amplitudes: np.ndarray
    window: tuple[float, float]

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.energies.tolist(), self.amplitudes.tolist()))

    @property
    def energy_window(self) -> tuple[float, float]:
        return float(self.energies[0]), float(self.energies[-1])

    def interior_minima(self) -> list[int]:
        """Indices of grid points strictly below both neighbours."""
        a = self.amplitudes
        return [i for i in range(1, a.size - 1) if a[i] < a[i - 1] and a[i] < a[i + 1]]


def scan_energies(
    profile: MassProfile,
    E_grid: Sequence[float],
    x0: float = -5.0,
    x1: float = 5.0,
    tolerance: float = 1e-10,
    max_workers: int = 1,
) -> EnergyScan:
    """Final amplitude for every trial energy of ``E_grid``.

    The grid is sorted and duplicates are dropped.

    Raises:
        EnergyScanError: One or more trial energies failed.
    """
    energies = sorted({float(e) for e in E_grid})
    if not energies:
        raise DomainError("energy grid is empty")
    if max_workers < 1:
        raise DomainError(f"max_workers must be >= 1, got {max_workers!r}")

    amplitudes: dict[float, float] = {}
    failures: dict[float, Exception] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {
            e: pool.submit(evolve_trial, e, profile, x0, x1, tolerance) for e in energies
        }
        for e, future in futures.items():
            try:
                amplitudes[e] = future.result().final_amplitude
            except Exception as exc:  # collected and re-raised below
                failures[e] = exc
    if failures:
        raise EnergyScanError(failures)
    return EnergyScan(
        energies=np.array(energies),
        amplitudes=np.array([amplitudes[e] for e in energies]),
        window=(x0, x1),
    )


def find_bound_state(
    profile: MassProfile,
    bracket: tuple[float, float] = (-0.5, 0.5),
    tol_E: float = 1e-4,
    x0: float = -5.0,
    x1: float = 5.0,
    tolerance: float = 1e-10,
    scan_points: int = 21,
    max_workers: int = 1,
) -> float:
    """Minimize the final amplitude over E.

    The amplitude is not unimodal over a wide bracket, so the bracket is first
    scanned on ``scan_points`` equidistant energies. Golden-section search then
    runs on the two scan intervals around the lowest scanned amplitude.

    Args:
        profile: Mass profile.
        bracket: (E_lo, E_hi) containing the minimum.
        tol_E: Stop once the bracket is narrower than this.
        x0: Left edge of the window.
        x1: Right edge of the window.
        tolerance: Integrator tolerance.
        scan_points: Energies of the coarse scan, bracket ends included.
        max_workers: Threads used for the coarse scan.

    Returns:
        The midpoint of the final bracket.

    Raises:
        NoInteriorMinimumError: The lowest scanned amplitude lies on a
            bracket end.
    """
    lo, hi = bracket
    if not lo < hi:
        raise DomainError(f"bracket must satisfy E_lo < E_hi, got {bracket!r}")
    if not tol_E > 0.0:
        raise DomainError(f"tol_E must be > 0, got {tol_E!r}")
    if scan_points < 3:
        raise DomainError(f"scan_points must be >= 3, got {scan_points!r}")

    scan = scan_energies(
        profile, np.linspace(lo, hi, scan_points), x0, x1, tolerance, max_workers
    )
    best = int(np.argmin(scan.amplitudes))
    if best in (0, scan.energies.size - 1):
        raise NoInteriorMinimumError(bracket, values=scan.entries)
    lo, hi = float(scan.energies[best - 1]), float(scan.energies[best + 1])
    logger.debug("golden-section search on [%.8g, %.8g]", lo, hi)

    def amplitude(e: float) -> float:
        return evolve_trial(e, profile, x0, x1, tolerance).final_amplitude

    c = hi - _INV_GOLDEN * (hi - lo)
    d = lo + _INV_GOLDEN * (hi - lo)
    f_c, f_d = amplitude(c), amplitude(d)
    while hi - lo > tol_E:
        if f_c < f_d:
            hi, d, f_d = d, c, f_c
            c = hi - _INV_GOLDEN * (hi - lo)
            f_c = amplitude(c)
        else:
            lo, c, f_c = c, d, f_d
            d = lo + _INV_GOLDEN * (hi - lo)
            f_d = amplitude(d)
    e_star = 0.5 * (lo + hi)
    logger.info("bound state at E=%.8g (bracket width %.2g)", e_star, hi - lo)
    return e_star


def turning_points(
    E: float,
    profile: MassProfile,
    x_range: tuple[float, float] = (-5.0, 5.0),
    samples: int = 2001,
) -> list[float]:
    """Positions in ``x_range`` where |m(x)| = |E|, the exceptional points of H_eff.

    Sign changes of |m(x)| − |E| on a uniform pre-scan are refined by
    bisection. At E = 0 the two points merge into the zeros of m(x) itself.
    """
    lo, hi = x_range
    if not lo < hi:
        raise DomainError(f"x_range must be increasing, got {x_range!r}")
    if samples < 2:
        raise DomainError(f"samples must be >= 2, got {samples!r}")
    target = abs(E)
    if target >= profile.max_abs_mass:
        return []

    if target == 0.0:
        def gap(x: float) -> float:
            return profile.mass(x)
    else:
        def gap(x: float) -> float:
            return abs(profile.mass(x)) - target

    xs = np.linspace(lo, hi, samples)
    values = np.array([gap(x) for x in xs])
    points: list[float] = []
    for i in range(samples - 1):
        if values[i] == 0.0:
            points.append(float(xs[i]))
        elif values[i] * values[i + 1] < 0.0:
            points.append(float(bisect(gap, xs[i], xs[i + 1], xtol=1e-14)))
    if values[-1] == 0.0:
        points.append(float(xs[-1]))
    return points


def region_phases(
    E: float, profile: MassProfile, xs: Sequence[float], tol: float = 1e-9
) -> list[PTPhase]:
    """PT phase of H_eff(|E|, |m(x)|) at every x."""
    return [
        classify_pt(EffectiveParams(omega=abs(E), mass=abs(profile.mass(x))), tol).phase
        for x in xs
    ]
