"""Partial-wave neutron scattering solved as qubit time evolution.

The radial equation u'' + [k² − U(r)] u = 0 of every (l, j) channel is
written as the first-order system of a qubit with state (α, β),
α = √2·u and β = i·u'/(√2·m̃), evolving under the non-Hermitian generator

    H(t) = v · [[0, 2m̃], [Ẽ − Ṽ_tot(v t), 0]]

where the tilde marks quantities divided by ħc (m̃, Ẽ, Ṽ in fm⁻¹) and the
evolution parameter t = r / v. Phase shifts are read off at two radii
beyond the range of the potential and combined into the scattering
amplitudes and cross sections.
"""

import cmath
import math
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import simpson

from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import (
    ChannelSolveError,
    DataError,
    DomainError,
    IllConditionedRadiiError,
)
from .logging import get_logger
from .numerics import (
    HamiltonianEvaluator,
    integrate_schrodinger,
    legendre_table,
    spherical_bessel_table,
)
from .potential import (
    OpticalModel,
    Potential,
    check_channel,
    total_potential,
)

__all__ = [
    "ScatteringChannel",
    "make_channel",
    "HologramHamiltonian",
    "hologram_hamiltonian",
    "RadialSolution",
    "solve_radial",
    "extract_phase_shift",
    "SolverSettings",
    "PhaseShiftTable",
    "phase_shift_table",
    "AngularDistribution",
    "scattering_amplitudes",
    "total_cross_sections",
    "partial_wave_cross_sections",
    "CrossSections",
    "compare_to_data",
    "ChiSquare",
    "channels_up_to",
]

logger = get_logger("scattering")

# θ grid for the elastic cross-section quadrature
_QUADRATURE_POINTS = 2001
# Im δ below this is reported as gain
_GAIN_THRESHOLD = -1e-10


def _format_j(j: Fraction) -> str:
    return f"{j.numerator}/{j.denominator}"


@dataclass(frozen=True)
class ScatteringChannel:
    """One partial wave (l, j) at a given energy.

    Attributes:
        l: Orbital angular momentum.
        j: Total angular momentum, l ± 1/2.
        energy: Laboratory energy in MeV; drives energy-dependent depths.
        mass: Kinematic mass in MeV (neutron or reduced mass).
        cm_energy: Energy of relative motion in MeV; equals ``energy`` for a
            stationary target.
        hbar_c: ħc in MeV·fm.
    """

    l: int
    j: Fraction
    energy: float
    mass: float
    cm_energy: float
    hbar_c: float = DEFAULT_CONSTANTS.hbar_c

    def __post_init__(self) -> None:
        object.__setattr__(self, "j", check_channel(self.l, self.j))
        if not (self.energy > 0.0 and self.cm_energy > 0.0):
            raise DomainError(f"energy must be > 0, got {self.energy!r} MeV")
        if not self.mass > 0.0:
            raise DomainError(f"mass must be > 0, got {self.mass!r} MeV")

    @property
    def k(self) -> float:
        """Wave number √(2·mass·E)/ħc in fm⁻¹."""
        return math.sqrt(2.0 * self.mass * self.cm_energy) / self.hbar_c

    @property
    def label(self) -> str:
        return f"l={self.l},j={_format_j(self.j)}"


def make_channel(
    l: int,
    j: float | Fraction,
    energy: float,
    mass: float | None = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    reduced_mass: bool = False,
    target_mass_number: int | None = None,
) -> ScatteringChannel:
    """Build a channel, optionally with two-body kinematics.

    Without ``reduced_mass`` the target is stationary: the kinematic mass is
    the projectile mass and the laboratory energy is the energy of relative
    motion. With it, μ = m·M/(m + M) and E_cm = E_lab·M/(m + M) for a target
    of mass M = A·u.
    """
    mass = constants.neutron_mass if mass is None else mass
    cm_energy = energy
    if reduced_mass:
        if target_mass_number is None or target_mass_number <= 0:
            raise DomainError("reduced-mass kinematics needs a target mass number > 0")
        target = target_mass_number * constants.atomic_mass_unit
        cm_energy = energy * target / (mass + target)
        mass = mass * target / (mass + target)
    return ScatteringChannel(
        l=l,
        j=Fraction(j).limit_denominator(4),
        energy=energy,
        mass=mass,
        cm_energy=cm_energy,
        hbar_c=constants.hbar_c,
    )


def channels_up_to(l_max: int) -> list[tuple[int, Fraction]]:
    """All (l, j) pairs with l ≤ l_max, ordered by l then j; j = 1/2 only at l = 0."""
    if l_max < 0:
        raise DomainError(f"l_max must be >= 0, got {l_max!r}")
    pairs = [(0, Fraction(1, 2))]
    for l in range(1, l_max + 1):
        pairs += [(l, Fraction(2 * l - 1, 2)), (l, Fraction(2 * l + 1, 2))]
    return pairs


class HologramHamiltonian(HamiltonianEvaluator):
    """t ↦ v·[[0, 2m̃], [Ẽ − Ṽ_tot(v t), 0]] for one channel."""

    def __init__(
        self,
        channel: ScatteringChannel,
        spec: Potential,
        v: float = 1.0,
        constants: PhysicalConstants = DEFAULT_CONSTANTS,
    ):
        if not v > 0.0:
            raise DomainError(f"scaling v must be > 0, got {v!r}")
        self.channel = channel
        self.spec = spec
        self.v = v
        self.constants = constants
        hbar_c = channel.hbar_c
        self._mass_t = channel.mass / hbar_c
        self._energy_t = channel.cm_energy / hbar_c

    @property
    def dimension(self) -> int:
        return 2

    def potential(self, r: float) -> complex:
        """V_tot(r) in MeV, centrifugal term included."""
        ch = self.channel
        return total_potential(
            self.spec, ch.l, ch.j, r, ch.mass, ch.hbar_c, ch.energy, self.constants
        )

    def matrix(self, t: float) -> np.ndarray:
        v = self.v
        lower = self._energy_t - self.potential(v * t) / self.channel.hbar_c
        return np.array([[0.0, 2.0 * v * self._mass_t], [v * lower, 0.0]], dtype=complex)


def hologram_hamiltonian(
    channel: ScatteringChannel,
    spec: Potential,
    v: float = 1.0,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> HologramHamiltonian:
    """Evaluator of the hologram generator for ``channel`` in potential ``spec``."""
    return HologramHamiltonian(channel, spec, v, constants)


@dataclass(frozen=True)
class RadialSolution:
    """Radial function u and its derivative at the sampled radii.

    The overall complex normalization is arbitrary.

    Attributes:
        channel: The channel that was solved.
        r: Strictly increasing radii in fm.
        u: u(r), complex.
        du: du/dr in fm⁻¹ times the units of u.
    """

    channel: ScatteringChannel
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray

    def __post_init__(self) -> None:
        for array in (self.r, self.u, self.du):
            array.setflags(write=False)

    @property
    def samples(self) -> list[tuple[float, complex, complex]]:
        return [(float(r), complex(u), complex(d)) for r, u, d in zip(self.r, self.u, self.du)]

    def at(self, r: float) -> tuple[complex, complex]:
        """(u, du/dr) at a sampled radius."""
        index = int(np.argmin(np.abs(self.r - r)))
        if not math.isclose(self.r[index], r, rel_tol=1e-12, abs_tol=1e-15):
            raise DomainError(f"r={r!r} fm was not sampled")
        return complex(self.u[index]), complex(self.du[index])

    def qubit_states(self) -> np.ndarray:
        """The encoded spinors (α, β) = (√2·u, i·u′/(√2·m̃)), one row per radius."""
        mass_t = self.channel.mass / self.channel.hbar_c
        return np.column_stack(
            (math.sqrt(2.0) * self.u, 1j * self.du / (math.sqrt(2.0) * mass_t))
        )


def _regular_start(channel: ScatteringChannel, v_start: complex, r: float) -> tuple[complex, complex]:
    """Regular solution near the origin for a locally constant potential."""
    l = channel.l
    q2 = channel.k**2 - 2.0 * channel.mass * v_start / channel.hbar_c**2
    c1 = q2 / (2.0 * (2 * l + 3))
    c2 = q2 * q2 / (8.0 * (2 * l + 3) * (2 * l + 5))
    r2 = r * r
    u = r ** (l + 1) * (1.0 - c1 * r2 + c2 * r2 * r2)
    du = r**l * ((l + 1) - (l + 3) * c1 * r2 + (l + 5) * c2 * r2 * r2)
    return u, du


def solve_radial(
    channel: ScatteringChannel,
    spec: Potential,
    r_start: float = 1e-3,
    r_end: float = 20.0,
    v: float = 1.0,
    tolerance: float = 1e-10,
    sample_rs: Sequence[float] = (),
    initial_scale: complex = 1.0,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> RadialSolution:
    """Integrate the hologram of one channel from r_start to r_end.

    The qubit starts in the encoded regular solution u ≈ r^{l+1}; for l = 0
    this tends to the pure |−⟩ state as r_start → 0.

    Args:
        channel: The channel to solve.
        spec: Potential to evaluate.
        r_start: Start radius in fm, > 0.
        r_end: End radius in fm.
        v: Evolution speed, r = v·t.
        tolerance: Integrator tolerance.
        sample_rs: Radii in [r_start, r_end] to record besides the endpoints.
        initial_scale: Complex factor applied to the initial spinor.
        constants: Constants table.

    Returns:
        The sampled radial solution.
    """
    if not 0.0 < r_start < r_end:
        raise DomainError(f"require 0 < r_start < r_end, got {r_start!r}, {r_end!r}")
    if initial_scale == 0:
        raise DomainError("initial_scale must be nonzero")
    hamiltonian = hologram_hamiltonian(channel, spec, v, constants)
    mass_t = channel.mass / channel.hbar_c

    u0, du0 = _regular_start(channel, hamiltonian.potential(r_start), r_start)
    psi0 = initial_scale * np.array(
        [math.sqrt(2.0) * u0, 1j * du0 / (math.sqrt(2.0) * mass_t)], dtype=complex
    )
    trajectory = integrate_schrodinger(
        hamiltonian,
        psi0,
        r_start / v,
        r_end / v,
        tolerance=tolerance,
        sample_times=[r / v for r in sample_rs],
    )
    r = trajectory.times * v
    # snap to the requested radii so lookups by r are exact
    r[0], r[-1] = r_start, r_end
    alpha, beta = trajectory.states[:, 0], trajectory.states[:, 1]
    return RadialSolution(
        channel=channel,
        r=r,
        u=alpha / math.sqrt(2.0),
        du=-1j * math.sqrt(2.0) * mass_t * beta,
    )


def _s_from_tangent_parts(numerator: complex, denominator: complex, label: str) -> complex:
    scale = max(abs(numerator), abs(denominator))
    if scale == 0.0 or not math.isfinite(scale):
        raise IllConditionedRadiiError(f"{label}: Bessel combinations vanish or overflow")
    lower = denominator - 1j * numerator
    if abs(lower) <= 1e-14 * scale:
        raise IllConditionedRadiiError(f"{label}: S-matrix diverges at the chosen radii")
    s = (denominator + 1j * numerator) / lower
    if abs(s) <= 1e-300:
        raise IllConditionedRadiiError(f"{label}: S-matrix vanishes at the chosen radii")
    return s


def extract_phase_shift(
    u_R1: complex,
    u_R2: complex,
    channel: ScatteringChannel,
    R1: float = 19.98,
    R2: float = 20.0,
) -> complex:
    """Complex phase shift from the radial function at two radii.

    With G = R₂·u(R₁)/(R₁·u(R₂)), tan δ = (j_l(kR₁) − G·j_l(kR₂)) / (n_l(kR₁) − G·n_l(kR₂)).
    δ is taken as −(i/2)·log S with S = e^{2iδ}, so Re δ ∈ (−π/2, π/2].

    Raises:
        IllConditionedRadiiError: The radii do not resolve the phase shift.
    """
    if not 0.0 < R1 < R2:
        raise DomainError(f"require 0 < R1 < R2, got {R1!r}, {R2!r}")
    if u_R2 == 0:
        raise IllConditionedRadiiError(f"{channel.label}: u(R2) vanishes")
    k, l = channel.k, channel.l
    j1, n1 = spherical_bessel_table(l, k * R1)
    j2, n2 = spherical_bessel_table(l, k * R2)
    g = (R2 * u_R1) / (R1 * u_R2)
    numerator = j1[l] - g * j2[l]
    denominator = n1[l] - g * n2[l]
    s = _s_from_tangent_parts(complex(numerator), complex(denominator), channel.label)
    delta = -0.5j * cmath.log(s)
    if delta.real <= -math.pi / 2:
        delta += math.pi
    return delta


class SolverSettings(BaseModel):
    """Numerical knobs of the channel solves."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    r_start: float = Field(default=1e-3, gt=0.0)
    r1: float = Field(default=19.98, gt=0.0)
    r2: float = Field(default=20.0, gt=0.0)
    v: float = Field(default=1.0, gt=0.0)
    tolerance: float = Field(default=1e-10, gt=0.0, le=1e-3)

    @model_validator(mode="after")
    def _check_radii(self) -> "SolverSettings":
        if not self.r_start < self.r1 < self.r2:
            raise ValueError(
                f"require r_start < r1 < r2, got {self.r_start}, {self.r1}, {self.r2}"
            )
        return self


@dataclass(frozen=True)
class PhaseShiftTable:
    """Phase shifts δ_lj of all channels up to ``l_max`` at one energy.

    Attributes:
        entries: (l, j) → δ in radians, ordered by l then j.
        energy: Laboratory energy in MeV.
        k: Wave number in fm⁻¹.
        l_max: Angular momentum cutoff.
        gain_channels: Labels of channels with Im δ < 0.
    """

    entries: Mapping[tuple[int, Fraction], complex]
    energy: float
    k: float
    l_max: int
    gain_channels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def delta(self, l: int, j: float | Fraction) -> complex:
        return self.entries[(l, Fraction(j).limit_denominator(4))]

    def s_matrix(self, l: int, j: float | Fraction) -> complex:
        """e^{2iδ_lj}; 1 for channels that do not exist (l = 0, j = −1/2)."""
        key = (l, Fraction(j).limit_denominator(4))
        if key not in self.entries:
            return 1.0 + 0j
        return cmath.exp(2j * self.entries[key])

    def split(self) -> tuple[np.ndarray, np.ndarray]:
        """S-matrix arrays (S₊, S₋) indexed by l, for j = l + 1/2 and j = l − 1/2."""
        s_plus = np.array([self.s_matrix(l, l + 0.5) for l in range(self.l_max + 1)])
        s_minus = np.array(
            [self.s_matrix(l, l - 0.5) if l > 0 else 1.0 for l in range(self.l_max + 1)],
            dtype=complex,
        )
        return s_plus, s_minus


def _solve_channel(
    l: int,
    j: Fraction,
    spec: Potential,
    energy: float,
    mass: float | None,
    settings: SolverSettings,
    constants: PhysicalConstants,
    reduced_mass: bool,
    target_mass_number: int | None,
) -> complex:
    channel = make_channel(l, j, energy, mass, constants, reduced_mass, target_mass_number)
    solution = solve_radial(
        channel,
        spec,
        r_start=settings.r_start,
        r_end=settings.r2,
        v=settings.v,
        tolerance=settings.tolerance,
        sample_rs=(settings.r1,),
        constants=constants,
    )
    u1, _ = solution.at(settings.r1)
    u2, _ = solution.at(settings.r2)
    delta = extract_phase_shift(u1, u2, channel, settings.r1, settings.r2)
    logger.info("%s: delta = %.10g%+.10gj rad", channel.label, delta.real, delta.imag)
    return delta


def phase_shift_table(
    spec: Potential,
    energy: float,
    mass: float | None = None,
    l_max: int = 12,
    settings: SolverSettings = SolverSettings(),
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    reduced_mass: bool = False,
    target_mass_number: int | None = None,
    max_workers: int = 1,
) -> PhaseShiftTable:
    """Solve every channel (l, j = l ± 1/2) with l ≤ l_max.

    Args:
        spec: Potential to evaluate.
        energy: Laboratory energy in MeV.
        mass: Projectile mass in MeV; the neutron mass by default.
        l_max: Angular momentum cutoff.
        settings: Radii, speed and tolerance of the channel solves.
        constants: Constants table.
        reduced_mass: Use two-body kinematics.
        target_mass_number: Target A for reduced mass; taken from an optical
            model when not given.
        max_workers: Threads used for the independent channel solves.

    Returns:
        The phase-shift table, ordered by (l, j) whatever the completion order.

    Raises:
        ChannelSolveError: One or more channels failed; every failure is named.
    """
    if max_workers < 1:
        raise DomainError(f"max_workers must be >= 1, got {max_workers!r}")
    if target_mass_number is None and isinstance(spec, OpticalModel):
        target_mass_number = spec.target_mass_number
    pairs = channels_up_to(l_max)
    args = (spec, energy, mass, settings, constants, reduced_mass, target_mass_number)

    results: dict[tuple[int, Fraction], complex] = {}
    failures: dict[str, Exception] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {pair: pool.submit(_solve_channel, *pair, *args) for pair in pairs}
        for (l, j), future in futures.items():
            try:
                results[(l, j)] = future.result()
            except Exception as exc:  # collected and re-raised below
                failures[f"l={l},j={_format_j(j)}"] = exc
    if failures:
        raise ChannelSolveError(failures)

    gain = tuple(
        f"l={l},j={_format_j(j)}" for (l, j), d in results.items() if d.imag < _GAIN_THRESHOLD
    )
    if gain:
        logger.warning("channels with Im delta < 0 (gain): %s", ", ".join(gain))
    k = make_channel(0, 0.5, energy, mass, constants, reduced_mass, target_mass_number).k
    return PhaseShiftTable(
        entries={pair: results[pair] for pair in pairs},
        energy=energy,
        k=k,
        l_max=l_max,
        gain_channels=gain,
    )


@dataclass(frozen=True)
class AngularDistribution:
    """Amplitudes and the unpolarized cross section on an angle grid.

    Attributes:
        theta: Angles in radians, inside (0, π).
        f: Non-spin-flip amplitude in fm.
        g: Spin-flip amplitude in fm.
        dsigma_domega: |f|² + |g|² in fm²/sr.
    """

    theta: np.ndarray
    f: np.ndarray
    g: np.ndarray
    dsigma_domega: np.ndarray

    def points(self) -> list[tuple[float, complex, complex, float]]:
        return list(
            zip(
                self.theta.tolist(),
                self.f.tolist(),
                self.g.tolist(),
                self.dsigma_domega.tolist(),
            )
        )

    @property
    def forward_peaked(self) -> bool:
        """True when the most forward angle carries the largest cross section."""
        return bool(self.dsigma_domega[0] >= self.dsigma_domega.max())


def scattering_amplitudes(
    table: PhaseShiftTable, theta_grid: Sequence[float] | np.ndarray
) -> AngularDistribution:
    """Partial-wave sums for f(θ), g(θ) and dσ/dΩ = |f|² + |g|².

    f = Σ_l [(l+1)(S₊ − 1) + l(S₋ − 1)]·P_l(cos θ) / (2ik) and
    g = sin θ/(2k) · Σ_l (S₊ − S₋)·P′_l(cos θ).
    """
    theta = np.array(theta_grid, dtype=float)
    if theta.ndim != 1 or theta.size == 0:
        raise DomainError("theta grid must be a nonempty 1-D sequence")
    if np.any(theta <= 0.0) or np.any(theta >= math.pi):
        raise DomainError("theta grid points must lie in the open interval (0, pi)")
    s_plus, s_minus = table.split()
    ls = np.arange(table.l_max + 1)
    p, dp = legendre_table(table.l_max, np.cos(theta))
    weights_f = (ls + 1) * (s_plus - 1.0) + ls * (s_minus - 1.0)
    f = (weights_f @ p) / (2j * table.k)
    g = np.sin(theta) * ((s_plus - s_minus) @ dp) / (2.0 * table.k)
    dsigma = np.abs(f) ** 2 + np.abs(g) ** 2
    for array in (theta, f, g, dsigma):
        array.setflags(write=False)
    return AngularDistribution(theta=theta, f=f, g=g, dsigma_domega=dsigma)


@dataclass(frozen=True)
class CrossSections:
    """Integrated cross sections in fm²."""

    elastic: float
    total: float

    @property
    def reaction(self) -> float:
        return self.total - self.elastic


def total_cross_sections(table: PhaseShiftTable) -> tuple[float, float]:
    """(σ_el, σ_tot) in fm².

    σ_el integrates (|f|² + |g|²)·2π sin θ with Simpson's rule on a uniform
    grid over [0, π]; σ_tot follows from the forward amplitude,
    σ_tot = (4π/k)·Im f(0), with P_l(1) = 1.
    """
    grid = np.linspace(0.0, math.pi, _QUADRATURE_POINTS)
    integrand = np.zeros_like(grid)
    interior = scattering_amplitudes(table, grid[1:-1])
    # sin θ vanishes at both endpoints
    integrand[1:-1] = interior.dsigma_domega * 2.0 * math.pi * np.sin(grid[1:-1])
    sigma_el = float(simpson(integrand, x=grid))

    s_plus, s_minus = table.split()
    ls = np.arange(table.l_max + 1)
    f0 = np.sum((ls + 1) * (s_plus - 1.0) + ls * (s_minus - 1.0)) / (2j * table.k)
    sigma_tot = float(4.0 * math.pi / table.k * f0.imag)
    return sigma_el, sigma_tot


def partial_wave_cross_sections(table: PhaseShiftTable) -> CrossSections:
    """σ_el and σ_tot summed directly over the S-matrix, without quadrature."""
    s_plus, s_minus = table.split()
    ls = np.arange(table.l_max + 1)
    k2 = table.k * table.k
    elastic = math.pi / k2 * float(
        np.sum((ls + 1) * np.abs(1.0 - s_plus) ** 2 + ls * np.abs(1.0 - s_minus) ** 2)
    )
    total = 2.0 * math.pi / k2 * float(
        np.sum((ls + 1) * (1.0 - s_plus.real) + ls * (1.0 - s_minus.real))
    )
    return CrossSections(elastic=elastic, total=total)


@dataclass(frozen=True)
class ChiSquare:
    """χ² of a model curve against data, with the per-point normalized residuals."""

    chi2: float
    residuals: np.ndarray

    @property
    def points(self) -> int:
        return int(self.residuals.size)


def compare_to_data(
    dist: AngularDistribution,
    data: Sequence[tuple[float, float, float]] | np.ndarray,
) -> ChiSquare:
    """χ² = Σ ((model − value)/uncertainty)² with the model interpolated linearly.

    Args:
        dist: Computed angular distribution.
        data: Rows (θ in radians, value, uncertainty) in the units of
            ``dist.dsigma_domega``.

    Raises:
        DataError: Empty data, non-positive uncertainties, or angles
            outside the computed grid.
    """
    rows = np.asarray(data, dtype=float)
    if rows.size == 0:
        raise DataError("comparison data is empty")
    if rows.ndim != 2 or rows.shape[1] != 3:
        raise DataError(f"comparison data must have 3 columns, got shape {rows.shape}")
    theta, value, sigma = rows.T
    if np.any(sigma <= 0.0):
        raise DataError("uncertainties must be > 0")
    lo, hi = dist.theta[0], dist.theta[-1]
    outside = (theta < lo - 1e-12) | (theta > hi + 1e-12)
    if np.any(outside):
        raise DataError(
            f"{int(outside.sum())} data angle(s) outside the computed range "
            f"[{math.degrees(lo):.6g}, {math.degrees(hi):.6g}] deg"
        )
    model = np.interp(theta, dist.theta, dist.dsigma_domega)
    residuals = (model - value) / sigma
    residuals.setflags(write=False)
    return ChiSquare(chi2=float(np.sum(residuals**2)), residuals=residuals)
