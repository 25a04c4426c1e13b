"""Channel potentials V_lj(r) and the total potential including the centrifugal term.

Depths follow one sign convention throughout: a term contributes
``depth × shape(r)`` to the real part (volume and surface terms) or to the
imaginary part (``imag_*`` terms), so attractive real terms and absorptive
imaginary terms carry negative depths.
"""

import math
from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
import pandas as pd
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    TypeAdapter,
    ValidationError,
    field_validator,
    model_validator,
)

from .config import read_document
from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import ConfigError, DomainError, PotentialError, PotentialRangeError

__all__ = [
    "TermForm",
    "WoodsSaxonTerm",
    "OpticalModel",
    "OpticalModelSpec",
    "SquareWell",
    "Tabulated",
    "Free",
    "Potential",
    "PotentialSpec",
    "spin_orbit_expectation",
    "check_channel",
    "evaluate_potential",
    "centrifugal_term",
    "total_potential",
    "load_potential",
    "load_tabulated",
    "validate_potential",
]


def _complex_from_config(value: Any) -> Any:
    """Accept ``[re, im]`` or ``{"re": .., "im": ..}`` for complex fields."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    return value


def _fermi(r: float, radius: float, diffuseness: float) -> float:
    """Woods-Saxon form factor 1 / (1 + exp((r − R) / a)), overflow safe."""
    x = (r - radius) / diffuseness
    if x > 0.0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


class TermForm(str, Enum):
    VOLUME = "volume"
    SURFACE = "surface"


class WoodsSaxonTerm(BaseModel):
    """One Woods-Saxon term of an optical model.

    The radius is either given directly (``radius``) or through the rule
    R = r0·A^{1/3} + radius_offset; the document must state which.
    Depths are affine in the laboratory energy:
    depth(E) = depth + depth_energy_slope·E.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    depth: float
    depth_energy_slope: float = 0.0
    radius: float | None = Field(default=None, gt=0.0)
    r0: float | None = Field(default=None, gt=0.0)
    radius_offset: float = 0.0
    diffuseness: float = Field(gt=0.0)
    form: TermForm = TermForm.VOLUME
    surface_normalization: float = Field(default=4.0, gt=0.0)

    @model_validator(mode="after")
    def _check_radius_rule(self) -> "WoodsSaxonTerm":
        if (self.radius is None) == (self.r0 is None):
            raise ValueError("give exactly one of 'radius' or 'r0' (R = r0*A^(1/3) + offset)")
        if self.radius is not None and self.radius_offset != 0.0:
            raise ValueError("'radius_offset' only applies together with 'r0'")
        return self

    @property
    def energy_dependent(self) -> bool:
        return self.depth_energy_slope != 0.0

    def resolved_radius(self, mass_number: int) -> float:
        """Radius in fm for a target of mass number A."""
        if self.radius is not None:
            return self.radius
        assert self.r0 is not None
        radius = self.r0 * mass_number ** (1.0 / 3.0) + self.radius_offset
        if radius <= 0.0:
            raise PotentialError(f"radius rule gives non-positive radius {radius!r} fm")
        return radius

    def depth_at(self, energy: float | None) -> float:
        """Depth in MeV at laboratory energy ``energy``."""
        if not self.energy_dependent:
            return self.depth
        if energy is None:
            raise PotentialError(
                "energy-dependent depth evaluated without a laboratory energy"
            )
        return self.depth + self.depth_energy_slope * energy

    def shape(self, r: float, mass_number: int) -> float:
        """Dimensionless radial shape: f(r) or norm·a·(−df/dr) for the surface form."""
        radius = self.resolved_radius(mass_number)
        f = _fermi(r, radius, self.diffuseness)
        if self.form is TermForm.VOLUME:
            return f
        return self.surface_normalization * f * (1.0 - f)

    def thomas_shape(self, r: float, mass_number: int) -> float:
        """(−1/r)·df/dr of the volume form factor, in fm⁻²."""
        radius = self.resolved_radius(mass_number)
        f = _fermi(r, radius, self.diffuseness)
        return f * (1.0 - f) / (self.diffuseness * r)


class _PotentialBase(BaseModel, ABC):
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    @abstractmethod
    def central(self, r: float, energy: float | None) -> complex:
        """Central (spin independent) part at radius r."""
        pass

    def spin_orbit(self, r: float, energy: float | None, constants: PhysicalConstants) -> complex:
        """Radial spin-orbit strength, to be multiplied by ⟨L·S⟩."""
        return 0j


class OpticalModel(_PotentialBase):
    """Woods-Saxon optical model for a neutron on a target of mass number A."""

    model_config = ConfigDict(
        extra="forbid", frozen=True, allow_inf_nan=False, populate_by_name=True
    )

    kind: Literal["optical_model"] = "optical_model"
    target_mass_number: int = Field(gt=0)
    real_volume: WoodsSaxonTerm
    imag_volume: WoodsSaxonTerm | None = None
    imag_surface: WoodsSaxonTerm | None = None
    spin_orbit_term: WoodsSaxonTerm | None = Field(default=None, alias="spin_orbit")
    spin_orbit_length_sq: float | None = Field(default=None, gt=0.0)

    def central(self, r: float, energy: float | None) -> complex:
        a = self.target_mass_number
        value = complex(self.real_volume.depth_at(energy) * self.real_volume.shape(r, a))
        for term in (self.imag_volume, self.imag_surface):
            if term is not None:
                value += 1j * term.depth_at(energy) * term.shape(r, a)
        return value

    def spin_orbit(self, r: float, energy: float | None, constants: PhysicalConstants) -> complex:
        term = self.spin_orbit_term
        if term is None:
            return 0j
        length_sq = self.spin_orbit_length_sq or constants.spin_orbit_length_sq
        return complex(
            term.depth_at(energy) * length_sq * term.thomas_shape(r, self.target_mass_number)
        )


# name used in configuration documents and the docs
OpticalModelSpec = OpticalModel


class SquareWell(_PotentialBase):
    """Constant complex depth for r <= radius, zero outside."""

    kind: Literal["square_well"] = "square_well"
    depth: complex
    radius: float = Field(gt=0.0)

    @field_validator("depth", mode="before")
    @classmethod
    def _coerce_depth(cls, value: Any) -> Any:
        return _complex_from_config(value)

    def central(self, r: float, energy: float | None) -> complex:
        return self.depth if r <= self.radius else 0j


class Tabulated(_PotentialBase):
    """Central potential sampled at strictly increasing radii, linear in between."""

    kind: Literal["tabulated"] = "tabulated"
    samples: list[tuple[float, complex]] = Field(min_length=2)
    interpolation: Literal["linear"] = "linear"

    @field_validator("samples", mode="before")
    @classmethod
    def _coerce_samples(cls, value: Any) -> Any:
        rows = []
        for row in value:
            if isinstance(row, (list, tuple)) and len(row) == 3:
                rows.append((float(row[0]), complex(float(row[1]), float(row[2]))))
            elif isinstance(row, (list, tuple)) and len(row) == 2:
                rows.append((float(row[0]), _complex_from_config(row[1])))
            else:
                rows.append(row)
        return rows

    _radii: np.ndarray = PrivateAttr()
    _real: np.ndarray = PrivateAttr()
    _imag: np.ndarray = PrivateAttr()

    @model_validator(mode="after")
    def _check_increasing(self) -> "Tabulated":
        radii = [r for r, _ in self.samples]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("tabulated radii must be strictly increasing")
        return self

    def model_post_init(self, context: Any) -> None:
        radii = np.array([r for r, _ in self.samples], dtype=float)
        values = np.array([v for _, v in self.samples], dtype=complex)
        for array in (radii, values):
            array.setflags(write=False)
        self._radii = radii
        self._real = values.real
        self._imag = values.imag

    def central(self, r: float, energy: float | None) -> complex:
        radii = self._radii
        if r < radii[0] or r > radii[-1]:
            raise PotentialRangeError(r, float(radii[0]), float(radii[-1]))
        return complex(np.interp(r, radii, self._real), np.interp(r, radii, self._imag))


class Free(_PotentialBase):
    """No interaction."""

    kind: Literal["free"] = "free"

    def central(self, r: float, energy: float | None) -> complex:
        return 0j


type Potential = OpticalModel | SquareWell | Tabulated | Free

PotentialSpec = Annotated[
    OpticalModel | SquareWell | Tabulated | Free, Field(discriminator="kind")
]
_POTENTIAL_ADAPTER: TypeAdapter[Potential] = TypeAdapter(PotentialSpec)


def _as_fraction(j: float | Fraction) -> Fraction:
    return Fraction(j).limit_denominator(4)


def check_channel(l: int, j: float | Fraction) -> Fraction:
    """Validate an (l, j) pair with j = l ± 1/2 and j >= 1/2; return j exactly."""
    if isinstance(l, bool) or not isinstance(l, int) or l < 0:
        raise DomainError(f"orbital angular momentum must be an integer >= 0, got {l!r}")
    jf = _as_fraction(j)
    if jf.denominator != 2 or abs(jf - l) != Fraction(1, 2) or jf < Fraction(1, 2):
        raise DomainError(f"invalid channel (l={l}, j={j}): need j = l ± 1/2 and j >= 1/2")
    return jf


def spin_orbit_expectation(l: int, j: float | Fraction) -> float:
    """⟨L·S⟩ = [j(j+1) − l(l+1) − 3/4] / 2, i.e. l/2 or −(l+1)/2."""
    jf = check_channel(l, j)
    return float((jf * (jf + 1) - l * (l + 1) - Fraction(3, 4)) / 2)


def evaluate_potential(
    spec: Potential,
    l: int,
    j: float | Fraction,
    r: float,
    energy: float | None = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> complex:
    """Full channel potential V_lj(r) in MeV.

    Args:
        spec: Potential to evaluate.
        l: Orbital angular momentum.
        j: Total angular momentum, l ± 1/2.
        r: Radius in fm, > 0.
        energy: Laboratory energy in MeV; required by energy-dependent depths.
        constants: Constants table (spin-orbit length).

    Raises:
        DomainError: Invalid channel or radius.
        PotentialRangeError: Tabulated potential evaluated outside its range.
    """
    if not r > 0.0:
        raise DomainError(f"radius must be > 0, got {r!r}")
    ls = spin_orbit_expectation(l, j)
    value = spec.central(r, energy)
    if ls != 0.0:
        value += spec.spin_orbit(r, energy, constants) * ls
    return value


def centrifugal_term(l: int, r: float, mass: float, hbar_c: float) -> float:
    """(ħc)²/(2m) · l(l+1)/r² in MeV."""
    return hbar_c * hbar_c / (2.0 * mass) * l * (l + 1) / (r * r)


def total_potential(
    spec: Potential,
    l: int,
    j: float | Fraction,
    r: float,
    mass: float,
    hbar_c: float,
    energy: float | None = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
) -> complex:
    """V_lj(r) plus the centrifugal term, in MeV."""
    return evaluate_potential(spec, l, j, r, energy, constants) + centrifugal_term(
        l, r, mass, hbar_c
    )


def load_tabulated(path: str | Path) -> Tabulated:
    """Read a two/three-column table (r in fm, Re V, Im V in MeV), '#' comments allowed."""
    path = Path(path)
    try:
        df = pd.read_csv(path, sep=r"\s+", comment="#", header=None)
    except (OSError, pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise ConfigError(f"cannot read tabulated potential {path}: {exc}") from exc
    if df.shape[1] not in (2, 3):
        raise ConfigError(f"{path}: expected 2 or 3 columns, found {df.shape[1]}")
    if df.shape[1] == 2:
        df[2] = 0.0
    try:
        return Tabulated(samples=df.to_numpy(dtype=float).tolist())
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_potential(path: str | Path) -> Potential:
    """Read a potential document (.toml or .json).

    A tabulated document may give ``path`` (resolved relative to the document)
    instead of inline ``samples``.
    """
    path = Path(path)
    document = read_document(path)
    if document.get("kind") == "tabulated" and "path" in document:
        extra = set(document) - {"kind", "path", "interpolation"}
        if extra:
            raise ConfigError(f"{path}: unknown keys {sorted(extra)}")
        return load_tabulated(path.parent / document["path"])
    try:
        return _POTENTIAL_ADAPTER.validate_python(document)
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def validate_potential(document: dict[str, Any]) -> Potential:
    """Validate an in-memory potential document."""
    return _POTENTIAL_ADAPTER.validate_python(document)
