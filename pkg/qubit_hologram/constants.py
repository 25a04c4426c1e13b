"""Physical constants in laboratory units (MeV, fm).

The hologram equations are written with ħ = c = 1; converting laboratory
energies and lengths needs the handful of constants collected here.
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field

__all__ = ["PhysicalConstants", "DEFAULT_CONSTANTS", "ConstantsOverride"]


class PhysicalConstants(BaseModel):
    """CODATA values used to convert between MeV and fm."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    hbar_c: float = Field(
        default=197.3269804, gt=0, description="ħc in MeV·fm."
    )
    neutron_mass: float = Field(
        default=939.56542, gt=0, description="Neutron rest energy in MeV."
    )
    atomic_mass_unit: float = Field(
        default=931.49410242, gt=0, description="Atomic mass unit in MeV."
    )
    spin_orbit_length_sq: float = Field(
        default=2.0,
        gt=0,
        description="Squared pion Compton wavelength (ħ/m_π c)² in fm², Thomas form.",
    )

    def with_overrides(self, overrides: "ConstantsOverride | dict[str, Any] | None") -> "PhysicalConstants":
        """Return a copy with the non-empty fields of ``overrides`` applied.

        Args:
            overrides: Partial set of constants; missing fields keep their value.

        Returns:
            A new, validated constants table.
        """
        if overrides is None:
            return self
        if isinstance(overrides, dict):
            overrides = ConstantsOverride.model_validate(overrides)
        update = overrides.model_dump(exclude_none=True)
        return PhysicalConstants.model_validate({**self.model_dump(), **update})


class ConstantsOverride(BaseModel):
    """Partial constants table as written in configuration documents."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    hbar_c: float | None = Field(default=None, gt=0)
    neutron_mass: float | None = Field(default=None, gt=0)
    atomic_mass_unit: float | None = Field(default=None, gt=0)
    spin_orbit_length_sq: float | None = Field(default=None, gt=0)


DEFAULT_CONSTANTS = PhysicalConstants()
