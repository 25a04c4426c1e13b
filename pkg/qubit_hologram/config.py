"""Run configuration: JSON/TOML documents and command-line values, strictly validated.

A run document has one optional section per subcommand (``scatter``,
``bound``, ``pt-scan``, ``dirac-check``) plus the top-level keys
``output_dir`` and ``constants``. Command-line flags override the document;
unknown keys are errors everywhere.
"""

import json
import math
import os
import tomllib
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .bound_state import MassProfileSpec, TanhProfile
from .constants import ConstantsOverride
from .errors import ConfigError

__all__ = [
    "OUTPUT_DIR_ENV",
    "ScatterConfig",
    "BoundConfig",
    "PTScanConfig",
    "DiracCheckConfig",
    "RunConfig",
    "read_document",
    "load_run_config",
    "build_section",
    "resolve_output_dir",
]

OUTPUT_DIR_ENV = "QUBIT_HOLOGRAM_OUTPUT_DIR"

_STRICT = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False, populate_by_name=True)


def read_document(path: str | Path) -> dict[str, Any]:
    """Parse a .toml or .json document into a dict.

    Raises:
        ConfigError: Unreadable file, syntax error or unsupported suffix.
    """
    path = Path(path)
    try:
        if path.suffix == ".toml":
            with path.open("rb") as fh:
                return tomllib.load(fh)
        if path.suffix == ".json":
            document = json.loads(path.read_text())
            if not isinstance(document, dict):
                raise ConfigError(f"{path}: top level must be an object")
            return document
    except (OSError, tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    raise ConfigError(f"unsupported document type '{path.suffix}' for {path}; use .toml or .json")


class ScatterConfig(BaseModel):
    """Inputs of the ``scatter`` subcommand."""

    model_config = _STRICT

    potential: Path
    energy: float = Field(gt=0, description="Laboratory energy in MeV.")
    l_max: int = Field(default=12, ge=0, le=56)
    r_start: float = Field(default=1e-3, gt=0)
    r1: float = Field(default=19.98, gt=0)
    r2: float = Field(default=20.0, gt=0)
    v: float = Field(default=1.0, gt=0)
    tolerance: float = Field(default=1e-10, gt=0, le=1e-3)
    theta_min_deg: float = Field(default=1.0, gt=0, lt=180)
    theta_max_deg: float = Field(default=179.0, gt=0, lt=180)
    theta_step_deg: float = Field(default=1.0, gt=0)
    radial_step: float = Field(default=0.1, gt=0, description="Grid of radial_l0.csv in fm.")
    data: Path | None = None
    reduced_mass: bool = False
    target_mass_number: int | None = Field(default=None, gt=0)
    max_workers: int = Field(default=1, ge=1)
    lmax_extra: int = Field(default=4, ge=0, le=8)
    potential_l_max: int = Field(default=3, ge=0, description="Highest l written to potential.csv.")

    @model_validator(mode="after")
    def _check(self) -> "ScatterConfig":
        if not self.r_start < self.r1 < self.r2:
            raise ValueError(f"require r_start < r1 < r2, got {self.r_start}, {self.r1}, {self.r2}")
        if not self.theta_min_deg <= self.theta_max_deg:
            raise ValueError("theta_min_deg must not exceed theta_max_deg")
        if not self.potential.is_file():
            raise ValueError(f"potential file {self.potential} does not exist")
        if self.data is not None and not self.data.is_file():
            raise ValueError(f"data file {self.data} does not exist")
        return self

    def theta_grid_deg(self) -> np.ndarray:
        """Uniform angle grid from theta_min_deg to theta_max_deg inclusive."""
        span = self.theta_max_deg - self.theta_min_deg
        n = int(math.floor(span / self.theta_step_deg + 1e-9)) + 1
        return self.theta_min_deg + self.theta_step_deg * np.arange(n)

    def radial_grid(self) -> np.ndarray:
        n = int(math.floor(self.r2 / self.radial_step + 1e-9))
        grid = self.radial_step * np.arange(1, n + 1)
        return grid[(grid > self.r_start) & (grid < self.r2)]


class BoundConfig(BaseModel):
    """Inputs of the ``bound`` subcommand."""

    model_config = _STRICT

    profile: MassProfileSpec = Field(default_factory=TanhProfile)
    x0: float = -5.0
    x1: float = 5.0
    tolerance: float = Field(default=1e-10, gt=0, le=1e-3)
    tol_e: float = Field(default=1e-4, gt=0)
    bracket: tuple[float, float] = (-0.5, 0.5)
    e_min: float = -0.5
    e_max: float = 0.5
    e_step: float = Field(default=0.01, gt=0)
    trajectory_points: int = Field(default=201, ge=2)
    scan_points: int = Field(default=21, ge=3)
    trial_energies: tuple[float, ...] = (-0.1, 0.0, 0.1)
    max_workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check(self) -> "BoundConfig":
        if not self.x0 < self.x1:
            raise ValueError(f"require x0 < x1, got {self.x0}, {self.x1}")
        if not self.bracket[0] < self.bracket[1]:
            raise ValueError(f"bracket must be increasing, got {self.bracket}")
        if not self.e_min <= self.e_max:
            raise ValueError(f"require e_min <= e_max, got {self.e_min}, {self.e_max}")
        return self

    def energy_grid(self) -> np.ndarray:
        """e_min, e_min + e_step, ..., e_max with the endpoints included exactly."""
        n = int(round((self.e_max - self.e_min) / self.e_step)) + 1
        return np.linspace(self.e_min, self.e_max, max(n, 1))

    def trajectory_grid(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.trajectory_points)


class PTScanConfig(BaseModel):
    """Inputs of the ``pt-scan`` subcommand."""

    model_config = _STRICT

    omega_min: float = 0.0
    omega_max: float = 2.0
    mass: float = Field(default=1.0, ge=0)
    steps: int = Field(default=201, ge=2)
    tol: float = Field(default=1e-9, gt=0)
    output: Path | None = None

    @model_validator(mode="after")
    def _check(self) -> "PTScanConfig":
        if not self.omega_min < self.omega_max:
            raise ValueError(f"require omega_min < omega_max, got {self.omega_min}, {self.omega_max}")
        return self


class DiracCheckConfig(BaseModel):
    """Inputs of the ``dirac-check`` subcommand."""

    model_config = _STRICT

    seed: int = 42
    draws: int = Field(default=1000, ge=1)
    threshold: float = Field(default=1e-12, gt=0)


class RunConfig(BaseModel):
    """A complete run document."""

    model_config = _STRICT

    output_dir: Path | None = None
    constants: ConstantsOverride | None = None
    scatter: dict[str, Any] | None = None
    bound: dict[str, Any] | None = None
    pt_scan: dict[str, Any] | None = Field(default=None, alias="pt-scan")
    dirac_check: dict[str, Any] | None = Field(default=None, alias="dirac-check")


_SECTIONS: dict[str, type[BaseModel]] = {
    "scatter": ScatterConfig,
    "bound": BoundConfig,
    "pt-scan": PTScanConfig,
    "dirac-check": DiracCheckConfig,
}
_PATH_KEYS = {"scatter": ("potential", "data"), "pt-scan": ("output",)}


def load_run_config(path: str | Path) -> RunConfig:
    """Read a run document; relative file paths are taken relative to it.

    Section contents are validated when the section is built, so that flags
    can still fill required fields.
    """
    path = Path(path)
    document = read_document(path)
    base = path.parent
    for section, keys in _PATH_KEYS.items():
        payload = document.get(section)
        if isinstance(payload, dict):
            for key in keys:
                if isinstance(payload.get(key), str):
                    payload[key] = str(base / payload[key])
    if isinstance(document.get("output_dir"), str):
        document["output_dir"] = str(base / document["output_dir"])
    for section, model in _SECTIONS.items():
        payload = document.get(section)
        if isinstance(payload, dict):
            unknown = sorted(set(payload) - set(model.model_fields))
            if unknown:
                raise ConfigError(f"{path}: unknown key(s) in '{section}': {unknown}")
    try:
        return RunConfig.model_validate(document)
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _format_validation(section: str, exc: ValidationError) -> str:
    problems = [
        f"{'.'.join(str(p) for p in error['loc']) or section}: {error['msg']}"
        for error in exc.errors()
    ]
    return f"invalid '{section}' configuration: " + "; ".join(problems)


def build_section[T: BaseModel](
    model: type[T], document: dict[str, Any] | None, overrides: dict[str, Any]
) -> T:
    """Validate a section from its document payload updated with non-None overrides.

    Raises:
        ConfigError: Naming every offending field.
    """
    section = next(name for name, cls in _SECTIONS.items() if cls is model)
    payload = dict(document or {})
    payload.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(_format_validation(section, exc)) from exc


def resolve_output_dir(flag: str | Path | None, config: RunConfig | None) -> Path:
    """Output directory: the flag, else the environment variable, else the document, else '.'."""
    if flag is not None:
        return Path(flag)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env)
    if config is not None and config.output_dir is not None:
        return config.output_dir
    return Path(".")
