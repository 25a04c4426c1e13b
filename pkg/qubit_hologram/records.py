from collections.abc import Sequence
from pathlib import Path
from typing import ClassVar, TextIO

import pandas as pd
from pydantic import ConfigDict, Field, ValidationError
from sqlmodel import SQLModel

from .errors import DataError

__all__ = [
    "Record",
    "PhaseShiftRecord",
    "AngularRecord",
    "DataPoint",
    "ScanRecord",
    "TrajectoryRecord",
    "PTScanRecord",
    "RadialRecord",
    "PotentialRecord",
    "TrialRecord",
    "write_csv",
    "read_data_points",
]

# significant digits written to every CSV file
FLOAT_FORMAT = "%.12g"


class Record(SQLModel):
    """
    One row of an output table.

    Subclasses declare the columns as fields, in file order, and a ``units``
    line that is written as a '#' comment above the header.
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)  # type: ignore

    units: ClassVar[str] = ""

    @classmethod
    def columns(cls) -> list[str]:
        return list(cls.model_fields)

    @classmethod
    def create_from_dataframe(cls, df: pd.DataFrame) -> list["Record"]:
        """
        Create records from a DataFrame.

        Args:
            df: A DataFrame whose columns are named like the record's fields.

        Returns:
            List of records, one per row.
        """
        df.columns = df.columns.map(str)
        instances = [cls(**row) for row in df.to_dict(orient="records")]  # type: ignore
        return instances

    @classmethod
    def to_dataframe(cls, records: Sequence["Record"]) -> pd.DataFrame:
        """Rows of ``records`` as a DataFrame with the columns in field order."""
        return pd.DataFrame([r.model_dump() for r in records], columns=cls.columns())


class PhaseShiftRecord(Record):
    units: ClassVar[str] = "delta in rad"

    l: int = Field(ge=0)
    j: float = Field(gt=0)
    re_delta: float
    im_delta: float


class AngularRecord(Record):
    units: ClassVar[str] = "theta in deg; f, g in fm; dsigma_dOmega in mb/sr"

    theta_deg: float
    re_f: float
    im_f: float
    re_g: float
    im_g: float
    dsigma_dOmega_mb_per_sr: float = Field(ge=0)


class DataPoint(Record):
    """A measured cross section with its uncertainty."""

    units: ClassVar[str] = "theta in deg; value and uncertainty in mb/sr"

    theta_deg: float = Field(gt=0, lt=180)
    value_mb_per_sr: float
    uncertainty: float = Field(gt=0)


class ScanRecord(Record):
    units: ClassVar[str] = "energy in units of the mass scale; amplitude dimensionless"

    energy: float
    final_amplitude: float = Field(ge=0)


class TrajectoryRecord(Record):
    units: ClassVar[str] = "x in units of the inverse mass scale; sigma_* normalized by norm^2"

    x: float
    re_alpha: float
    im_alpha: float
    re_beta: float
    im_beta: float
    sigma_x: float
    sigma_y: float
    sigma_z: float
    norm: float = Field(ge=0)


class PTScanRecord(Record):
    units: ClassVar[str] = "omega, m and k in natural units"

    omega: float
    k_plus_re: float
    k_plus_im: float
    k_minus_re: float
    k_minus_im: float
    phase: str


class RadialRecord(Record):
    units: ClassVar[str] = "r in fm; u arbitrary normalization; du in u per fm; sigma_* normalized by norm^2"

    r_fm: float = Field(gt=0)
    re_u: float
    im_u: float
    re_du: float
    im_du: float
    sigma_x: float
    sigma_y: float
    sigma_z: float


class PotentialRecord(Record):
    units: ClassVar[str] = "r in fm; potentials in MeV; spin_orbit includes <L.S>"

    r_fm: float = Field(gt=0)
    l: int = Field(ge=0)
    j: float = Field(gt=0)
    re_central: float
    im_central: float
    re_spin_orbit: float
    im_spin_orbit: float
    re_v: float
    im_v: float


class TrialRecord(Record):
    """One sample of a trial evolution; several trial energies share a file."""

    units: ClassVar[str] = "energy in units of the mass scale; sigma_* normalized by norm^2"

    energy: float
    x: float
    sigma_x: float
    sigma_y: float
    sigma_z: float
    norm: float = Field(ge=0)


def write_csv(
    record_type: type[Record],
    records: Sequence[Record],
    destination: Path | TextIO,
    comments: Sequence[str] = (),
) -> None:
    """Write records as CSV preceded by '#' comment lines carrying the units.

    Args:
        record_type: Record class that defines the columns.
        records: Rows to write.
        destination: File path or open text stream.
        comments: Extra comment lines written after the units line.
    """
    lines = [f"# {record_type.units}"] if record_type.units else []
    lines += [f"# {c}" for c in comments]
    df = record_type.to_dataframe(records)
    if isinstance(destination, Path):
        with destination.open("w", newline="") as fh:
            _write(fh, lines, df)
    else:
        _write(destination, lines, df)


def _write(fh: TextIO, lines: list[str], df: pd.DataFrame) -> None:
    for line in lines:
        fh.write(line + "\n")
    df.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def read_data_points(path: str | Path) -> list[DataPoint]:
    """Read a 3-column table (theta_deg, value_mb_per_sr, uncertainty), '#' comments allowed.

    Raises:
        DataError: The file is unreadable, has the wrong shape, or a row fails
            validation.
    """
    path = Path(path)
    try:
        df = pd.read_csv(path, sep=r"\s+", comment="#", header=None)
    except (OSError, pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise DataError(f"cannot read data file {path}: {exc}") from exc
    if df.shape[1] != 3:
        raise DataError(f"{path}: expected 3 columns, found {df.shape[1]}")
    df.columns = pd.Index(DataPoint.columns())
    try:
        points = DataPoint.create_from_dataframe(df)
    except ValidationError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if not points:
        raise DataError(f"{path}: no data rows")
    return points  # type: ignore[return-value]
