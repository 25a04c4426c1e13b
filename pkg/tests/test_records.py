import io
from pathlib import Path

import pandas as pd
import pytest
from pydantic import ValidationError

from qubit_hologram import DataError
from qubit_hologram.records import (
    DataPoint,
    PhaseShiftRecord,
    PTScanRecord,
    ScanRecord,
    read_data_points,
    write_csv,
)


def test_columns_follow_field_order():
    assert PhaseShiftRecord.columns() == ["l", "j", "re_delta", "im_delta"]
    assert PTScanRecord.columns()[-1] == "phase"


def test_records_are_validated():
    with pytest.raises(ValidationError):
        PhaseShiftRecord(l=-1, j=0.5, re_delta=0.0, im_delta=0.0)
    with pytest.raises(ValidationError):
        ScanRecord(energy=0.0, final_amplitude=1.0, note="extra")
    record = ScanRecord(energy=0.0, final_amplitude=1.0)
    with pytest.raises(ValidationError):
        record.final_amplitude = -1.0


def test_create_from_dataframe():
    df = pd.DataFrame({"energy": [-0.1, 0.0, 0.1], "final_amplitude": [1.2, 1.0, 1.2]})
    records = ScanRecord.create_from_dataframe(df)
    assert len(records) == 3
    assert all(isinstance(r, ScanRecord) for r in records)
    assert records[1].final_amplitude == 1.0
    pd.testing.assert_frame_equal(ScanRecord.to_dataframe(records), df)


def test_write_csv_to_stream():
    stream = io.StringIO()
    rows = [ScanRecord(energy=0.0, final_amplitude=1.0), ScanRecord(energy=0.5, final_amplitude=2.0 / 3.0)]
    write_csv(ScanRecord, rows, stream, comments=["window = (-5, 5)"])
    lines = stream.getvalue().splitlines()
    assert lines[0] == f"# {ScanRecord.units}"
    assert lines[1] == "# window = (-5, 5)"
    assert lines[2] == "energy,final_amplitude"
    assert lines[4] == "0.5,0.666666666667"
    assert len(lines) == 5


def test_write_csv_to_file(tmp_path: Path):
    path = tmp_path / "phase_shifts.csv"
    write_csv(PhaseShiftRecord, [PhaseShiftRecord(l=0, j=0.5, re_delta=0.1, im_delta=0.0)], path)
    df = pd.read_csv(path, comment="#")
    assert list(df.columns) == PhaseShiftRecord.columns()
    assert df.loc[0, "re_delta"] == 0.1


def test_read_data_points(tmp_path: Path):
    path = tmp_path / "data.dat"
    path.write_text("# theta  dsigma  error\n10.0 1200.0 50.0\n 30.0 80.5 4.0\n")
    points = read_data_points(path)
    assert [p.theta_deg for p in points] == [10.0, 30.0]
    assert isinstance(points[0], DataPoint)
    assert points[1].uncertainty == 4.0


@pytest.mark.parametrize(
    "content",
    [
        "",
        "# only a comment\n",
        "10.0 1200.0\n",
        "10.0 1200.0 0.0\n",
        "190.0 1.0 1.0\n",
    ],
)
def test_bad_data_files(tmp_path: Path, content):
    path = tmp_path / "data.dat"
    path.write_text(content)
    with pytest.raises(DataError):
        read_data_points(path)


def test_missing_data_file(tmp_path: Path):
    with pytest.raises(DataError):
        read_data_points(tmp_path / "absent.dat")
