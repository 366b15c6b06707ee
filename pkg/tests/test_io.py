import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from dressedlat.dressing import RfComb
from dressedlat.io import csv_text, export_waveform, fmt, import_waveform, read_csv, write_csv
from dressedlat.waveform import CombRamp, synthesize

from conftest import TWO_PI


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips_exactly(x):
    assert float(fmt(x)) == x


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    data = rng.normal(size=(50, 3)) * 10.0 ** rng.integers(-30, 30, size=(50, 3))
    p = write_csv(tmp_path / "a.csv", ["a", "b", "c"], data, ["note"])
    comments, cols, back = read_csv(p)
    assert comments == ["note"] and cols == ["a", "b", "c"]
    assert np.array_equal(back, data)


def test_csv_text_formats_ints_and_bools():
    assert csv_text(["n", "f"], [(3, True)]) == "n,f\n3,1\n"


def _signal():
    comb = RfComb.uniform(TWO_PI * 1e5, TWO_PI * 1e5, 4, TWO_PI * 15e3)
    return synthesize(CombRamp(comb, 2e-3), 2e-4, 4e6)


def test_raw_waveform_layout(tmp_path):
    sig = _signal()
    p = export_waveform(sig, tmp_path / "w.raw", "raw")
    data = p.read_bytes()
    head, _, body = data.partition(b"end_header\n")
    lines = head.decode("ascii").splitlines()
    assert lines[0] == "DRESSEDLAT-RAW-F64"
    assert "sample_count=800" in lines and "sample_rate_hz=4000000.0" in lines
    assert body == sig.samples.astype("<f8").tobytes()


def test_waveform_round_trips(tmp_path):
    sig = _signal()
    for kind in ("raw", "csv"):
        back = import_waveform(export_waveform(sig, tmp_path / f"w.{kind}", kind))
        assert np.array_equal(back.samples, sig.samples)
        assert back.sample_rate == sig.sample_rate and back.description == sig.description
