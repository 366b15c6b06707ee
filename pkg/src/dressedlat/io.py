"""CSV and waveform file formats.

Numbers are written with ``repr(float)``, the shortest decimal string that
parses back to the identical double.
"""

from __future__ import annotations

import hashlib
import io as _io
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .waveform import Spectrogram, WaveformSignal

RAW_MAGIC = "DRESSEDLAT-RAW-F64"
RAW_END = "end_header"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def csv_text(columns: Sequence[str], rows: Iterable[Sequence], comments: Sequence[str] = ()) -> str:
    buf = _io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, columns, rows, comments=()) -> Path:
    path = Path(path)
    path.write_text(csv_text(columns, rows, comments), encoding="utf-8", newline="\n")
    return path


def read_csv(path) -> tuple[list[str], list[str], np.ndarray]:
    """(comments, columns, float data) of a file written by :func:`write_csv`."""
    comments, columns, rows = [], None, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            comments.append(line[2:])
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return comments, columns or [], np.array(rows, dtype=float).reshape(-1, len(columns or []))


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- waveforms --------------------------------------------------------------


def _header(signal: WaveformSignal) -> list[str]:
    return [
        "dressedlat waveform",
        f"sample_rate_hz={fmt(signal.sample_rate)}",
        f"sample_count={len(signal)}",
        f"start_time_s={fmt(signal.start_time)}",
        f"ramp={signal.description}",
    ]


def export_waveform(signal: WaveformSignal, destination, format: str = "csv") -> Path:
    """Write a waveform as CSV (``time_s,amplitude``) or raw little-endian float64.

    The raw format is an ASCII header (one ``key=value`` per line, first line
    ``DRESSEDLAT-RAW-F64``, last line ``end_header``) followed immediately by
    ``sample_count`` little-endian IEEE-754 doubles.
    """
    path = Path(destination)
    if format == "csv":
        rows = zip(signal.times, signal.samples)
        write_csv(path, ["time_s", "amplitude"], rows, _header(signal))
    elif format == "raw":
        head = "\n".join([RAW_MAGIC] + _header(signal)[1:] + [RAW_END]) + "\n"
        with open(path, "wb") as fh:
            fh.write(head.encode("ascii", errors="replace"))
            fh.write(np.asarray(signal.samples, dtype="<f8").tobytes())
    else:
        raise ValueError(f"unknown waveform format {format!r}")
    return path


def _parse_header(lines) -> dict:
    meta = {}
    for line in lines:
        if "=" in line:
            k, v = line.split("=", 1)
            meta[k.strip()] = v
    return meta


def import_waveform(path) -> WaveformSignal:
    path = Path(path)
    data = path.read_bytes()
    if data.startswith(RAW_MAGIC.encode()):
        end = data.index(("\n" + RAW_END + "\n").encode()) + len(RAW_END) + 2
        meta = _parse_header(data[:end].decode("ascii").splitlines())
        n = int(meta["sample_count"])
        samples = np.frombuffer(data[end:], dtype="<f8", count=n).astype(float)
    else:
        comments, columns, table = read_csv(path)
        if columns != ["time_s", "amplitude"]:
            raise ValueError(f"{path} is not a waveform CSV")
        meta = _parse_header(comments)
        samples = table[:, 1].copy()
        if samples.size != int(meta["sample_count"]):
            raise ValueError("sample_count header does not match the data")
    return WaveformSignal(
        float(meta["sample_rate_hz"]), samples, float(meta.get("start_time_s", 0.0)), meta.get("ramp", "")
    )


def write_spectrogram_csv(spec: Spectrogram, destination) -> Path:
    """Long-format spectrogram: one row per (window, frequency bin)."""
    rows = (
        (t, f, m)
        for t, row in zip(spec.window_starts, spec.magnitudes)
        for f, m in zip(spec.frequency_bins, row)
    )
    return write_csv(
        destination,
        ["window_start_s", "freq_rad_per_s", "magnitude"],
        rows,
        [f"window_length={spec.window_length}", f"sample_rate_hz={fmt(spec.sample_rate)}"],
    )
