"""
src/runner/snapshot_io.py - Snapshot Files
Binary snapshot format: a 64-byte ASCII header (magic, sample count, time,
field tag) followed by little-endian complex64 samples. Identical inputs give
byte-identical files.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

import numpy as np

from src.config.settings import SNAPSHOT_DTYPE, SNAPSHOT_HEADER_SIZE, SNAPSHOT_MAGIC
from src.model.errors import EitBecError
from src.model.fields import ComplexField1D
from src.model.grid import Grid1D

logger = logging.getLogger(__name__)

INDEX_FIELDS = ("step", "time", "field", "file", "control")
DIAGNOSTIC_FIELDS = ("time", "center", "width", "energy", "peak_phase", "kurtosis", "G")


class SnapshotFormatError(EitBecError):
    """A snapshot file does not follow the binary format"""


@dataclass(frozen=True, eq=False)
class SnapshotRecord:
    tag: str
    time: float
    values: np.ndarray

    def to_field(self, grid: Grid1D) -> ComplexField1D:
        return ComplexField1D(grid, self.values)


def _header(n_points: int, time: float, tag: str) -> bytes:
    body = f"{n_points} {time!r} {tag}".encode("ascii")
    room = SNAPSHOT_HEADER_SIZE - len(SNAPSHOT_MAGIC) - 1
    if len(body) > room or " " in tag:
        raise SnapshotFormatError(f"snapshot header does not fit: {body!r}")
    return SNAPSHOT_MAGIC + body.ljust(room, b" ") + b"\n"


def write_snapshot(path: Union[str, Path], field: ComplexField1D, time: float, tag: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    samples = np.ascontiguousarray(field.values, dtype=np.dtype(SNAPSHOT_DTYPE))
    with open(path, "wb") as f:
        f.write(_header(field.grid.n_points, float(time), tag))
        f.write(samples.tobytes())
    return path


def read_snapshot(path: Union[str, Path]) -> SnapshotRecord:
    """Parse one snapshot file"""
    data = Path(path).read_bytes()
    if len(data) < SNAPSHOT_HEADER_SIZE or not data.startswith(SNAPSHOT_MAGIC):
        raise SnapshotFormatError(f"{path}: not a snapshot file")
    header = data[len(SNAPSHOT_MAGIC):SNAPSHOT_HEADER_SIZE].decode("ascii").split()
    try:
        n_points, time, tag = int(header[0]), float(header[1]), header[2]
    except (IndexError, ValueError):
        raise SnapshotFormatError(f"{path}: malformed header {header!r}")
    samples = np.frombuffer(data[SNAPSHOT_HEADER_SIZE:], dtype=np.dtype(SNAPSHOT_DTYPE))
    if samples.shape[0] != n_points:
        raise SnapshotFormatError(f"{path}: expected {n_points} samples, found {samples.shape[0]}")
    return SnapshotRecord(tag, time, samples.astype(np.complex128))


def write_csv(path: Union[str, Path], fieldnames, rows: List[Dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))
