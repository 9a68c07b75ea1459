"""Diagnostics CSV, binary snapshots and run manifests."""
from __future__ import annotations

import csv
import json
import platform
import struct
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidArgument
from ..spectral import make_grid
from ..state import FirstOrderState

DIAGNOSTIC_COLUMNS = (
    "t",
    "mass",
    "E_total",
    "E_kinetic",
    "E_wave",
    "E_coupling",
    "E_modified",
    "flux",
    "flux_18",
    "flux_19",
    "flux_20",
    "Hs_u",
    "Hsm1_n",
    "Hsm1_v",
)

SNAP_MAGIC = b"ZAKSNAP1"
SNAP_VERSION = 1
_HEADER = struct.Struct("<IQdddd")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if value is None:
        return ""
    return str(value)


class CsvWriter:
    """Row-oriented CSV writer; rows may come from several threads."""

    def __init__(self, path: str | Path, columns):
        self.path = Path(path)
        self.columns = tuple(columns)
        self._lock = threading.Lock()
        self._fh = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._fh, lineterminator="\n")
        self._writer.writerow(self.columns)

    def write(self, row: dict) -> None:
        missing = [c for c in self.columns if c not in row]
        if missing:
            raise InvalidArgument(f"row lacks columns {missing}")
        with self._lock:
            self._writer.writerow([_fmt(row[c]) for c in self.columns])

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_table(path: str | Path, rows, columns=None) -> Path:
    rows = list(rows)
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    with CsvWriter(path, columns) as w:
        for row in rows:
            w.write(row)
    return Path(path)


def read_table(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


@dataclass(frozen=True)
class SnapshotMeta:
    version: int
    M: int
    L: float
    t: float
    s: float
    N: float


def write_snapshot(path: str | Path, f: FirstOrderState, t: float, s: float, N: float) -> Path:
    """Little-endian header followed by u, n_plus, n_minus as complex128."""
    g = f.grid
    with open(path, "wb") as fh:
        fh.write(SNAP_MAGIC)
        fh.write(_HEADER.pack(SNAP_VERSION, g.M, g.L, float(t), float(s), float(N)))
        for arr in (f.u, f.n_plus, f.n_minus):
            fh.write(np.ascontiguousarray(arr, dtype="<c16").tobytes())
    return Path(path)


def read_snapshot(path: str | Path) -> tuple[FirstOrderState, SnapshotMeta]:
    data = Path(path).read_bytes()
    if data[:8] != SNAP_MAGIC:
        raise InvalidArgument(f"{path}: not a snapshot file (bad magic)")
    version, M, L, t, s, N = _HEADER.unpack_from(data, 8)
    if version != SNAP_VERSION:
        raise InvalidArgument(f"{path}: unsupported snapshot version {version}")
    offset = 8 + _HEADER.size
    expected = offset + 3 * 16 * M
    if len(data) != expected:
        raise InvalidArgument(f"{path}: expected {expected} bytes, found {len(data)}")
    arrays = np.frombuffer(data, dtype="<c16", count=3 * M, offset=offset).reshape(3, M)
    grid = make_grid(L, int(M))
    f = FirstOrderState(grid, arrays[0].copy(), arrays[1].copy(), arrays[2].copy())
    return f, SnapshotMeta(version, int(M), L, t, s, N)


def versions() -> dict:
    import scipy

    from .. import __version__

    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "zakharov_lab": __version__,
    }


def write_manifest(path: str | Path, payload: dict) -> Path:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n", encoding="utf-8")
    return Path(path)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
