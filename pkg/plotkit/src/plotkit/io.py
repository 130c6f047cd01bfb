"""Parsers for the solver's output files.

All files start with a `# key=value ...` provenance line naming the
producing config hash; snapshots carry the time and the kappa sign there
too.  Parse errors always report the file and the line number.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class ParseError(ValueError):
    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


def _provenance(path: Path, line: str, line_no: int = 1) -> dict[str, str]:
    if not line.startswith("#"):
        raise ParseError(path, line_no, "missing '#' provenance header line")
    fields: dict[str, str] = {}
    for token in line[1:].split():
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key] = value
    if "config" not in fields:
        raise ParseError(path, line_no, "provenance header does not name a config hash")
    return fields


def _read_lines(path) -> list[str]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise ParseError(path, 1, "file is empty")
    return lines


@dataclass(frozen=True)
class TimeSeries:
    config: str
    t: np.ndarray
    linf: np.ndarray
    energy: np.ndarray
    energy_drift: np.ndarray
    tau_residual: np.ndarray
    path: str


def load_timeseries(path) -> TimeSeries:
    lines = _read_lines(path)
    prov = _provenance(path, lines[0])
    if len(lines) < 2 or lines[1].split(",")[0] != "t":
        raise ParseError(path, 2, "expected column header 't,linf,energy,energy_drift,tau_residual'")
    rows = _parse_rows(path, lines[2:], 5, offset=3)
    return TimeSeries(prov["config"], rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3], rows[:, 4], str(path))


@dataclass(frozen=True)
class Snapshot:
    config: str
    time: float
    kappa: int
    x: np.ndarray  # physical abscissae, one per grid row (duplicates at +-x0)
    y: np.ndarray  # transverse samples
    u: np.ndarray  # complex field, shape (len(x), len(y))
    path: str

    @property
    def inner_size(self) -> int:
        """Rows belonging to the interior domain (|x| <= x0).

        The interior block is strictly decreasing in x; the exterior block
        starts by jumping back up to +x0, so the first ascent marks the
        boundary.
        """
        ascent = np.nonzero(np.diff(self.x) > 0)[0]
        return int(ascent[0]) + 1 if ascent.size else len(self.x)


def load_snapshot(path) -> Snapshot:
    lines = _read_lines(path)
    prov = _provenance(path, lines[0])
    if "t" not in prov:
        raise ParseError(path, 1, "snapshot header does not carry the time t")
    if len(lines) < 2 or not lines[1].startswith("x_physical"):
        raise ParseError(path, 2, "expected column header 'x_physical,y,re_u,im_u'")
    rows = _parse_rows(path, lines[2:], 4, offset=3)
    x_col, y_col = rows[:, 0], rows[:, 1]
    m = 1
    while m < len(y_col) and y_col[m] > y_col[m - 1]:
        m += 1
    if m < 2 or len(rows) % m != 0:
        raise ParseError(path, 3, f"rows do not form an x-major grid (transverse count {m})")
    p = len(rows) // m
    x = x_col[::m]
    if not np.array_equal(np.repeat(x, m), x_col):
        raise ParseError(path, 3, "x_physical column is not constant within grid rows")
    u = (rows[:, 2] + 1j * rows[:, 3]).reshape(p, m)
    return Snapshot(
        config=prov["config"],
        time=float(prov["t"]),
        kappa=int(prov.get("kappa", 1)),
        x=x,
        y=y_col[:m],
        u=u,
        path=str(path),
    )


@dataclass(frozen=True)
class ConvergenceTable:
    config: str
    slope: float
    n_t: np.ndarray
    error: np.ndarray
    path: str


def load_convergence(path) -> ConvergenceTable:
    lines = _read_lines(path)
    prov = _provenance(path, lines[0])
    if len(lines) < 2 or not lines[1].startswith("n_t"):
        raise ParseError(path, 2, "expected column header 'n_t,linf_error'")
    rows = _parse_rows(path, lines[2:], 2, offset=3)
    slope = float(prov.get("slope", "nan"))
    return ConvergenceTable(prov["config"], slope, rows[:, 0].astype(int), rows[:, 1], str(path))


def load_metadata(path) -> dict[str, str]:
    lines = _read_lines(path)
    meta: dict[str, str] = {}
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError(path, i, f"expected 'key: value', got {line!r}")
        key, value = line.split(":", 1)
        meta[key.strip()] = value.strip()
    if "config_hash" not in meta:
        raise ParseError(path, 1, "metadata lacks config_hash")
    return meta


def _parse_rows(path, lines: list[str], n_cols: int, offset: int) -> np.ndarray:
    rows = []
    for i, line in enumerate(lines, start=offset):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != n_cols:
            raise ParseError(path, i, f"expected {n_cols} comma-separated values, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise ParseError(path, i, str(exc)) from None
    if not rows:
        raise ParseError(path, offset, "no data rows")
    return np.asarray(rows)
