"""Figure rendering for nls2d solver outputs."""

__version__ = "0.1.0"

from .figures import KINDS, FigureSpec, exact_breather, read_provenance, render
from .io import (
    ConvergenceTable,
    ParseError,
    Snapshot,
    TimeSeries,
    load_convergence,
    load_metadata,
    load_snapshot,
    load_timeseries,
)

__all__ = [name for name in dir() if not name.startswith("_")]
