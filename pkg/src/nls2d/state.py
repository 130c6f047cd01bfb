"""The evolving 2D field."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class State2D:
    """Complex field values on the tensor grid.

    ``values`` has one row per point of the compactified line (domain I
    rows first, then domain II in the ``s`` coordinate) and one column per
    transverse sample.  ``kappa`` is ``+1`` for the elliptic equation and
    ``-1`` for the hyperbolic one.
    """

    values: np.ndarray
    time: float
    kappa: int

    def __post_init__(self):
        if self.kappa not in (1, -1):
            raise ValueError(f"kappa must be +1 or -1, got {self.kappa}")
        self.values = np.ascontiguousarray(self.values, dtype=complex)

    def copy(self) -> "State2D":
        return State2D(self.values.copy(), self.time, self.kappa)

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values.view(float)).all())
