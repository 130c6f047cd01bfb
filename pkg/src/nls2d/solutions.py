"""Exact reference solution and initial-data families.

The rational breather of the cubic 1D focusing NLS serves as the exact
reference; perturbations of it (localized Gaussian bumps, transverse
amplitude modulations) form the initial-data catalogue for the stability
experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import CompactifiedLine
from .spectral import FourierGrid
from .state import State2D

# exp(z) underflows to zero below this; used to flush far-field Gaussian tails
_EXP_UNDERFLOW = -745.0


def peregrine(x, t):
    """Peregrine breather ``(1 - 4(1+4it)/(1+4x^2+16t^2)) * exp(2it)``.

    Peak modulus 3 at ``(x, t) = (0, 0)``; tends to the unit-modulus
    background ``exp(2it)`` algebraically as ``|x| -> inf``.
    """
    x = np.asarray(x, dtype=float)
    denom = 1.0 + 4.0 * x**2 + 16.0 * t**2
    return (1.0 - 4.0 * (1.0 + 4j * t) / denom) * np.exp(2j * t)


def peregrine_compactified(s, t):
    """Peregrine breather as a function of the exterior coordinate ``s = 1/x``.

    Written so that ``s = 0`` (infinity) evaluates to exactly ``exp(2it)``:
    the rational factor is ``1 - 4(1+4it)s^2 / (4 + (1+16t^2)s^2)``.
    """
    s = np.asarray(s, dtype=float)
    return (1.0 - 4.0 * (1.0 + 4j * t) * s**2 / (4.0 + (1.0 + 16.0 * t**2) * s**2)) * np.exp(2j * t)


@dataclass(frozen=True)
class InitialData:
    """Description of an initial condition.

    kind
        ``"peregrine"`` for the unperturbed breather, ``"gaussian_perturbed"``
        for ``u_Per + c*exp(-(x-x_c)^2 - y^2)``, ``"modulated"`` for
        ``(sigma - exp(-y^2)) * u_Per``.
    t0
        Reference time at which the breather is sampled (and the starting
        time of the run).
    """

    kind: str
    t0: float = 0.0
    c: complex = 0.0
    x_c: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("peregrine", "gaussian_perturbed", "modulated"):
            raise ValueError(f"unknown initial-data kind {self.kind!r}")
        if self.kind == "gaussian_perturbed" and not (np.isfinite(complex(self.c)) and np.isfinite(self.x_c)):
            raise ValueError("gaussian_perturbed needs finite c and x_c")
        if self.kind == "modulated" and not self.sigma > 0:
            raise ValueError(f"modulated needs sigma > 0, got {self.sigma}")


def _gaussian_bump(line: CompactifiedLine, ygrid: FourierGrid, x_c: float) -> np.ndarray:
    """exp(-(x-x_c)^2 - y^2) on the tensor grid, with exterior tails flushed
    to exact zero once the exponent underflows."""
    y2 = ygrid.points**2
    x_in = line.inner.points
    expo_in = -((x_in - x_c) ** 2)[:, None] - y2[None, :]
    x_out = 1.0 / line.outer.points
    expo_out = -((x_out - x_c) ** 2)[:, None] - y2[None, :]
    expo = np.concatenate([expo_in, expo_out], axis=0)
    out = np.zeros_like(expo)
    alive = expo > _EXP_UNDERFLOW
    out[alive] = np.exp(expo[alive])
    return out


def sample_initial(
    data: InitialData,
    line: CompactifiedLine,
    ygrid: FourierGrid,
    kappa: int = 1,
) -> State2D:
    """Sample the initial condition on the tensor grid at time ``data.t0``."""
    per = np.concatenate(
        [
            peregrine(line.inner.points, data.t0),
            peregrine_compactified(line.outer.points, data.t0),
        ]
    )
    if data.kind == "peregrine":
        values = np.repeat(per[:, None], ygrid.m, axis=1)
    elif data.kind == "gaussian_perturbed":
        values = per[:, None] + complex(data.c) * _gaussian_bump(line, ygrid, data.x_c)
    else:  # modulated
        profile = data.sigma - np.exp(-(ygrid.points**2))
        values = per[:, None] * profile[None, :]
    return State2D(values=values, time=data.t0, kappa=kappa)
