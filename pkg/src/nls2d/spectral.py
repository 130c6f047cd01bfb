"""Chebyshev and Fourier spectral primitives.

Collocation grids, differentiation matrices, coefficient transforms and
quadrature weights used by the higher-level solver modules.  Everything in
this module is a pure function of its inputs; grids and matrices are meant
to be built once and shared.

Conventions
-----------
Chebyshev grids use the extreme ("Gauss-Lobatto") points in descending
order, ``x_j = scale * cos(j*pi/n)``, so ``points[0] = +scale`` and
``points[n] = -scale``.  Fourier grids are uniform on ``[-half_period,
half_period)`` with the right endpoint excluded, and the mode indices run
over ``{-m/2+1, ..., m/2}`` with a single Nyquist entry at ``+m/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dct


@dataclass(frozen=True)
class ChebyshevGrid:
    """Chebyshev extreme-point collocation grid on ``scale*[-1, 1]``.

    Parameters
    ----------
    n : int
        Polynomial degree; the grid has ``n + 1`` points.
    scale : float
        Half-width of the physical interval.
    """

    n: int
    scale: float
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"Chebyshev degree must be >= 1, got n={self.n}")
        if self.scale <= 0:
            raise ValueError(f"grid scale must be positive, got {self.scale}")
        # sin form of cos(j*pi/n): exactly antisymmetric in floating point,
        # with the endpoints landing on +-scale without rounding.
        j = np.arange(self.n + 1)
        pts = self.scale * np.sin(np.pi * (self.n - 2 * j) / (2 * self.n))
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class FourierGrid:
    """Uniform periodic grid with ``m`` samples on ``scale*[-pi, pi)``.

    ``scale`` plays the role of the period stretch factor: sample points
    are ``y_j = -scale*pi + j * 2*scale*pi/m`` and the wavenumbers are the
    integers ``{-m/2+1, ..., m/2}`` divided by ``scale``, stored in FFT
    layout (the single Nyquist entry is ``+m/2``).
    """

    m: int
    scale: float
    points: np.ndarray = field(init=False, repr=False)
    wavenumbers: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.m < 2 or self.m % 2 != 0:
            raise ValueError(f"Fourier grid needs an even number of modes, got m={self.m}")
        if self.scale <= 0:
            raise ValueError(f"period scale must be positive, got {self.scale}")
        half = self.scale * np.pi
        pts = -half + (2.0 * half / self.m) * np.arange(self.m)
        k = np.fft.fftfreq(self.m, d=1.0 / self.m)  # 0, 1, ..., m/2-1, -m/2, ..., -1
        k[self.m // 2] = self.m // 2  # keep a single Nyquist entry, at +m/2
        k /= self.scale
        pts.flags.writeable = False
        k.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "wavenumbers", k)

    @property
    def half_period(self) -> float:
        return self.scale * np.pi

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_period / self.m


def cheb_diff_matrix(grid: ChebyshevGrid) -> np.ndarray:
    """First-derivative collocation matrix on ``grid``.

    Returns the dense ``(n+1, n+1)`` matrix ``D`` with ``(D @ f)[j]``
    approximating ``f'(points[j])``; exact for polynomials of degree up to
    ``n``.  The diagonal is computed as the negative off-diagonal row sum,
    which cancels the rounding of the large near-boundary entries (the
    entries grow like ``n**2`` and their squares enter second-derivative
    operators of conditioning ``n**4``).
    """
    n = grid.n
    if n < 1:
        raise ValueError("cannot differentiate on a single-point grid")
    x = grid.points / grid.scale
    c = np.ones(n + 1)
    c[0] = c[n] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    D = np.outer(c, 1.0 / c) / dx
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D / grid.scale


def cheb_coefficients(values: np.ndarray, *, axis: int = 0) -> np.ndarray:
    """Chebyshev coefficients of data sampled on a Chebyshev grid.

    ``values[j]`` are samples at ``x_j = scale*cos(j*pi/n)``; the result
    ``c`` satisfies ``f(x) = sum_k c[k] T_k(x/scale)``.  Uses a fast cosine
    transform (DCT-I); ``cheb_coefficients_direct`` is the O(n^2) reference
    implementation the transform is tested against.
    """
    values = np.asarray(values)
    n = values.shape[axis] - 1
    if n < 1:
        return np.array(values, copy=True)
    coeff = dct(values, type=1, axis=axis) / n
    sl0 = [slice(None)] * values.ndim
    sl0[axis] = 0
    sln = [slice(None)] * values.ndim
    sln[axis] = n
    coeff[tuple(sl0)] *= 0.5
    coeff[tuple(sln)] *= 0.5
    return coeff


def cheb_values(coefficients: np.ndarray, *, axis: int = 0) -> np.ndarray:
    """Evaluate a Chebyshev series on its own collocation grid (inverse of
    :func:`cheb_coefficients`)."""
    coefficients = np.asarray(coefficients)
    n = coefficients.shape[axis] - 1
    if n < 1:
        return np.array(coefficients, copy=True)
    c = np.array(coefficients, copy=True)
    sl0 = [slice(None)] * c.ndim
    sl0[axis] = 0
    sln = [slice(None)] * c.ndim
    sln[axis] = n
    c[tuple(sl0)] *= 2.0
    c[tuple(sln)] *= 2.0
    return dct(c, type=1, axis=axis) / 2.0


def cheb_coefficients_direct(values: np.ndarray) -> np.ndarray:
    """O(n^2) cosine-sum transform, kept as an oracle for the DCT path."""
    values = np.asarray(values)
    n = values.shape[0] - 1
    j = np.arange(n + 1)
    T = np.cos(np.pi * np.outer(j, j) / n)  # T[k, j] = cos(pi k j / n)
    w = np.ones(n + 1)
    w[0] = w[n] = 0.5
    coeff = (2.0 / n) * (T * w[None, :]) @ values
    coeff[0] *= 0.5
    coeff[n] *= 0.5
    return coeff


def cheb_eval_zero_weights(n: int) -> np.ndarray:
    """Row vector turning Chebyshev coefficients into the series value at 0.

    ``T_k(0)`` is ``0`` for odd ``k`` and ``(-1)^(k/2)`` for even ``k``;
    used to extrapolate compactified data to the point at infinity.
    """
    w = np.zeros(n + 1)
    k = np.arange(0, n + 1, 2)
    w[k] = (-1.0) ** (k // 2)
    return w


def clenshaw_curtis_weights(grid: ChebyshevGrid) -> np.ndarray:
    """Clenshaw-Curtis quadrature weights for ``grid``.

    ``sum(w * f(points))`` integrates ``f`` over ``[-scale, scale]``
    exactly for polynomials of degree up to ``n``.  All weights are
    strictly positive.
    """
    n = grid.n
    if n < 2:
        raise ValueError(f"Clenshaw-Curtis weights need degree >= 2, got n={n}")
    theta = np.pi * np.arange(n + 1) / n
    w = np.zeros(n + 1)
    v = np.ones(n - 1)
    inner = theta[1:-1]
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for k in range(1, n // 2):
            v -= 2.0 * np.cos(2.0 * k * inner) / (4.0 * k**2 - 1)
        v -= np.cos(n * inner) / (n**2 - 1)
    else:
        w[0] = w[n] = 1.0 / n**2
        for k in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * inner) / (4.0 * k**2 - 1)
    w[1:-1] = 2.0 * v / n
    return w * grid.scale


def fourier_derivative(values: np.ndarray, order: int, grid: FourierGrid, *, axis: int = -1) -> np.ndarray:
    """Spectral derivative of periodic samples along ``axis``.

    Transforms, multiplies by ``(i*k)**order`` and transforms back.  For
    ``order=1`` the Nyquist multiplier is dropped (its odd derivative is
    not representable on the grid); for ``order=2`` the Nyquist mode is
    kept with the real symmetric multiplier ``-k**2``.
    """
    values = np.asarray(values)
    if values.shape[axis] != grid.m:
        raise ValueError(f"expected {grid.m} samples along axis {axis}, got {values.shape[axis]}")
    if order not in (1, 2):
        raise ValueError(f"derivative order must be 1 or 2, got {order}")
    k = grid.wavenumbers
    if order == 1:
        mult = 1j * k.astype(complex)
        mult[grid.m // 2] = 0.0
    else:
        mult = -(k.astype(complex) ** 2)
    shape = [1] * values.ndim
    shape[axis] = grid.m
    out = np.fft.ifft(np.fft.fft(values, axis=axis) * mult.reshape(shape), axis=axis)
    if np.isrealobj(values):
        # both multipliers map real samples to real samples (the odd-order
        # Nyquist term, the only obstruction, is dropped above)
        return out.real
    return out
