"""Two-domain compactified real line and its 1D second-derivative operator.

The line is covered by an interior Chebyshev domain ``x in x0*[-1, 1]``
and an exterior domain parameterized by ``s = 1/x in [-1, 1]/x0``, so
infinity is the regular (non-grid) point ``s = 0``.  On the exterior the
second x-derivative becomes ``s^4 d_ss + 2 s^3 d_s``.  Solutions are glued
with C1 matching at ``x = +-x0``:

    u_I(+-x0) = u_II(+-1/x0),   u_I_x(+-x0) = -u_II_s(+-1/x0) / x0^2,

imposed by replacing the boundary collocation rows of the discrete
operator (tau method).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .spectral import ChebyshevGrid, cheb_diff_matrix


@dataclass(frozen=True)
class CompactifiedLine:
    """Geometry of the two x-domains.

    ``inner`` holds the degree-``n_inner`` grid on ``x0*[-1, 1]``;
    ``outer`` the degree-``n_outer`` grid in the compactified coordinate
    ``s`` on ``[-1, 1]/x0``.  ``n_outer`` must be odd so the outer grid has
    an even number of points and ``s = 0`` is never a collocation point.
    """

    x0: float
    inner: ChebyshevGrid
    outer: ChebyshevGrid

    @property
    def total_points(self) -> int:
        return self.inner.size + self.outer.size

    @property
    def inner_slice(self) -> slice:
        return slice(0, self.inner.size)

    @property
    def outer_slice(self) -> slice:
        return slice(self.inner.size, self.total_points)

    @property
    def tau_rows(self) -> tuple[int, int, int, int]:
        """Rows sacrificed to the matching conditions: the boundary
        collocation rows of each block (value rows in domain I, derivative
        rows in domain II)."""
        ni = self.inner.n
        return (0, ni, ni + 1, ni + 1 + self.outer.n)

    @property
    def physical_x(self) -> np.ndarray:
        """Physical abscissae of all rows; exterior points are ``1/s``.

        The two blocks overlap exactly at ``+-x0`` (duplicated rows), and
        infinity is never present since ``s = 0`` is not a grid point.
        """
        return np.concatenate([self.inner.points, 1.0 / self.outer.points])


def build_line(x0: float, n_inner: int, n_outer: int) -> CompactifiedLine:
    """Construct the two-domain line with matching abscissa ``x0``.

    ``n_outer`` must be odd; an even value would place a grid point at
    ``s = 0`` where the transformed equation degenerates.
    """
    if x0 <= 0:
        raise ValueError(f"matching abscissa x0 must be positive, got {x0}")
    if n_inner < 2:
        raise ValueError(f"inner degree must be >= 2, got {n_inner}")
    if n_outer < 5 or n_outer % 2 == 0:
        raise ValueError(f"outer degree must be odd and >= 5, got {n_outer}")
    inner = ChebyshevGrid(n_inner, float(x0))
    outer = ChebyshevGrid(n_outer, 1.0 / float(x0))
    return CompactifiedLine(float(x0), inner, outer)


@dataclass(frozen=True)
class LinearOperator1D:
    """Assembled x-part of the Laplacian on the compactified line.

    ``matrix`` acts on the stacked vector ``(u_I, u_II)``.  ``tau_rows``
    lists the 4 rows reserved for the matching conditions; ``tau_applied``
    says whether they have been replaced yet.  ``mode_shift`` is the scalar
    added to the diagonal of the differential rows (``-kappa*k^2`` for
    transverse Fourier mode k).
    """

    matrix: np.ndarray
    tau_rows: tuple[int, int, int, int]
    mode_shift: float = 0.0
    tau_applied: bool = False
    tau_rhs: np.ndarray | None = field(default=None, repr=False)


def assemble_second_derivative(line: CompactifiedLine) -> LinearOperator1D:
    """Raw block operator: ``d_xx`` on domain I, ``s^4 d_ss + 2 s^3 d_s``
    on domain II.  No matching rows are applied; use
    :func:`apply_tau_conditions` before solving."""
    ni, no = line.inner.size, line.outer.size
    d_inner = cheb_diff_matrix(line.inner)
    d_outer = cheb_diff_matrix(line.outer)
    s = line.outer.points
    block_inner = d_inner @ d_inner
    block_outer = (s**4)[:, None] * (d_outer @ d_outer) + (2.0 * s**3)[:, None] * d_outer
    matrix = np.zeros((ni + no, ni + no), dtype=complex)
    matrix[:ni, :ni] = block_inner
    matrix[ni:, ni:] = block_outer
    return LinearOperator1D(matrix=matrix, tau_rows=line.tau_rows)


def matching_condition_matrix(line: CompactifiedLine) -> np.ndarray:
    """The 4 matching-condition row vectors, aligned with ``line.tau_rows``.

    Rows in order: value continuity at ``+x0`` and ``-x0``, then derivative
    matching at ``+x0`` and ``-x0`` (with the ``-1/x0^2`` chain-rule factor
    written as ``u_I_x + u_II_s / x0^2 = 0``).
    """
    ni = line.inner.n
    no = line.outer.n
    p = line.total_points
    d_inner = cheb_diff_matrix(line.inner)
    d_outer = cheb_diff_matrix(line.outer)
    g = np.zeros((4, p))
    # value continuity: u_I(+-x0) - u_II(+-1/x0) = 0
    g[0, 0] = 1.0
    g[0, ni + 1] = -1.0
    g[1, ni] = 1.0
    g[1, ni + 1 + no] = -1.0
    # derivative matching: u_I_x(+-x0) + u_II_s(+-1/x0) / x0^2 = 0
    g[2, : ni + 1] = d_inner[0, :]
    g[2, ni + 1 :] = d_outer[0, :] / line.x0**2
    g[3, : ni + 1] = d_inner[ni, :]
    g[3, ni + 1 :] = d_outer[no, :] / line.x0**2
    return g


def apply_tau_conditions(
    op: LinearOperator1D,
    line: CompactifiedLine,
    rhs_rows: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0),
) -> LinearOperator1D:
    """Replace the boundary collocation rows of ``op`` with the C1 matching
    conditions.

    The designated right-hand-side entries for the replaced rows are
    recorded in ``tau_rhs`` (homogeneous, zero, in every use here: the
    conditions are linear, hold for the evolving solution, and therefore
    hold for the Runge-Kutta stage vectors as well).  Applying the
    conditions twice is idempotent.
    """
    matrix = np.array(op.matrix, copy=True)
    matrix[list(op.tau_rows), :] = matching_condition_matrix(line)
    return replace(op, matrix=matrix, tau_applied=True, tau_rhs=np.asarray(rhs_rows, dtype=complex))
