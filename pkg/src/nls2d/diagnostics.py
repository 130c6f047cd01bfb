"""Conserved-quantity and accuracy monitors.

The workhorse is the energy-like functional

    E[u] = integral over R x T of
           |u_x|^2 + kappa |u_y|^2 - |u|^2 (|u|^2 - lambda^2),

finite and conserved for fields approaching a constant background modulus
``lambda`` along x.  Its relative drift tracks the integration error and
doubles as the blow-up stop criterion.  For transversely modulated data
the background depends on ``y`` and ``E`` diverges as written; the monitor
then switches to a far-field-subtracted density (see
:func:`energy_farfield_subtracted`).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .domain import CompactifiedLine, matching_condition_matrix
from .spectral import (
    FourierGrid,
    cheb_coefficients,
    cheb_diff_matrix,
    cheb_eval_zero_weights,
    clenshaw_curtis_weights,
    fourier_derivative,
)
from .state import State2D


class QuadratureDivergenceWarning(UserWarning):
    """The exterior-domain energy density grows toward infinity; the
    integrand is not decaying and the reported energy is unreliable."""


@dataclass
class RunDiagnostics:
    """Time series recorded along a run.

    All arrays share a common length with strictly increasing ``times``;
    ``energy_drift`` is relative to the first record, normalized by
    ``max(|E0|, 1)``.  ``stop_reason`` is ``None`` for a run that reached
    its final time.
    """

    times: np.ndarray
    linf: np.ndarray
    energy: np.ndarray
    energy_drift: np.ndarray
    tau_residual: np.ndarray
    stop_reason: str | None = None
    stop_time: float | None = None

    @property
    def last_valid_time(self) -> float | None:
        return float(self.times[-1]) if self.times.size else None


@dataclass(frozen=True)
class MonitorSample:
    linf: float
    energy: float
    tau_residual: float
    resolution_tail: float  # interior + transverse coefficient tails over linf


class Monitors:
    """Precomputed machinery to sample diagnostics from a state snapshot.

    Pure read-only computations; safe to reuse across states on the same
    grids.  ``farfield_subtracted`` selects the modulated-background energy
    variant.
    """

    def __init__(
        self,
        line: CompactifiedLine,
        ygrid: FourierGrid,
        kappa: int,
        background: float = 1.0,
        farfield_subtracted: bool = False,
    ):
        self.line = line
        self.ygrid = ygrid
        self.kappa = int(kappa)
        self.background = float(background)
        self.farfield_subtracted = bool(farfield_subtracted)
        self._conditions = matching_condition_matrix(line)
        self._fourier_tail_index = np.argsort(np.abs(ygrid.wavenumbers), kind="stable")

    def sample(self, state: State2D) -> MonitorSample:
        if self.farfield_subtracted:
            e = energy_farfield_subtracted(state, self.line, self.ygrid)
        else:
            e = energy(state, self.line, self.ygrid, self.background)
        linf = linf_norm(state)
        ni = self.line.inner.size
        c_in = np.abs(cheb_coefficients(state.values[:ni], axis=0)).mean(axis=1)
        f_hat = np.abs(np.fft.fft(state.values, axis=1) / self.ygrid.m).mean(axis=0)
        n_tail = max(1, c_in.size // 10)
        m_tail = max(1, self.ygrid.m // 10)
        tail = max(
            float(c_in[-n_tail:].max()),
            float(f_hat[self._fourier_tail_index][-m_tail:].max()),
        )
        return MonitorSample(
            linf=linf,
            energy=e,
            tau_residual=float(np.abs(self._conditions @ state.values).max()),
            resolution_tail=tail / max(linf, 1e-300),
        )

    @property
    def energy_definition(self) -> str:
        return "farfield_subtracted" if self.farfield_subtracted else "standard"


def linf_norm(state: State2D) -> float:
    """Maximum of ``|u|`` over the grid."""
    return float(np.abs(state.values).max())


def tau_residual(state: State2D, line: CompactifiedLine) -> float:
    """Largest violation of the four C1 matching conditions over all
    transverse columns."""
    return float(np.abs(matching_condition_matrix(line) @ state.values).max())


def _gradient_pieces(state: State2D, line: CompactifiedLine, ygrid: FourierGrid):
    ni = line.inner.size
    u_in = state.values[:ni]
    u_out = state.values[ni:]
    ux = cheb_diff_matrix(line.inner) @ u_in
    us = cheb_diff_matrix(line.outer) @ u_out
    uy = fourier_derivative(state.values, 1, ygrid, axis=1)
    return u_in, u_out, ux, us, uy[:ni], uy[ni:]


def energy(state: State2D, line: CompactifiedLine, ygrid: FourierGrid, background: float = 1.0) -> float:
    """Evaluate the conserved functional for a constant background modulus.

    Clenshaw-Curtis quadrature in x on the interior domain; on the
    exterior the measure ``dx = -ds/s^2`` turns the density into
    ``s^2 |u_s|^2 + (kappa |u_y|^2 - |u|^2(|u|^2 - lambda^2)) / s^2``,
    integrated with Clenshaw-Curtis in ``s``.  The transverse direction
    uses the trapezoidal rule, spectrally exact for periodic data.

    Warns with :class:`QuadratureDivergenceWarning` when the exterior
    density grows toward the smallest ``|s|`` points, which happens when
    the far-field modulus of the data is not ``lambda``.
    """
    lam2 = background * background
    kappa = state.kappa
    u_in, u_out, ux, us, uy_in, uy_out = _gradient_pieces(state, line, ygrid)
    a2_in = np.abs(u_in) ** 2
    a2_out = np.abs(u_out) ** 2
    dens_in = np.abs(ux) ** 2 + kappa * np.abs(uy_in) ** 2 - a2_in * (a2_in - lam2)
    s = line.outer.points
    s2 = (s * s)[:, None]
    dens_out = s2 * np.abs(us) ** 2 + (kappa * np.abs(uy_out) ** 2 - a2_out * (a2_out - lam2)) / s2
    _warn_if_diverging(dens_out, line)
    return _quadrature(dens_in, dens_out, line, ygrid)


def energy_farfield_subtracted(state: State2D, line: CompactifiedLine, ygrid: FourierGrid) -> float:
    """Energy drift monitor for data whose far-field modulus depends on y.

    Subtracts from the density its x -> infinity limit, computed from the
    per-column extrapolation ``u_inf(y)`` of the exterior Chebyshev
    interpolant to ``s = 0``:

        |u_x|^2 + kappa (|u_y|^2 - |du_inf/dy|^2) - (|u|^4 - |u_inf|^4).

    Both the full and the far-field densities are conserved by their
    respective flows, so the subtracted integral is again a conserved,
    finite quantity (the mass-type ``lambda^2 |u|^2`` term, whose weight
    would evolve in time, drops out entirely).
    """
    kappa = state.kappa
    u_in, u_out, ux, us, uy_in, uy_out = _gradient_pieces(state, line, ygrid)
    u_inf = cheb_eval_zero_weights(line.outer.n) @ cheb_coefficients(u_out, axis=0)
    uy_inf = fourier_derivative(u_inf, 1, ygrid)
    far = kappa * np.abs(uy_inf) ** 2 - np.abs(u_inf) ** 4
    a4_in = np.abs(u_in) ** 4
    a4_out = np.abs(u_out) ** 4
    dens_in = np.abs(ux) ** 2 + kappa * np.abs(uy_in) ** 2 - a4_in - far[None, :]
    s = line.outer.points
    s2 = (s * s)[:, None]
    dens_out = s2 * np.abs(us) ** 2 + (
        kappa * (np.abs(uy_out) ** 2 - np.abs(uy_inf[None, :]) ** 2) - (a4_out - np.abs(u_inf[None, :]) ** 4)
    ) / s2
    return _quadrature(dens_in, dens_out, line, ygrid)


def _quadrature(dens_in: np.ndarray, dens_out: np.ndarray, line: CompactifiedLine, ygrid: FourierGrid) -> float:
    w_in = clenshaw_curtis_weights(line.inner)
    w_out = clenshaw_curtis_weights(line.outer)
    dy = ygrid.spacing
    return float(dy * (w_in @ dens_in.real).sum() + dy * (w_out @ dens_out.real).sum())


def _warn_if_diverging(dens_out: np.ndarray, line: CompactifiedLine) -> None:
    # the two rows nearest s = 0 sit in the middle of the descending s grid
    mid = line.outer.size // 2
    edge = np.abs(dens_out[mid - 1 : mid + 1]).max()
    bulk = np.median(np.abs(dens_out))
    if edge > 1e3 * max(bulk, 1e-300):
        warnings.warn(
            "exterior energy density grows toward s=0; far-field modulus does "
            "not match the background and the quadrature is diverging",
            QuadratureDivergenceWarning,
            stacklevel=3,
        )


@dataclass(frozen=True)
class ResolutionReport:
    """Maximum modulus of the trailing 10% of spectral coefficients,
    averaged over the complementary direction."""

    cheb_tail_inner: float
    cheb_tail_outer: float
    fourier_tail: float
    linf: float

    @property
    def resolved(self) -> bool:
        tol = 1e-10 * self.linf
        return max(self.cheb_tail_inner, self.cheb_tail_outer, self.fourier_tail) < tol


def resolution_report(state: State2D, line: CompactifiedLine, ygrid: FourierGrid) -> ResolutionReport:
    """Spectral-coefficient tail magnitudes per domain and direction."""
    ni = line.inner.size
    c_in = np.abs(cheb_coefficients(state.values[:ni], axis=0)).mean(axis=1)
    c_out = np.abs(cheb_coefficients(state.values[ni:], axis=0)).mean(axis=1)
    f_hat = np.abs(np.fft.fft(state.values, axis=1) / ygrid.m).mean(axis=0)
    order = np.argsort(np.abs(ygrid.wavenumbers), kind="stable")
    f_sorted = f_hat[order]

    def tail(arr: np.ndarray) -> float:
        n_tail = max(1, arr.size // 10)
        return float(arr[-n_tail:].max())

    return ResolutionReport(
        cheb_tail_inner=tail(c_in),
        cheb_tail_outer=tail(c_out),
        fourier_tail=tail(f_sorted),
        linf=linf_norm(state),
    )


def transverse_peak(state: State2D, line: CompactifiedLine, ygrid: FourierGrid) -> tuple[float, float]:
    """Location and value of the maximum of ``|u|`` along the x = 0 slice.

    The grid maximum over y is refined by a parabola through the three
    neighbouring samples (periodic in y); the paper-style quoted maxima
    are off-grid.
    """
    row = int(np.argmin(np.abs(line.inner.points)))
    profile = np.abs(state.values[row])
    m = ygrid.m
    j = int(np.argmax(profile))
    f_m, f_0, f_p = profile[(j - 1) % m], profile[j], profile[(j + 1) % m]
    denom = f_m - 2.0 * f_0 + f_p
    offset = 0.0 if denom == 0 else 0.5 * (f_m - f_p) / denom
    y_peak = ygrid.points[j] + offset * ygrid.spacing
    value = f_0 - 0.25 * (f_m - f_p) * offset
    return float(y_peak), float(value)


@dataclass(frozen=True)
class ConvergenceResult:
    n_steps: np.ndarray
    errors: np.ndarray
    slope: float
    fitted: np.ndarray  # mask of the points entering the slope fit


def convergence_study(
    nt_list,
    *,
    n_inner: int = 80,
    n_outer: int = 75,
    m: int = 4,
    y_scale: float = 3.0,
    x0: float = 1.0,
    t_end: float = 1.0,
    kappa: int = 1,
    error_floor: float = 1e-6,
) -> ConvergenceResult:
    """Error against the exact breather at ``t_end`` for a list of step counts.

    Runs the y-independent breather (its evolution is one-dimensional) on a
    fixed spatial resolution and fits the log-log slope of the maximum
    error over the step counts whose error exceeds ``error_floor``; in the
    pre-plateau regime the slope is the order of the time integrator.
    """
    from .domain import build_line
    from .propagator import evolve, plan_for_step, yoshida4
    from .solutions import InitialData, peregrine, peregrine_compactified, sample_initial

    line = build_line(x0, n_inner, n_outer)
    ygrid = FourierGrid(m, y_scale)
    data = InitialData(kind="peregrine", t0=0.0)
    scheme = yoshida4()
    nts = np.asarray(sorted(int(n) for n in nt_list))
    errors = np.empty(nts.size)
    exact = np.concatenate(
        [peregrine(line.inner.points, t_end), peregrine_compactified(line.outer.points, t_end)]
    )
    for i, nt in enumerate(nts):
        state0 = sample_initial(data, line, ygrid, kappa=kappa)
        plan = plan_for_step(line, ygrid, kappa, t_end / nt, scheme)
        final, _ = evolve(state0, t_end, nt, plan=plan, scheme=scheme, cadence=nt)
        errors[i] = np.abs(final.values - exact[:, None]).max()
    fitted = errors > error_floor
    if fitted.sum() >= 2:
        slope = float(np.polyfit(np.log(nts[fitted]), np.log(errors[fitted]), 1)[0])
    else:
        slope = float("nan")
    return ConvergenceResult(n_steps=nts, errors=errors, slope=slope, fitted=fitted)
