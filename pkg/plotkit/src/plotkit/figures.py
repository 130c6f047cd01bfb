"""Figure rendering from solver output files.

Five figure kinds mirror the experiment write-ups: |u| surfaces over
(x, y), x-slices at fixed y (optionally against the exact breather,
dotted), L-infinity time series, spectral-coefficient decay per domain,
and log-log time-step convergence with a slope -4 guide line.

Rendering is a pure function of the input files; every image embeds the
producing config hash and source paths as PNG metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import load_convergence, load_snapshot, load_timeseries

KINDS = ("surface", "slice", "timeseries", "coefficients", "convergence")

# plotting window in x; the compactified grid reaches |x| ~ 1/s_min >> 10
X_WINDOW = 12.0


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    slice_y: float = 0.0
    overlay_exact: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("figure spec needs at least one input file")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))


def exact_breather(x, t):
    """Reference rational breather used for dotted overlays."""
    x = np.asarray(x, dtype=float)
    return (1.0 - 4.0 * (1.0 + 4j * t) / (1.0 + 4.0 * x**2 + 16.0 * t**2)) * np.exp(2j * t)


def render(spec: FigureSpec, out_path) -> Path:
    """Render the figure described by ``spec`` and write it to ``out_path``."""
    out_path = Path(out_path)
    fig, provenance = _RENDERERS[spec.kind](spec)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=110, metadata=provenance)
    plt.close(fig)
    return out_path


def read_provenance(png_path) -> dict[str, str]:
    """Parse back the provenance block embedded in a rendered PNG."""
    from PIL import Image

    with Image.open(png_path) as img:
        return dict(img.text)


def _meta(spec: FigureSpec, config: str, **extra) -> dict[str, str]:
    meta = {
        "nls2d-config": config,
        "nls2d-sources": ";".join(spec.inputs),
        "nls2d-kind": spec.kind,
    }
    meta.update({k: str(v) for k, v in extra.items()})
    return meta


def _sorted_window(snapshot):
    keep = np.abs(snapshot.x) <= X_WINDOW
    x = snapshot.x[keep]
    u = snapshot.u[keep]
    order = np.argsort(x, kind="stable")
    x = x[order]
    u = u[order]
    # the matching abscissae appear in both domains; keep the first of each pair
    uniq = np.concatenate([[True], np.diff(x) > 1e-12])
    return x[uniq], u[uniq]


def _render_surface(spec: FigureSpec):
    snap = load_snapshot(spec.inputs[0])
    x, u = _sorted_window(snap)
    X, Y = np.meshgrid(x, snap.y, indexing="ij")
    fig = plt.figure(figsize=(6.4, 4.8))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(X, Y, np.abs(u), cmap="viridis", rcount=80, ccount=80, linewidth=0)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("|u|")
    ax.set_title(f"|u| at t={snap.time:.4g}")
    return fig, _meta(spec, snap.config, t=snap.time)


def _render_slice(spec: FigureSpec):
    snap = load_snapshot(spec.inputs[0])
    j = int(np.argmin(np.abs(snap.y - spec.slice_y)))
    y_used = snap.y[j]
    x, u = _sorted_window(snap)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.plot(x, u[:, j].real, "b-", lw=1.2, label="Re u")
    if spec.overlay_exact:
        x_fine = np.linspace(x.min(), x.max(), 1201)
        ax.plot(x_fine, exact_breather(x_fine, snap.time).real, "r:", lw=1.4, label="exact breather")
        ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("x")
    ax.set_ylabel("Re u")
    ax.set_title(f"t={snap.time:.4g}, y={y_used:.4f} (requested {spec.slice_y:.4f})")
    return fig, _meta(spec, snap.config, t=snap.time, slice_y=y_used)


def _render_timeseries(spec: FigureSpec):
    ts = load_timeseries(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.plot(ts.t, ts.linf, "b-", lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\|u\|_\infty$")
    ax.set_title("maximum norm of the solution")
    return fig, _meta(spec, ts.config)


def _cheb_coefficients(values: np.ndarray) -> np.ndarray:
    # DCT-I via an even extension; values sampled on n+1 extreme points
    n = values.shape[0] - 1
    if n < 1:
        return np.abs(values)
    ext = np.concatenate([values, values[-2:0:-1]], axis=0)
    coeff = np.fft.fft(ext, axis=0)[: n + 1] / n
    coeff[0] *= 0.5
    coeff[n] *= 0.5
    return coeff


def _render_coefficients(spec: FigureSpec):
    snap = load_snapshot(spec.inputs[0])
    ni = snap.inner_size
    c_in = np.abs(_cheb_coefficients(snap.u[:ni])).mean(axis=1)
    c_out = np.abs(_cheb_coefficients(snap.u[ni:])).mean(axis=1)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    floor = 1e-18
    ax.semilogy(np.arange(c_in.size), np.maximum(c_in, floor), "b+", ms=5, label="domain I")
    ax.semilogy(np.arange(c_out.size), np.maximum(c_out, floor), "r*", ms=5, label="domain II")
    ax.set_xlabel("coefficient index")
    ax.set_ylabel("|c|")
    ax.set_title(f"Chebyshev coefficients at t={snap.time:.4g}")
    ax.legend(loc="best", fontsize=8)
    return fig, _meta(spec, snap.config, t=snap.time)


def _render_convergence(spec: FigureSpec):
    table = load_convergence(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.loglog(table.n_t, table.error, "bo-", ms=5, lw=1.0, label="measured error")
    anchor = max(table.error[0], 1e-16) * 1.5
    guide = anchor * (table.n_t / table.n_t[0]) ** (-4.0)
    ax.loglog(table.n_t, guide, "r-", lw=1.2, label="slope -4")
    ax.set_xlabel(r"$N_t$")
    ax.set_ylabel(r"$L^\infty$ error")
    ax.set_title("time-step convergence")
    ax.legend(loc="best", fontsize=8)
    return fig, _meta(spec, table.config, slope=table.slope)


_RENDERERS = {
    "surface": _render_surface,
    "slice": _render_slice,
    "timeseries": _render_timeseries,
    "coefficients": _render_coefficients,
    "convergence": _render_convergence,
}
