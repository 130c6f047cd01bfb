"""Experiment orchestration: run a configuration, write structured output.

Output layout (one directory per run):

* ``metadata.txt``     flat ``key: value`` block: every config field, the
  stop information, the config hash and the code version.
* ``timeseries.csv``   diagnostic rows ``t,linf,energy,energy_drift,
  tau_residual`` at the configured cadence.
* ``snapshot_NNNN.csv`` fields at the requested times plus
  ``snapshot_final.csv`` for the final or stop state; rows are
  ``x_physical,y,re_u,im_u``.
* ``convergence.csv``  (step-sweep runs only) rows ``n_t,linf_error``.

All floats are written with 17 significant digits and every file carries
the producing config hash on its first line, so two runs of the same
config produce bit-identical output.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .diagnostics import ConvergenceResult, Monitors, RunDiagnostics, convergence_study
from .domain import build_line
from .propagator import StopPolicy, evolve, plan_for_step, yoshida4
from .solutions import sample_initial
from .spectral import FourierGrid
from .state import State2D

OUTPUT_DIR_ENV = "NLS2D_OUTPUT_DIR"


def _fmt(x: float) -> str:
    return f"{x:.16e}"


@dataclass
class RunResult:
    config: RunConfig
    out_dir: Path
    metadata_path: Path
    timeseries_path: Path | None = None
    snapshot_paths: list[Path] = field(default_factory=list)
    diagnostics: RunDiagnostics | None = None
    final_state: State2D | None = None
    convergence: ConvergenceResult | None = None
    convergence_path: Path | None = None


def output_directory(config: RunConfig, override: str | None = None) -> Path:
    """Resolve where a run writes: explicit override, then the config's
    own directory, then ``$NLS2D_OUTPUT_DIR`` (or ``./runs``) plus a
    per-run name."""
    if override:
        return Path(override)
    if config.output_dir:
        return Path(config.output_dir)
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "runs"))
    name = config.preset_name or f"config-{config.config_hash()}"
    return base / name


def run_config(config: RunConfig, out_dir: str | None = None) -> RunResult:
    """Execute one configuration and write its output files."""
    config.validate()
    directory = output_directory(config, out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    if config.nt_list is not None:
        return _run_convergence(config, directory)
    return _run_evolution(config, directory)


def _run_evolution(config: RunConfig, directory: Path) -> RunResult:
    chash = config.config_hash()
    line = build_line(config.x0, config.N_I, config.N_II)
    ygrid = FourierGrid(config.M, config.L_y)
    state0 = sample_initial(config.initial, line, ygrid, kappa=config.kappa)
    modulated = config.initial.kind == "modulated"
    monitors = Monitors(line, ygrid, config.kappa, farfield_subtracted=modulated)
    # modulated backgrounds: the subtracted-energy drift is dominated by
    # far-field quadrature noise, so blow-up detection falls to the
    # resolution monitor instead
    policy = StopPolicy(
        max_energy_drift=float("inf") if modulated else 1e-3,
        max_resolution_tail=3e-5 if modulated else None,
    )
    h = config.t_end / config.N_t
    plan = plan_for_step(line, ygrid, config.kappa, h)
    t0 = config.initial.t0

    snapshot_paths: list[Path] = []
    step_of: dict[int, float] = {}
    for t in config.snapshot_times:
        step_of[int(round(t / h))] = t

    x_phys = line.physical_x

    def write_snap(state: State2D) -> None:
        path = directory / f"snapshot_{len(snapshot_paths):04d}.csv"
        _write_snapshot(path, state, x_phys, ygrid, chash)
        snapshot_paths.append(path)

    final, diags = evolve(
        state0,
        t0 + config.t_end,
        config.N_t,
        monitors,
        policy,
        plan=plan,
        scheme=yoshida4(),
        cadence=config.diagnostic_cadence,
        snapshot_steps=set(step_of),
        on_snapshot=write_snap,
    )
    final_path = directory / "snapshot_final.csv"
    _write_snapshot(final_path, final, x_phys, ygrid, chash)
    snapshot_paths.append(final_path)

    ts_path = directory / "timeseries.csv"
    _write_timeseries(ts_path, diags, chash)

    meta_path = directory / "metadata.txt"
    extra = {
        "stop_reason": diags.stop_reason or "none",
        "stop_time": _fmt(diags.stop_time) if diags.stop_time is not None else "none",
        "last_valid_time": _fmt(diags.last_valid_time) if diags.last_valid_time is not None else "none",
        "energy_definition": monitors.energy_definition,
        "snapshots": ",".join(p.name for p in snapshot_paths),
    }
    _write_metadata(meta_path, config, chash, extra)
    return RunResult(
        config=config,
        out_dir=directory,
        metadata_path=meta_path,
        timeseries_path=ts_path,
        snapshot_paths=snapshot_paths,
        diagnostics=diags,
        final_state=final,
    )


def _run_convergence(config: RunConfig, directory: Path) -> RunResult:
    chash = config.config_hash()
    result = convergence_study(
        config.nt_list,
        n_inner=config.N_I,
        n_outer=config.N_II,
        m=config.M,
        y_scale=config.L_y,
        x0=config.x0,
        t_end=config.t_end,
        kappa=config.kappa,
    )
    table_path = directory / "convergence.csv"
    with open(table_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config={chash} slope={result.slope:.6f}\n")
        fh.write("n_t,linf_error\n")
        for nt, err in zip(result.n_steps, result.errors):
            fh.write(f"{int(nt)},{_fmt(err)}\n")
    meta_path = directory / "metadata.txt"
    _write_metadata(
        meta_path,
        config,
        chash,
        {
            "stop_reason": "none",
            "stop_time": "none",
            "fitted_slope": f"{result.slope:.6f}",
        },
    )
    return RunResult(
        config=config,
        out_dir=directory,
        metadata_path=meta_path,
        convergence=result,
        convergence_path=table_path,
    )


def _write_metadata(path: Path, config: RunConfig, chash: str, extra: dict[str, str]) -> None:
    d = config.to_dict()
    init = d.pop("initial")
    lines = [f"config_hash: {chash}", f"code_version: {__version__}"]
    for key, value in d.items():
        if key == "snapshot_times":
            value = ",".join(_fmt(t) for t in value) or "none"
        elif key == "nt_list":
            value = ",".join(str(n) for n in value) if value else "none"
        elif value is None:
            value = "none"
        lines.append(f"{key}: {value}")
    lines.append(f"initial_kind: {init['kind']}")
    lines.append(f"initial_t0: {_fmt(init['t0'])}")
    lines.append(f"initial_c: {_fmt(init['c'][0])},{_fmt(init['c'][1])}")
    lines.append(f"initial_x_c: {_fmt(init['x_c'])}")
    lines.append(f"initial_sigma: {_fmt(init['sigma'])}")
    for key, value in extra.items():
        lines.append(f"{key}: {value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_timeseries(path: Path, diags: RunDiagnostics, chash: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config={chash}\n")
        fh.write("t,linf,energy,energy_drift,tau_residual\n")
        for row in zip(diags.times, diags.linf, diags.energy, diags.energy_drift, diags.tau_residual):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_snapshot(path: Path, state: State2D, x_phys: np.ndarray, ygrid: FourierGrid, chash: str) -> None:
    m = ygrid.m
    cols = np.column_stack(
        [
            np.repeat(x_phys, m),
            np.tile(ygrid.points, x_phys.size),
            state.values.real.ravel(),
            state.values.imag.ravel(),
        ]
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config={chash} t={_fmt(state.time)} kappa={state.kappa}\n")
        fh.write("x_physical,y,re_u,im_u\n")
        np.savetxt(fh, cols, fmt="%.16e", delimiter=",")
