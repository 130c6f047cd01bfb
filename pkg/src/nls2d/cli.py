"""Command-line entry point.

Subcommands::

    nls2d run --config file.json [--out DIR]
    nls2d run --preset NAME [--out DIR]
    nls2d presets
    nls2d convergence --nt 100,200,400 [--out DIR]

``$NLS2D_OUTPUT_DIR`` overrides the default output base directory.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, RunConfig, list_presets, resolve_preset
from .runner import run_config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nls2d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one experiment")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="JSON configuration file")
    src.add_argument("--preset", help="named preset (see `nls2d presets`)")
    p_run.add_argument("--out", help="output directory for this run")

    sub.add_parser("presets", help="list the preset catalogue")

    p_conv = sub.add_parser("convergence", help="time-step convergence study")
    p_conv.add_argument("--nt", required=True, help="comma-separated list of step counts")
    p_conv.add_argument("--out", help="output directory for the study")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            if args.preset:
                config = resolve_preset(args.preset)
            else:
                config = RunConfig.from_json(args.config.read_text(encoding="utf-8"))
            result = run_config(config, out_dir=args.out)
            print(f"run complete: {result.out_dir}")
            if result.diagnostics is not None and result.diagnostics.stop_reason:
                print(
                    f"stopped early ({result.diagnostics.stop_reason}) "
                    f"at t={result.diagnostics.stop_time:.6f}"
                )
        elif args.command == "presets":
            for name, cfg in list_presets().items():
                init = cfg.initial
                detail = {
                    "peregrine": "unperturbed breather",
                    "gaussian_perturbed": f"c={init.c:+.2g} centered x_c={init.x_c:g}",
                    "modulated": f"sigma={init.sigma:g}",
                }[init.kind]
                print(
                    f"{name:28s} kappa={cfg.kappa:+d} N_I={cfg.N_I} N_II={cfg.N_II} "
                    f"M={cfg.M} L_y={cfg.L_y:g} N_t={cfg.N_t} t_end={cfg.t_end:g}  {detail}"
                )
        elif args.command == "convergence":
            try:
                nt_list = tuple(int(part) for part in args.nt.split(",") if part.strip())
            except ValueError:
                raise ConfigError(f"--nt expects a comma-separated integer list, got {args.nt!r}")
            config = replace(resolve_preset("convergence"), nt_list=nt_list)
            result = run_config(config, out_dir=args.out)
            conv = result.convergence
            for nt, err in zip(conv.n_steps, conv.errors):
                print(f"N_t={int(nt):6d}  error={err:.6e}")
            print(f"fitted slope (errors > 1e-6): {conv.slope:.3f}")
            print(f"table written to {result.convergence_path}")
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
