"""Secondary acceptance: every figure kind renders from real solver output.

The solver is driven through its public command line only (config file in,
CSV files out); a reduced-size configuration keeps the run in seconds.
The golden-image check of the convergence figure runs against a frozen
table produced by the real `convergence` command.
"""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from plotkit import FigureSpec, load_metadata, read_provenance, render
from plotkit.cli import main

GOLDEN = Path(__file__).parent / "golden"

RUN_CONFIG = {
    "kappa": 1,
    "x0": 1.0,
    "N_I": 48,
    "N_II": 47,
    "M": 16,
    "L_y": 3.0,
    "t_end": 0.05,
    "N_t": 20,
    "initial": {"kind": "peregrine", "t0": 0.0, "c": [0.0, 0.0], "x_c": 0.0, "sigma": 1.0},
    "diagnostic_cadence": 2,
    "snapshot_times": [0.0, 0.025],
    "output_dir": None,
    "preset_name": None,
    "nt_list": None,
}


@pytest.fixture(scope="module")
def solver_output(tmp_path_factory):
    base = tmp_path_factory.mktemp("solver")
    cfg_path = base / "config.json"
    cfg_path.write_text(json.dumps(RUN_CONFIG))
    out = base / "run"
    subprocess.run(
        [sys.executable, "-m", "nls2d", "run", "--config", str(cfg_path), "--out", str(out)],
        check=True,
        capture_output=True,
    )
    conv = base / "conv"
    subprocess.run(
        [sys.executable, "-m", "nls2d", "convergence", "--nt", "20,40", "--out", str(conv)],
        check=True,
        capture_output=True,
    )
    return out, conv


class TestFiveKindsFromSolverOutput:
    def test_all_kinds_render_with_provenance(self, solver_output, tmp_path):
        run_dir, conv_dir = solver_output
        meta = load_metadata(run_dir / "metadata.txt")
        chash = meta["config_hash"]
        jobs = {
            "surface": (run_dir / "snapshot_final.csv",),
            "slice": (run_dir / "snapshot_final.csv",),
            "timeseries": (run_dir / "timeseries.csv",),
            "coefficients": (run_dir / "snapshot_final.csv",),
            "convergence": (conv_dir / "convergence.csv",),
        }
        for kind, inputs in jobs.items():
            out = tmp_path / f"{kind}.png"
            spec = FigureSpec(kind, tuple(str(p) for p in inputs), slice_y=0.0,
                              overlay_exact=(kind == "slice"))
            render(spec, out)
            assert out.is_file() and out.stat().st_size > 0, kind
            prov = read_provenance(out)
            assert prov["nls2d-kind"] == kind
            if kind != "convergence":
                assert prov["nls2d-config"] == chash, kind
            assert str(inputs[0]) in prov["nls2d-sources"]
        print("SECONDARY ACCEPTANCE five-kinds: PASS")

    def test_cli_entry_point(self, solver_output, tmp_path):
        run_dir, _ = solver_output
        out = tmp_path / "cli_slice.png"
        rc = main([
            "plot", "--kind", "slice",
            "--in", str(run_dir / "snapshot_final.csv"),
            "--out", str(out),
            "--slice-y", "0.0", "--overlay-exact",
        ])
        assert rc == 0 and out.is_file()


class TestConvergenceGolden:
    def test_guide_line_and_golden_image(self, tmp_path):
        table = GOLDEN / "convergence.csv"
        out = render(FigureSpec("convergence", (str(table),)), tmp_path / "conv.png")
        prov = read_provenance(out)
        assert float(prov["slope"]) < -3.5  # fitted slope rides the -4 guide
        from PIL import Image

        with Image.open(out) as got, Image.open(GOLDEN / "convergence.png") as want:
            assert got.size == want.size
            a = np.asarray(got.convert("RGB"), dtype=float)
            b = np.asarray(want.convert("RGB"), dtype=float)
        diff = np.abs(a - b).mean()
        print(f"SECONDARY ACCEPTANCE convergence-golden: PASS (mean diff {diff:.3f})")
        assert diff < 3.0
