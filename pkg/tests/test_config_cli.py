import json
from pathlib import Path

import numpy as np
import pytest

from nls2d import ConfigError, RunConfig, list_presets, resolve_preset, run_config
from nls2d.cli import main
from nls2d.solutions import InitialData


def tiny_config(**overrides):
    # y-independent data so a coarse transverse grid stays fully resolved
    base = dict(
        kappa=1,
        x0=1.0,
        N_I=48,
        N_II=47,
        M=8,
        L_y=3.0,
        t_end=0.05,
        N_t=20,
        initial=InitialData(kind="peregrine"),
        diagnostic_cadence=2,
        snapshot_times=(0.0, 0.025),
    )
    base.update(overrides)
    return RunConfig(**base)


class TestPresets:
    def test_catalogue_has_eleven_entries(self):
        assert len(list_presets()) == 11

    def test_every_preset_round_trips_through_json(self):
        for name, cfg in list_presets().items():
            again = RunConfig.from_json(cfg.to_json())
            assert again == cfg, name

    def test_every_preset_validates(self):
        for cfg in list_presets().values():
            cfg.validate()

    def test_blowup_preset_parameters(self):
        cfg = resolve_preset("elliptic-gauss-x0-minus")
        assert (cfg.kappa, cfg.N_I, cfg.N_II, cfg.M) == (1, 100, 101, 128)
        assert (cfg.L_y, cfg.N_t, cfg.t_end) == (3.0, 1000, 0.5)
        assert cfg.initial.kind == "gaussian_perturbed"
        assert cfg.initial.c == -0.1 and cfg.initial.x_c == 0.0

    def test_modulated_preset_snapshot_times(self):
        cfg = resolve_preset("elliptic-mod-1.1")
        assert cfg.snapshot_times == (0.0, 0.134, 0.268, 0.4)

    def test_short_center_aliases(self):
        assert resolve_preset("hyperbolic-gauss-0-minus") is not None
        assert resolve_preset("elliptic-gauss-m1-plus") == resolve_preset("elliptic-gauss-xm1-plus")

    def test_unknown_preset_message_lists_catalogue(self):
        with pytest.raises(ConfigError, match="convergence"):
            resolve_preset("no-such-run")


class TestValidation:
    def test_even_outer_degree_named(self):
        with pytest.raises(ConfigError, match="N_II"):
            tiny_config(N_II=16).validate()

    def test_odd_mode_count_named(self):
        with pytest.raises(ConfigError, match="M must be even"):
            tiny_config(M=9).validate()

    def test_nonpositive_duration_named(self):
        with pytest.raises(ConfigError, match="t_end"):
            tiny_config(t_end=0.0).validate()

    def test_bad_kappa_named(self):
        with pytest.raises(ConfigError, match="kappa"):
            tiny_config(kappa=2).validate()

    def test_snapshot_outside_window(self):
        with pytest.raises(ConfigError, match="snapshot"):
            tiny_config(snapshot_times=(0.2,)).validate()


@pytest.fixture(scope="module")
def done(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    cfg = tiny_config()
    return run_config(cfg, out_dir=str(out)), cfg, out


class TestRunOutputs:
    def test_files_exist(self, done):
        result, _cfg, out = done
        assert (out / "metadata.txt").is_file()
        assert (out / "timeseries.csv").is_file()
        assert (out / "snapshot_0000.csv").is_file()
        assert (out / "snapshot_0001.csv").is_file()
        assert (out / "snapshot_final.csv").is_file()

    def test_metadata_contains_all_config_fields(self, done):
        result, cfg, out = done
        text = (out / "metadata.txt").read_text()
        keys = {line.split(":", 1)[0] for line in text.strip().splitlines()}
        for field in ("kappa", "x0", "N_I", "N_II", "M", "L_y", "t_end", "N_t",
                      "diagnostic_cadence", "snapshot_times", "output_dir", "preset_name",
                      "initial_kind", "initial_t0", "initial_c", "initial_x_c",
                      "initial_sigma", "stop_reason", "stop_time", "config_hash",
                      "code_version"):
            assert field in keys, field

    def test_every_file_names_the_config_hash(self, done):
        result, cfg, out = done
        chash = cfg.config_hash()
        assert f"config_hash: {chash}" in (out / "metadata.txt").read_text()
        for name in ("timeseries.csv", "snapshot_0000.csv", "snapshot_final.csv"):
            assert f"config={chash}" in (out / name).read_text().splitlines()[0]

    def test_timeseries_layout(self, done):
        result, _cfg, out = done
        lines = (out / "timeseries.csv").read_text().strip().splitlines()
        assert lines[1] == "t,linf,energy,energy_drift,tau_residual"
        data = np.loadtxt(out / "timeseries.csv", delimiter=",", skiprows=2)
        assert data.shape[1] == 5
        assert (np.diff(data[:, 0]) > 0).all()
        assert data.shape[0] == 1 + 20 // 2

    def test_snapshot_layout(self, done):
        result, _cfg, out = done
        lines = (out / "snapshot_0000.csv").read_text().splitlines()
        assert lines[1] == "x_physical,y,re_u,im_u"
        assert "t=0.0000000000000000e+00" in lines[0]
        data = np.loadtxt(out / "snapshot_0000.csv", delimiter=",", skiprows=2)
        assert data.shape == ((48 + 47 + 2) * 8, 4)
        assert np.isfinite(data).all()

    def test_deterministic_reruns(self, done, tmp_path):
        result, cfg, out = done
        rerun = run_config(cfg, out_dir=str(tmp_path))
        for name in ("timeseries.csv", "snapshot_final.csv", "metadata.txt"):
            assert (tmp_path / name).read_bytes() == (out / name).read_bytes(), name


class TestConvergenceRun:
    def test_table_written(self, tmp_path):
        from dataclasses import replace

        cfg = replace(
            resolve_preset("convergence"),
            N_I=32, N_II=31, nt_list=(20, 40), t_end=0.2,
        )
        result = run_config(cfg, out_dir=str(tmp_path))
        lines = (tmp_path / "convergence.csv").read_text().strip().splitlines()
        assert lines[1] == "n_t,linf_error"
        assert len(lines) == 4
        assert "slope=" in lines[0]
        assert result.convergence.errors[0] > result.convergence.errors[1]


class TestCli:
    def test_presets_listing(self, capsys):
        assert main(["presets"]) == 0
        out = capsys.readouterr().out
        assert "elliptic-mod-1.1" in out and out.count("\n") == 11

    def test_run_with_config_file(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(tiny_config().to_json())
        assert main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "timeseries.csv").is_file()

    def test_invalid_config_exits_2_with_named_invariant(self, tmp_path, capsys):
        bad = json.loads(tiny_config().to_json())
        bad["N_II"] = 16
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps(bad))
        assert main(["run", "--config", str(cfg_path), "--out", str(tmp_path / "out")]) == 2
        assert "N_II" in capsys.readouterr().err

    def test_unknown_preset_exits_2(self, tmp_path, capsys):
        assert main(["run", "--preset", "bogus", "--out", str(tmp_path)]) == 2
        assert "unknown preset" in capsys.readouterr().err

    def test_environment_override_for_output_base(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("NLS2D_OUTPUT_DIR", str(tmp_path / "envbase"))
        monkeypatch.chdir(tmp_path)
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(tiny_config().to_json())
        assert main(["run", "--config", str(cfg_path)]) == 0
        produced = list((tmp_path / "envbase").glob("config-*/timeseries.csv"))
        assert len(produced) == 1

    def test_convergence_subcommand(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("NLS2D_OUTPUT_DIR", str(tmp_path))
        # small spatial grids keep this a smoke test
        import nls2d.config as config_mod
        from dataclasses import replace

        small = replace(config_mod._PRESETS["convergence"], N_I=32, N_II=31, t_end=0.2)
        monkeypatch.setitem(config_mod._PRESETS, "convergence", small)
        assert main(["convergence", "--nt", "20,40"]) == 0
        out = capsys.readouterr().out
        assert "N_t=" in out and "slope" in out

    def test_convergence_bad_list_exits_2(self, capsys):
        assert main(["convergence", "--nt", "ten,20"]) == 2
        assert "comma-separated" in capsys.readouterr().err
