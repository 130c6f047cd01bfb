import numpy as np
import pytest

HASH = "abc123def456"


def fmt(x):
    return f"{x:.16e}"


@pytest.fixture()
def snapshot_file(tmp_path):
    """Small but structurally faithful snapshot: two-domain x layout, 8 y samples."""
    rng = np.random.default_rng(3)
    x_inner = np.cos(np.pi * np.arange(9) / 8)            # 1 .. -1
    s_outer = np.cos(np.pi * np.arange(8) / 7)            # even count, no zero
    x = np.concatenate([x_inner, 1.0 / s_outer])
    y = -3 * np.pi + (6 * np.pi / 8) * np.arange(8)
    u = np.exp(-np.abs(x)[:, None] - 0.1 * y[None, :] ** 2) + 0.1j * rng.normal(size=(x.size, y.size))
    path = tmp_path / "snapshot_0000.csv"
    with open(path, "w") as fh:
        fh.write(f"# config={HASH} t={fmt(0.25)} kappa=1\n")
        fh.write("x_physical,y,re_u,im_u\n")
        for i in range(x.size):
            for j in range(y.size):
                fh.write(f"{fmt(x[i])},{fmt(y[j])},{fmt(u[i, j].real)},{fmt(u[i, j].imag)}\n")
    return path


@pytest.fixture()
def timeseries_file(tmp_path):
    t = np.linspace(0, 0.5, 21)
    path = tmp_path / "timeseries.csv"
    with open(path, "w") as fh:
        fh.write(f"# config={HASH}\n")
        fh.write("t,linf,energy,energy_drift,tau_residual\n")
        for ti in t:
            fh.write(",".join(fmt(v) for v in (ti, 3.0 - ti, -6.5, ti * 1e-5, 1e-9)) + "\n")
    return path


@pytest.fixture()
def convergence_file(tmp_path):
    path = tmp_path / "convergence.csv"
    nts = [100, 200, 400, 800, 1500]
    with open(path, "w") as fh:
        fh.write(f"# config={HASH} slope=-3.926145\n")
        fh.write("n_t,linf_error\n")
        for nt in nts:
            fh.write(f"{nt},{fmt(1e-3 * (nt / 100.0) ** -3.9)}\n")
    return path
