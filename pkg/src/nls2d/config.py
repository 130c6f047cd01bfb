"""Experiment configuration, presets and serialization."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

from .solutions import InitialData


class ConfigError(ValueError):
    """A run configuration violates one of its invariants."""


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one experiment.

    ``N_I``/``N_II`` are the Chebyshev degrees of the interior/exterior
    domains, ``M`` the number of transverse Fourier modes on the torus
    ``L_y * [-pi, pi)``, ``t_end`` the run duration from the initial time
    and ``N_t`` the number of uniform time steps.  ``nt_list`` is only set
    for convergence-study runs, which sweep the step count instead of
    evolving once.
    """

    kappa: int
    x0: float
    N_I: int
    N_II: int
    M: int
    L_y: float
    t_end: float
    N_t: int
    initial: InitialData
    diagnostic_cadence: int = 1
    snapshot_times: tuple[float, ...] = ()
    output_dir: str | None = None
    preset_name: str | None = None
    nt_list: tuple[int, ...] | None = None

    def validate(self) -> "RunConfig":
        if self.kappa not in (1, -1):
            raise ConfigError(f"kappa must be +1 (elliptic) or -1 (hyperbolic), got {self.kappa}")
        if not self.x0 > 0:
            raise ConfigError(f"x0 must be positive, got {self.x0}")
        if self.N_I < 2:
            raise ConfigError(f"N_I must be >= 2, got {self.N_I}")
        if self.N_II < 5 or self.N_II % 2 == 0:
            raise ConfigError(f"N_II must be odd and >= 5 (no grid point at infinity), got {self.N_II}")
        if self.M < 2 or self.M % 2 != 0:
            raise ConfigError(f"M must be even and >= 2, got {self.M}")
        if not self.L_y > 0:
            raise ConfigError(f"L_y must be positive, got {self.L_y}")
        if not self.t_end > 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.N_t < 1:
            raise ConfigError(f"N_t must be >= 1, got {self.N_t}")
        if self.diagnostic_cadence < 1:
            raise ConfigError(f"diagnostic_cadence must be >= 1, got {self.diagnostic_cadence}")
        for t in self.snapshot_times:
            if not 0.0 <= t <= self.t_end + 1e-12:
                raise ConfigError(f"snapshot time {t} outside the run window [0, {self.t_end}]")
        if self.nt_list is not None and (len(self.nt_list) == 0 or min(self.nt_list) < 1):
            raise ConfigError(f"nt_list must contain positive step counts, got {self.nt_list}")
        return self

    def to_dict(self) -> dict:
        d = {
            "kappa": self.kappa,
            "x0": self.x0,
            "N_I": self.N_I,
            "N_II": self.N_II,
            "M": self.M,
            "L_y": self.L_y,
            "t_end": self.t_end,
            "N_t": self.N_t,
            "initial": {
                "kind": self.initial.kind,
                "t0": self.initial.t0,
                "c": [complex(self.initial.c).real, complex(self.initial.c).imag],
                "x_c": self.initial.x_c,
                "sigma": self.initial.sigma,
            },
            "diagnostic_cadence": self.diagnostic_cadence,
            "snapshot_times": list(self.snapshot_times),
            "output_dir": self.output_dir,
            "preset_name": self.preset_name,
            "nt_list": list(self.nt_list) if self.nt_list is not None else None,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            init = d["initial"]
            c = init.get("c", 0.0)
            if isinstance(c, (list, tuple)):
                c = complex(c[0], c[1])
            initial = InitialData(
                kind=init["kind"],
                t0=float(init.get("t0", 0.0)),
                c=complex(c),
                x_c=float(init.get("x_c", 0.0)),
                sigma=float(init.get("sigma", 1.0)),
            )
            nt_list = d.get("nt_list")
            return cls(
                kappa=int(d["kappa"]),
                x0=float(d["x0"]),
                N_I=int(d["N_I"]),
                N_II=int(d["N_II"]),
                M=int(d["M"]),
                L_y=float(d["L_y"]),
                t_end=float(d["t_end"]),
                N_t=int(d["N_t"]),
                initial=initial,
                diagnostic_cadence=int(d.get("diagnostic_cadence", 1)),
                snapshot_times=tuple(float(t) for t in d.get("snapshot_times", ())),
                output_dir=d.get("output_dir"),
                preset_name=d.get("preset_name"),
                nt_list=tuple(int(n) for n in nt_list) if nt_list is not None else None,
            )
        except KeyError as exc:
            raise ConfigError(f"configuration is missing required field {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    def config_hash(self) -> str:
        """Short digest identifying the physics content of the config
        (everything except where the output lands)."""
        d = self.to_dict()
        d.pop("output_dir")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:12]


def _preset_2d(name: str, kappa: int, initial: InitialData, snapshot_times=(0.0,)) -> RunConfig:
    # shared parameter block of all 2D stability runs; the matching abscissa
    # sits at x0=2 so the interior domain keeps the breather and the bulk of
    # the radiated perturbation at full Chebyshev resolution
    return RunConfig(
        kappa=kappa,
        x0=2.0,
        N_I=100,
        N_II=101,
        M=128,
        L_y=3.0,
        t_end=0.5,
        N_t=1000,
        initial=initial,
        diagnostic_cadence=1,
        snapshot_times=tuple(snapshot_times),
        preset_name=name,
    )


def _build_presets() -> dict[str, RunConfig]:
    presets: dict[str, RunConfig] = {}
    presets["convergence"] = RunConfig(
        kappa=1,
        x0=1.0,
        N_I=80,
        N_II=75,
        M=4,
        L_y=3.0,
        t_end=1.0,
        N_t=1500,
        initial=InitialData(kind="peregrine", t0=0.0),
        diagnostic_cadence=100,
        snapshot_times=(),
        preset_name="convergence",
        nt_list=(100, 200, 400, 800, 1500),
    )
    for family, kappa in (("elliptic", 1), ("hyperbolic", -1)):
        for x_c, xtag in ((0.0, "x0"), (-1.0, "xm1")):
            for c, sign in ((0.1, "plus"), (-0.1, "minus")):
                name = f"{family}-gauss-{xtag}-{sign}"
                presets[name] = _preset_2d(
                    name, kappa, InitialData(kind="gaussian_perturbed", t0=0.0, c=c, x_c=x_c)
                )
    presets["elliptic-mod-0.9"] = _preset_2d(
        "elliptic-mod-0.9", 1, InitialData(kind="modulated", t0=0.0, sigma=0.9)
    )
    presets["elliptic-mod-1.1"] = _preset_2d(
        "elliptic-mod-1.1",
        1,
        InitialData(kind="modulated", t0=0.0, sigma=1.1),
        snapshot_times=(0.0, 0.134, 0.268, 0.4),
    )
    return presets


_PRESETS = _build_presets()


def list_presets() -> dict[str, RunConfig]:
    """The full preset catalogue, keyed by canonical name."""
    return dict(_PRESETS)


def resolve_preset(name: str) -> RunConfig:
    """Look up a preset; short spellings of the Gaussian centers
    (``...-gauss-0-...``, ``...-gauss-m1-...``) are accepted as aliases."""
    if name in _PRESETS:
        return _PRESETS[name]
    alias = name.replace("-gauss-0-", "-gauss-x0-").replace("-gauss-m1-", "-gauss-xm1-")
    if alias in _PRESETS:
        return _PRESETS[alias]
    raise ConfigError(f"unknown preset {name!r}; available: {', '.join(sorted(_PRESETS))}")


def with_output_dir(config: RunConfig, output_dir: str | None) -> RunConfig:
    return replace(config, output_dir=output_dir)
