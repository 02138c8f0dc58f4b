"""Run configuration in a flat ``section.key = value`` text format.

Lines are ``key = value``; ``#`` starts a comment; blank lines are ignored.
Every key is optional. Defaults reproduce the accuracy-study setup:

    grid.nx = 64              grid.ny = 64
    grid.lx = 1.0             grid.ly = 1.0
    grid.bc = neumann         (neumann | periodic)
    params.epsilon = 0.25     params.beta = 0.9
    params.m = 0.001          params.c0 = 0.0
    time.dt = 0.005           time.t_final = 0.5
    run.scheme = cn           (cn | first_order)
    run.seed = 0
    init.kind = cosine        (cosine | crystal | constant | random)
    init.value = 0.0          init.amplitude = 0.1
    io.out_dir = out
    io.energy_stride = 1      io.snapshot_stride = 0   (0: final snapshot only)
"""
import math
from dataclasses import dataclass, field

from .errors import ConfigError
from .grid import BoundaryKind, GridSpec
from .model import ModelParams
from .stepper import TimeSpec

SCHEMES = ("cn", "first_order")
INIT_KINDS = ("cosine", "crystal", "constant", "random")


@dataclass(frozen=True)
class IOConfig:
    out_dir: str = "out"
    energy_stride: int = 1
    snapshot_stride: int = 0


@dataclass(frozen=True)
class InitConfig:
    kind: str = "cosine"
    value: float = 0.0
    amplitude: float = 0.1


@dataclass(frozen=True)
class SimulationConfig:
    grid: GridSpec = field(default_factory=lambda: GridSpec(64, 64, 1.0, 1.0, BoundaryKind.NEUMANN))
    params: ModelParams = field(default_factory=lambda: ModelParams(epsilon=0.25, beta=0.9, m=0.001))
    time: TimeSpec = field(default_factory=lambda: TimeSpec(dt=0.005, t_final=0.5))
    scheme: str = "cn"
    seed: int = 0
    init: InitConfig = field(default_factory=InitConfig)
    io: IOConfig = field(default_factory=IOConfig)

    def init_kwargs(self):
        return {
            "kind": self.init.kind,
            "value": self.init.value,
            "seed": self.seed,
            "amplitude": self.init.amplitude,
        }


def config_values(cfg):
    return {
        "grid.nx": cfg.grid.nx,
        "grid.ny": cfg.grid.ny,
        "grid.lx": cfg.grid.lx,
        "grid.ly": cfg.grid.ly,
        "grid.bc": cfg.grid.bc.value,
        "params.epsilon": cfg.params.epsilon,
        "params.beta": cfg.params.beta,
        "params.m": cfg.params.m,
        "params.c0": cfg.params.c0,
        "time.dt": cfg.time.dt,
        "time.t_final": cfg.time.t_final,
        "run.scheme": cfg.scheme,
        "run.seed": cfg.seed,
        "init.kind": cfg.init.kind,
        "init.value": cfg.init.value,
        "init.amplitude": cfg.init.amplitude,
        "io.out_dir": cfg.io.out_dir,
        "io.energy_stride": cfg.io.energy_stride,
        "io.snapshot_stride": cfg.io.snapshot_stride,
    }


DEFAULTS = config_values(SimulationConfig())
KEYS = tuple(DEFAULTS)


def _convert(key, raw, line):
    kind = type(DEFAULTS[key])
    try:
        if kind is int:
            value = int(raw)
        elif kind is float:
            value = float(raw)
        else:
            value = raw
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}", line=line, key=key) from None
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"{key} must be finite, got {raw!r}", line=line, key=key)
    return value


def _range_error(key, message):
    return ConfigError(f"{key} {message}", key=key)


def _build(values):
    v = values
    checks = [
        ("grid.nx", v["grid.nx"] >= 2, "must be >= 2"),
        ("grid.ny", v["grid.ny"] >= 2, "must be >= 2"),
        ("grid.lx", v["grid.lx"] > 0, "must be > 0"),
        ("grid.ly", v["grid.ly"] > 0, "must be > 0"),
        ("grid.bc", v["grid.bc"] in ("neumann", "periodic"), "must be neumann or periodic"),
        ("params.epsilon", 0 < v["params.epsilon"] < 1, "must lie in (0, 1)"),
        ("params.beta", v["params.beta"] >= 0, "must be >= 0"),
        ("params.m", v["params.m"] > 0, "must be > 0"),
        ("params.c0", v["params.c0"] >= 0, "must be >= 0"),
        ("time.dt", v["time.dt"] > 0, "must be > 0"),
        ("time.t_final", v["time.t_final"] > 0, "must be > 0"),
        ("run.scheme", v["run.scheme"] in SCHEMES, f"must be one of {', '.join(SCHEMES)}"),
        ("init.kind", v["init.kind"] in INIT_KINDS, f"must be one of {', '.join(INIT_KINDS)}"),
        ("init.amplitude", v["init.amplitude"] >= 0, "must be >= 0"),
        ("io.energy_stride", v["io.energy_stride"] >= 1, "must be >= 1"),
        ("io.snapshot_stride", v["io.snapshot_stride"] >= 0, "must be >= 0"),
    ]
    for key, ok, message in checks:
        if not ok:
            raise _range_error(key, f"{message}, got {v[key]!r}")
    try:
        time = TimeSpec(v["time.dt"], v["time.t_final"])
    except ValueError as exc:
        raise ConfigError(f"time.t_final: {exc}", key="time.t_final") from None
    return SimulationConfig(
        grid=GridSpec(v["grid.nx"], v["grid.ny"], v["grid.lx"], v["grid.ly"], BoundaryKind(v["grid.bc"])),
        params=ModelParams(v["params.epsilon"], v["params.beta"], v["params.m"], v["params.c0"]),
        time=time,
        scheme=v["run.scheme"],
        seed=v["run.seed"],
        init=InitConfig(v["init.kind"], v["init.value"], v["init.amplitude"]),
        io=IOConfig(v["io.out_dir"], v["io.energy_stride"], v["io.snapshot_stride"]),
    )


def parse_config(text):
    values = dict(DEFAULTS)
    seen = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw_line.strip()!r}", line=lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"unknown key {key!r}", line=lineno, key=key)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first set on line {seen[key]})", line=lineno, key=key)
        if not raw:
            raise ConfigError(f"missing value for {key!r}", line=lineno, key=key)
        seen[key] = lineno
        values[key] = _convert(key, raw, lineno)
    return _build(values)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(cfg):
    """Serialize so that ``parse_config(format_config(cfg)) == cfg``."""
    lines = []
    for key, value in config_values(cfg).items():
        text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"

