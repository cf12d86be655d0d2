"""Run configuration: strict schema, unit parsing and fixture merging.

A config file (YAML or JSON) looks like::

    command: phi-sweep
    fixture: paper-defaults
    seed: 42
    params:
      gains: [1.3dB, 4dB]
      phi: {start: 0deg, stop: 358deg, step: 2deg}
    output: {path: sweep.csv, format: csv}

Parameter values resolve with precedence explicit > fixture > built-in
default.  Keys a command does not know are rejected when given explicitly
and silently skipped when they come from a fixture (fixtures are shared by
all commands).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .fixtures import get_fixture
from .units import UnitError, parse_number, parse_quantity

COMMANDS = ("analytic", "simulate", "phi-sweep", "landscape", "calibrate", "backaction")
FORMATS = ("csv", "json", "npz")
TOP_LEVEL_KEYS = {"command", "fixture", "seed", "jobs", "params", "output", "plot"}
OUTPUT_KEYS = {"path", "format"}
DEFAULT_FIXTURE = "paper-defaults"
U64 = 2**64


@dataclass(frozen=True)
class Field:
    kind: str
    default: object = None
    options: tuple = ()
    help: str = ""


_NOISE = Field("photons", 0.0, help="added noise photons")
_SHARED_READOUT = {
    "n_sys_a": _NOISE,
    "n_sys_b": _NOISE,
    "nbar_in": Field("photons", 90, help="photons at the amplifier input"),
    "theta": Field("angle", "53.7deg"),
}
_ALPHA = Field("fraction", 1.0, help="resonator-to-amplifier transmission, recorded with shots")

SCHEMA: dict[str, dict[str, Field]] = {
    "analytic": {
        "gains": Field("gain_list", ["0dB"]),
        "i2_in": Field("photons", None, help="overrides sin(theta/2)^2 * nbar_in"),
        **_SHARED_READOUT,
    },
    "simulate": {
        "gain": Field("gain", "4dB"),
        "pump_phase": Field("angle", "180deg"),
        "shots": Field("count", 10000),
        "alpha_bar": _ALPHA,
        **_SHARED_READOUT,
    },
    "phi-sweep": {
        "gains": Field("gain_list", ["4dB"]),
        "phi": Field("angle_grid", {"start": "0deg", "stop": "358deg", "step": "2deg"}),
        "pump_phase": Field("angle", "180deg"),
        "shots": Field("count", 10000),
        "alpha_bar": _ALPHA,
        **_SHARED_READOUT,
    },
    "landscape": {
        "gain_grid": Field("gain_grid", {"start": "0dB", "stop": "24dB", "step": "0.25dB"}),
        "n_sys_grid": Field("photon_grid", {"start": 0.5, "stop": 50, "step": 0.5}),
        "landscape_i2_in": Field("photons", 5),
        "cross_sections": Field("gain_list", ["10dB", "20dB"]),
    },
    "calibrate": {
        "mode": Field("choice", "a", options=("a", "b")),
        "input": Field("path", None),
        "calibration_input_a": Field("path", None),
        "calibration_input_b": Field("path", None),
        "f_a": Field("frequency", "7.2284GHz"),
        "f_b": Field("frequency", "9.7056GHz"),
        "t_int": Field("time", "1us"),
    },
    "backaction": {
        "input": Field("path", None),
        "backaction_input": Field("path", None),
        "kappa": Field("frequency", "1.91MHz"),
        "chi": Field("frequency", "0.94MHz"),
    },
}


def _grid(spec, dimension: str | None):
    def one(v):
        return parse_quantity(v, dimension) if dimension else float(parse_number(v))

    if isinstance(spec, list):
        if not spec:
            raise UnitError("grid must be nonempty")
        return np.array([one(v) for v in spec])
    if not isinstance(spec, dict) or set(spec) != {"start", "stop", "step"}:
        raise UnitError("grid must be a list or a mapping with start, stop, step")
    start, stop, step = (one(spec[k]) for k in ("start", "stop", "step"))
    if step <= 0 or stop < start:
        raise UnitError("grid needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9))
    return start + step * np.arange(n + 1)


def parse_value(f: Field, value):
    """Convert a raw config value into its typed form (SI; gains in dB)."""
    if value is None:
        return None
    k = f.kind
    if k == "gain":
        g = parse_quantity(value, "gain")
        if g < 0:
            raise UnitError("amplifier gain must be >= 0 dB")
        return g
    if k == "gain_list":
        vals = value if isinstance(value, list) else [value]
        if not vals:
            raise UnitError("list must be nonempty")
        out = [parse_quantity(v, "gain") for v in vals]
        if min(out) < 0:
            raise UnitError("amplifier gain must be >= 0 dB")
        return out
    if k in ("angle", "frequency", "time"):
        x = parse_quantity(value, k)
        if k != "angle" and x <= 0:
            raise UnitError(f"{k} must be > 0")
        return x
    if k == "photons":
        return float(parse_number(value, minimum=0.0))
    if k == "fraction":
        x = float(parse_number(value))
        if not 0 < x <= 1:
            raise UnitError("must lie in (0, 1]")
        return x
    if k == "count":
        return int(parse_number(value, integer=True, minimum=1))
    if k == "choice":
        if value not in f.options:
            raise UnitError(f"must be one of {', '.join(f.options)}")
        return value
    if k == "path":
        if not isinstance(value, str):
            raise UnitError("expected a path string")
        return value
    if k == "angle_grid":
        return _grid(value, "angle")
    if k == "gain_grid":
        g = _grid(value, "gain")
        if g.min() < 0:
            raise UnitError("amplifier gain must be >= 0 dB")
        return g
    if k == "photon_grid":
        g = _grid(value, None)
        if g.min() < 0:
            raise UnitError("photon numbers must be >= 0")
        return g
    raise AssertionError(k)


@dataclass
class RunConfig:
    command: str
    fixture: str | None = DEFAULT_FIXTURE
    seed: int = 0
    jobs: int = 1
    params: dict = field(default_factory=dict)
    output_path: str | None = None
    output_format: str = "csv"
    plot: bool = False
    values: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        """The fully resolved config; re-running it reproduces the outputs."""
        return {
            "command": self.command,
            "fixture": self.fixture,
            "seed": self.seed,
            "params": copy.deepcopy(self.params),
            "output": {"format": self.output_format},
        }

    def __getitem__(self, key):
        return self.values[key]


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", key=str(path)) from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark else str(path)
        raise ConfigError(f"YAML syntax error: {getattr(exc, 'problem', exc)}", key=where) from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping", key=str(path))
    return data


def parse_set(items) -> dict:
    """``key=value`` overrides; values are parsed as YAML scalars or lists."""
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}", key="--set")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = yaml.safe_load(v)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse value {v!r}", key=f"params.{k}") from exc
    return out


def build_config(command: str, file_data: dict | None = None, *, fixture=None, seed=None, jobs=None,
                 out=None, fmt=None, plot=None, overrides=None) -> RunConfig:
    """Merge config-file data and command-line values into a validated :class:`RunConfig`."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}", key="command")
    data = dict(file_data or {})
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)}; allowed: {sorted(TOP_LEVEL_KEYS)}",
                          key=sorted(unknown)[0])
    if data.get("command", command) != command:
        raise ConfigError(f"config is for {data['command']!r}, not {command!r}", key="command")

    fixture_name = fixture if fixture is not None else data.get("fixture", DEFAULT_FIXTURE)
    seed = seed if seed is not None else data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < U64:
        raise ConfigError("seed must be an unsigned 64-bit integer", key="seed")
    jobs = jobs if jobs is not None else data.get("jobs", 1)
    if isinstance(jobs, bool) or not isinstance(jobs, int) or jobs < 1:
        raise ConfigError("jobs must be a positive integer", key="jobs")

    output = data.get("output") or {}
    if not isinstance(output, dict) or set(output) - OUTPUT_KEYS:
        raise ConfigError(f"output accepts only {sorted(OUTPUT_KEYS)}", key="output")
    fmt = fmt or output.get("format", "csv")
    if fmt not in FORMATS or (fmt == "npz" and command != "simulate"):
        raise ConfigError(f"unsupported format {fmt!r} for {command}", key="output.format")

    schema = SCHEMA[command]
    explicit = dict(data.get("params") or {})
    if not isinstance(explicit, dict):
        raise ConfigError("params must be a mapping", key="params")
    explicit.update(overrides or {})
    bad = sorted(set(explicit) - set(schema))
    if bad:
        raise ConfigError(f"unknown parameter for {command}; allowed: {sorted(schema)}", key=f"params.{bad[0]}")

    raw = {k: f.default for k, f in schema.items()}
    if fixture_name:
        fx = get_fixture(fixture_name)
        raw.update({k: v for k, v in fx.items() if k in schema})
    raw.update(explicit)

    values = {}
    for k, f in schema.items():
        try:
            values[k] = parse_value(f, raw[k])
        except UnitError as exc:
            raise ConfigError(str(exc), key=f"params.{k}") from exc

    return RunConfig(
        command=command,
        fixture=fixture_name,
        seed=seed,
        jobs=jobs,
        params={k: v for k, v in raw.items() if v is not None},
        output_path=out if out is not None else output.get("path"),
        output_format=fmt,
        plot=bool(plot if plot is not None else data.get("plot", False)),
        values=values,
    )
