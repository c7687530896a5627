"""Run configuration files, binary field snapshots and CSV time series.

Config files are INI-style documents with the sections and keys listed in
``SCHEMA``; unknown sections or keys are errors.  Snapshot layout, all
little-endian::

    b"GPE2"  uint32 version  uint64 nx  uint64 ny  float64 a, b, c, d
    nx*ny complex samples as interleaved float64 (re, im), x fastest
"""

import configparser
import csv
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import DEFAULT_THRESHOLD_FACTOR, DiagnosticsRecord
from .grid import Field2D, GridError, GridSpec, make_grid
from .model import (CustomData, GaussianData, HatData, ModelSpec, NonlinearitySpec,
                    QuadraticPotential, ZeroPotential)
from .stepper import EvolutionSpec, Scheme

MAGIC = b"GPE2"
VERSION = 1
_HEADER = struct.Struct("<4sIQQdddd")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class SnapshotFormatError(ValueError):
    pass


# section -> key -> (type, default, description)
SCHEMA = {
    "grid": {
        "a": (float, -8.0, "left x bound"),
        "b": (float, 8.0, "right x bound (excluded node)"),
        "c": (float, -8.0, "lower y bound"),
        "d": (float, 8.0, "upper y bound (excluded node)"),
        "nx": (int, 128, "points in x, even and >= 4"),
        "ny": (int, 128, "points in y, even and >= 4"),
    },
    "potential": {
        "kind": (str, "zero", "zero | quadratic"),
        "cx": (float, 1.0, "x^2 coefficient of (cx x^2 + cy y^2)/(2 eps)"),
        "cy": (float, 1.0, "y^2 coefficient"),
        "eps": (float, 1.0, "scale eps > 0"),
    },
    "nonlinearity": {
        "kappa": (float, 1.0, "coupling; > 0 defocusing, < 0 focusing"),
        "p": (float, 3.0, "power, >= 1 (3 = cubic GPE)"),
    },
    "initial": {
        "kind": (str, "gaussian", "gaussian | hat | snapshot"),
        "sigma": (float, 1.0, "Gaussian width parameter"),
        "amplitude": (float, 1.0, "multiplier on the unit-mass Gaussian"),
        "path": (str, "", "snapshot file for kind = snapshot"),
    },
    "evolution": {
        "T": (float, 1.0, "final time"),
        "dt": (float, 0.01, "time step; T/dt must be an integer"),
        "scheme": (str, "strang", "strang | lie"),
        "sample_every": (int, 1, "diagnostics cadence in steps"),
        "snapshot_times": (list, (), "comma-separated times on step boundaries"),
    },
    "output": {
        "directory": (str, "out", "output directory"),
        "timeseries": (bool, True, "write timeseries.csv"),
        "snapshots": (bool, True, "write snapshot files"),
    },
    "blowup": {
        "threshold_factor": (float, DEFAULT_THRESHOLD_FACTOR,
                             "blow-up when max|psi|^2 exceeds this times its initial value"),
    },
}


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    timeseries: bool = True
    snapshots: bool = True


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec
    model: ModelSpec
    evolution: EvolutionSpec
    output: OutputSpec = field(default_factory=OutputSpec)
    threshold_factor: float = DEFAULT_THRESHOLD_FACTOR
    initial_kind: str = "gaussian"
    initial_path: str = ""

    def __eq__(self, other):
        if not isinstance(other, RunConfig):
            return NotImplemented
        return to_flat(self) == to_flat(other)


def _convert(key: str, kind, raw: str):
    raw = raw.strip()
    try:
        if kind is float:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError
            return v
        if kind is int:
            return int(raw)
        if kind is bool:
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError
        if kind is list:
            return tuple(float(x) for x in raw.split(",") if x.strip())
        return raw
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r} as {kind.__name__}") from None


def _format(kind, value) -> str:
    if kind is float:
        return repr(float(value))
    if kind is bool:
        return "true" if value else "false"
    if kind is list:
        return ", ".join(repr(float(v)) for v in value)
    return str(value)


def _flat_defaults() -> dict[str, object]:
    return {f"{s}.{k}": spec[1] for s, keys in SCHEMA.items() for k, spec in keys.items()}


def _key_type(key: str):
    section, _, name = key.partition(".")
    if section not in SCHEMA or name not in SCHEMA[section]:
        raise ConfigError(key, "unknown key")
    return SCHEMA[section][name][0]


def apply_override(values: dict, assignment: str) -> None:
    """Apply one ``section.key=value`` override in place."""
    key, sep, raw = assignment.partition("=")
    key = key.strip()
    if not sep:
        raise ConfigError(key or assignment, "override must look like section.key=value")
    values[key] = _convert(key, _key_type(key), raw)


def _read_sections(text: str) -> dict[str, object]:
    parser = configparser.ConfigParser(interpolation=None, strict=True,
                                       default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("<document>", str(exc).splitlines()[0]) from None
    values = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(section, "unknown section")
        for name, raw in parser.items(section):
            key = f"{section}.{name}"
            values[key] = _convert(key, _key_type(key), raw)
    return values


def _choice(key, value, options):
    value = str(value).lower()
    if value not in options:
        raise ConfigError(key, f"must be one of {', '.join(options)}, got {value!r}")
    return value


def from_flat(values: dict) -> RunConfig:
    """Validate a flat ``{"section.key": value}`` mapping into a RunConfig."""
    v = _flat_defaults()
    for key, value in values.items():
        _key_type(key)
        v[key] = value

    def guard(key, build):
        try:
            return build()
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(key, str(exc)) from None

    for name in ("nx", "ny"):
        n = v[f"grid.{name}"]
        if n < 4 or n % 2:
            raise ConfigError(f"grid.{name}", f"must be even and >= 4, got {n}")
    grid = guard("grid", lambda: make_grid(v["grid.a"], v["grid.b"], v["grid.c"], v["grid.d"],
                                           v["grid.nx"], v["grid.ny"]))

    kind = _choice("potential.kind", v["potential.kind"], ("zero", "quadratic"))
    if kind == "zero":
        potential = ZeroPotential()
    else:
        potential = guard("potential.eps", lambda: QuadraticPotential(
            v["potential.cx"], v["potential.cy"], v["potential.eps"]))

    if v["nonlinearity.p"] < 1:
        raise ConfigError("nonlinearity.p", f"must be >= 1, got {v['nonlinearity.p']}")
    nl = NonlinearitySpec(v["nonlinearity.kappa"], v["nonlinearity.p"])

    ikind = _choice("initial.kind", v["initial.kind"], ("gaussian", "hat", "snapshot"))
    if ikind == "gaussian":
        if not v["initial.sigma"] > 0:
            raise ConfigError("initial.sigma", f"must be > 0, got {v['initial.sigma']}")
        initial = GaussianData(v["initial.sigma"], v["initial.amplitude"])
    elif ikind == "hat":
        if (grid.a, grid.b, grid.c, grid.d) != (-8.0, 8.0, -8.0, 8.0):
            raise ConfigError("initial.kind", "hat initial data requires the [-8, 8]^2 domain")
        initial = HatData()
    else:
        if not v["initial.path"]:
            raise ConfigError("initial.path", "required for kind = snapshot")
        initial = CustomData(np.empty(0))

    scheme = _choice("evolution.scheme", v["evolution.scheme"], ("strang", "lie"))
    evolution = guard("evolution", lambda: EvolutionSpec(
        v["evolution.T"], v["evolution.dt"], Scheme(scheme), v["evolution.sample_every"],
        tuple(v["evolution.snapshot_times"])))

    if not v["blowup.threshold_factor"] > 0:
        raise ConfigError("blowup.threshold_factor", "must be > 0")
    output = OutputSpec(v["output.directory"], v["output.timeseries"], v["output.snapshots"])
    return RunConfig(grid, ModelSpec(potential, nl, initial), evolution, output,
                     v["blowup.threshold_factor"], ikind, v["initial.path"])


def to_flat(cfg: RunConfig) -> dict[str, object]:
    g, m, e = cfg.grid, cfg.model, cfg.evolution
    pot = m.potential
    flat = _flat_defaults()
    flat.update({
        "grid.a": g.a, "grid.b": g.b, "grid.c": g.c, "grid.d": g.d,
        "grid.nx": g.nx, "grid.ny": g.ny,
        "potential.kind": "quadratic" if isinstance(pot, QuadraticPotential) else "zero",
        "nonlinearity.kappa": m.nonlinearity.kappa, "nonlinearity.p": m.nonlinearity.p,
        "initial.kind": cfg.initial_kind, "initial.path": cfg.initial_path,
        "evolution.T": e.T, "evolution.dt": e.dt, "evolution.scheme": e.scheme.value,
        "evolution.sample_every": e.sample_every,
        "evolution.snapshot_times": tuple(e.snapshot_times),
        "output.directory": cfg.output.directory,
        "output.timeseries": cfg.output.timeseries,
        "output.snapshots": cfg.output.snapshots,
        "blowup.threshold_factor": cfg.threshold_factor,
    })
    if isinstance(pot, QuadraticPotential):
        flat.update({"potential.cx": pot.cx, "potential.cy": pot.cy, "potential.eps": pot.eps})
    if isinstance(m.initial, GaussianData):
        flat.update({"initial.sigma": m.initial.sigma, "initial.amplitude": m.initial.amplitude})
    return flat


def parse_config(text: str, overrides=()) -> RunConfig:
    values = _read_sections(text)
    for assignment in overrides:
        apply_override(values, assignment)
    return from_flat(values)


def load_config(path, overrides=()) -> RunConfig:
    path = Path(path)
    cfg = parse_config(path.read_text(encoding="utf-8"), overrides)
    if cfg.initial_kind == "snapshot":
        snap_path = Path(cfg.initial_path)
        if not snap_path.is_absolute():
            snap_path = path.parent / snap_path
        f = read_snapshot(snap_path)
        if f.grid != cfg.grid:
            raise ConfigError("initial.path", "snapshot grid differs from [grid]")
        cfg = RunConfig(cfg.grid, ModelSpec(cfg.model.potential, cfg.model.nonlinearity,
                                            CustomData(f.values)),
                        cfg.evolution, cfg.output, cfg.threshold_factor,
                        cfg.initial_kind, cfg.initial_path)
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    flat = to_flat(cfg)
    lines = []
    for section, keys in SCHEMA.items():
        lines.append(f"[{section}]")
        for name, (kind, _, _) in keys.items():
            lines.append(f"{name} = {_format(kind, flat[f'{section}.{name}'])}")
        lines.append("")
    return "\n".join(lines)


def describe_schema() -> str:
    out = []
    for section, keys in SCHEMA.items():
        out.append(f"[{section}]")
        for name, (kind, default, doc) in keys.items():
            out.append(f"  {name:<16} {kind.__name__:<6} default {_format(kind, default)!s:<10} {doc}")
    return "\n".join(out)


def write_snapshot(f: Field2D, path) -> None:
    g = f.grid
    header = _HEADER.pack(MAGIC, VERSION, g.nx, g.ny, g.a, g.b, g.c, g.d)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(f.values, dtype="<c16").tobytes())


def read_snapshot(path) -> Field2D:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise SnapshotFormatError(f"{path}: truncated header")
    magic, version, nx, ny, a, b, c, d = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotFormatError(f"{path}: unsupported version {version}")
    expected = _HEADER.size + 16 * nx * ny
    if len(data) != expected:
        raise SnapshotFormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    try:
        grid = make_grid(a, b, c, d, nx, ny)
    except GridError as exc:
        raise SnapshotFormatError(f"{path}: {exc}") from None
    values = np.frombuffer(data, dtype="<c16", offset=_HEADER.size).reshape(ny, nx)
    return Field2D(grid, values.astype(np.complex128), blown_up=not np.isfinite(values).all())


TIMESERIES_COLUMNS = ("t", "mass", "energy", "max_density", "finite")


def write_timeseries(records, path) -> None:
    records = list(records)
    if not records:
        raise ValueError("empty time series")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TIMESERIES_COLUMNS)
        for r in records:
            w.writerow([f"{r.t:.17g}", f"{r.mass:.17g}", f"{r.energy:.17g}",
                        f"{r.max_density:.17g}", "true" if r.finite else "false"])


def read_timeseries(path) -> list[DiagnosticsRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != TIMESERIES_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [DiagnosticsRecord(float(row["t"]), float(row["mass"]), float(row["energy"]),
                                  float(row["max_density"]), row["finite"] == "true")
                for row in reader]
