"""Scenario configuration: a small ``key = value`` text format.

Grammar (one assignment per line)::

    # comment                      (also allowed after a value)
    scenario = cauchy
    medium.epsilon = 1.0
    initial.kind = swirl
    eval.points = 0.3, 0.2, 0.1; 1.5, 0, 0
    eval.grid = -2:2:5, -2:2:5, 0:0:1

Keys are dotted names from :data:`SCHEMA`; values are typed as floats,
integers, booleans (``true``/``false``), strings, complex 3-vectors
(``1, 0.5j, 0``), point lists (vectors separated by ``;``) or grid specs
(``lo:hi:count`` per axis). Unknown keys, duplicates, type mismatches and
missing required keys are reported with the line and key at fault.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .field import Medium
from .quadrature import BallBudget

SCENARIO_KINDS = ("cauchy", "mono", "stationary", "shock-check", "oracle", "compare", "examples")
SOURCE_KINDS = ("none", "gaussian-ball", "uniform-ball", "rotating-ball", "point-charge-birth",
                "plane-shock")
INITIAL_KINDS = ("none", "swirl", "custom-grid-file")


def _to_float(text):
    return float(text)


def _to_int(text):
    return int(text)


def _to_bool(text):
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"expected true or false, got {text!r}")


def _to_complex(text):
    return complex(text.replace(" ", ""))


def _to_vector(text):
    parts = [p for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 3 comma-separated components, got {len(parts)}")
    return tuple(_to_complex(p) for p in parts)


def _to_points(text):
    pts = []
    for chunk in text.split(";"):
        if chunk.strip():
            v = _to_vector(chunk)
            if any(c.imag != 0 for c in v):
                raise ValueError("point coordinates must be real")
            pts.append(tuple(c.real for c in v))
    if not pts:
        raise ValueError("empty point list")
    return tuple(pts)


def _to_grid(text):
    axes = []
    for spec in text.split(","):
        bits = spec.split(":")
        if len(bits) != 3:
            raise ValueError(f"grid axis must be lo:hi:count, got {spec.strip()!r}")
        lo, hi, n = float(bits[0]), float(bits[1]), int(bits[2])
        if n < 1:
            raise ValueError("grid dims must be >= 1")
        axes.append((lo, hi, n))
    if len(axes) != 3:
        raise ValueError("grid needs three axes")
    return tuple(axes)


def _fmt_num(v):
    return repr(float(v))


def _fmt_complex(z):
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return repr(z).strip("()")


_PARSE = {
    "float": _to_float, "int": _to_int, "bool": _to_bool, "str": str.strip,
    "vector": _to_vector, "points": _to_points, "grid": _to_grid,
}

_FORMAT = {
    "float": _fmt_num,
    "int": lambda v: str(int(v)),
    "bool": lambda v: "true" if v else "false",
    "str": str,
    "vector": lambda v: ", ".join(_fmt_complex(c) for c in v),
    "points": lambda v: "; ".join(", ".join(_fmt_num(c) for c in p) for p in v),
    "grid": lambda v: ", ".join(f"{_fmt_num(lo)}:{_fmt_num(hi)}:{n}" for lo, hi, n in v),
}

#: key -> (type, default); a default of ``...`` marks a required key
SCHEMA = {
    "scenario": ("str", ...),
    "medium.epsilon": ("float", 1.0),
    "medium.mu": ("float", 1.0),
    "source.kind": ("str", "none"),
    "source.q": ("float", 1.0),
    "source.sigma": ("float", 0.1),
    "source.mollifier": ("str", "isotropic"),
    "source.radius": ("float", 1.0),
    "source.rho0": ("float", 3.0),
    "source.omega": ("float", 1.0),
    "source.p": ("vector", (0j, 0j, 1 + 0j)),
    "source.t0": ("float", 1.0),
    "source.width": ("float", 1.0),
    "source.normal": ("vector", (0j, 0j, 1 + 0j)),
    "source.amplitude": ("vector", (1 + 0j, 1j, 0j)),
    "source.background": ("vector", (0j, 0j, 0j)),
    "source.project": ("bool", True),
    "initial.kind": ("str", "none"),
    "initial.radius": ("float", 1.0),
    "initial.power": ("int", 5),
    "initial.v": ("vector", (1 + 0j, 0.5j, 0j)),
    "initial.file": ("str", ""),
    "eval.t": ("float", 1.0),
    "eval.points": ("points", None),
    "eval.grid": ("grid", None),
    "quadrature.n_theta": ("int", 32),
    "quadrature.n_phi": ("int", 48),
    "quadrature.n_r": ("int", 32),
    "quadrature.max_nodes": ("int", 4_000_000),
    "quadrature.step": ("float", 0.0),
    "oracle.n": ("int", 64),
    "oracle.box": ("float", 8.0),
    "oracle.steps": ("int", 8),
    "oracle.region_radius": ("float", 0.0),
    "check.sommerfeld": ("bool", True),
    "output.table": ("str", "field.csv"),
    "output.report": ("str", "report.json"),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated scenario: every key of :data:`SCHEMA` with its value."""

    values: dict = field(default_factory=dict)
    base_dir: str = "."

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def kind(self):
        return self.values["scenario"]

    @property
    def medium(self):
        return Medium(self["medium.epsilon"], self["medium.mu"])

    @property
    def budget(self):
        return BallBudget(self["quadrature.n_theta"], self["quadrature.n_phi"],
                          self["quadrature.n_r"], self["quadrature.max_nodes"])

    def resolve(self, path):
        p = Path(path)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def eval_points(self):
        """Evaluation points as an ``(K, 3)`` array (grid first, then the point list)."""
        out = []
        grid = self.values.get("eval.grid")
        if grid is not None:
            axes = [np.linspace(lo, hi, n) for lo, hi, n in grid]
            X = np.meshgrid(*axes, indexing="ij")
            out.append(np.stack([g.ravel() for g in X], axis=-1))
        pts = self.values.get("eval.points")
        if pts is not None:
            out.append(np.asarray(pts, dtype=float))
        if not out:
            return np.zeros((0, 3))
        return np.concatenate(out)

    def with_values(self, **updates):
        vals = dict(self.values)
        for k, v in updates.items():
            vals[k.replace("__", ".")] = v
        return ScenarioConfig(vals, self.base_dir)

    def __eq__(self, other):
        return isinstance(other, ScenarioConfig) and serialize(self) == serialize(other)

    def __hash__(self):
        return hash(serialize(self))


def _strip_comment(line):
    return line.split("#", 1)[0].strip()


def parse_config(text, base_dir=".", check_files=True):
    """Parse and validate configuration text."""
    values = {}
    seen_line = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in SCHEMA:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"duplicate key (first set on line {seen_line[key]})", key=key, line=lineno)
        typ = SCHEMA[key][0]
        try:
            values[key] = _PARSE[typ](val)
        except ValueError as exc:
            raise ConfigError(f"expected {typ}: {exc}", key=key, line=lineno) from None
        seen_line[key] = lineno
    for key, (typ, default) in SCHEMA.items():
        if key not in values:
            if default is ...:
                raise ConfigError("missing required key", key=key)
            values[key] = default
    cfg = ScenarioConfig(values, str(base_dir))
    validate(cfg, seen_line, check_files)
    return cfg


def validate(cfg: ScenarioConfig, lines=None, check_files=True):
    lines = lines or {}

    def fail(msg, key):
        raise ConfigError(msg, key=key, line=lines.get(key))

    v = cfg.values
    if v["scenario"] not in SCENARIO_KINDS:
        fail(f"scenario must be one of {', '.join(SCENARIO_KINDS)}", "scenario")
    for name in ("epsilon", "mu"):
        key = f"medium.{name}"
        if not (np.isfinite(v[key]) and v[key] > 0):
            fail(f"medium.{name} must be > 0", key)
    if v["source.kind"] not in SOURCE_KINDS:
        fail(f"source.kind must be one of {', '.join(SOURCE_KINDS)}", "source.kind")
    if v["initial.kind"] not in INITIAL_KINDS:
        fail(f"initial.kind must be one of {', '.join(INITIAL_KINDS)}", "initial.kind")
    if v["source.mollifier"] not in ("isotropic", "split"):
        fail("source.mollifier must be isotropic or split", "source.mollifier")
    for key in ("source.sigma", "source.radius", "source.omega", "source.width", "initial.radius",
                "oracle.box"):
        if not v[key] > 0:
            fail(f"{key} must be > 0", key)
    for key in ("quadrature.n_theta", "quadrature.n_phi", "quadrature.n_r", "quadrature.max_nodes",
                "oracle.steps", "initial.power"):
        if v[key] < 1:
            fail(f"{key} must be >= 1", key)
    if v["quadrature.step"] < 0:
        fail("quadrature.step must be >= 0 (0 selects the default)", "quadrature.step")
    n = v["oracle.n"]
    if n < 8 or n & (n - 1):
        fail("oracle.n must be a power of two >= 8", "oracle.n")
    if v["oracle.region_radius"] < 0:
        fail("oracle.region_radius must be >= 0", "oracle.region_radius")
    if v["initial.kind"] == "custom-grid-file":
        if not v["initial.file"]:
            fail("custom-grid-file needs initial.file", "initial.file")
        if check_files and not cfg.resolve(v["initial.file"]).is_file():
            fail(f"file not found: {v['initial.file']}", "initial.file")


def serialize(cfg: ScenarioConfig):
    """Canonical text form; ``parse_config(serialize(cfg))`` equals ``cfg``."""
    lines = []
    for key, (typ, _default) in SCHEMA.items():
        val = cfg.values.get(key)
        if val is None:
            continue
        lines.append(f"{key} = {_FORMAT[typ](val)}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: ScenarioConfig):
    return hashlib.sha256(serialize(cfg).encode("utf-8")).hexdigest()


def load_config(path, check_files=True):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ConfigError(f"config file {path} is not UTF-8") from None
    return parse_config(text, base_dir=p.parent, check_files=check_files)
