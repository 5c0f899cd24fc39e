"""Run configuration, validation diagnostics, and result persistence.

Config files are flat sectioned key=value text (diff-friendly, no nesting):

    [bounds]
    dim = 3
    rho = 1e-4
    a = 0.1
    sweep = Y=1e-9:1e-4:50

Every emitted file carries the schema version; loaders reject unknown major
versions.  JSON floats use shortest round-trip decimals (bit-exact reload),
CSV numbers are written with repr for the same reason.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

from . import SCHEMA_VERSION


class ConfigError(ValueError):
    pass


EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_CONFIG = 2
EXIT_IO = 3


@dataclass
class SweepSpec:
    """lo:hi:n sweep of a named parameter, log-spaced by default."""

    name: str
    lo: float
    hi: float
    n: int
    log: bool = True

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        # form: NAME=lo:hi:n  (append ":lin" for a linear sweep)
        if "=" not in text:
            raise ConfigError(f"sweep spec {text!r} must look like Y=lo:hi:n")
        name, rest = text.split("=", 1)
        parts = rest.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError(f"sweep spec {text!r} must look like Y=lo:hi:n")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        log = True
        if len(parts) == 4:
            if parts[3] not in ("lin", "log"):
                raise ConfigError(f"sweep scale must be lin or log, got {parts[3]!r}")
            log = parts[3] == "log"
        if not (lo < hi):
            raise ConfigError(f"sweep bounds must be ordered: {text!r}")
        if n < 1:
            raise ConfigError("sweep needs at least one point")
        if log and lo <= 0:
            raise ConfigError("log sweep needs positive bounds")
        return cls(name.strip(), lo, hi, n, log)

    def values(self):
        import numpy as np
        if self.n == 1:
            return np.array([self.lo])
        if self.log:
            return np.geomspace(self.lo, self.hi, self.n)
        return np.linspace(self.lo, self.hi, self.n)


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    sweep: SweepSpec | None = None
    out: str | None = None
    seed: int = 0
    workers: int = 1
    schema_version: str = SCHEMA_VERSION

    def get(self, key, default=None):
        return self.params.get(key, default)


def parse_config_file(path) -> dict:
    """Sectioned key=value text -> {section: {key: raw string}}."""
    sections: dict = {}
    current = None
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip()
                sections.setdefault(current, {})
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            if current is None:
                raise ConfigError(f"{path}:{lineno}: key outside any [section]")
            key, val = (s.strip() for s in line.split("=", 1))
            sections[current][key] = val
    return sections


_POSITIVE = {"rho", "a", "mu", "N", "L", "r", "R0", "s", "ell", "nu", "side"}
_NONNEGATIVE = {"coupling", "v0", "t"}   # zero is physical (ideal gas etc.)
_CHOICES = {
    "dim": ("2", "3"),
    "kind": ("hard_core", "soft_sphere", "tabulated"),
    "trap": ("harmonic", "homogeneous_power", "box"),
    "transverse": ("harmonic", "hard_wall"),
    "functional": ("full", "gp1d", "tf1d", "ll_no_grad", "gt"),
    "mode": ("foldy", "dyson", "local", "bogolubov"),
}


def validate_params(section: str, params: dict) -> list[str]:
    """Return every violated constraint (named field paths), without
    running anything."""
    problems = []
    for key, raw in params.items():
        if key in ("sweep",):
            try:
                SweepSpec.parse(raw if "=" in str(raw) else f"Y={raw}")
            except ConfigError as exc:
                problems.append(f"{section}.{key}: {exc}")
            continue
        if key in _CHOICES:
            if str(raw) not in _CHOICES[key]:
                problems.append(
                    f"{section}.{key}: {raw!r} not one of {_CHOICES[key]}")
            continue
        if key in _POSITIVE or key in _NONNEGATIVE:
            try:
                val = float(raw)
            except (TypeError, ValueError):
                problems.append(f"{section}.{key}: not a number: {raw!r}")
                continue
            if key in _POSITIVE and (not math.isfinite(val) or val <= 0):
                problems.append(f"{section}.{key}: must be positive, got {raw}")
            elif key in _NONNEGATIVE and (not math.isfinite(val) or val < 0):
                problems.append(f"{section}.{key}: must be nonnegative, got {raw}")
    # cross-field constraints
    if "b" in params and "a" in params:
        try:
            if float(params["b"]) <= float(params["a"]):
                problems.append(f"{section}.b: upper bound requires b > a")
        except (TypeError, ValueError):
            pass
    return problems


@dataclass
class ResultRecord:
    """Inputs echo + outputs + provenance; serialization round-trips
    losslessly through JSON (repr-float encoding)."""

    subcommand: str
    inputs: dict
    outputs: dict
    provenance: dict
    schema_version: str = SCHEMA_VERSION
    timestamp: float = field(default_factory=time.time)

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "provenance": self.provenance,
            "timestamp": self.timestamp,
        }
        return json.dumps(payload, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        payload = json.loads(text)
        check_schema(payload.get("schema_version", ""))
        return cls(payload["subcommand"], payload["inputs"], payload["outputs"],
                   payload["provenance"], payload["schema_version"],
                   payload["timestamp"])


def check_schema(version: str) -> None:
    if not version:
        raise ConfigError("missing schema_version")
    major = str(version).split(".", 1)[0]
    ours = SCHEMA_VERSION.split(".", 1)[0]
    if major != ours:
        raise ConfigError(
            f"unsupported schema major version {version!r} (expected {ours}.x)")


def _fmt_cell(x) -> str:
    if hasattr(x, "item"):            # numpy scalar -> shortest round trip
        return repr(float(x))
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(f"# schema_version={SCHEMA_VERSION}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_cell(x) for x in row) + "\n")


def read_csv(path):
    rows = []
    header = None
    with open(path) as fh:
        first = fh.readline().strip()
        if not first.startswith("# schema_version="):
            raise ConfigError(f"{path}: missing schema_version header")
        check_schema(first.split("=", 1)[1])
        header = fh.readline().strip().split(",")
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(x) for x in line.split(",")])
    return header, rows
