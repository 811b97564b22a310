"""Experiment configuration: ``key=value`` files with command-line overrides."""
from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, MalformedValue, UnknownKey
from .evolution import T1_US, T2_US

SCENARIOS = ("ideal", "t1", "t2", "combined", "coherence", "all")


@dataclass(frozen=True)
class ExperimentConfig:
    n_qubits: int = 4
    g: float = 1.0
    t_end: float = 8 * math.pi
    dt: float = 1e-3
    sample_every: int = 10
    t1_us: float = T1_US
    t2_us: float = T2_US
    kappa: float = 1.0
    scenario: str = "all"
    output_dir: str = "results"
    emit_svg: bool = False
    # free-decay window after the t = pi snapshot
    coherence_window: float = 30.0

    def validate(self) -> "ExperimentConfig":
        if not 2 <= self.n_qubits <= 10:
            raise ConfigError(f"n_qubits={self.n_qubits} outside [2, 10]")
        if not 0 < self.dt <= 0.1:
            raise ConfigError(f"dt={self.dt} outside (0, 0.1]")
        if self.t_end <= 0:
            raise ConfigError("t_end must be positive")
        if self.sample_every < 1:
            raise ConfigError("sample_every must be >= 1")
        if self.g <= 0 or self.kappa <= 0:
            raise ConfigError("g and kappa must be positive")
        if self.t1_us <= 0 or self.t2_us <= 0:
            raise ConfigError("coherence times must be positive")
        if self.coherence_window <= 0:
            raise ConfigError("coherence_window must be positive")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario {self.scenario!r} not in {SCENARIOS}")
        return self

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def dumps(self) -> str:
        return "".join(f"{f.name}={_format(getattr(self, f.name))}\n" for f in dataclasses.fields(self))


_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
_PI_RE = re.compile(r"^\s*([-+0-9.eE]*)\s*\*?\s*pi\s*$")


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def _parse_float(text: str) -> float:
    m = _PI_RE.match(text)
    if m:
        coeff = m.group(1)
        return (float(coeff) if coeff not in ("", "+", "-") else float(coeff + "1")) * math.pi
    return float(text)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def coerce(key: str, raw, line: int | None = None):
    if key not in _FIELDS:
        raise UnknownKey(f"unknown key {key!r}", line)
    if not isinstance(raw, str):
        return raw
    kind = _FIELDS[key].type
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return _parse_float(raw)
        if kind == "bool":
            return _parse_bool(raw)
        return raw.strip()
    except ValueError:
        raise MalformedValue(f"cannot parse {key}={raw!r}", line) from None


def parse_lines(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedValue(f"expected key=value, got {line!r}", lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = coerce(key, raw, lineno)
    return values


def parse_config(path=None, overrides: dict | None = None) -> ExperimentConfig:
    """Defaults, then the file at ``path`` (if any), then non-None ``overrides``."""
    values = {}
    if path is not None:
        values.update(parse_lines(Path(path).read_text(encoding="utf-8")))
    for key, raw in (overrides or {}).items():
        if raw is not None:
            values[key] = coerce(key, raw)
    return ExperimentConfig(**values).validate()
