"""Run configuration: dataclass, INI reader/writer and validation.

File layout (every key optional, defaults below)::

    [chain]     n = 2, e0 = 0, t_c = 0.5, delta = 0
    [leads]     t0 = 1
    [coupling]  v0 = 1, phi = 0, allocation = symmetric
    [sweep]     gamma = 0, 0.1, 0.3, 0.5
                omega_min = -1.99, omega_max = 1.99, omega_points = 4001
                threads = 1, out = <unset>
    [analysis]  antiresonance_threshold = 1e-6, peak_prominence = 0.05,
                phase_window = <two grid steps>

``phi`` and ``gamma`` are comma-separated lists.  Angles accept multiples
of pi such as ``pi``, ``2pi``, ``pi/2`` or ``-0.5*pi``.  Precedence is
built-in defaults, then the config file, then command-line flags.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, InvalidSpec, OmegaOutsideBand
from .model import Allocation, CircuitSpec, make_circuit

_PI_TOKEN = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")
_SIGNED_PI = re.compile(r"^\s*([+-])\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(token: str) -> float:
    """``"2pi"`` -> 2*pi, ``"pi/2"`` -> pi/2, ``"1.5"`` -> 1.5."""
    text = token.strip().lower()
    if not text:
        raise ConfigError("empty angle")
    m = _SIGNED_PI.match(text)
    if m:
        value = -math.pi if m.group(1) == "-" else math.pi
        return value / float(m.group(2)) if m.group(2) else value
    m = _PI_TOKEN.match(text)
    if m:
        factor = float(m.group(1)) if m.group(1) else 1.0
        value = factor * math.pi
        return value / float(m.group(2)) if m.group(2) else value
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse angle {token!r}") from None


def parse_float_list(text: str, angle: bool = False) -> tuple[float, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    conv = parse_angle if angle else _to_float
    return tuple(conv(p) for p in parts)


def _to_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"not a number: {text!r}") from None


def parse_omega_range(text: str) -> tuple[float, float, int]:
    """``"a:b:points"`` -> ``(a, b, points)``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"omega range must look like a:b:points, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"bad omega range {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    n: int = 2
    e0: float = 0.0
    t_c: float = 0.5
    delta: float = 0.0
    t0: float = 1.0
    v0: float = 1.0
    allocation: str = "symmetric"
    phis: tuple = (0.0,)
    gammas: tuple = (0.0, 0.1, 0.3, 0.5)
    omega_min: float = -1.99
    omega_max: float = 1.99
    omega_points: int = 4001
    threads: int = 1
    out: str | None = None
    antiresonance_threshold: float = 1e-6
    peak_prominence: float = 0.05
    phase_window: float | None = None

    def validate(self) -> RunConfig:
        """Raise ConfigError on inconsistent settings and OmegaOutsideBand on a bad range."""
        if self.n < 2:
            raise ConfigError(f"n must be >= 2, got {self.n}")
        if not self.phis:
            raise ConfigError("phi list is empty")
        if not self.gammas:
            raise ConfigError("gamma list is empty")
        if self.omega_points < 2:
            raise ConfigError("omega_points must be >= 2")
        if not self.omega_min < self.omega_max:
            raise ConfigError("omega_min must be below omega_max")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.t0 <= 0 or self.t_c <= 0 or self.v0 < 0:
            raise ConfigError("need t0 > 0, t_c > 0 and v0 >= 0")
        if self.delta and self.n % 2 == 0:
            raise ConfigError("center detuning needs an odd number of dots")
        try:
            Allocation(self.allocation)
        except ValueError:
            raise ConfigError(f"unknown allocation {self.allocation!r}") from None
        edge = 2.0 * self.t0
        if not (-edge < self.omega_min and self.omega_max < edge):
            raise OmegaOutsideBand(f"omega range [{self.omega_min}, {self.omega_max}] "
                                   f"must lie strictly inside (-{edge}, {edge})")
        return self

    def template(self) -> CircuitSpec:
        try:
            return make_circuit(self.n, e0=self.e0, t_c=self.t_c, center_delta=self.delta,
                                v0=self.v0, phi=self.phis[0], t0=self.t0,
                                allocation=Allocation(self.allocation))
        except InvalidSpec as exc:
            raise ConfigError(str(exc)) from exc

    def omega_grid(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.omega_points)

    def override(self, **changes) -> RunConfig:
        """Copy with every non-None keyword applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


# section of each field in the INI file
_SECTIONS = {
    "n": "chain", "e0": "chain", "t_c": "chain", "delta": "chain",
    "t0": "leads",
    "v0": "coupling", "allocation": "coupling", "phis": "coupling",
    "gammas": "sweep", "omega_min": "sweep", "omega_max": "sweep", "omega_points": "sweep",
    "threads": "sweep", "out": "sweep",
    "antiresonance_threshold": "analysis", "peak_prominence": "analysis", "phase_window": "analysis",
}
_KEYS = {"phis": "phi", "gammas": "gamma"}


def _convert(name: str, raw: str):
    if name == "phis":
        return parse_float_list(raw, angle=True)
    if name == "gammas":
        return parse_float_list(raw)
    if name in ("n", "omega_points", "threads"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if name in ("allocation", "out"):
        return raw.strip()
    return _to_float(raw)


def from_ini_text(text: str, base: RunConfig | None = None) -> RunConfig:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    known = {(sec, _KEYS.get(name, name)): name for name, sec in _SECTIONS.items()}
    values = {}
    for section in parser.sections():
        if section not in set(_SECTIONS.values()):
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if (section, key) not in known:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            values[known[(section, key)]] = _convert(known[(section, key)], raw)
    return replace(base or RunConfig(), **values)


def load(path: str | Path, base: RunConfig | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return from_ini_text(text, base)


def to_ini_text(cfg: RunConfig) -> str:
    """Serialise losslessly; floats are written with ``repr``."""
    sections: dict[str, list[str]] = {}
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        if isinstance(value, tuple):
            text = ", ".join(repr(float(v)) for v in value)
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        sections.setdefault(_SECTIONS[f.name], []).append(f"{_KEYS.get(f.name, f.name)} = {text}")
    order = ["chain", "leads", "coupling", "sweep", "analysis"]
    return "\n".join(f"[{s}]\n" + "\n".join(sections[s]) + "\n" for s in order if s in sections)
