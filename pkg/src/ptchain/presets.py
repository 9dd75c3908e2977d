"""Parameter sets behind the published transmission and phase figures.

Every preset uses E0 = 0, t0 = v0 = 1, gamma in {0, 0.1, 0.3, 0.5} and a
4001-point grid on (-1.99, 1.99).  Where a figure caption and the
accompanying discussion disagree, the discussion wins.  ``fig2b-caption``
keeps the caption's reading of panel (b), t_c = 1.0 at zero flux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CircuitSpec, make_circuit

GAMMAS = (0.0, 0.1, 0.3, 0.5)
OMEGA_RANGE = (-1.99, 1.99, 4001)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Preset:
    name: str
    n: int
    phi: float
    t_c: float = 0.5
    delta: float = 0.0
    gammas: tuple = GAMMAS
    kind: str = "transmission"     # or "phase"

    def template(self) -> CircuitSpec:
        return make_circuit(self.n, t_c=self.t_c, center_delta=self.delta, phi=self.phi)

    def omega_grid(self) -> np.ndarray:
        lo, hi, points = OMEGA_RANGE
        return np.linspace(lo, hi, points)


PRESETS: dict[str, Preset] = {p.name: p for p in (
    Preset("fig2a", 2, 0.0),
    Preset("fig2b", 2, TWO_PI),
    Preset("fig2b-caption", 2, 0.0, t_c=1.0),
    Preset("fig2c", 2, math.pi),
    Preset("fig2d", 2, TWO_PI),
    Preset("fig3a", 3, 0.0),
    Preset("fig3b", 3, TWO_PI),
    Preset("fig3c", 3, 0.0, delta=0.5),
    Preset("fig3d", 3, TWO_PI, delta=0.5),
    Preset("fig4a", 4, 0.0),
    Preset("fig4b", 4, TWO_PI),
    Preset("fig4c", 5, 0.0),
    Preset("fig4d", 5, TWO_PI),
    Preset("fig5a", 2, 0.0, kind="phase"),
    Preset("fig5b", 3, 0.0, delta=0.5, kind="phase"),
    Preset("fig5c", 4, 0.0, kind="phase"),
    Preset("fig5d", 5, 0.0, kind="phase"),
)}

FIGURE_IDS = tuple(k for k in PRESETS if k != "fig2b-caption")


def get(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown figure id {name!r}; choose from {', '.join(PRESETS)}") from None
