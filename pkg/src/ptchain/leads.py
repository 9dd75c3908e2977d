"""Semi-infinite nearest-neighbour leads: surface Green function, self-energies, broadening."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OmegaOutsideBand
from .model import CircuitSpec, lead_vectors

EDGE_EPS = 1e-9


def check_band(omega, t0: float, edge_eps: float = EDGE_EPS) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    limit = 2.0 * t0 - edge_eps * t0
    if not np.all(np.isfinite(w)) or np.any(np.abs(w) > limit):
        bad = w[~(np.abs(w) <= limit)] if w.ndim else w
        raise OmegaOutsideBand(f"omega {np.ravel(bad)[:3]} outside the lead band |omega| <= {limit}")
    return w


def lead_dos(omega, t0: float = 1.0):
    """``rho0 = sqrt(4 t0^2 - omega^2) / t0^2``."""
    w = check_band(omega, t0)
    rho = np.sqrt((2.0 * t0 - w) * (2.0 * t0 + w)) / t0**2
    return float(rho) if rho.ndim == 0 else rho


def surface_green(omega, t0: float = 1.0):
    """Retarded end-site Green function ``g0 = omega/(2 t0^2) - i rho0/2``."""
    w = check_band(omega, t0)
    g = w / (2.0 * t0**2) - 0.5j * np.sqrt((2.0 * t0 - w) * (2.0 * t0 + w)) / t0**2
    return complex(g) if g.ndim == 0 else g


@dataclass(frozen=True)
class SelfEnergySet:
    sigma_L: np.ndarray
    sigma_R: np.ndarray
    omega: float

    @property
    def total(self) -> np.ndarray:
        return self.sigma_L + self.sigma_R


def self_energy(spec: CircuitSpec, omega: float, lead: str) -> np.ndarray:
    """``Sigma_{jl} = conj(v_j) g0 v_l``; nonzero only on dots 1 and N."""
    g0 = surface_green(float(omega), spec.t0)
    u_l, u_r = lead_vectors(spec)
    u = {"L": u_l, "R": u_r}[lead.upper()]
    return g0 * np.outer(u.conj(), u)


def self_energies(spec: CircuitSpec, omega: float) -> SelfEnergySet:
    return SelfEnergySet(self_energy(spec, omega, "L"), self_energy(spec, omega, "R"), float(omega))


def broadening(sigma: np.ndarray) -> np.ndarray:
    """``Gamma = i (Sigma - Sigma^dagger)``; works on stacks of matrices."""
    sigma = np.asarray(sigma)
    return 1j * (sigma - np.swapaxes(sigma, -1, -2).conj())
