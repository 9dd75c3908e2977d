"""Retarded Green function of the open chain, transmission and transmission amplitude.

All public functions accept a scalar energy or a 1-D array of energies.  The
work is batched over energies: one stacked LU per call.

A decoupled molecular state sitting exactly on a grid energy makes the
inverse Green function singular (exactly, or up to rounding: pivot ratio
above ``NEAR_SINGULAR_RATIO``) while the amplitude itself stays finite (the
state carries no weight on the leads).  The amplitude is analytic in omega
(the retarded lead function continues analytically off the real axis inside
the band), so the singularity is removable and the value there is the mean
of the amplitude over a small circle around the point.  The trapezoidal rule
on ``LIMIT_NODES`` equispaced nodes converges geometrically in the ratio of
the radius to the distance of the next singularity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import SingularMatrix
from .leads import check_band
from .model import CircuitSpec, chain_hamiltonian, lead_vectors

log = logging.getLogger(__name__)

LIMIT_RADIUS = 1e-2      # in units of t0; shrunk near the band edges
LIMIT_NODES = 64
# a pivot ratio beyond this means the energy sits on a decoupled level up to
# rounding; the matrix is singular in exact arithmetic and the limit is used
NEAR_SINGULAR_RATIO = 1e13


@dataclass(frozen=True)
class GreenFunction:
    gr: np.ndarray
    omega: float

    @property
    def ga(self) -> np.ndarray:
        return advanced(self.gr)


def advanced(gr: np.ndarray) -> np.ndarray:
    """``G^a = (G^r)^dagger``."""
    return np.swapaxes(gr, -1, -2).conj()


def _lead_dos(w: np.ndarray, t0: float) -> np.ndarray:
    # factored radicand: no cancellation near the band edges.  For complex w
    # near the real axis inside the band the principal root is the analytic
    # continuation of the retarded branch.
    return np.sqrt((2.0 * t0 - w) * (2.0 * t0 + w)) / t0**2


def _assemble(spec: CircuitSpec, w: np.ndarray, eta: float = 0.0) -> np.ndarray:
    t0 = spec.t0
    g0 = w / (2.0 * t0**2) - 0.5j * _lead_dos(w, t0)
    u_l, u_r = lead_vectors(spec)
    coupling = np.outer(u_l.conj(), u_l) + np.outer(u_r.conj(), u_r)
    n = spec.n_dots
    h = chain_hamiltonian(spec.chain)
    return ((w + 1j * eta)[:, None, None] * np.eye(n) - h) - g0[:, None, None] * coupling


def assemble_inverse_gr(spec: CircuitSpec, omega, eta: float = 0.0) -> np.ndarray:
    """``[G^r]^{-1} = (omega + i eta) - H_c - Sigma_L - Sigma_R``."""
    w = check_band(omega, spec.t0)
    m = _assemble(spec, np.atleast_1d(w), eta)
    return m[0] if w.ndim == 0 else m


def green_function(spec: CircuitSpec, omega: float, eta: float = 0.0) -> GreenFunction:
    m = assemble_inverse_gr(spec, float(omega), eta)
    return GreenFunction(linalg.invert(m), float(omega))


def invert(m) -> np.ndarray:
    return linalg.invert(m)


def _evaluate(spec: CircuitSpec, w: np.ndarray, eta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Raw (T, tau_LR, tau_RL) with NaN where the inverse Green function is singular."""
    rho = _lead_dos(w, spec.t0)
    gr, singular, ratio = linalg.batched_inverse(_assemble(spec, w, eta))
    singular = singular | (ratio > NEAR_SINGULAR_RATIO)
    u_l, u_r = lead_vectors(spec)
    ga = advanced(gr)
    # Gamma_a = rho * conj(u_a) u_a^T is rank one, so the trace factorises into
    # rho^2 (u_L^T G^a conj(u_R)) (u_R^T G^r conj(u_L)).  Contracting the
    # bond vectors first avoids the O(eps |G|^2) cancellation that a
    # term-by-term matrix product suffers next to a decoupled state.
    trans = (rho**2 * np.einsum("i,bij,j->b", u_l, ga, u_r.conj())
             * np.einsum("i,bij,j->b", u_r, gr, u_l.conj())).real
    tau_lr = rho * np.einsum("i,bij,j->b", u_l, gr, u_r.conj())
    tau_rl = rho * np.einsum("i,bij,j->b", u_r, gr, u_l.conj())
    for arr in (trans, tau_lr, tau_rl):
        arr[singular] = np.nan
    return trans, tau_lr, tau_rl


def _contour_limit(spec: CircuitSpec, w: np.ndarray, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Both amplitudes at the (removable) singular energies ``w`` via circle means."""
    t0 = spec.t0
    radius = np.minimum(LIMIT_RADIUS * t0, 0.5 * (2.0 * t0 - np.abs(w)))
    nodes = np.exp(2j * np.pi * (np.arange(LIMIT_NODES) + 0.5) / LIMIT_NODES)
    z = (w[:, None] + radius[:, None] * nodes[None, :]).ravel()
    _, tau, tau_rev = _evaluate(spec, z, eta)
    if np.any(np.isnan(tau)):
        raise SingularMatrix(f"inverse Green function singular near omega={w}")
    return tau.reshape(w.size, -1).mean(axis=1), tau_rev.reshape(w.size, -1).mean(axis=1)


def evaluate(spec: CircuitSpec, omega, eta: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Transmission and both transmission amplitudes on an energy array.

    Returns ``(T, tau, tau_reverse)``.  ``T`` is the Landauer trace
    ``Tr[Gamma_L G^a Gamma_R G^r]``; ``tau`` carries the left bonds
    unconjugated, ``rho0 * sum v_Lj G_jl conj(v_Rl)``; ``tau_reverse`` is the
    same sum with the leads exchanged, and ``T == |tau_reverse|**2``.
    """
    w = np.atleast_1d(check_band(omega, spec.t0)).astype(float)
    trans, tau, tau_rev = _evaluate(spec, w, eta)
    bad = np.isnan(trans)
    if np.any(bad):
        tau[bad], tau_rev[bad] = _contour_limit(spec, w[bad], eta)
        # T = |tau_reverse|^2 holds identically, and squaring the limit keeps T >= 0
        trans[bad] = np.abs(tau_rev[bad]) ** 2
        log.debug("removable singularity at omega=%s", w[bad])
    return trans, tau, tau_rev


def _scalar_or_array(omega, arr):
    return arr[0].item() if np.ndim(omega) == 0 else arr


def transmission(spec: CircuitSpec, omega, eta: float = 0.0):
    """Landauer transmission ``Tr[Gamma_L G^a Gamma_R G^r]``."""
    return _scalar_or_array(omega, evaluate(spec, omega, eta)[0])


def transmission_amplitude(spec: CircuitSpec, omega, eta: float = 0.0, reverse: bool = False):
    """``tau = rho0 * sum_{j,l in {1,N}} v_Lj G_jl conj(v_Rl)``.

    With ``reverse=True`` the leads swap roles, giving the amplitude whose
    squared modulus is the trace formula.  The two coincide for Hermitian
    chains and for flux 0 or 2*pi.
    """
    _, tau, tau_rev = evaluate(spec, omega, eta)
    return _scalar_or_array(omega, tau_rev if reverse else tau)


def phase_series(spec: CircuitSpec, omega_grid, eta: float = 0.0) -> np.ndarray:
    """Unwrapped ``arg(tau)`` along a strictly increasing energy grid."""
    w = np.asarray(omega_grid, dtype=float)
    if w.ndim != 1 or (w.size > 1 and np.any(np.diff(w) <= 0)):
        raise ValueError("omega grid must be strictly increasing")
    return np.unwrap(np.angle(evaluate(spec, w, eta)[1]))
