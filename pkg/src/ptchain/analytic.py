"""Closed-form transmission amplitudes for the two- and three-dot chains.

These are written out from the explicit 2x2 / 3x3 inverse Green functions
(cofactor expansions, no call into :mod:`ptchain.negf`) so they can serve as
independent oracles for the numeric engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .leads import check_band

# extended precision keeps the near-0/0 ratios next to decoupled states accurate
LD = np.longdouble
LIMIT_STEP = 2e-4
# |det| below this (in units of t0^N) makes num/det a noisy 0/0 in longdouble
LIMIT_DET = 1e-5


@dataclass(frozen=True)
class ClosedFormParams:
    e0: float = 0.0
    t_c: float = 0.5
    gamma: float = 0.0
    e2: float = 0.0
    phi: float = 0.0
    v0: float = 1.0
    t0: float = 1.0

    def __post_init__(self):
        if not (self.t_c > 0 and self.t0 > 0 and self.v0 >= 0):
            raise ValueError("need t_c > 0, t0 > 0, v0 >= 0")


def _lead(p: ClosedFormParams, w):
    """``(g0, rho0)`` of the lead end site."""
    t0 = LD(p.t0)
    rho = np.sqrt(4 * t0 * t0 - w * w) / (t0 * t0)
    return w / (2 * t0 * t0) - 0.5j * rho, rho


def _sigmas(p: ClosedFormParams, w):
    g0, rho = _lead(p, w)
    v2 = LD(p.v0) ** 2
    s11 = 2 * v2 * g0                            # Sigma_11 = Sigma_NN, both leads
    s1n = s11 * np.cos(LD(p.phi) / 2)            # Sigma_1N = Sigma_N1
    return s11, s1n, v2 * rho


def _ratio(fn, p, w):
    num, den = fn(p, w)
    return num / den


def _with_limit(fn, p, omega, order):
    """Evaluate ``num/det``; where ``det`` (nearly) vanishes, take the limit along omega.

    ``order`` is the matrix size; ``det`` is compared with ``LIMIT_DET * t0**order``.

    The limit combines symmetric means at ``omega +/- k h`` (k = 1, 2, 4) by
    two rounds of Richardson extrapolation, cancelling the h^2 and h^4 terms.
    """
    w = np.atleast_1d(check_band(omega, p.t0)).astype(LD)
    num, det = fn(p, w)
    tau = np.empty(w.shape, dtype=np.clongdouble)
    zero = np.abs(det) < LIMIT_DET * LD(p.t0) ** order
    tau[~zero] = num[~zero] / det[~zero]
    if np.any(zero):
        h = LD(LIMIT_STEP * p.t0)
        wz = w[zero]
        m1, m2, m4 = (0.5 * (_ratio(fn, p, wz - k * h) + _ratio(fn, p, wz + k * h)) for k in (1, 2, 4))
        r1, r2 = (4 * m1 - m2) / 3, (4 * m2 - m4) / 3
        tau[zero] = (16 * r1 - r2) / 15
    tau = tau.astype(complex)
    return tau[0].item() if np.ndim(omega) == 0 else tau


def _n2_parts(p: ClosedFormParams, w):
    s11, s12, gamma0 = _sigmas(p, w)
    x = w - LD(p.e0)
    half = LD(p.phi) / 2
    g, t = LD(p.gamma), LD(p.t_c)
    det = (x - s11) ** 2 + g * g - (t + s12) ** 2
    num = 2 * gamma0 * (x * np.cos(half) + g * np.sin(half) + t)
    return num, det


def det_n2(p: ClosedFormParams, omega):
    return complex(_n2_parts(p, LD(omega))[1])


def tau_n2(p: ClosedFormParams, omega):
    """Two-dot amplitude for arbitrary flux."""
    return _with_limit(_n2_parts, p, omega, 2)


def tau_n2_flux2mpi(p: ClosedFormParams, m: int, omega):
    """Two-dot amplitude at flux ``2 m pi`` in its factorised textbook form."""
    def parts(p, w):
        s11, _, gamma0 = _sigmas(p, w)
        x, t, g = w - LD(p.e0), LD(p.t_c), LD(p.gamma)
        c = LD(-1) ** m
        num = 2 * gamma0 * (x * c + t)
        det = (x * x - t * t) + g * g - 2 * s11 * (x + t * c)
        return num, det
    return _with_limit(parts, p, omega, 2)


def _n3_parts(p: ClosedFormParams, w):
    s11, s13, gamma0 = _sigmas(p, w)
    t, g = LD(p.t_c), LD(p.gamma)
    a = w - LD(p.e0) - s11 + 1j * g     # dot 1, level E0 - i gamma
    c = w - LD(p.e0) - s11 - 1j * g     # dot 3, level E0 + i gamma
    b = w - LD(p.e2)
    # cofactor expansion of [[a, -t, -s13], [-t, b, -t], [-s13, -t, c]] along row 1
    det = a * (b * c - t * t) + t * (-t * c - t * s13) - s13 * (t * t + b * s13)
    half = LD(p.phi) / 2
    x = w - LD(p.e0)
    num = 2 * gamma0 * (x * b * np.cos(half) + g * np.sin(half) * b + t * t * (1 - np.cos(half)))
    return num, det


def det_n3(p: ClosedFormParams, omega):
    return complex(_n3_parts(p, LD(omega))[1])


def tau_n3(p: ClosedFormParams, omega):
    """Three-dot amplitude (terminal levels ``E0 -/+ i gamma``, centre ``E2``)."""
    return _with_limit(_n3_parts, p, omega, 3)


def tau_n3_flux2mpi(p: ClosedFormParams, m: int, omega):
    """Three-dot amplitude at flux ``2 m pi`` as the factorised textbook formula."""
    def parts(p, w):
        s11, _, gamma0 = _sigmas(p, w)
        x, y = w - LD(p.e0), w - LD(p.e2)
        t2, g = LD(p.t_c) ** 2, LD(p.gamma)
        sm = LD((0, 1, 0, -1)[m % 4])           # sin(m pi / 2)
        num = 2 * gamma0 * (x * y * LD(-1) ** m + 2 * t2 * sm)
        det = (x * y - 2 * t2) * x + g * g * y - 2 * s11 * (x * y - 2 * t2 * sm * sm)
        return num, det
    return _with_limit(parts, p, omega, 3)


def antiresonance_roots(p: ClosedFormParams, n: int, flux_case: float) -> list[float]:
    """Zeros of the closed-form numerators for flux 0 or 2*pi."""
    two_pi = math.isclose(math.cos(flux_case / 2.0), -1.0, abs_tol=1e-12)
    if not two_pi and not math.isclose(math.cos(flux_case / 2.0), 1.0, abs_tol=1e-12):
        raise ValueError("closed-form roots are tabulated for flux 0 and 2*pi only")
    if n == 2:
        return [p.e0 + p.t_c] if two_pi else [p.e0 - p.t_c]
    if n == 3:
        if not two_pi:
            return sorted({p.e0, p.e2})
        # (w - E0)(w - E2) = 2 t_c^2
        d = p.e2 - p.e0
        big = math.sqrt(d * d + 8.0 * p.t_c**2)
        return [p.e0 + 0.5 * (d - big), p.e0 + 0.5 * (d + big)]
    raise ValueError("closed forms exist for n = 2 and n = 3 only")


def pt_dimer_eta(t_c: float, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Levels and eigenvector columns of [[E0 - i gamma, t_c], [t_c, E0 + i gamma]] (E0 = 0).

    Unbroken regime only (``|gamma| < t_c``); the mixing angle obeys
    ``sin(theta) = gamma / t_c``.
    """
    if abs(gamma) >= t_c:
        raise ValueError("PT-broken regime: |gamma| >= t_c")
    theta = math.asin(gamma / t_c)
    s = math.sqrt(t_c**2 - gamma**2)
    eta = np.array([[1.0, 1.0], [-np.exp(-1j * theta), np.exp(1j * theta)]]) / math.sqrt(2.0)
    return np.array([-s, s], dtype=complex), eta


def detuned_trimer(e0: float, t_c: float, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Levels and eigenvector columns of the uniform 3-dot chain with centre level ``E0 + delta``."""
    big = math.sqrt(delta**2 + 8.0 * t_c**2)
    levels = np.array([e0 + 0.5 * (delta - big), e0, e0 + 0.5 * (delta + big)])
    dm, dp = big - delta, big + delta
    eta = np.array([
        [2 * t_c / math.sqrt(dm), math.sqrt(big), 2 * t_c / math.sqrt(dp)],
        [-math.sqrt(dm), 0.0, math.sqrt(dp)],
        [2 * t_c / math.sqrt(dm), -math.sqrt(big), 2 * t_c / math.sqrt(dp)],
    ]) / math.sqrt(2.0 * big)
    return levels, eta
