"""Self-verification suite run by ``ptchain verify``.

Each check compares the engine against an independent reference and
returns its tolerance, the observed worst case and where that worst case
occurred.  The references are the closed forms, the analytic spectrum, and
exact identities.

The amplitude identity is checked in its exact form, ``T = |tau_reverse|^2``.
The forward amplitude, which reproduces the closed-form sign of the
``gamma sin(phi/2)`` term, differs from it whenever ``gamma sin(phi/2) != 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis, analytic, molecular, negf, presets
from .model import Allocation, ChainSpec, make_circuit

GRID = np.linspace(-1.99, 1.99, 4001)
GAMMAS = (0.0, 0.1, 0.3, 0.5)
PHIS = (0.0, 0.5 * math.pi, math.pi, 2.0 * math.pi)


@dataclass(frozen=True)
class CheckResult:
    name: str
    tolerance: float
    worst: float
    passed: bool
    where: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<24} tol={self.tolerance:.1e}  worst={self.worst:.3e}  {self.where}"


def _result(name: str, tol: float, worst: float, where: str, ok: bool | None = None) -> CheckResult:
    return CheckResult(name, tol, float(worst), bool(worst < tol) if ok is None else ok, where)


def _oracle(n: int, e2_values, tol: float = 1e-12) -> CheckResult:
    worst, where = 0.0, ""
    closed = analytic.tau_n2 if n == 2 else analytic.tau_n3
    for e2 in e2_values:
        for g in GAMMAS:
            for phi in PHIS:
                spec = make_circuit(n, gamma=g, phi=phi, center_delta=e2)
                tau = negf.transmission_amplitude(spec, GRID)
                ref = closed(analytic.ClosedFormParams(gamma=g, phi=phi, e2=e2), GRID)
                diff = np.abs(np.abs(tau) ** 2 - np.abs(ref) ** 2)
                k = int(np.argmax(diff))
                if diff[k] >= worst:
                    worst, where = diff[k], f"gamma={g} phi={phi:.4f} E2={e2} omega={GRID[k]:.5f}"
    return _result(f"oracle_n{n}", tol, worst, where)


def check_oracle_n2() -> CheckResult:
    return _oracle(2, (0.0,))


def check_oracle_n3() -> CheckResult:
    return _oracle(3, (0.0, 0.5))


def check_trace_identity(samples: int = 100, seed: int = 7, tol: float = 1e-12) -> CheckResult:
    """``Tr[Gamma_L G^a Gamma_R G^r] = |tau_reverse|^2`` on random circuits."""
    rng = np.random.default_rng(seed)
    worst, where = 0.0, ""
    for _ in range(samples):
        n = int(rng.integers(2, 7))
        g, phi = rng.uniform(0, 0.5), rng.uniform(0, 2 * math.pi)
        spec = make_circuit(n, gamma=g, phi=phi)
        w = rng.uniform(-1.99, 1.99, 8)
        T, _, tau_rev = negf.evaluate(spec, w)
        diff = np.abs(T - np.abs(tau_rev) ** 2) / np.maximum(1.0, np.abs(T))
        k = int(np.argmax(diff))
        if diff[k] >= worst:
            worst, where = diff[k], f"n={n} gamma={g:.3f} phi={phi:.3f} omega={w[k]:.4f}"
    return _result("trace_identity", tol, worst, where)


def _preset_series(gammas=None):
    for p in presets.PRESETS.values():
        yield p, analysis.sweep(p.template(), gammas or p.gammas, [p.phi], p.omega_grid())


def check_gauge_invariance(tol: float = 1e-12) -> CheckResult:
    worst, where = 0.0, ""
    for p, series in _preset_series():
        for s in series:
            shifted = s.spec.with_allocation(Allocation.LEFT_SHIFTED)
            diff = np.abs(negf.transmission(shifted, s.omega) - s.T)
            k = int(np.argmax(diff))
            if diff[k] >= worst:
                worst, where = diff[k], f"{p.name} gamma={s.gamma} omega={s.omega[k]:.5f}"
    return _result("gauge_invariance", tol, worst, where)


def check_unitarity(tol: float = 1e-12) -> CheckResult:
    """``-tol <= T <= 1 + tol`` on every Hermitian (gamma = 0) preset sweep."""
    worst, where = 0.0, ""
    for p, series in _preset_series(gammas=(0.0,)):
        s = series[0]
        excess = np.maximum(s.T - 1.0, -s.T)
        k = int(np.argmax(excess))
        if excess[k] >= worst:
            worst, where = excess[k], f"{p.name} omega={s.omega[k]:.5f} T={s.T[k]:.6g}"
    return _result("unitarity", tol, worst, where)


def check_decoupling_parity() -> CheckResult:
    bad = []
    for n in range(2, 9):
        for phi in (0.0, 2 * math.pi):
            got = molecular.classify_decoupled(make_circuit(n, phi=phi))
            even = (n % 2 == 1) == (phi == 0.0)
            expected = {m for m in range(1, n + 1) if (m % 2 == 0) == even}
            if got != expected:
                bad.append(f"n={n} phi={phi:.3f} got={sorted(got)}")
    return _result("decoupling_parity", 0.5, float(len(bad)), "; ".join(bad) or "N=2..8, phi in {0, 2pi}")


def _zero_cases():
    """``(label, spec builder(gamma), expected zeros, exact)`` for the antiresonance checks."""
    r2 = math.sqrt(2.0) * 0.5
    tau = 2 * math.pi
    return [
        ("n2 phi=0", lambda g: make_circuit(2, gamma=g), [-0.5], True),
        ("n2 phi=2pi", lambda g: make_circuit(2, gamma=g, phi=tau), [0.5], True),
        ("n3 E2=.5 phi=0", lambda g: make_circuit(3, gamma=g, center_delta=0.5), [0.0, 0.5], True),
        ("n3 E2=.5 phi=2pi", lambda g: make_circuit(3, gamma=g, center_delta=0.5, phi=tau), [-0.5, 1.0], True),
        ("n4 phi=0", lambda g: make_circuit(4, gamma=g), [0.5], False),
        ("n4 phi=2pi", lambda g: make_circuit(4, gamma=g, phi=tau), [-0.5], False),
        ("n5 phi=0", lambda g: make_circuit(5, gamma=g), [-r2, r2], False),
        ("n5 phi=2pi", lambda g: make_circuit(5, gamma=g, phi=tau), [0.0], False),
    ]


def antiresonance_errors(gamma: float):
    """Per case: worst ``T(zero)`` for exact cases, worst position error for refined ones."""
    out = []
    for label, build, zeros, exact in _zero_cases():
        spec = build(gamma)
        if exact:
            out.append((label, "T", float(np.max(np.abs(negf.transmission(spec, np.array(zeros)))))))
        else:
            found = [w for w, _ in analysis.find_antiresonances(analysis.evaluate_series(spec, GRID))]
            err = max((min((abs(w - z) for w in found), default=math.inf) for z in zeros))
            out.append((label, "dw", err))
    return out


def check_antiresonances(gammas=(0.1, 0.3, 0.5)) -> CheckResult:
    """Zeros at the quoted positions for ``gamma > 0``.

    At gamma = 0 several of these zeros coincide with a decoupled level and
    cancel against its pole, so gamma = 0 is not part of this check.
    """
    worst_t, worst_w, where = 0.0, 0.0, ""
    for g in gammas:
        for label, kind, err in antiresonance_errors(g):
            if kind == "T" and err >= worst_t:
                worst_t = err
            if kind == "dw" and err >= worst_w:
                worst_w, where = err, f"{label} gamma={g}"
    ok = worst_t < 1e-12 and worst_w < 1e-6
    return CheckResult("antiresonance_positions", 1e-6, max(worst_w, worst_t), ok,
                       f"max T(zero)={worst_t:.2e}, max |dw|={worst_w:.2e} ({where})")


def check_eigenvalues(tol: float = 1e-10) -> CheckResult:
    worst, where = 0.0, ""
    for n in range(1, 9):
        chain = make_circuit(n).chain if n > 1 else ChainSpec([0.0], [])
        num = molecular.eigendecompose_chain(chain).energies
        ref = molecular.uniform_chain_eigensystem(n).energies
        d = float(np.max(np.abs(num - ref)))
        if d >= worst:
            worst, where = d, f"uniform n={n}"
    for chain, ref, label in (
        (make_circuit(3, center_delta=0.5).chain, [-0.5, 0.0, 1.0], "n3 delta=0.5"),
        (make_circuit(2, gamma=0.3).chain, [-0.4, 0.4], "n2 gamma=0.3"),
    ):
        d = float(np.max(np.abs(molecular.eigendecompose_chain(chain).energies - np.array(ref))))
        if d >= worst:
            worst, where = d, label
    return _result("eigenvalues", tol, worst, where)


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "oracle_n2": check_oracle_n2,
    "oracle_n3": check_oracle_n3,
    "trace_identity": check_trace_identity,
    "gauge_invariance": check_gauge_invariance,
    "decoupling_parity": check_decoupling_parity,
    "antiresonance_positions": check_antiresonances,
    "unitarity": check_unitarity,
    "eigenvalues": check_eigenvalues,
}


def run_all(names=None) -> list[CheckResult]:
    return [CHECKS[name]() for name in (names or CHECKS)]
