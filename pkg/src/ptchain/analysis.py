"""Parameter sweeps and spectral feature extraction.

Features are read off the sampled transmission ``T(omega)`` and the
amplitude ``tau(omega)``:

* peaks -- local maxima of T with a minimum prominence;
* antiresonances -- local minima of T, refined by golden-section search, that
  reach below a threshold;
* phase features -- steps of the transmission phase.  The phase is read
  modulo pi, ``theta = arctan(Im tau / Re tau)``, as it is usually plotted.
  A *sharp* step is a jump of theta where the full ``arg tau`` is
  continuous: ``Re tau`` changes sign with ``Im tau`` finite.  A *smooth*
  step is the opposite: tau passes through zero and flips sign, so
  ``arg tau`` jumps by pi while theta stays continuous.  Smooth steps
  therefore sit on antiresonances.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from . import analytic, negf
from .errors import NoInnerChain, UnsupportedCouplingPattern
from .model import CircuitSpec

ANTIRESONANCE_THRESHOLD = 1e-6
PEAK_PROMINENCE = 0.05
REFINE_XTOL = 1e-9
# samples with |tau| below this fraction of max|tau| carry no usable phase
PHASE_FLOOR = 1e-6
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SpectrumSeries:
    """Transmission data for one ``(gamma, phi)`` combination."""

    spec: CircuitSpec
    gamma: float
    phi: float
    omega: np.ndarray
    T: np.ndarray
    tau: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega)
        if w.ndim != 1 or (w.size > 1 and np.any(np.diff(w) <= 0)):
            raise ValueError("omega must be strictly increasing")
        if w.shape != np.shape(self.T) or w.shape != np.shape(self.tau):
            raise ValueError("omega, T and tau must have the same length")

    def __len__(self) -> int:
        return len(self.omega)

    @property
    def reduced_phase(self) -> np.ndarray:
        """``arg(tau)`` folded into ``[-pi/2, pi/2)``."""
        return _fold_half(np.angle(self.tau))

    def samples(self):
        """Rows ``(omega, T, Re tau, Im tau, phase)``."""
        return zip(self.omega, self.T, self.tau.real, self.tau.imag, self.phase)


@dataclass(frozen=True)
class Correlation:
    kind: str
    omega: float
    value: float
    nearest_level: float | None
    distance: float | None


@dataclass
class AnalysisReport:
    gamma: float
    phi: float
    peaks: list = field(default_factory=list)
    antiresonances: list = field(default_factory=list)
    phase_features: list = field(default_factory=list)
    level_correlation: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)


def evaluate_series(spec: CircuitSpec, omega_grid, gamma: float | None = None,
                    phi: float | None = None) -> SpectrumSeries:
    w = np.asarray(omega_grid, dtype=float)
    if w.ndim != 1 or (w.size > 1 and np.any(np.diff(w) <= 0)):
        raise ValueError("omega must be strictly increasing")
    T, tau, _ = negf.evaluate(spec, w)
    phase = np.unwrap(np.angle(tau)) if w.size else np.zeros(0)
    gamma = float(-spec.chain.onsite[0].imag) if gamma is None else float(gamma)
    phi = spec.coupling.flux if phi is None else float(phi)
    return SpectrumSeries(spec, gamma, phi, w, T, tau, phase)


def sweep(template: CircuitSpec, gammas, phis, omega_grid, threads: int = 1) -> list[SpectrumSeries]:
    """One series per ``(gamma, phi)``, gamma-major, each over the full grid.

    ``gamma`` replaces the terminal levels' imaginary parts and ``phi`` the flux.
    With ``threads > 1`` the series are computed concurrently; the output
    order does not change.
    """
    combos = [(float(g), float(p)) for g in gammas for p in phis]

    def run(combo):
        g, p = combo
        return evaluate_series(template.with_gain_loss(g).with_flux(p), omega_grid, g, p)

    if threads > 1 and len(combos) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, combos))
    return [run(c) for c in combos]


# --- antiresonances -----------------------------------------------------------

def golden_section_min(f, lo: np.ndarray, hi: np.ndarray, xtol: float = REFINE_XTOL):
    """Minimise ``f`` on each interval ``[lo_i, hi_i]`` at once.

    ``f`` maps an array of abscissae to an array of values. Returns
    ``(x*, f(x*))``.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = np.split(f(np.concatenate([c, d])), 2)
    while np.any(b - a > xtol):
        left = fc < fd                        # minimum lies in [a, d]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        d_new = np.where(left, c, a + _INV_GOLDEN * (b - a))
        c_new = np.where(left, b - _INV_GOLDEN * (b - a), d)
        fresh = np.where(left, c_new, d_new)
        f_fresh = f(fresh)
        fd, fc = np.where(left, fc, f_fresh), np.where(left, f_fresh, fd)
        c, d = c_new, d_new
    x = np.where(fc < fd, c, d)
    return x, np.minimum(fc, fd)


def find_antiresonances(series: SpectrumSeries, threshold: float = ANTIRESONANCE_THRESHOLD,
                        refine: bool = True) -> list[tuple[float, float]]:
    """Local minima of T that fall below ``threshold``.

    With ``refine`` (the default) each interior minimum is first refined by a
    golden-section search over its two neighbouring grid intervals to
    ``|d omega| < 1e-9``, and the threshold is applied to the refined value.
    A zero falling between grid points then still registers, even though
    its grid samples may be orders of magnitude above the threshold.

    A series lying entirely below ``threshold`` is fully blocked.  Its local
    minima are rounding noise, so none is reported.
    """
    T = np.asarray(series.T)
    if T.size < 3 or T.max() < threshold:
        return []
    idx, _ = scipy.signal.find_peaks(-T)
    if idx.size == 0:
        return []
    w = series.omega
    if not refine:
        keep = T[idx] < threshold
        return [(float(w[i]), float(T[i])) for i in idx[keep]]

    def f(x):
        return negf.evaluate(series.spec, x)[0]

    x, fx = golden_section_min(f, w[idx - 1], w[idx + 1])
    # keep a grid sample if it is already better than the search result
    better = T[idx] <= fx
    x = np.where(better, w[idx], x)
    fx = np.where(better, T[idx], fx)
    return [(float(xi), float(fi)) for xi, fi in zip(x, fx) if fi < threshold]


def find_peaks(series: SpectrumSeries, prominence: float = PEAK_PROMINENCE) -> list[tuple[float, float]]:
    """Local maxima of T standing at least ``prominence`` above the neighbouring minima."""
    idx, _ = scipy.signal.find_peaks(np.asarray(series.T), prominence=prominence)
    return [(float(series.omega[i]), float(series.T[i])) for i in idx]


# --- phase --------------------------------------------------------------------

def _fold_half(angle):
    """Map angles into ``[-pi/2, pi/2)``."""
    r = (np.asarray(angle) + 0.5 * np.pi) % np.pi - 0.5 * np.pi
    return np.where(r >= 0.5 * np.pi, r - np.pi, r)     # rounding can land on +pi/2


def _wrap(angle):
    """Map angle differences into ``[-pi, pi)``."""
    return (np.asarray(angle) + np.pi) % (2.0 * np.pi) - np.pi


def _merge(features: list[tuple[float, str]], window: float) -> list[tuple[float, str]]:
    out: list[tuple[float, str]] = []
    last: dict[str, float] = {}
    for w, kind in sorted(features):
        if kind in last and w - last[kind] < window:
            continue
        last[kind] = w
        out.append((w, kind))
    return out


def detect_phase_features(series: SpectrumSeries, window: float | None = None) -> list[tuple[float, str]]:
    """Sharp and smooth phase steps as ``(omega*, kind)`` pairs, sorted by omega.

    Consecutive usable samples are compared.  Samples where tau is
    numerically zero are skipped.  A pair is flagged when one of
    ``arg tau`` / ``theta`` jumps by more than pi/2 and the other stays
    continuous:

    * sharp -- theta jumps. It is placed where the linear interpolant of
      ``Re tau`` vanishes.
    * smooth -- ``arg tau`` jumps. It is placed at the minimum of the linearly
      interpolated ``|tau|``.

    Features of the same kind closer than ``window`` are merged.  The window
    defaults to two grid steps.
    """
    tau = np.asarray(series.tau)
    w = series.omega
    if tau.size < 2:
        return []
    if window is None:
        window = 2.0 * float(np.max(np.diff(w)))
    usable = np.flatnonzero(np.abs(tau) > PHASE_FLOOR * np.abs(tau).max()) if np.any(tau) else []
    if len(usable) < 2:
        return []
    i, j = usable[:-1], usable[1:]
    ta, tb = tau[i], tau[j]
    d_full = np.abs(_wrap(np.angle(tb) - np.angle(ta)))
    d_half = np.abs(_fold_half(np.angle(tb) - np.angle(ta)) * 2.0)   # reduced jump, scaled to [0, pi]
    reduced_a, reduced_b = _fold_half(np.angle(ta)), _fold_half(np.angle(tb))
    theta_jump = np.abs(reduced_b - reduced_a) > 0.5 * np.pi
    features = []
    for k in np.flatnonzero(theta_jump & (d_full < 0.5 * np.pi)):
        ra, rb = ta[k].real, tb[k].real
        s = ra / (ra - rb) if ra != rb else 0.5
        features.append((float(w[i[k]] + s * (w[j[k]] - w[i[k]])), "sharp"))
    for k in np.flatnonzero((d_full > 0.5 * np.pi) & (d_half < 0.5 * np.pi) & ~theta_jump):
        diff = tb[k] - ta[k]
        s = float(np.clip(-np.real(np.conj(ta[k]) * diff) / np.abs(diff) ** 2, 0.0, 1.0))
        features.append((float(w[i[k]] + s * (w[j[k]] - w[i[k]])), "smooth"))
    return _merge(features, window)


# --- correlation with levels --------------------------------------------------

def _real_levels(values) -> np.ndarray:
    return np.sort(np.real(np.asarray(values, dtype=complex)))


def zero_reference_levels(spec: CircuitSpec) -> np.ndarray:
    """Levels that antiresonances are expected to sit on.

    These are the sub-chain spectrum (N >= 3) and, for the two- and
    three-dot chains at flux 0 or 2*pi, the closed-form numerator roots.
    """
    from . import molecular

    levels: list[float] = []
    try:
        levels.extend(_real_levels(molecular.subchain_eigenvalues(spec.chain)))
    except NoInnerChain:
        pass
    n = spec.n_dots
    if n in (2, 3):
        e = spec.chain.onsite
        params = analytic.ClosedFormParams(
            e0=float(e[0].real), t_c=float(abs(spec.chain.hoppings[0])), gamma=float(-e[0].imag),
            e2=float(e[1].real) if n == 3 else 0.0, phi=spec.coupling.flux, v0=spec.coupling.v0, t0=spec.t0)
        try:
            levels.extend(analytic.antiresonance_roots(params, n, spec.coupling.flux))
        except ValueError:
            pass
    return np.unique(np.asarray(levels, dtype=float))


def coupled_levels(spec: CircuitSpec) -> np.ndarray:
    """Real parts of the molecular levels that couple to at least one lead."""
    from . import molecular

    decomp = molecular.eigendecompose_chain(spec.chain)
    try:
        decoupled = molecular.classify_decoupled(spec, decomp)
    except UnsupportedCouplingPattern:
        decoupled = set()
    keep = [m for m in range(decomp.n_states) if m + 1 not in decoupled]
    return _real_levels(decomp.energies[keep])


def _nearest(x: float, levels: np.ndarray):
    if levels.size == 0:
        return None, None
    k = int(np.argmin(np.abs(levels - x)))
    return float(levels[k]), float(abs(levels[k] - x))


def correlate_levels(report: AnalysisReport, spec: CircuitSpec) -> AnalysisReport:
    """Tag every feature with its nearest reference level.

    Antiresonances and smooth phase steps are matched against
    :func:`zero_reference_levels`.  Peaks and sharp phase steps are matched
    against :func:`coupled_levels`.
    """
    zeros = zero_reference_levels(spec)
    poles = coupled_levels(spec)
    rows = []
    for w, t in report.peaks:
        rows.append(Correlation("peak", w, t, *_nearest(w, poles)))
    for w, t in report.antiresonances:
        rows.append(Correlation("antiresonance", w, t, *_nearest(w, zeros)))
    for w, kind in report.phase_features:
        rows.append(Correlation(f"phase_{kind}", w, float("nan"),
                                *_nearest(w, zeros if kind == "smooth" else poles)))
    rows.sort(key=lambda r: (r.omega, r.kind))
    report.level_correlation = rows
    return report


def analyze(series: SpectrumSeries, threshold: float = ANTIRESONANCE_THRESHOLD,
            prominence: float = PEAK_PROMINENCE, window: float | None = None) -> AnalysisReport:
    """Run every extractor on one series and correlate the results with levels."""
    report = AnalysisReport(
        series.gamma, series.phi,
        peaks=find_peaks(series, prominence),
        antiresonances=find_antiresonances(series, threshold),
        phase_features=detect_phase_features(series, window),
        settings={"antiresonance_threshold": threshold, "peak_prominence": prominence,
                  "phase_window": window, "phase_rule": "arg mod pi vs arg jumps > pi/2"},
    )
    return correlate_levels(report, series.spec)


def valley_width(series: SpectrumSeries, center: float, fraction: float = 0.5) -> float:
    """Width of the connected region around ``center`` where ``T < fraction * max T``.

    Edges are located by linear interpolation between grid samples.  The
    result is ``inf`` if the valley reaches the end of the grid.
    """
    w, T = series.omega, np.asarray(series.T)
    level = fraction * T.max()
    k = int(np.argmin(np.abs(w - center)))
    if T[k] >= level:
        return 0.0
    lo = k
    while lo > 0 and T[lo - 1] < level:
        lo -= 1
    hi = k
    while hi < len(w) - 1 and T[hi + 1] < level:
        hi += 1
    if lo == 0 or hi == len(w) - 1:
        return math.inf

    def cross(i, j):
        return w[i] + (level - T[i]) * (w[j] - w[i]) / (T[j] - T[i])

    return float(cross(hi, hi + 1) - cross(lo - 1, lo))
