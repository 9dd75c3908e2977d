import math
import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptchain import analysis, molecular, negf
from ptchain.model import make_circuit

TWO_PI = 2 * math.pi


def series(n, grid, gamma=0.0, phi=0.0, **kw):
    return analysis.evaluate_series(make_circuit(n, gamma=gamma, phi=phi, **kw), grid)


def near(xs, target, tol):
    return any(abs(x - target) < tol for x in xs)


# --- sweep --------------------------------------------------------------------

def test_sweep_order_and_shape(grid):
    out = analysis.sweep(make_circuit(2), [0.0, 0.1, 0.3, 0.5], [0.0, TWO_PI], grid)
    assert [(s.gamma, s.phi) for s in out] == [(g, p) for g in (0.0, 0.1, 0.3, 0.5) for p in (0.0, TWO_PI)]
    assert all(len(s) == grid.size for s in out)
    assert out[3].spec.chain.onsite[0] == -0.1j and out[3].spec.coupling.flux == TWO_PI


def test_sweep_empty_gamma_list(grid):
    assert analysis.sweep(make_circuit(2), [], [0.0], grid) == []


def test_sweep_threads_match_serial(grid):
    args = (make_circuit(3), [0.0, 0.3], [0.0, math.pi], grid)
    serial, threaded = analysis.sweep(*args), analysis.sweep(*args, threads=4)
    for a, b in zip(serial, threaded):
        assert (a.gamma, a.phi) == (b.gamma, b.phi)
        assert np.array_equal(a.T, b.T) and np.array_equal(a.tau, b.tau)


def test_sweep_budget(grid):
    t = time.perf_counter()
    analysis.sweep(make_circuit(5), [0.0, 0.1, 0.3, 0.5], [0.0, TWO_PI], grid)
    assert time.perf_counter() - t < 1.0


def test_series_validation():
    spec = make_circuit(2)
    with pytest.raises(ValueError):
        analysis.evaluate_series(spec, [0.2, 0.1])
    s = analysis.evaluate_series(spec, np.linspace(-1, 1, 5))
    with pytest.raises(ValueError):
        analysis.SpectrumSeries(spec, 0.0, 0.0, s.omega, s.T[:-1], s.tau, s.phase)
    rows = list(s.samples())
    assert len(rows) == 5 and len(rows[0]) == 5
    assert np.all(s.reduced_phase >= -math.pi / 2) and np.all(s.reduced_phase < math.pi / 2)


@given(st.integers(2, 6), st.floats(0, 0.5), st.floats(0, TWO_PI))
def test_series_phase_is_unwrapped(n, g, phi):
    s = series(n, np.linspace(-1.9, 1.9, 381), g, phi)
    assert np.all(np.abs(np.diff(s.phase)) <= math.pi + 1e-12)
    assert np.allclose(np.exp(1j * s.phase)[np.abs(s.tau) > 0], (s.tau / np.abs(s.tau))[np.abs(s.tau) > 0])


# --- antiresonances -------------------------------------------------------------

def test_golden_section_vectorised():
    x, fx = analysis.golden_section_min(lambda z: (z - 0.3) ** 2 * (z + 2.0), np.array([0.0, -1.0]),
                                       np.array([1.0, 0.0]))
    assert abs(x[0] - 0.3) < 1e-8 and fx[0] < 1e-15
    assert abs(x[1]) < 1e-8            # monotone on [-1, 0]: minimum at the right end


def test_antiresonance_n2(grid):
    found = analysis.find_antiresonances(series(2, grid, gamma=0.3))
    assert len(found) == 1
    w, t = found[0]
    assert abs(w + 0.5) < 1e-9 and t < 1e-12


def test_antiresonance_n5(grid):
    found = [w for w, _ in analysis.find_antiresonances(series(5, grid))]
    assert len(found) == 2
    assert near(found, -math.sqrt(0.5), 1e-6) and near(found, math.sqrt(0.5), 1e-6)


@pytest.mark.xfail(strict=True, reason="gamma=0 pole-zero cancellation: T(-t_c) = 1, no antiresonance")
def test_antiresonance_n2_hermitian_example(grid):
    found = analysis.find_antiresonances(series(2, grid))
    assert len(found) == 1 and abs(found[0][0] + 0.5) < 1e-9


def test_hermitian_dimer_cancellation(grid):
    """At gamma=0 the zero and the pole of the decoupled state cancel; T is smooth and non-zero."""
    assert analysis.find_antiresonances(series(2, grid)) == []
    assert math.isclose(negf.transmission(make_circuit(2), -0.5), 1.0, rel_tol=1e-12)


def test_refined_zero_between_grid_points():
    """On a coarse grid missing the zero, refinement still finds it; the raw grid does not."""
    s = series(4, np.linspace(-1.9, 1.9, 97), gamma=0.3)
    assert not np.any(np.isclose(s.omega, 0.5))
    refined = analysis.find_antiresonances(s)
    assert near([w for w, _ in refined], 0.5, 1e-6)
    assert analysis.find_antiresonances(s, refine=False) == []


def test_every_antiresonance_below_threshold(grid):
    for n, phi in [(3, 0.0), (4, TWO_PI), (5, 0.0)]:
        for w, t in analysis.find_antiresonances(series(n, grid, gamma=0.1, phi=phi)):
            assert t < analysis.ANTIRESONANCE_THRESHOLD


def test_flux_pi_has_no_zero(grid):
    assert analysis.find_antiresonances(series(2, grid, gamma=0.3, phi=math.pi)) == []


# --- peaks ----------------------------------------------------------------------

def test_peak_examples(grid):
    p = [w for w, _ in analysis.find_peaks(series(2, grid))]
    assert len(p) == 1
    p = [w for w, _ in analysis.find_peaks(series(3, grid))]
    assert len(p) == 2
    p = [w for w, _ in analysis.find_peaks(series(3, grid, phi=TWO_PI))]
    assert len(p) == 1 and abs(p[0]) < 1e-3


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("phi", [0.0, TWO_PI])
def test_weak_coupling_peaks_track_levels(grid, n, phi):
    spec = make_circuit(n, phi=phi, v0=0.1)
    peaks = [w for w, _ in analysis.find_peaks(analysis.evaluate_series(spec, grid))]
    coupled = analysis.coupled_levels(spec)
    decomp = molecular.eigendecompose_chain(spec.chain)
    decoupled = [decomp.energies[m - 1].real for m in molecular.classify_decoupled(spec, decomp)]
    for e in coupled:
        assert near(peaks, e, 0.02), (e, peaks)
    for e in decoupled:
        assert not near(peaks, e, 0.05), (e, peaks)


# --- phase ----------------------------------------------------------------------

def test_phase_dimer_hermitian(grid):
    f = analysis.detect_phase_features(series(2, grid))
    assert len(f) == 1 and f[0][1] == "sharp" and abs(f[0][0] + 0.5) < 2e-3


def test_phase_dimer_gain_loss(grid):
    f = analysis.detect_phase_features(series(2, grid, gamma=0.3))
    kinds = [k for _, k in f]
    assert kinds.count("sharp") == 2 and kinds.count("smooth") == 1
    smooth = [w for w, k in f if k == "smooth"][0]
    assert abs(smooth + 0.5) < 2e-3
    sharp = [w for w, k in f if k == "sharp"]
    assert sharp[0] < smooth < sharp[1]


def test_phase_detuned_trimer(grid):
    f = analysis.detect_phase_features(series(3, grid, gamma=0.3, center_delta=0.5))
    smooth = [w for w, k in f if k == "smooth"]
    assert near(smooth, 0.0, 2e-3) and near(smooth, 0.5, 2e-3)


def test_phase_window_merges(grid):
    s = series(2, grid, gamma=0.3)
    merged = analysis.detect_phase_features(s, window=10.0)
    assert sorted(k for _, k in merged) == ["sharp", "smooth"]
    assert merged[0] == analysis.detect_phase_features(s)[0]


def test_phase_of_blocked_chain_is_empty(grid):
    assert analysis.detect_phase_features(analysis.evaluate_series(make_circuit(2, v0=0.0), grid)) == []


# --- levels and reports -----------------------------------------------------------

def test_correlate_n4(grid):
    report = analysis.analyze(series(4, grid))
    rows = [c for c in report.level_correlation if c.kind == "antiresonance"]
    assert len(rows) == 1
    assert abs(rows[0].omega - 0.5) < 1e-6 and rows[0].nearest_level == pytest.approx(0.5)
    assert rows[0].distance < 1e-6


def test_correlate_n5_flux(grid):
    report = analysis.analyze(series(5, grid, phi=TWO_PI))
    rows = [c for c in report.level_correlation if c.kind == "antiresonance"]
    assert any(abs(c.omega) < 1e-6 and abs(c.nearest_level) < 1e-12 for c in rows)


def test_correlate_n2_uses_closed_form_root(grid):
    report = analysis.analyze(series(2, grid, gamma=0.3))
    rows = [c for c in report.level_correlation if c.kind == "antiresonance"]
    assert rows[0].nearest_level == pytest.approx(-0.5) and rows[0].distance < 1e-9


def test_report_is_sorted_and_records_settings(grid):
    report = analysis.analyze(series(3, grid, gamma=0.3, center_delta=0.5))
    omegas = [c.omega for c in report.level_correlation]
    assert omegas == sorted(omegas)
    assert report.settings["antiresonance_threshold"] == analysis.ANTIRESONANCE_THRESHOLD


def test_zero_reference_levels():
    assert np.allclose(analysis.zero_reference_levels(make_circuit(4)), [-0.5, 0.5])
    assert np.allclose(analysis.zero_reference_levels(make_circuit(3, center_delta=0.5, phi=TWO_PI)),
                       [-0.5, 0.5, 1.0])
    assert analysis.zero_reference_levels(make_circuit(2, phi=math.pi)).size == 0


# --- valley width ---------------------------------------------------------------

def test_valley_width(grid):
    widths = [analysis.valley_width(series(2, grid, gamma=g), -0.5) for g in (0.1, 0.3, 0.5)]
    assert 0 < widths[0] <= widths[1] <= widths[2] < math.inf
    assert analysis.valley_width(series(2, grid, gamma=0.3), 1.0) == 0.0


def test_fully_blocked_series_has_no_antiresonances(grid):
    """At gamma = t_c, phi = pi the dimer transmits nothing; rounding noise is not a feature."""
    s = series(2, grid, gamma=0.5, phi=math.pi)
    assert np.max(np.abs(s.T)) < 1e-20
    assert analysis.find_antiresonances(s) == []
    assert analysis.find_peaks(s) == []
