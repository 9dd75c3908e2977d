"""The self-verification suite must pass on a clean build and catch deliberate faults."""

import numpy as np
import pytest

from ptchain import negf, verify


def test_all_checks_pass():
    results = verify.run_all()
    assert [r.name for r in results] == list(verify.CHECKS)
    failed = [r.line() for r in results if not r.passed]
    assert not failed, failed


def test_result_line_format():
    line = verify.CheckResult("demo", 1e-12, 3e-15, True, "here").line()
    assert line.startswith("PASS  demo") and "tol=1.0e-12" in line and "worst=3.000e-15" in line


def test_flipped_amplitude_convention_is_caught(monkeypatch):
    """Conjugating the left bonds instead of the right flips the sign of the gamma sin(phi/2) term."""
    original = negf.transmission_amplitude
    monkeypatch.setattr(negf, "transmission_amplitude",
                        lambda spec, omega, eta=0.0, reverse=False: original(spec, omega, eta, not reverse))
    assert not verify.check_oracle_n2().passed
    assert not verify.check_oracle_n3().passed


def test_inverse_as_advanced_function_is_caught(monkeypatch):
    """Reading G^a as the matrix inverse of G^r breaks unitarity and the trace identity."""
    monkeypatch.setattr(negf, "advanced", lambda gr: np.linalg.inv(gr))
    assert not verify.check_trace_identity().passed
    assert not verify.check_unitarity().passed


def test_subset_selection():
    (r,) = verify.run_all(["eigenvalues"])
    assert r.name == "eigenvalues" and r.passed
    with pytest.raises(KeyError):
        verify.run_all(["nonsense"])
