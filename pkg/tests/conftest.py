import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GRID = np.linspace(-1.99, 1.99, 4001)
_ACCEPTANCE: list = []


@pytest.fixture(scope="session")
def grid():
    return GRID


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.module.__name__.endswith("test_acceptance") and report.when == "call":
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append((item.name, doc, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, doc, passed in sorted(_ACCEPTANCE):
        label = name.split("_")[1].upper()
        terminalreporter.write_line(f"{label}  {'PASS' if passed else 'FAIL'}  {doc}")
    npass = sum(p for _, _, p in _ACCEPTANCE)
    terminalreporter.write_line(f"{npass}/{len(_ACCEPTANCE)} criteria met")
