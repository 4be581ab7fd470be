import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from kleene_morita import FiniteKleeneAlgebra, FiniteKleeneModule, bool2, regular_module  # noqa: E402
from kleene_morita import catalog  # noqa: E402

settings.register_profile("ci", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@pytest.fixture(scope="session")
def algebras():
    return catalog.algebras()


@pytest.fixture(scope="session")
def modules():
    return catalog.modules()


@pytest.fixture(scope="session")
def K():
    return bool2()


@pytest.fixture
def corrupted_star():
    """bool2 with 0* = 0."""
    B = bool2()
    return FiniteKleeneAlgebra("bool2-bad-star", B.add, B.mul, [0, 1], 0, 1)


@pytest.fixture
def corrupted_action():
    """bool2 acting on itself with the single entry 1.0 changed to 1."""
    B = bool2()
    R = regular_module(B, "left")
    la = np.array(R.left_action)
    la[1, 0] = 1
    return FiniteKleeneModule("bool2-bad-action", R.add, R.zero, B, la)


# one summary line per acceptance criterion

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        num, text = marker
        prev = _CRITERIA.get(num, (True, text))
        _CRITERIA[num] = (prev[0] and report.outcome == "passed", text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok, text = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {text}")
