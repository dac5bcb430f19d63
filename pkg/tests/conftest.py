import numpy as np
import pytest

from lipop.sampling import DiskSampler


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def coarse():
    """A cheaper sampler for tests that do not pin sampler-level accuracy."""
    return DiskSampler(J=12, angles=64, refine=12)


ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one pass/fail line for an acceptance criterion."""

    def _record(number, passed, detail=""):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE.append((number, line))
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE):
        terminalreporter.write_line(line)
