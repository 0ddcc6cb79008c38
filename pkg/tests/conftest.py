import numpy as np
import pytest

from polar_automorph import InfoSet, closure_from_z

# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def example1():
    """m=4 code I_min = {x1x4, x2x3} (z-labels 6 and 9)."""
    return InfoSet.from_z(4, [3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15])


@pytest.fixture(scope="session")
def code256():
    return closure_from_z(8, [31, 57])
