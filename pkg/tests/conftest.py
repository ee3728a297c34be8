import numpy as np
import pytest

from helpers import make_world
from lazymp import DynamicLimits

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Log one acceptance line; printed in the terminal summary."""

    def _record(criterion: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((criterion, bool(passed), detail))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def open_world():
    return make_world((20.0, 20.0, 20.0))


@pytest.fixture
def limits():
    return DynamicLimits(v_max=2.0, a_max=5.0, u_max=2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
