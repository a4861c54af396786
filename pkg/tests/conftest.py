import warnings

import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    """Record one acceptance criterion: criterion(n, passed, detail)."""

    def record(n, passed, detail=""):
        ACCEPTANCE[n] = (bool(passed), detail)

    return record


@pytest.fixture(autouse=True)
def _quiet_numpy():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", category=RuntimeWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
