import numpy as np
import pytest

from nbldpc.ensemble import EnsembleSpec

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record a one-line verdict that is echoed in the terminal summary."""

    def record(label: str, ok: bool, detail: str = ""):
        _CRITERIA.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def reg23():
    return EnsembleSpec({2: 1.0}, {3: 1.0}, 2)
