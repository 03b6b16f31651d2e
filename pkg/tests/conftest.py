import numpy as np
import pytest

ACCEPTANCE_LINES = []


def record_acceptance(name: str, ok: bool, detail: str = ""):
    ACCEPTANCE_LINES.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        status = "PASS" if ok else "FAIL"
        line = f"{status}  {name}" + (f"  ({detail})" if detail else "")
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def random_matrix(rng, d):
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
