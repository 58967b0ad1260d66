import numpy as np
import pytest

# criterion name -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[0].rstrip("abcd")), s)):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def random_composition(rng, n, positive=True):
    raw = rng.uniform(0.01 if positive else 0.0, 1.0, n)
    return raw / raw.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def table1():
    """Evidence and weights from the three-expert worked example."""
    return {
        "x": [90.0, 50.0, 10.0],
        "w": [0.60, 0.30, 0.10],
        "v": [0.45, 0.50, 0.05],  # max, mid, min
    }
