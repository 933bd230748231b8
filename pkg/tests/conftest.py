import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def random_coeffs(rng, n=4):
    return tuple(complex(x) for x in rng.normal(size=n) + 1j * rng.normal(size=n))


@pytest.fixture
def rng():
    return np.random.default_rng(20070533)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
