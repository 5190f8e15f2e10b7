import numpy as np
import pytest

from asq import cyclotomic_scheme, decompose, hamming_scheme, make_field, one_class_scheme

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def paley5():
    return cyclotomic_scheme(make_field(5), 2)


@pytest.fixture(scope="session")
def paley5_sd(paley5):
    return decompose(paley5)


@pytest.fixture(scope="session")
def cyc13_3():
    return cyclotomic_scheme(make_field(13), 3)


@pytest.fixture(scope="session")
def hamming4():
    return hamming_scheme(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def small_schemes():
    """Schemes used by the property-style tests (all symmetric)."""
    out = [one_class_scheme(n) for n in (2, 3, 5)]
    out += [hamming_scheme(n) for n in (1, 2, 3, 4)]
    out += [cyclotomic_scheme(make_field(p, f), d) for p, f, d in [(5, 1, 2), (13, 1, 3), (3, 2, 2), (2, 4, 3)]]
    return out
