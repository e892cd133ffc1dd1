import numpy as np
import pytest

from tripauli.decomposer import TridiagonalSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_spec(rng, n, kind="general"):
    size = 1 << n
    if kind == "general":
        draw = lambda k: rng.normal(size=k) + 1j * rng.normal(size=k)
        return TridiagonalSpec(n, draw(size), draw(size - 1), draw(size - 1), "general")
    c, a = rng.normal(size=size), rng.normal(size=size - 1)
    if kind == "symmetric":
        return TridiagonalSpec(n, c, a, a, "real-symmetric")
    return TridiagonalSpec(n, c, a, rng.normal(size=size - 1), "real")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
