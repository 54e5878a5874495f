import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def rand_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def unit_gaussian(L, center=None):
    from tflocal.scenarios import gaussian_window

    g = gaussian_window(L, center=center)
    return g / np.linalg.norm(g)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
