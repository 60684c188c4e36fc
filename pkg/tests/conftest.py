import numpy as np
import pytest

from sernft import DiscreteSpectrum, Grid, SampledPulse, default_grid, duration_estimate, synthesize
from sernft.bench import family_spectrum

FIG1 = DiscreteSpectrum([1j, 1.5j, 2j], [2.1, -0.09, 0.13])


@pytest.fixture(scope="session")
def fig1_spectrum():
    return FIG1


@pytest.fixture(scope="session")
def fig1_pulse():
    return synthesize(FIG1, default_grid(FIG1, step=duration_estimate(FIG1, 2e-4) / 4096))


@pytest.fixture(scope="session")
def lambda_c():
    return family_spectrum("c")


@pytest.fixture(scope="session")
def lambda_c_pulse(lambda_c):
    return synthesize(lambda_c, Grid(-15.0, 30.0 / 4095, 4096), check_grid=False)


def sech_pulse(amplitude=2.0, t0=-20.0, t1=20.0, size=8192):
    step = (t1 - t0) / (size - 1)
    return SampledPulse.from_function(lambda t: amplitude / np.cosh(t), t0, step, size)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
