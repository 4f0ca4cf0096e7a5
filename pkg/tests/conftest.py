import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import two_spin_heun  # noqa: E402

from dipolecone import SimConfig, compute_series, detect_front, run_simulation  # noqa: E402
from dipolecone.cli import experiment_config  # noqa: E402
from dipolecone.frontkit import fit_report  # noqa: E402


class Run:
    """A finished simulation with its observables, front trace and fits."""

    def __init__(self, config, observable="one_minus_F"):
        self.config = config
        self.traj = run_simulation(config)
        self.series = compute_series(self.traj)
        self.trace = detect_front(self.series, config.contour_level, observable=observable)

    def fits(self, early=None, linear=None):
        return fit_report(self.trace, early or self.config.fit_window_early,
                          linear or self.config.linear_window)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def two_spin_reference():
    return two_spin_heun((0.0, 1.0, 0.0), (1.0, 0.0, 0.0), 1e-6, 1.0)


@pytest.fixture(scope="session")
def high_energy_run():
    """HIGH_ENERGY, N=213, dt=2.5e-3, t_end=2 without a fine start."""
    return Run(SimConfig(preset="HIGH_ENERGY", n_sites=213, dt=2.5e-3, t_end=2.0,
                         snapshot_stride=2, contour_level=3e-10))


@pytest.fixture(scope="session")
def fig1_run():
    return Run(experiment_config("fig1"))


@pytest.fixture(scope="session")
def fig2_run():
    return Run(experiment_config("fig2"))


@pytest.fixture(scope="session")
def alpha4_run():
    return Run(experiment_config("alpha4"))


@pytest.fixture(scope="session")
def supp_run():
    return Run(experiment_config("supp"), observable="S_N")


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Log one acceptance line and fail the calling test if ``ok`` is false."""
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
