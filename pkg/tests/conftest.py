import numpy as np
import pytest

from normret import verdict


@pytest.fixture(scope="session", autouse=True)
def no_replay_failures():
    yield
    # every refutation produced during the run must have survived replay
    assert verdict.replay_failures() == 0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
