import hypothesis
import numpy as np
import pytest

from schrobundle.spacetime import InertialFrame, Params

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def p1():
    return Params(hbar=1.0, mass=1.0, dim=1)


@pytest.fixture
def fid1():
    return InertialFrame.fiducial(1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
