import numpy as np
import pytest

from blochlab import RadialGrid, SpaceSpec


def pytest_terminal_summary(terminalreporter):
    import sys

    for name, module in list(sys.modules.items()):
        if name.rpartition(".")[2] == "test_acceptance":
            lines = getattr(module, "RESULTS", [])
            if lines:
                terminalreporter.section("acceptance criteria")
                for line in lines:
                    terminalreporter.write_line(line)
            return


@pytest.fixture(scope="session")
def a2():
    """The p=2 Bergman space with its default witnesses."""
    return SpaceSpec.bergman(2)


@pytest.fixture(scope="session")
def grid():
    return RadialGrid(16, 512, 12)


@pytest.fixture(scope="session")
def fast_grid():
    return RadialGrid(12, 128, 8)


def disk_point(radius, angle):
    return radius * np.exp(1j * angle)
