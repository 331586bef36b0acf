import pytest

from nonmarkov_g2.bath import BathParams
from nonmarkov_g2.greens import TimeGrid, solve_u_ide, v_table
from nonmarkov_g2.photon_stats import InitialFock

# Lines collected by the acceptance module, echoed in the terminal summary.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def weak():
    return BathParams.from_ratio(0.5, 5.0, 2.0)


@pytest.fixture(scope="session")
def strong():
    return BathParams.from_ratio(1.5, 5.0, 2.0)


@pytest.fixture(scope="session")
def fock5():
    return InitialFock(5)


@pytest.fixture(scope="session")
def weak_tables(weak):
    grid = TimeGrid.covering(60.0, 0.01)
    u = solve_u_ide(grid, weak)
    return u, v_table(grid, weak, u)


@pytest.fixture(scope="session")
def strong_tables(strong):
    grid = TimeGrid.covering(60.0, 0.01)
    u = solve_u_ide(grid, strong)
    return u, v_table(grid, strong, u)
