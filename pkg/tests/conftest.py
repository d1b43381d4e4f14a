import pytest

from specpoly.verify import SolverOptions, check_thm4, check_thm6, triangles_fixed_area


@pytest.fixture(scope="session")
def triangle_grid():
    return triangles_fixed_area(0.5, 10, 10, max_aspect=20.0)


@pytest.fixture(scope="session")
def area_bound_report(triangle_grid):
    return check_thm4(triangle_grid, SolverOptions())


@pytest.fixture(scope="session")
def side_bound_report(triangle_grid):
    return check_thm6(triangle_grid, SolverOptions())


ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line, print it, then assert it."""
    log = request.config.stash[ACCEPTANCE_KEY]

    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
        log[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(ACCEPTANCE_KEY, {})
    if log:
        terminalreporter.section("acceptance criteria")
        for n in sorted(log):
            terminalreporter.write_line(log[n])
