import pytest

from mortonrrt.scenario import ObstacleTrack, Scenario


@pytest.fixture
def crossing_scenario():
    """One obstacle moving (0,0) -> (10,10) over 20 steps on a 20x20 map."""
    return Scenario(20.0, 20, (ObstacleTrack((0.0, 0.0), (10.0, 10.0), 2.0),))


@pytest.fixture
def empty_scenario():
    return Scenario(20.0, 10, ())


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one verdict line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
