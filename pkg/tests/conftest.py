import pytest

from egnash.game import EgnInstance, PayoffMatrix, load_instance
from egnash.graph import caterpillar, from_edge_list
from egnash.report import bundled_path

B_CS = PayoffMatrix(2.1, 0.0, 0.0, 1.0)
B_B = PayoffMatrix(3.0, 0.0, 0.0, 2.0)
ANTI = PayoffMatrix(0.0, 1.0, 1.0, 0.0)


@pytest.fixture
def p3():
    return from_edge_list(3, [(1, 2), (2, 3)])


@pytest.fixture
def k2():
    return from_edge_list(2, [(1, 2)])


@pytest.fixture
def caterpillar_inst():
    g = caterpillar(8, [0, 1, 0, 5, 0, 0, 4, 0])
    return EgnInstance.with_overrides(g, B_CS, {v: B_B for v in range(9, 19)})


@pytest.fixture
def bundled_caterpillar():
    return load_instance(bundled_path("caterpillar.json"))


@pytest.fixture
def er8():
    return load_instance(bundled_path("er8.json"))


# -- acceptance summary ------------------------------------------------------

_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Append (line) entries shown in the terminal summary after the run."""
    return request.config.stash.setdefault(_ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
