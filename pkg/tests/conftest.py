import pytest

from qlab.graphs import build_commuting_graph, build_kneser_graph
from qlab.perm import GroundSet
from qlab.simplicial import clique_complex


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def commuting_cx(n, p=2, a=1, max_dim=1, labels=None):
    ground = GroundSet.of(labels) if labels is not None else GroundSet.range(n)
    return clique_complex(build_commuting_graph(ground, p, a), max_dim)


def kneser_cx(n, p, max_dim=1):
    return clique_complex(build_kneser_graph(GroundSet.range(n), p), max_dim)


@pytest.fixture
def ground5():
    return GroundSet.range(5)
