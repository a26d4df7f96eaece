import os

import pytest
from hypothesis import HealthCheck, settings

from c2lab import Graph, circulant, decomplete

settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])


def k4() -> Graph:
    return decomplete(circulant(5), 4)


def k33() -> Graph:
    return Graph.from_edges(6, [(i, j) for i in range(3) for j in range(3, 6)])


def k44() -> Graph:
    return Graph.from_edges(8, [(i, j) for i in range(4) for j in range(4, 8)])


def seven_edge() -> Graph:
    """The six-vertex graph of the worked 2-forest example; edges in
    canonical order carry the letters a b c d f e g."""
    return Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (3, 5)])


FOREST_LETTERS = "abcdfeg"


@pytest.fixture
def c3():
    return triangle()


@pytest.fixture
def K4():
    return k4()
