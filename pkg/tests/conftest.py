import pytest

from hyperwalk.hypergraph import normalized


@pytest.fixture
def k3():
    """Single hyperedge {1,2,3}: the walk on a triangle."""
    return normalized(3, 3, [(1, 2, 3)])


@pytest.fixture
def two_edge():
    """Edges {1,2,3} and {1,2,4} on n=4; the worked example with a_12 = 2."""
    return normalized(4, 3, [(1, 2, 3), (1, 2, 4)])
