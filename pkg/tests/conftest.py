import pytest

from neartsp import WeightedGraph

# Small non-metric clique used across modules: four unit edges plus one
# stretched edge (0,2) of weight 5, giving two violating triples.
FROZEN4 = [
    [0, 1, 5, 1],
    [1, 0, 1, 1],
    [5, 1, 0, 1],
    [1, 1, 1, 0],
]

FROZEN4_TEXT = "4\n1 5 1\n1 1\n1\n"


@pytest.fixture
def frozen4() -> WeightedGraph:
    return WeightedGraph(FROZEN4)


@pytest.fixture
def frozen4_text() -> str:
    return FROZEN4_TEXT
