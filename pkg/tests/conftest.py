import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sbviz.sgraph import SignedGraph  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
CONGRESS = FIXTURES / "congress.edges"
SURROGATE = FIXTURES / "congress_surrogate.edges"


def graph(n, edges):
    return SignedGraph(n, tuple(edges))


@pytest.fixture
def triangle_ppn():
    # edges (0,1)+, (0,2)+, (1,2)-
    return graph(3, [(0, 1, 1), (0, 2, 1), (1, 2, -1)])


@pytest.fixture
def two_factions():
    """Six-node left block and four-node right block, complete, balanced."""
    left, right = range(6), range(6, 10)
    edges = []
    for u in range(10):
        for v in range(u + 1, 10):
            same = (u in left) == (v in left)
            edges.append((u, v, 1 if same else -1))
    return graph(10, edges), set(left), set(right)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
