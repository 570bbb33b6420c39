import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

# exact arithmetic has heavy-tailed run times; judge examples on results only
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

from tropglue.graphs import TropicalGraph, balance, bond, end, pair_of_pants  # noqa: E402


def triangle(n=2):
    """Cycle with momenta (1,0), (-1,1), (0,-1) and one balancing end per vertex."""
    pad = (0,) * (n - 2)
    edges = (
        bond("ab", "A", "B", (1, 0) + pad),
        bond("bc", "B", "C", (-1, 1) + pad),
        bond("ca", "C", "A", (0, -1) + pad),
    )
    g = TropicalGraph(n, ("A", "B", "C"), edges)
    d = balance(g)
    ends = tuple(end("end" + v, v, tuple(-x for x in d[v])) for v in "ABC")
    return TropicalGraph(n, ("A", "B", "C"), edges + ends)


def tropical_line():
    return TropicalGraph(
        2, ("v",), (end("E1", "v", (-1, 0)), end("E2", "v", (0, -1)), end("E3", "v", (1, 1)))
    )


def zero_loop():
    return TropicalGraph(
        2, ("v",), (bond("l", "v", "v", (0, 0)), end("a", "v", (1, 0)), end("b", "v", (-1, 0)))
    )


def single_edge(direction=(2, 0)):
    """Two vertices joined by one internal edge, each with two labeled ends."""
    dx, dy = direction
    return TropicalGraph(
        2,
        ("v1", "v2"),
        (
            bond("e", "v1", "v2", direction),
            end("a", "v1", (0, 1)),
            end("b", "v1", (-dx, -dy - 1)),
            end("c", "v2", (0, -1)),
            end("d", "v2", (dx, dy + 1)),
        ),
    )


@pytest.fixture
def pants():
    return pair_of_pants((1, 0), (0, 1))
