"""Random instances for property tests and experiment scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graphs import EXTERNAL, INTERNAL, Edge, TropicalGraph, end, pair_of_pants
from .polyhedra import RationalPolyhedron


@dataclass(frozen=True)
class TreeConfig:
    ambient_dim: int = 2
    n_ends: int = 5
    max_entry: int = 5
    seed: int = 0


def _vec(rng, n, bound, nonzero=True):
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v) or not nonzero:
            return v


def _ok(v, bound):
    return any(v) and all(abs(x) <= bound for x in v)


def random_trivalent_tree(cfg: TreeConfig) -> TropicalGraph:
    """A balanced trivalent genus-0 graph grown by repeatedly splitting an end.

    Every direction is nonzero with entries bounded by ``max_entry``.
    """
    if cfg.n_ends < 3:
        raise ValueError("a trivalent tree has at least 3 ends")
    rng = random.Random(cfg.seed)
    n, bound = cfg.ambient_dim, cfg.max_entry
    while True:
        a, b = _vec(rng, n, bound), _vec(rng, n, bound)
        if _ok(tuple(-x - y for x, y in zip(a, b)), bound):
            break
    g = pair_of_pants(a, b, vertex="v0")
    vertices = list(g.vertices)
    edges = list(g.edges)
    counter = 0
    while sum(1 for e in edges if e.kind == EXTERNAL) < cfg.n_ends:
        ends = [e for e in edges if e.kind == EXTERNAL]
        e = rng.choice(ends)
        alpha = e.direction
        while True:
            beta = _vec(rng, n, bound)
            rest = tuple(x - y for x, y in zip(alpha, beta))
            if _ok(rest, bound):
                break
        counter += 1
        w = f"v{counter}"
        vertices.append(w)
        idx = edges.index(e)
        edges[idx] = Edge(f"i{counter}", e.tail, w, alpha, INTERNAL)
        edges.append(end(f"e{counter}a", w, beta))
        edges.append(end(f"e{counter}b", w, rest))
    return TropicalGraph(n, tuple(vertices), tuple(edges))


@dataclass(frozen=True)
class PolytopeConfig:
    dim: int = 2
    n_cuts: int = 3
    box: int = 4
    max_entry: int = 3
    seed: int = 0


def random_polytope(cfg: PolytopeConfig) -> RationalPolyhedron:
    """A bounded full-dimensional polytope: a box around 0 cut by random halfspaces containing 0."""
    rng = random.Random(cfg.seed)
    box = RationalPolyhedron.box([-cfg.box] * cfg.dim, [cfg.box] * cfg.dim)
    cuts = []
    for _ in range(cfg.n_cuts):
        nrm = _vec(rng, cfg.dim, cfg.max_entry)
        cuts.append((nrm, -Fraction(rng.randint(1, 2 * cfg.box * cfg.max_entry), rng.randint(1, 3))))
    return RationalPolyhedron(cfg.dim, box.ineqs + tuple(cuts))


def random_rational(rng: random.Random, bound: int = 6, denom: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound * denom, bound * denom), rng.randint(1, denom))
