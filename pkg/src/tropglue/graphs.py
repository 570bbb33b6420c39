"""Decorated tropical graphs and curves in R^n.

Edges carry an integer momentum in their tail-to-head orientation. External
edges (ends) have no head, are oriented outward from their vertex, and carry
a unique label.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .errors import DisconnectedError, LabelClashError
from .lattice import LatticeVector, content

INTERNAL = "internal"
EXTERNAL = "external"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str | None
    direction: LatticeVector
    kind: str = INTERNAL
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(int(x) for x in self.direction))

    @property
    def internal(self) -> bool:
        return self.kind == INTERNAL

    @property
    def is_loop(self) -> bool:
        return self.internal and self.tail == self.head


def end(id: str, vertex: str, direction, label: str | None = None) -> Edge:
    return Edge(id, vertex, None, direction, EXTERNAL, id if label is None else label)


def bond(id: str, tail: str, head: str, direction) -> Edge:
    return Edge(id, tail, head, direction, INTERNAL)


@dataclass(frozen=True)
class TropicalGraph:
    ambient_dim: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def internal_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.internal)

    @property
    def external_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if not e.internal)

    def edge(self, id: str) -> Edge:
        for e in self.edges:
            if e.id == id:
                return e
        raise KeyError(id)

    def incident(self, v: str) -> list[tuple[Edge, LatticeVector]]:
        """Edges at ``v`` with their outward momentum (loops appear twice)."""
        out = []
        for e in self.edges:
            if e.tail == v:
                out.append((e, e.direction))
            if e.internal and e.head == v:
                out.append((e, tuple(-x for x in e.direction)))
        return out

    def degree(self, v: str) -> int:
        return len(self.incident(v))


def validate(g: TropicalGraph) -> list[str]:
    """Violations of the graph invariants (empty list means OK)."""
    out = []
    if not g.vertices:
        out.append("graph has no vertices")
    if len(set(g.vertices)) != len(g.vertices):
        out.append("duplicate vertex ids")
    ids = Counter(e.id for e in g.edges)
    for i, k in sorted(ids.items()):
        if k > 1:
            out.append(f"duplicate edge id {i!r}")
    vs = set(g.vertices)
    labels = Counter()
    for e in g.edges:
        if len(e.direction) != g.ambient_dim:
            out.append(f"edge {e.id!r}: direction has dimension {len(e.direction)}, expected {g.ambient_dim}")
        if e.kind not in (INTERNAL, EXTERNAL):
            out.append(f"edge {e.id!r}: unknown kind {e.kind!r}")
            continue
        if e.tail not in vs:
            out.append(f"edge {e.id!r}: unknown tail vertex {e.tail!r}")
        if e.internal:
            if e.head not in vs:
                out.append(f"edge {e.id!r}: internal edge needs a known head vertex")
        else:
            if e.head is not None:
                out.append(f"edge {e.id!r}: external edge has a head vertex")
            if not e.label:
                out.append(f"edge {e.id!r}: external edge has no label")
            else:
                labels[e.label] += 1
    for lab, k in sorted(labels.items()):
        if k > 1:
            out.append(f"duplicate external label {lab!r}")
    if g.vertices and not _connected(g):
        out.append("graph is disconnected")
    return out


def _connected(g: TropicalGraph) -> bool:
    adj = {v: set() for v in g.vertices}
    for e in g.internal_edges:
        if e.tail in adj and e.head in adj:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(set(g.vertices))


def balance(g: TropicalGraph) -> dict[str, LatticeVector]:
    """Per-vertex momentum defects; an empty dict means the graph is balanced."""
    defects = {}
    for v in g.vertices:
        total = [0] * g.ambient_dim
        for _, mom in g.incident(v):
            for i, x in enumerate(mom):
                total[i] += x
        if any(total):
            defects[v] = tuple(total)
    return defects


def is_balanced(g: TropicalGraph) -> bool:
    return not balance(g)


def genus(g: TropicalGraph) -> int:
    """First Betti number of the graph."""
    if not g.vertices or not _connected(g):
        raise DisconnectedError("genus is defined for connected graphs")
    return len(g.internal_edges) - len(g.vertices) + 1


def edge_multiplicity(g: TropicalGraph, edge_id: str) -> int:
    return content(g.edge(edge_id).direction)


# ---------------------------------------------------------------------------
# Automorphisms


@dataclass(frozen=True)
class GraphAutomorphism:
    """Images are stored positionally: ``vertex_map[i]`` is the index of the image of vertex ``i``."""

    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    reversed: tuple[bool, ...]

    def compose(self, other: GraphAutomorphism) -> GraphAutomorphism:
        """``self`` after ``other``."""
        return GraphAutomorphism(
            tuple(self.vertex_map[i] for i in other.vertex_map),
            tuple(self.edge_map[j] for j in other.edge_map),
            tuple(other.reversed[j] != self.reversed[other.edge_map[j]] for j in range(len(other.edge_map))),
        )

    @property
    def is_identity(self) -> bool:
        return (
            self.vertex_map == tuple(range(len(self.vertex_map)))
            and self.edge_map == tuple(range(len(self.edge_map)))
            and not any(self.reversed)
        )

    def describe(self, g: TropicalGraph) -> dict:
        return {
            "vertices": {g.vertices[i]: g.vertices[j] for i, j in enumerate(self.vertex_map)},
            "edges": {g.edges[i].id: g.edges[j].id for i, j in enumerate(self.edge_map)},
            "reversed": sorted(g.edges[i].id for i, r in enumerate(self.reversed) if r),
        }


def _neg(v):
    return tuple(-x for x in v)


def _vertex_signature(g: TropicalGraph, v: str, match_labels: bool):
    moms = sorted(m for _, m in g.incident(v))
    ends = sorted(e.label if match_labels else "" for e in g.external_edges if e.tail == v)
    return len(moms), tuple(moms), tuple(ends)


def _pair_profile(g: TropicalGraph, a: str, b: str):
    """Multiset of momenta of internal edges running from ``a`` to ``b``, seen outward from ``a``."""
    out = []
    for e in g.internal_edges:
        if e.tail == a and e.head == b:
            out.append(e.direction)
        elif e.head == a and e.tail == b and a != b:
            out.append(_neg(e.direction))
    if a == b:
        out = [m for e in g.internal_edges if e.tail == a == e.head for m in (e.direction, _neg(e.direction))]
    return sorted(out)


def isomorphisms(g: TropicalGraph, h: TropicalGraph, match_labels: bool = True) -> Iterator[GraphAutomorphism]:
    """All structure-preserving bijections ``g -> h``.

    Vertices are matched by backtracking in order of increasing candidate
    count; candidates must agree on degree, the multiset of outward momenta
    and (optionally) the attached end labels, and every pair of assigned
    vertices must have matching edge profiles. With ``match_labels`` the ends
    must go to ends with the same label; without it, ends may be permuted
    among themselves as long as momenta agree.
    """
    if g.ambient_dim != h.ambient_dim or len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return
    sig_h: dict = {}
    for j, w in enumerate(h.vertices):
        sig_h.setdefault(_vertex_signature(h, w, match_labels), []).append(j)
    cands = []
    for v in g.vertices:
        c = sig_h.get(_vertex_signature(g, v, match_labels), [])
        if not c:
            return
        cands.append(c)
    order = sorted(range(len(g.vertices)), key=lambda i: (len(cands[i]), i))
    vmap = [None] * len(g.vertices)
    used = set()

    def consistent(i, j):
        gi, hj = g.vertices[i], h.vertices[j]
        if _pair_profile(g, gi, gi) != _pair_profile(h, hj, hj):
            return False
        for k, jj in enumerate(vmap):
            if jj is not None and _pair_profile(g, gi, g.vertices[k]) != _pair_profile(h, hj, h.vertices[jj]):
                return False
        return True

    def assign(pos):
        if pos == len(order):
            yield from _edge_maps(g, h, tuple(vmap), match_labels)
            return
        i = order[pos]
        for j in cands[i]:
            if j in used or not consistent(i, j):
                continue
            vmap[i] = j
            used.add(j)
            yield from assign(pos + 1)
            vmap[i] = None
            used.discard(j)

    yield from assign(0)


def _edge_maps(g, h, vmap, match_labels):
    gv = {v: i for i, v in enumerate(g.vertices)}
    hv = {v: i for i, v in enumerate(h.vertices)}
    options = []
    for e in g.edges:
        opts = []
        for k, f in enumerate(h.edges):
            if f.kind != e.kind:
                continue
            if not e.internal:
                if (
                    hv[f.tail] == vmap[gv[e.tail]]
                    and f.direction == e.direction
                    and (not match_labels or f.label == e.label)
                ):
                    opts.append((k, False))
                continue
            t, hd = vmap[gv[e.tail]], vmap[gv[e.head]]
            if hv[f.tail] == t and hv[f.head] == hd and f.direction == e.direction:
                opts.append((k, False))
            if hv[f.tail] == hd and hv[f.head] == t and f.direction == _neg(e.direction):
                opts.append((k, True))
        if not opts:
            return
        options.append(opts)
    emap = [None] * len(g.edges)
    flips = [False] * len(g.edges)
    taken = set()

    def rec(i):
        if i == len(g.edges):
            yield GraphAutomorphism(vmap, tuple(emap), tuple(flips))
            return
        for k, flip in options[i]:
            if k in taken:
                continue
            emap[i], flips[i] = k, flip
            taken.add(k)
            yield from rec(i + 1)
            taken.discard(k)

    yield from rec(0)


def automorphisms(g: TropicalGraph) -> list[GraphAutomorphism]:
    """The automorphism group fixing every labeled end, canonically sorted (identity first)."""
    return sorted(
        isomorphisms(g, g, match_labels=True),
        key=lambda a: (a.vertex_map, a.edge_map, a.reversed),
    )


def is_isomorphic(g: TropicalGraph, h: TropicalGraph, match_labels: bool = True) -> bool:
    return next(isomorphisms(g, h, match_labels), None) is not None


# ---------------------------------------------------------------------------
# Marked points and localization


def add_marked_point(g: TropicalGraph, edge_id: str, label: str) -> TropicalGraph:
    """Split ``edge_id`` with a new bivalent vertex carrying a zero-momentum end.

    The new vertex is ``"@" + label`` and the new end has id and label
    ``label``. The split edge keeps its id for the piece next to its tail;
    the far piece is ``edge_id + "/" + label``. For an end, the far piece
    is the end itself (still carrying its original label).
    """
    e = g.edge(edge_id)
    vertex = "@" + label
    far = f"{edge_id}/{label}"
    if any(x.label == label for x in g.external_edges):
        raise LabelClashError(f"label {label!r} is already used")
    if vertex in g.vertices or any(x.id in (label, far) for x in g.edges):
        raise LabelClashError(f"ids derived from label {label!r} clash with existing ids")
    near = Edge(e.id, e.tail, vertex, e.direction, INTERNAL)
    if e.internal:
        rest = Edge(far, vertex, e.head, e.direction, INTERNAL)
    else:
        rest = Edge(far, vertex, None, e.direction, EXTERNAL, e.label)
    marker = Edge(label, vertex, None, (0,) * g.ambient_dim, EXTERNAL, label)
    edges = []
    for x in g.edges:
        if x.id == edge_id:
            edges.extend([near, rest])
        else:
            edges.append(x)
    edges.append(marker)
    return TropicalGraph(g.ambient_dim, g.vertices + (vertex,), tuple(edges))


@dataclass(frozen=True)
class TropicalCurve:
    graph: TropicalGraph
    positions: Mapping[str, tuple[Fraction, ...]]
    lengths: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "positions", {v: tuple(Fraction(x) for x in p) for v, p in self.positions.items()}
        )
        object.__setattr__(self, "lengths", {e: Fraction(l) for e, l in self.lengths.items()})

    def __hash__(self):
        return hash((self.graph, tuple(sorted(self.positions.items())), tuple(sorted(self.lengths.items()))))


def curve_violations(c: TropicalCurve) -> list[str]:
    g = c.graph
    out = []
    for v in g.vertices:
        p = c.positions.get(v)
        if p is None or len(p) != g.ambient_dim:
            out.append(f"vertex {v!r}: missing or malformed position")
    if out:
        return out
    for e in g.internal_edges:
        l = c.lengths.get(e.id)
        if l is None:
            out.append(f"edge {e.id!r}: missing length")
            continue
        if l <= 0:
            out.append(f"edge {e.id!r}: length {l} is not positive")
        want = tuple(a + l * d for a, d in zip(c.positions[e.tail], e.direction))
        if want != c.positions[e.head]:
            out.append(f"edge {e.id!r}: head position does not match tail + length * direction")
    return out


def localize(c: TropicalCurve, v: str) -> TropicalCurve:
    """The star of ``v``: internal edges at ``v`` become outward ends of infinite length.

    A converted edge is labeled ``<id>@tail`` or ``<id>@head`` according to
    which of its ends sits at ``v``; a loop produces both.
    """
    g = c.graph
    if v not in g.vertices:
        raise KeyError(v)
    edges = []
    for e in g.edges:
        if not e.internal:
            if e.tail == v:
                edges.append(e)
            continue
        if e.tail == v:
            lab = f"{e.id}@tail"
            edges.append(Edge(lab, v, None, e.direction, EXTERNAL, lab))
        if e.head == v:
            lab = f"{e.id}@head"
            edges.append(Edge(lab, v, None, _neg(e.direction), EXTERNAL, lab))
    return TropicalCurve(TropicalGraph(g.ambient_dim, (v,), tuple(edges)), {v: c.positions[v]}, {})


def relabel_edge(g: TropicalGraph, old: str, new: str) -> TropicalGraph:
    return replace(g, edges=tuple(replace(e, id=new) if e.id == old else e for e in g.edges))


def reverse_edge(g: TropicalGraph, edge_id: str) -> TropicalGraph:
    """Flip an internal edge's orientation (momentum negated)."""
    out = []
    for e in g.edges:
        if e.id == edge_id:
            if not e.internal:
                raise ValueError("ends are always oriented outward")
            e = Edge(e.id, e.head, e.tail, _neg(e.direction), INTERNAL)
        out.append(e)
    return replace(g, edges=tuple(out))


def momentum_multiset(g: TropicalGraph, v: str) -> Counter:
    return Counter(m for _, m in g.incident(v))


def pair_of_pants(a: Sequence[int], b: Sequence[int], vertex: str = "v") -> TropicalGraph:
    """One vertex with ends of momentum ``a``, ``b`` and ``-a-b``."""
    c = tuple(-x - y for x, y in zip(a, b))
    return TropicalGraph(len(a), (vertex,), (end("a", vertex, a), end("b", vertex, b), end("c", vertex, c)))
