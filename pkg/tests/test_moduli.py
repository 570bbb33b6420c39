import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import single_edge, triangle, tropical_line, zero_loop
from oracles import cofactor_det
from tropglue.errors import GenusTooSmallError, MalformedInputError, UnbalancedError
from tropglue.generators import TreeConfig, random_rational, random_trivalent_tree
from tropglue.graphs import TropicalGraph, bond, curve_violations, end, pair_of_pants, relabel_edge, reverse_edge
from tropglue.lattice import INFINITE
from tropglue.moduli import (
    INFEASIBLE,
    NONPOSITIVE,
    OK,
    POSITIVE_DIMENSIONAL,
    assemble_A,
    compositions,
    enumerate_assignments,
    gluing_data,
    marked_graph,
    moduli_presentation,
    solve_points,
)

F = Fraction


# --- the moduli map -------------------------------------------------------------------


def test_assemble_single_edge():
    g = TropicalGraph(
        2,
        ("v1", "v2"),
        (bond("e", "v1", "v2", (1, 0)), end("a", "v1", (-1, 0)), end("b", "v2", (1, 0))),
    )
    a, variables = assemble_A(g)
    assert a.to_rows() == [[1, 1, 0, -1, 0], [0, 0, 1, 0, -1]]
    assert variables == [("l", "e"), ("x", "v1", 0), ("x", "v1", 1), ("x", "v2", 0), ("x", "v2", 1)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pants_has_empty_equation_set(n):
    a, _ = assemble_A(pair_of_pants((1,) + (0,) * (n - 1), (0,) * (n - 1) + (1,)))
    assert (a.rows, a.cols) == (0, n)


def test_unbalanced_rejected():
    g = TropicalGraph(2, ("v",), (end("a", "v", (1, 0)), end("b", "v", (0, 1))))
    with pytest.raises(UnbalancedError) as err:
        assemble_A(g)
    assert err.value.details["defects"] == {"v": [1, 1]}


def test_triangle_presentations():
    p = moduli_presentation(triangle(2))
    assert (p.a.rows, p.a.cols, p.rank) == (6, 9, 6)
    assert p.surjective and p.component_count == 1 and p.dimension == 3
    p3 = moduli_presentation(triangle(3))
    assert (p3.a.rows, p3.a.cols, p3.rank) == (9, 12, 8)
    assert not p3.surjective and p3.component_count is INFINITE and p3.dimension == 4
    assert p3.positive_cell_nonempty


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pants_presentation(n):
    rng = random.Random(n)
    for _ in range(10):
        a = tuple(rng.randint(-5, 5) for _ in range(n))
        b = tuple(rng.randint(-5, 5) for _ in range(n))
        p = moduli_presentation(pair_of_pants(a, b))
        assert p.dimension == n and p.surjective and p.component_count == 1 and p.positive_cell_nonempty


def translations(variables, n):
    for k in range(n):
        yield tuple(int(v[0] == "x" and v[2] == k) for v in variables)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(3, 8))
def test_trivalent_trees(seed, n, k):
    g = random_trivalent_tree(TreeConfig(ambient_dim=n, n_ends=k, seed=seed))
    p = moduli_presentation(g)
    assert p.surjective and p.component_count == 1
    assert p.dimension == n + k - 3
    assert p.dimension == p.a.cols - p.a.rows
    for t in translations(p.variables, n):
        assert p.a @ t == (0,) * p.a.rows
    for v in p.kernel:
        assert p.a @ v == (0,) * p.a.rows


def test_degenerate_edge_flagged():
    p = moduli_presentation(zero_loop())
    assert p.degenerate_edges == ("l",)
    # counted literally: the zero edge contributes a zero block, so A is not surjective
    assert p.dimension == 3 and not p.surjective and p.component_count is INFINITE


def test_positive_cell_can_be_empty():
    # a cycle whose edges all point the same way cannot close up with positive lengths
    g = TropicalGraph(1, ("a", "b"), (bond("e", "a", "b", (1,)), bond("f", "b", "a", (1,))))
    assert not moduli_presentation(g).positive_cell_nonempty
    h = TropicalGraph(
        1,
        ("a", "b"),
        (bond("e", "a", "b", (1,)), bond("f", "b", "a", (-1,)), end("x", "a", (-2,)), end("y", "b", (2,))),
    )
    assert moduli_presentation(h).positive_cell_nonempty


# --- gluing constants ---------------------------------------------------------------------


def test_gluing_examples():
    d = gluing_data(single_edge((2, 0)), 0)
    assert d.k_gamma == 2 and d.aut_order == 1 and d.genus_splits == ((0, 0),)
    d = gluing_data(zero_loop(), 1)
    assert d.k_gamma == 0 and d.aut_order == 2 and d.gluing_choices == 0
    d = gluing_data(single_edge((1, 0)), 2)
    assert d.genus_splits == ((0, 2), (1, 1), (2, 0))
    with pytest.raises(GenusTooSmallError):
        gluing_data(triangle(), 0)


def test_compositions():
    assert compositions(0, 0) == [()]
    assert compositions(1, 0) == []
    assert compositions(3, 1) == [(3,)]
    for total in range(5):
        for parts in range(1, 4):
            out = compositions(total, parts)
            assert out == sorted(out) and all(sum(c) == total for c in out)
            assert len(out) == len(set(out))


@pytest.mark.parametrize("g", [single_edge((2, 0)), single_edge((3, 6)), triangle(), zero_loop()], ids=str)
def test_k_gamma_invariance(g):
    base = gluing_data(g, 1).k_gamma
    for e in g.internal_edges:
        assert gluing_data(relabel_edge(g, e.id, e.id + "_renamed"), 1).k_gamma == base
        assert gluing_data(reverse_edge(g, e.id), 1).k_gamma == base


def test_k_gamma_divides_by_automorphisms():
    # two parallel edges of momentum (2,0) between unlabeled-symmetric vertices
    g = TropicalGraph(2, ("v1", "v2"), (bond("e1", "v1", "v2", (2, 0)), bond("e2", "v1", "v2", (2, 0)),
                                        end("a", "v1", (-4, 0)), end("b", "v2", (4, 0))))
    d = gluing_data(g, 1)
    assert d.aut_order == 2 and d.k_gamma == 2


# --- point constraints -------------------------------------------------------------------


def test_line_through_two_points():
    s = solve_points(tropical_line(), {"p": "E1", "q": "E3"}, {"p": (0, 0), "q": (2, 1)})
    assert s.status == OK and s.multiplicity == 1
    assert s.curve.positions["v"] == (1, 0)
    assert curve_violations(s.curve) == []


def test_coincident_points_fail_positivity():
    s = solve_points(tropical_line(), {"p": "E1", "q": "E3"}, {"p": (1, 1), "q": (1, 1)})
    assert s.status == NONPOSITIVE and s.curve is None
    assert all(l <= 0 for _, l in s.violating_lengths)


def test_inconsistent_points():
    s = solve_points(tropical_line(), {"p": "E1", "q": "E1"}, {"p": (0, 0), "q": (0, 1)})
    assert s.status == INFEASIBLE


def test_pin_vertex():
    s = solve_points(pair_of_pants((1, 0), (0, 1)), {"p": "v"}, {"p": (5, 7)})
    assert s.status == OK and s.multiplicity == 1
    assert s.curve.positions == {"v": (5, 7)}


def test_one_point_leaves_a_family():
    s = solve_points(tropical_line(), {"p": "E1"}, {"p": (0, 0)})
    assert s.status == POSITIVE_DIMENSIONAL and s.family_dimension == 1


def test_bad_assignments():
    with pytest.raises(MalformedInputError):
        solve_points(tropical_line(), {"p": "nope"}, {"p": (0, 0)})
    with pytest.raises(MalformedInputError):
        solve_points(tropical_line(), {"p": "E1"}, {"q": (0, 0)})


@settings(max_examples=40, deadline=None)
@given(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    st.integers(1, 5),
    st.integers(1, 5),
)
def test_multiplicity_is_determinant(a, b, l1, l2):
    if a[0] * b[1] - a[1] * b[0] == 0:
        return
    g = pair_of_pants(a, b)
    v = (F(1, 2), F(-3))
    pts = {"p": tuple(x + l1 * y for x, y in zip(v, a)), "q": tuple(x + l2 * y for x, y in zip(v, b))}
    s = solve_points(g, {"p": "a", "q": "b"}, pts)
    assert s.status == OK and s.curve.positions["v"] == v
    aug, variables = assemble_A(marked_graph(g, (("p", "a"), ("q", "b"))))
    pins = [[int(var == ("x", "@" + lab, k)) for var in variables] for lab in "pq" for k in range(2)]
    square = aug.to_rows() + pins
    assert len(square) == len(square[0])
    assert s.multiplicity == abs(cofactor_det(square)) == abs(a[0] * b[1] - a[1] * b[0])


# --- enumeration ----------------------------------------------------------------------------


def generic_pair(rng):
    while True:
        p = (random_rational(rng), random_rational(rng))
        q = (random_rational(rng), random_rational(rng))
        dx, dy = q[0] - p[0], q[1] - p[1]
        if dx and dy and dx != dy:
            return p, q


def test_line_through_generic_points():
    rng = random.Random(8)
    for _ in range(20):
        p, q = generic_pair(rng)
        en = enumerate_assignments(tropical_line(), {"p": p, "q": q})
        assert en.total == 1 and len(en.solutions) == 1
        assert en.solutions[0].multiplicity == 1
        assert not en.positive_dimensional and not en.non_transverse


def test_line_through_points_on_a_ray():
    # q is reached from p along the (1,1) direction: every solution puts the vertex at or below p
    en = enumerate_assignments(tropical_line(), {"p": (0, 0), "q": (2, 2)})
    keys = {tuple(s.curve.positions["v"]) for s in en.solutions}
    assert len(en.solutions) == len(keys)


def test_enumerate_without_points():
    en = enumerate_assignments(pair_of_pants((1, 0), (0, 1)), {})
    assert en.total is None and en.positive_dimensional


def test_enumeration_thread_independent():
    rng = random.Random(21)
    p, q = generic_pair(rng)
    one = enumerate_assignments(tropical_line(), {"p": p, "q": q}, threads=1)
    four = enumerate_assignments(tropical_line(), {"p": p, "q": q}, threads=4)
    assert one == four


def test_four_ended_tree_through_three_points():
    # dimension 3 + one slide per marker - 2 per pin = 0: finitely many curves
    g = random_trivalent_tree(TreeConfig(n_ends=4, max_entry=2, seed=3))
    rng = random.Random(0)
    dirs = [e.direction for e in g.edges]
    while True:
        pts = {lab: (random_rational(rng), random_rational(rng)) for lab in ("p", "q", "r")}
        diffs = [(a[0] - b[0], a[1] - b[1]) for a, b in itertools.combinations(pts.values(), 2)]
        if all(dx * d[1] != dy * d[0] for dx, dy in diffs for d in dirs):
            break
    en = enumerate_assignments(g, pts)
    assert not en.positive_dimensional and en.solutions
    for s in en.solutions:
        assert curve_violations(s.curve) == []
        for lab, pt in pts.items():
            assert s.curve.positions["@" + lab] == pt
    if en.total is not None:
        assert en.total == sum(s.multiplicity for s in en.solutions)
