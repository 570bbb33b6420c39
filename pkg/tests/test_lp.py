import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from tropglue import lp


def brute_force_max(obj, ineqs, dim):
    """Best objective over all vertices (intersections of dim constraints); bounded problems only."""
    best = None
    for sub in itertools.combinations(ineqs, dim):
        a = [[Fraction(x) for x in n] + [Fraction(b)] for n, b in sub]
        # gaussian elimination
        ok = True
        for c in range(dim):
            p = next((i for i in range(c, dim) if a[i][c] != 0), None)
            if p is None:
                ok = False
                break
            a[c], a[p] = a[p], a[c]
            for i in range(dim):
                if i != c and a[i][c]:
                    f = a[i][c] / a[c][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        if not ok:
            continue
        x = [a[i][dim] / a[i][i] for i in range(dim)]
        if all(sum(ni * xi for ni, xi in zip(n, x)) >= b for n, b in ineqs):
            val = sum(Fraction(c) * xi for c, xi in zip(obj, x))
            best = val if best is None else max(best, val)
    return best


def box_ineqs(dim, r=3):
    out = []
    for i in range(dim):
        e = [int(i == j) for j in range(dim)]
        out.append((e, -r))
        out.append(([-x for x in e], -r))
    return out


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda d: st.tuples(
            st.just(d),
            st.lists(st.integers(-3, 3), min_size=d, max_size=d),
            st.lists(
                st.tuples(st.lists(st.integers(-3, 3), min_size=d, max_size=d), st.integers(-4, 4)),
                max_size=4,
            ),
        )
    )
)
def test_maximize_matches_vertex_enumeration(args):
    dim, obj, cuts = args
    ineqs = box_ineqs(dim) + [(n, b) for n, b in cuts]
    res = lp.maximize(obj, ineqs)
    want = brute_force_max(obj, ineqs, dim)
    if want is None:
        assert res.status == lp.INFEASIBLE
    else:
        assert res.status == lp.OPTIMAL
        assert res.value == want
        assert all(sum(Fraction(a) * x for a, x in zip(n, res.point)) >= b for n, b in ineqs)


def test_unbounded_and_infeasible():
    assert lp.maximize([1, 0], [([1, 0], 0)]).status == lp.UNBOUNDED
    assert lp.maximize([1], [([1], 1), ([-1], 0)]).status == lp.INFEASIBLE
    assert lp.maximize([0, 0], eqs=[([1, 1], 1), ([2, 2], 3)]).status == lp.INFEASIBLE


def test_equalities_and_slack():
    res = lp.maximize([1, 1], [([1, 0], 0), ([0, 1], 0)], [([1, 1], Fraction(5, 2))])
    assert res.status == lp.OPTIMAL and res.value == Fraction(5, 2)
    t, x = lp.max_slack(1, [([1], 0), ([-1], -1)])
    assert t == Fraction(1, 2) and x == (Fraction(1, 2),)
    t, _ = lp.max_slack(1, [([1], 0), ([-1], 0)])
    assert t == 0
