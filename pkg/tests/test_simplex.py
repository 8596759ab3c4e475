from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from maxslope import core
from maxslope import simplex as sx
from maxslope.core import TieError, slope
from maxslope.simplex import SimplexArb

SEVEN = SimplexArb((2, 4, 4, 7, 6, 7))


def chain(n):
    return SimplexArb(tuple(range(2, n + 1)))


def catalan_rec(k):
    c = [1]
    for j in range(k):
        c.append(sum(c[i] * c[j - i] for i in range(j + 1)))
    return c[k]


def test_noncrossing_examples():
    assert sx.is_noncrossing(chain(4))
    assert not sx.is_noncrossing(SimplexArb((3, 4, 4)))
    assert sx.is_noncrossing(SEVEN)


@pytest.mark.parametrize("n,count", [(2, 1), (4, 6), (6, 120)])
def test_all_arbs(n, count):
    assert len(sx.enumerate_arbs(n)) == count


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 5), (5, 14), (6, 42), (7, 132)])
def test_noncrossing_counts(n, count):
    assert len(sx.enumerate_noncrossing(n)) == count == catalan_rec(n - 1)


def test_noncrossing_n8_by_filtering():
    filtered = [a for a in sx.enumerate_arbs(8) if sx.is_noncrossing(a)]
    assert len(filtered) == 429 == sx.catalan(7)
    assert set(filtered) == set(sx.enumerate_noncrossing(8))


def test_four_nodes_drop_the_crossing_map():
    got = {a.targets for a in sx.enumerate_noncrossing(4)}
    assert got == {t.targets for t in sx.enumerate_arbs(4)} - {(3, 4, 4)}


def test_decompose_seven():
    left, right, r = sx.decompose(SEVEN)
    assert r == 4
    assert left == SimplexArb((2, 4, 4))
    assert right == SimplexArb((2, 3))
    left, right, r = sx.decompose(SimplexArb((2,)))
    assert r == 1 and left.n == 1 and right.n == 1


@pytest.mark.parametrize("n", range(2, 9))
def test_compose_inverts_decompose(n):
    for a in sx.enumerate_noncrossing(n):
        left, right, _ = sx.decompose(a)
        assert sx.compose(left, right) == a


def test_immediate_leaves_examples():
    assert sx.immediate_leaves(SimplexArb((2,))) == [1]
    assert sx.immediate_leaves(SEVEN) == [1, 3, 5]
    assert sx.immediate_leaves(SimplexArb((3, 3, 4))) == [2]


@pytest.mark.parametrize("n", range(2, 8))
def test_immediate_leaves_nonempty(n):
    for a in sx.enumerate_noncrossing(n):
        assert sx.immediate_leaves(a)


def recompute(w, c):
    return sx.max_slope(w, c)


def test_witness_chain_and_seven():
    c = (1, 2, 3)
    w = sx.witness_weight(chain(3), c)
    assert slope(w, c, 1, 2) > slope(w, c, 1, 3)
    assert recompute(w, c) == chain(3)
    c7 = tuple(range(1, 8))
    assert recompute(sx.witness_weight(SEVEN, c7), c7) == SEVEN


def test_witness_rejects_crossing():
    with pytest.raises(sx.CrossingError):
        sx.witness_weight(SimplexArb((3, 4, 4)), (1, 2, 3, 4))


@pytest.mark.parametrize("n", range(2, 7))
def test_witness_round_trip_all(n):
    c = tuple(x * x for x in range(1, n + 1))
    for a in sx.enumerate_noncrossing(n):
        assert recompute(sx.witness_weight(a, c), c) == a


@pytest.mark.parametrize("n", [4, 5])
def test_realizable_iff_noncrossing(n):
    c = tuple(range(1, n + 1))
    lp = core.simplex_instance(c)
    for a in sx.enumerate_arbs(n):
        w = core.realizing_weight(lp, a.to_arborescence())
        assert (w is not None) == sx.is_noncrossing(a)
        if w is not None:
            assert recompute(w, c) == a


def test_bracketing_examples():
    assert sx.to_bracketing(SimplexArb((2,))).sorted() == [(1, 2)]
    assert sx.to_bracketing(SEVEN).sorted() == [(1, 2), (1, 4), (1, 7), (3, 4), (5, 6), (5, 7)]


def test_incomplete_bracketing():
    with pytest.raises(sx.IncompleteBracketingError):
        sx.from_bracketing(sx.Bracketing(3, frozenset({(1, 3)})))


@pytest.mark.parametrize("n", range(2, 9))
def test_bracketing_round_trip(n):
    seen = set()
    for a in sx.enumerate_noncrossing(n):
        b = sx.to_bracketing(a)
        assert b.complete
        assert sx.from_bracketing(b) == a
        seen.add(b)
    assert len(seen) == sx.catalan(n - 1)


def test_bracket_member_examples():
    assert sx.bracket_member(SEVEN, 5, 7)
    assert not sx.bracket_member(SEVEN, 2, 3)
    for a in sx.enumerate_noncrossing(5):
        assert sx.bracket_member(a, 1, 5)


@pytest.mark.parametrize("n", range(2, 8))
def test_bracket_member_matches_bracketing(n):
    for a in sx.enumerate_noncrossing(n):
        b = sx.to_bracketing(a)
        for lo in range(1, n):
            for hi in range(lo + 1, n + 1):
                assert sx.bracket_member(a, lo, hi) == ((lo, hi) in b)


def test_collision_poset_examples():
    p = sx.collision_poset(chain(4))
    assert p.covers == {(1, 2), (2, 3)}
    p = sx.collision_poset(SEVEN)
    assert (1, 2) in p.covers and (3, 2) in p.covers


@pytest.mark.parametrize("n", range(2, 8))
def test_collision_poset_binary_tree(n):
    for a in sx.enumerate_noncrossing(n):
        p = sx.collision_poset(a)
        assert sorted(p.minima()) == sx.immediate_leaves(a)
        up = {}
        down = {}
        for x, y in p.covers:
            up.setdefault(x, []).append(y)
            down.setdefault(y, []).append(x)
        assert all(len(v) == 1 for v in up.values())
        assert all(len(v) <= 2 for v in down.values())
        # one root
        assert len([x for x in range(1, n) if x not in up]) == 1


def test_facet_normal_example():
    w = sx.facet_normal_rs(4, (1, 2, 3, 4), 2, 3)
    assert tuple(-x for x in w) == (1, 3, 3, 4)
    assert sx.facet_lifespan(4, 2, 3) == 2
    assert sx.facet_lifespan(3, 1, 2) == 1
    with pytest.raises(ValueError):
        sx.facet_normal_rs(4, (1, 2, 3, 4), 1, 4)


def test_facet_support_values_n5():
    c = (1, 2, 3, 4, 5)
    lp = core.simplex_instance(c)
    pts = [core.gkz_point(lp, a.to_arborescence()).coords for a in sx.enumerate_noncrossing(5)]
    for r, s in sx.facets(5):
        w = sx.facet_normal_rs(5, c, r, s)
        assert -max(core.dot(w, p) for p in pts) == 5 - 1 - (s - r)


def test_vertex_on_facet_examples():
    assert sx.vertex_on_facet(chain(4), 1, 2)
    assert sx.vertex_on_facet(SEVEN, 5, 7)


@pytest.mark.parametrize("n", range(3, 8))
def test_vertex_on_facet_iff_bracket(n):
    for a in sx.enumerate_noncrossing(n):
        for r, s in sx.facets(n):
            assert sx.vertex_on_facet(a, r, s) == sx.bracket_member(a, r, s)


def test_max_slope_tie():
    with pytest.raises(TieError):
        sx.max_slope((0, 1, 2), (1, 2, 3))


# properties of slopes on random weights ----------------------------------

def gen_instance(nmin=3, nmax=8):
    return st.integers(nmin, nmax).flatmap(lambda n: st.tuples(
        st.lists(st.integers(1, 5), min_size=n, max_size=n).map(lambda d: tuple(sum(d[:i + 1]) for i in range(n))),
        st.lists(st.integers(-30, 30), min_size=n, max_size=n).map(tuple)))


@settings(max_examples=200, deadline=None)
@given(gen_instance())
def test_slope_convexity(data):
    c, w = data
    n = len(c)
    for r in range(1, n - 1):
        for s in range(r + 1, n):
            for t in range(s + 1, n + 1):
                a, b, m = slope(w, c, r, s), slope(w, c, s, t), slope(w, c, r, t)
                lam = Fraction(c[s - 1] - c[r - 1], c[t - 1] - c[r - 1])
                assert m == lam * a + (1 - lam) * b
                assert (m > a) == (b > m)
                assert (m < a) == (b < m)


@settings(max_examples=200, deadline=None)
@given(gen_instance())
def test_max_slope_is_noncrossing_and_top_leaf_immediate(data):
    c, w = data
    try:
        arb = sx.max_slope(w, c)
    except TieError:
        assume(False)
    assert sx.is_noncrossing(arb)
    tau = sx.max_slopes(w, c, arb)
    top = max(range(1, arb.n), key=lambda i: tau[i - 1])
    if list(tau).count(tau[top - 1]) == 1:
        assert top in sx.immediate_leaves(arb)
    # slopes decrease along the collision poset
    p = sx.collision_poset(arb)
    for a, b in p.relation:
        assert tau[a - 1] >= tau[b - 1]
