import random
from fractions import Fraction as F
from itertools import product as iproduct
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from maxslope import core
from maxslope import multiplihedra as mp
from maxslope import simplex as sx
from maxslope.multiplihedra import CubeArborescence, EvaluationTriple, RationalPolynomial

# V_n(k), coefficients from the constant term up
V_TABLE = {
    2: [2, 3, 1],
    3: [5, F(19, 2), F(11, 2), 1],
    4: [14, F(95, 3), 25, F(25, 3), 1],
    5: [42, F(219, 2), F(1291, 12), F(101, 2), F(137, 12), 1],
    6: [132, F(1944, 5), F(1360, 3), F(541, 2), F(263, 3), F(147, 10), 1],
    7: [429, F(14079, 10), F(56773, 30), F(8161, 6), F(6809, 12), F(2069, 15), F(363, 20), 1],
    8: [1430, F(362247, 70), F(1415369, 180), F(395189, 60), F(60125, 18), F(63229, 60),
        F(36461, 180), F(761, 35), 1],
    9: [4862, F(269403, 14), F(8211733, 252), F(373321, 12), F(6665857, 360), F(42877, 6),
        F(64549, 36), F(7915, 28), F(7129, 280), 1],
}


def brute_order_preserving(tree, l):
    nodes = range(1, tree.size + 1)
    return sum(all(f[a - 1] <= f[b - 1] for a, b in tree.relation)
               for f in iproduct(range(1, l + 1), repeat=tree.size))


@pytest.mark.parametrize("n", sorted(V_TABLE))
def test_v_table(n):
    assert list(mp.v_polynomial(n).coeffs) == V_TABLE[n]


def test_v_format():
    assert mp.v_polynomial(2).format() == "k^2 + 3k + 2"
    assert mp.v_polynomial(5).format() == "k^5 + (137/12)k^4 + (101/2)k^3 + (1291/12)k^2 + (219/2)k + 42"


@pytest.mark.parametrize("n", range(1, 11))
def test_v_shape(n):
    v = mp.v_polynomial(n)
    assert v.degree == n
    assert v.coeffs[0] == sx.catalan(n)
    assert v.coeffs[-1] == 1
    assert all((x * factorial(n - 1)).denominator == 1 for x in v.coeffs)


def test_small_order_polynomials():
    one = mp.enumerate_bsts(1)[0]
    assert mp.order_polynomial(one).coeffs == (0, 1)
    two = mp.enumerate_bsts(2)[0]
    p = mp.order_polynomial(two)
    assert all(p(l) == F(l * (l + 1), 2) for l in range(6))


@pytest.mark.parametrize("m", range(1, 6))
def test_order_polynomial_against_brute_force(m):
    for t in mp.enumerate_bsts(m):
        p = mp.order_polynomial(t)
        for l in range(0, 4):
            assert p(l) == mp.count_order_preserving(t, l) == brute_order_preserving(t, l)


@pytest.mark.parametrize("m", range(1, 7))
def test_leading_coefficient_counts_extensions(m):
    for t in mp.enumerate_bsts(m):
        assert mp.order_polynomial(t).coeffs[-1] * factorial(m) == mp.linear_extensions(t)


@pytest.mark.parametrize("m", range(0, 7))
def test_bsts_are_collision_posets(m):
    trees = mp.enumerate_bsts(m)
    assert len(trees) == sx.catalan(m)
    assert set(trees) == {sx.collision_poset(a) for a in sx.enumerate_noncrossing(m + 1)}


def test_series():
    cat = mp.catalan_series(8)
    assert cat[:8] == [0, 1, 1, 2, 5, 14, 42, 132]
    sq = mp.series_compose(cat, cat, 6)
    assert sq[:6] == [0, 1, 2, 6, 21, 80]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_polynomial_ring(a, b):
    p, q = RationalPolynomial(a), RationalPolynomial(b)
    for x in range(-3, 4):
        assert (p + q)(x) == p(x) + q(x)
        assert (p * q)(x) == p(x) * q(x)
    xs = list(range(5))
    assert RationalPolynomial.interpolate(xs, [p(x) for x in xs])(7) == p(7)


def test_cube_max_slope_k0():
    w, c = (0, 5, 1, 3), (1, 2, 3, 4)
    arb = mp.cube_max_slope(4, 0, c, (), w, ())
    assert {i: t[0] for (i, _), t in arb.map.items()} == dict(enumerate(sx.max_slope(w, c).targets, 1))


def test_cube_max_slope_square():
    # tau(1) = 1 < s_1 = 2: go up the cube first
    arb = mp.cube_max_slope(2, 1, (1, 2), (1,), (0, 1), (2,))
    e, one = frozenset(), frozenset({1})
    assert arb.map == {(1, e): (1, one), (1, one): (2, one), (2, e): (2, one)}


def test_cube_max_slope_matches_lp():
    rng = random.Random(8)
    for _ in range(60):
        n, k = rng.randint(2, 4), rng.randint(1, 2)
        c = tuple(sorted(rng.sample(range(1, 15), n)))
        r = tuple(rng.randint(1, 3) for _ in range(k))
        w = tuple(rng.randint(-15, 15) for _ in range(n))
        s = tuple(rng.randint(-15, 15) for _ in range(k))
        lp = core.cube_instance(c, r)
        try:
            arb = mp.cube_max_slope(n, k, c, r, w, s)
        except core.TieError:
            continue
        assert CubeArborescence.from_arborescence(lp, core.max_slope_arborescence(lp, w + s)) == arb


def test_determined_by_triple():
    rng = random.Random(4)
    c = (1, 2, 3, 4)
    for _ in range(40):
        w = tuple(rng.randint(-20, 20) for _ in c)
        s = tuple(rng.randint(-20, 20) for _ in range(2))
        try:
            arb = mp.cube_max_slope(4, 2, c, (1, 1), w, s)
        except core.TieError:
            continue
        ev = mp.arb_to_evaluation(arb)
        assert mp.evaluation_to_arb(ev) == arb
        # nudging s inside its slot keeps the arborescence
        tau = sorted(set(sx.max_slopes(w, c)) | set(s))
        gap = min((b - a for a, b in zip(tau, tau[1:])), default=1)
        s2 = tuple(x + F(gap, 3) for x in s)
        if set(s2) & set(sx.max_slopes(w, c)):
            continue
        assert mp.arb_to_evaluation(mp.cube_max_slope(4, 2, c, (1, 1), w, s2)) == ev


def test_triple_counts():
    assert len(mp.enumerate_evaluations(2, 1)) == 2
    assert len(mp.enumerate_evaluations(3, 1)) == 6


def test_invalid_triple():
    chain = mp.enumerate_bsts(2)
    with pytest.raises(mp.InvalidTripleError):
        for t in chain:
            lo, hi = sorted(t.covers)[0]
            phi = [0, 0]
            phi[lo - 1] = 1
            EvaluationTriple((1,), t, tuple(phi))


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)])
def test_triples_witness_round_trip(n, k):
    c = tuple(range(1, n + 1))
    r = tuple(range(1, k + 1))
    for ev in mp.enumerate_evaluations(n, k):
        w, s = mp.evaluation_to_witness(ev, c, r)
        arb = mp.cube_max_slope(n, k, c, r, w, s)
        assert arb == mp.evaluation_to_arb(ev)
        assert mp.arb_to_evaluation(arb) == ev


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (2, 2), (3, 2)])
def test_triples_are_all_vertices(n, k):
    lp = core.cube_instance(range(1, n + 1), [1] * k)
    brute = {CubeArborescence.from_arborescence(lp, a) for a, _ in core.realizable_arborescences(lp)}
    assert brute == {mp.evaluation_to_arb(ev) for ev in mp.enumerate_evaluations(n, k)}


def test_k0_count_is_catalan():
    for n in range(2, 6):
        assert mp.multiplihedron_count(n, 0)["brute_force"] == sx.catalan(n - 1)


def test_index_convention_pinned():
    # brute force follows V with one fewer node; the literal y^{n+1} coefficient does not
    for n, k in [(2, 1), (3, 1), (3, 2), (4, 1)]:
        rep = mp.multiplihedron_count(n, k)
        assert rep["brute_force"] == rep["k!V_{n-1}(k)"] == rep["series_y^n"]
        assert rep["brute_force"] != rep["k!V_n(k)"]
        assert rep["series_y^{n+1}"] == rep["k!V_n(k)"]


def test_count_budget():
    from maxslope.polytope import BudgetError
    with pytest.raises(BudgetError):
        mp.multiplihedron_count(5, 4)


@pytest.mark.parametrize("n", range(1, 7))
def test_forest_count_matches_tree_sum(n):
    trees = mp.enumerate_bsts(n)
    for l in range(0, 5):
        assert mp.forest_count(n, l) == sum(mp.count_order_preserving(t, l) for t in trees)
