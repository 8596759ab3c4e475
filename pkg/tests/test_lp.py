from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maxslope.lp import StrictSystem, maximize, strict_feasible


def fm_feasible(constraints, dim):
    """Fourier-Motzkin elimination over (a, strict, b) meaning a.x > b or a.x >= b."""
    rows = []
    for a, rel, b in StrictSystem(constraints, dim).normalized():
        a = [Fraction(x) for x in a]
        if rel == "=":
            rows.append((a, False, b))
            rows.append(([-x for x in a], False, -b))
        else:
            rows.append((a, rel == ">", b))
    for j in range(dim):
        pos = [r for r in rows if r[0][j] > 0]
        neg = [r for r in rows if r[0][j] < 0]
        rows = [r for r in rows if r[0][j] == 0]
        for ap, sp, bp in pos:
            for an, sn, bn in neg:
                fp, fn = 1 / ap[j], -1 / an[j]
                rows.append(([x * fp + y * fn for x, y in zip(ap, an)], sp or sn, bp * fp + bn * fn))
    return all((0 > b) if strict else (0 >= b) for _, strict, b in rows)


def test_open_interval():
    x = strict_feasible(StrictSystem([((1,), ">", 0), ((1,), "<", 1)]))
    assert x is not None and 0 < x[0] < 1


def test_opposite_rays_infeasible():
    assert strict_feasible(StrictSystem([((1,), ">", 0), ((-1,), ">", 0)])) is None


def test_weak_boundary_point():
    # x >= 1 and x <= 1 is feasible but x > 1, x <= 1 is not
    assert strict_feasible(StrictSystem([((1,), ">=", 1), ((1,), "<=", 1)])) == (1,)
    assert strict_feasible(StrictSystem([((1,), ">", 1), ((1,), "<=", 1)])) is None


def test_equality_rows():
    sys_ = StrictSystem([((1, 1), "=", 3), ((1, -1), ">", 0), ((0, 1), ">", 0)])
    x = strict_feasible(sys_)
    assert x is not None and sys_.satisfied_by(x)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        StrictSystem([((1, 2), ">", 0), ((1,), ">", 0)])


def test_maximize_small():
    # max x + y with x + 2y <= 4, 3x + y <= 6
    val, z = maximize([[1, 2], [3, 1]], ["<=", "<="], [4, 6], [1, 1], 2)
    assert val == Fraction(14, 5)
    assert z == [Fraction(8, 5), Fraction(6, 5)]


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates
    rows = [[Fraction(1, 4), -8, -1, 9], [Fraction(1, 2), -12, Fraction(-1, 2), 3], [0, 0, 1, 0]]
    val, z = maximize(rows, ["<=", "<=", "<="], [0, 0, 1], [Fraction(3, 4), -20, Fraction(1, 2), -6], 4)
    assert val == Fraction(5, 4)


coef = st.integers(-3, 3)


@st.composite
def systems(draw):
    dim = draw(st.integers(1, 3))
    k = draw(st.integers(1, 5))
    cons = []
    for _ in range(k):
        a = tuple(draw(coef) for _ in range(dim))
        rel = draw(st.sampled_from([">", ">=", "=", "<", "<="]))
        cons.append((a, rel, draw(coef)))
    return cons, dim


@settings(max_examples=300, deadline=None)
@given(systems())
def test_agrees_with_fourier_motzkin(data):
    cons, dim = data
    sys_ = StrictSystem(cons, dim)
    x = strict_feasible(sys_)
    assert (x is not None) == fm_feasible(cons, dim)
    if x is not None:
        assert sys_.satisfied_by(x)
