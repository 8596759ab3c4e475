import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from maxslope import core
from maxslope import simplex as sx
from maxslope.core import TieError
from maxslope.particles import (GridConfig, LineConfig, export_trajectories, read_trajectories_csv,
                                simulate_grid, simulate_line, total_lifespan, trajectories_csv,
                                trajectory_segments)
from maxslope.products import GridArb, is_reducible, product_max_slope

SEVEN_LINE = LineConfig((1, 2, 6, 8, 20, 24, 29), tuple(range(-1, -8, -1)))


def random_chain(rng, n):
    c, x = [], 0
    for _ in range(n):
        x += rng.randint(1, 6)
        c.append(x)
    return tuple(c)


def test_two_particles():
    rec = simulate_line(LineConfig((0, 1), (-1, -2)))
    assert rec.pattern == sx.SimplexArb((2,))
    assert rec.events == ((1, 1, 2),)
    assert total_lifespan(rec) == 1


def test_seven_particle_pattern():
    rec = simulate_line(SEVEN_LINE)
    assert rec.pattern == sx.SimplexArb((2, 4, 4, 7, 6, 7))
    _, _, r = sx.decompose(rec.pattern)
    assert r == 4
    assert sx.immediate_leaves(rec.pattern) == [1, 3, 5]


def test_triple_collision_raises():
    # all three meet at the origin at t = 1
    with pytest.raises(TieError) as e:
        simulate_line(LineConfig((1, 2, 3), (-1, -2, -3)))
    assert "1, 2, 3" in str(e.value)
    rec = simulate_line(LineConfig((1, 2, 3), (-1, -2, -3)), perturb=True)
    assert rec.pattern.n == 3


def test_disjoint_simultaneous_pairs_are_fine():
    rec = simulate_line(LineConfig((0, 1, 10, 11), (-1, -2, -10, -11)))
    assert rec.pattern == sx.SimplexArb((2, 4, 4))


@pytest.mark.parametrize("n", range(2, 9))
def test_collisions_match_max_slope(n):
    rng = random.Random(1000 + n)
    done = 0
    while done < 200:
        c = random_chain(rng, n)
        w = tuple(rng.randint(-40, 40) for _ in range(n))
        try:
            expect = sx.max_slope(w, c)
        except TieError:
            continue
        rec = simulate_line(LineConfig.from_weights(w, c))
        assert rec.pattern == expect
        done += 1


@pytest.mark.parametrize("n", range(3, 7))
def test_facet_locations_lifespan(n):
    c = tuple(range(1, n + 1))
    for r, s in sx.facets(n):
        w = sx.facet_normal_rs(n, c, r, s)
        rec = simulate_line(LineConfig(tuple(-x for x in w), tuple(-x for x in c)), perturb=True)
        assert total_lifespan(rec) == n - 1 - (s - r)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 7).flatmap(lambda n: st.lists(st.integers(0, 4), min_size=n, max_size=n)))
def test_lifespan_is_minus_support(gaps):
    n = len(gaps)
    loc = tuple(sum(gaps[:i + 1]) for i in range(n))
    c = tuple(range(1, n + 1))
    rec = simulate_line(LineConfig(loc, tuple(-x for x in c)), perturb=True)
    lp = core.simplex_instance(c)
    w = tuple(-x for x in loc)
    pts = [core.gkz_point(lp, a.to_arborescence()).coords for a in sx.enumerate_noncrossing(n)]
    assert total_lifespan(rec) == -max(core.dot(w, p) for p in pts)


def test_csv_two_particles(tmp_path):
    rec = simulate_line(LineConfig((0, 1), (-1, -2)))
    segs = trajectory_segments(rec)
    assert len(segs) == 3
    path = tmp_path / "t.csv"
    export_trajectories(rec, "csv", path)
    assert read_trajectories_csv(path.read_text()) == segs


def test_csv_round_trip_rationals():
    rec = simulate_line(LineConfig((0, Fraction(1, 3), 5), (-1, Fraction(-7, 2), -9)))
    text = trajectories_csv(rec)
    assert text.splitlines()[0] == "particle_id,t_start,t_end,pos_start,pos_end"
    assert read_trajectories_csv(text) == trajectory_segments(rec)


def test_seven_particle_world_lines(tmp_path):
    rec = simulate_line(SEVEN_LINE)
    segs = trajectory_segments(rec)
    assert len({s[0] for s in segs}) == 7
    last = max(s[2] for s in segs)
    assert [s[0] for s in segs if s[2] == last] == ["7"]
    # every world line ends where its absorber is
    for t, a, b in rec.events:
        ea = [s for s in segs if s[0] == str(a) and s[2] == t][0]
        eb = [s for s in segs if s[0] == str(b) and s[1] <= t <= s[2]][0]
        assert ea[4] == eb[3] + (t - eb[1]) * (eb[4] - eb[3]) / (eb[2] - eb[1])
    path = tmp_path / "seven.svg"
    export_trajectories(rec, "svg", path)
    assert path.read_text().lstrip().startswith("<?xml")


def test_grid_vertical_first():
    cfg = GridConfig((0, 1), (-1, -2), (0, 10), (-3, -4))
    rec = simulate_grid(cfg)
    assert rec.pattern.map == {(1, 1): (2, 1), (1, 2): (2, 2), (2, 1): (2, 2)}
    assert [e[1] for e in rec.events] == ["V", "H"]


def test_grid_with_one_vertical_is_line():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(2, 6)
        c = random_chain(rng, n)
        pos = sorted(rng.randint(0, 30) for _ in range(n))
        line = LineConfig(pos, tuple(-x for x in c))
        try:
            expect = simulate_line(line)
        except TieError:
            continue
        rec = simulate_grid(GridConfig((0,), (-1,), pos, tuple(-x for x in c)))
        assert {i: t[1] for (_, i), t in rec.pattern.map.items()} == dict(enumerate(expect.pattern.targets, 1))
        assert total_lifespan(rec) == total_lifespan(expect)


def test_four_by_four_grid_equals_product_rule():
    c1, c2 = (1, 2, 3, 4), (5, 6, 7, 8)
    w1, w2 = (11, 14, 21, 24), (38, 44, 44, 48)
    rec = simulate_grid(GridConfig.from_weights(c1, c2, w1, w2))
    assert rec.pattern == product_max_slope(4, 4, c1, c2, w1, w2)
    assert is_reducible(rec.pattern)


def test_grid_matches_product_formula_random():
    rng = random.Random(11)
    done = 0
    while done < 100:
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        c1, c2 = random_chain(rng, m), random_chain(rng, n)
        w1 = tuple(rng.randint(-30, 30) for _ in range(m))
        w2 = tuple(rng.randint(-30, 30) for _ in range(n))
        try:
            expect = product_max_slope(m, n, c1, c2, w1, w2)
            rec = simulate_grid(GridConfig.from_weights(c1, c2, w1, w2))
        except TieError:
            continue
        assert rec.pattern == expect
        assert is_reducible(rec.pattern)
        done += 1


def test_grid_cross_family_tie():
    with pytest.raises(TieError):
        simulate_grid(GridConfig((0, 1), (-1, -2), (0, 2), (-1, -3)))
