"""Exact event-driven collision simulators.

Line model: particle ``i`` starts at ``-w_i`` and moves with velocity
``-c_i``.  When two adjacent particles meet, the slower one is absorbed by
the faster, which keeps its velocity.

Grid model: ``m`` vertical lines move left and ``n`` horizontal lines move
down.  Colliding parallel lines merge into the one with larger index and
every particle sitting on the absorbed line is absorbed by its neighbour on
the surviving line.

With ``perturb=True`` each location ``p`` of item ``g`` becomes
``p + e*g + e^2*g^2`` for an infinitesimal ``e``; times are then tuples in
lexicographic order whose first entry is the real time.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .core import TieError, check_chain, fvec, rat_str
from .simplex import SimplexArb


def _key(p, g, perturb):
    if perturb:
        return (p, Fraction(g), Fraction(g * g))
    return (p,)


def _meet(pa, pb, va, vb):
    """Time at which the item at ``pa`` (velocity ``va``) is caught by ``pb``."""
    d = va - vb
    return tuple((y - x) / d for x, y in zip(pa, pb))


def _fmt_time(t):
    return rat_str(t[0]) if len(t) == 1 else "(" + ", ".join(rat_str(x) for x in t) + ")"


def _check_positions(pos, name):
    for a, b in zip(pos, pos[1:]):
        if b < a:
            raise ValueError(f"{name} must be weakly increasing")


def _check_velocities(vel, name):
    check_chain(tuple(-v for v in vel), name)


def shift_for(w, c) -> Fraction:
    """Smallest ``alpha >= 0`` making ``-(w - alpha*c)`` weakly increasing."""
    w, c = fvec(w), fvec(c)
    alpha = Fraction(0)
    for i in range(len(w) - 1):
        alpha = max(alpha, (w[i + 1] - w[i]) / (c[i + 1] - c[i]))
    return alpha


@dataclass(frozen=True)
class LineConfig:
    positions: tuple
    velocities: tuple

    def __post_init__(self):
        p, v = fvec(self.positions), fvec(self.velocities)
        if len(p) != len(v):
            raise ValueError("positions and velocities differ in length")
        _check_positions(p, "positions")
        _check_velocities(v, "-velocities")
        object.__setattr__(self, "positions", p)
        object.__setattr__(self, "velocities", v)

    @property
    def n(self):
        return len(self.positions)

    @classmethod
    def from_weights(cls, w, c, alpha=None) -> "LineConfig":
        """Locations ``-(w - alpha*c)``, velocities ``-c``; alpha defaults to :func:`shift_for`."""
        w, c = fvec(w), fvec(c)
        if alpha is None:
            alpha = shift_for(w, c)
        return cls(tuple(-(wi - alpha * ci) for wi, ci in zip(w, c)), tuple(-ci for ci in c))


@dataclass(frozen=True)
class CollisionRecord:
    pattern: SimplexArb
    events: tuple  # (time, absorbed, absorber), time a Fraction
    lifespans: tuple
    config: LineConfig
    exact_times: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "pattern": list(self.pattern.targets),
            "events": [[rat_str(t), a, b] for t, a, b in self.events],
            "lifespans": [rat_str(x) for x in self.lifespans],
        }


def simulate_line(cfg: LineConfig, perturb: bool = False) -> CollisionRecord:
    n = cfg.n
    pos = {i: _key(cfg.positions[i - 1], i, perturb) for i in range(1, n + 1)}
    vel = {i: cfg.velocities[i - 1] for i in range(1, n + 1)}
    alive = list(range(1, n + 1))
    events, exact = [], []
    targets = [0] * (n - 1)
    life = [Fraction(0)] * (n - 1)
    while len(alive) > 1:
        cands = [(_meet(pos[a], pos[b], vel[a], vel[b]), a, b) for a, b in zip(alive, alive[1:])]
        tmin = min(t for t, _, _ in cands)
        hits = [(a, b) for t, a, b in cands if t == tmin]
        for (a, b), (b2, d) in zip(hits, hits[1:]):
            if b == b2:
                raise TieError(f"simultaneous collision of particles {a}, {b}, {d} at t = {_fmt_time(tmin)}")
        for a, b in hits:
            events.append((tmin[0], a, b))
            exact.append(tmin)
            targets[a - 1] = b
            life[a - 1] = tmin[0]
            alive.remove(a)
    return CollisionRecord(SimplexArb(tuple(targets)), tuple(events), tuple(life), cfg, tuple(exact))


@dataclass(frozen=True)
class GridConfig:
    vertical_positions: tuple
    vertical_velocities: tuple
    horizontal_positions: tuple
    horizontal_velocities: tuple

    def __post_init__(self):
        for name in ("vertical_positions", "vertical_velocities",
                     "horizontal_positions", "horizontal_velocities"):
            object.__setattr__(self, name, fvec(getattr(self, name)))
        if len(self.vertical_positions) != len(self.vertical_velocities):
            raise ValueError("vertical positions and velocities differ in length")
        if len(self.horizontal_positions) != len(self.horizontal_velocities):
            raise ValueError("horizontal positions and velocities differ in length")
        _check_positions(self.vertical_positions, "vertical positions")
        _check_positions(self.horizontal_positions, "horizontal positions")
        _check_velocities(self.vertical_velocities, "-vertical velocities")
        _check_velocities(self.horizontal_velocities, "-horizontal velocities")

    @property
    def m(self):
        return len(self.vertical_positions)

    @property
    def n(self):
        return len(self.horizontal_positions)

    @classmethod
    def from_weights(cls, c1, c2, w1, w2, alpha=None) -> "GridConfig":
        c1, c2, w1, w2 = fvec(c1), fvec(c2), fvec(w1), fvec(w2)
        if alpha is None:
            alpha = max(shift_for(w1, c1), shift_for(w2, c2))
        v = LineConfig.from_weights(w1, c1, alpha)
        h = LineConfig.from_weights(w2, c2, alpha)
        return cls(v.positions, v.velocities, h.positions, h.velocities)


@dataclass(frozen=True)
class GridCollisionRecord:
    m: int
    n: int
    pattern: object  # products.GridArb
    events: tuple  # (time, family 'V' or 'H', absorbed line, absorber line)
    lifespans: dict  # particle (r, i) -> absorption time
    config: GridConfig
    exact_times: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n,
            "pattern": self.pattern.to_json(),
            "events": [[rat_str(t), f, a, b] for t, f, a, b in self.events],
            "lifespans": {f"{r},{i}": rat_str(t) for (r, i), t in sorted(self.lifespans.items())},
        }


def simulate_grid(cfg: GridConfig, perturb: bool = False) -> GridCollisionRecord:
    from .products import GridArb

    m, n = cfg.m, cfg.n
    # global item numbers: verticals 1..m, horizontals m+1..m+n
    vpos = {r: _key(cfg.vertical_positions[r - 1], r, perturb) for r in range(1, m + 1)}
    hpos = {i: _key(cfg.horizontal_positions[i - 1], m + i, perturb) for i in range(1, n + 1)}
    vvel = dict(enumerate(cfg.vertical_velocities, start=1))
    hvel = dict(enumerate(cfg.horizontal_velocities, start=1))
    valive, halive = list(range(1, m + 1)), list(range(1, n + 1))
    targets, life, events, exact = {}, {}, [], []
    while len(valive) > 1 or len(halive) > 1:
        cands = [(_meet(vpos[a], vpos[b], vvel[a], vvel[b]), "V", a, b) for a, b in zip(valive, valive[1:])]
        cands += [(_meet(hpos[a], hpos[b], hvel[a], hvel[b]), "H", a, b) for a, b in zip(halive, halive[1:])]
        tmin = min(c[0] for c in cands)
        hits = [c[1:] for c in cands if c[0] == tmin]
        if len({f for f, _, _ in hits}) > 1:
            raise TieError(f"simultaneous vertical and horizontal collisions at t = {_fmt_time(tmin)}")
        for (f, a, b), (_, b2, d) in zip(hits, hits[1:]):
            if b == b2:
                raise TieError(f"simultaneous collision of lines {f}{a}, {f}{b}, {f}{d} at t = {_fmt_time(tmin)}")
        for f, a, b in hits:
            events.append((tmin[0], f, a, b))
            exact.append(tmin)
            if f == "V":
                for i in halive:
                    targets[(a, i)] = (b, i)
                    life[(a, i)] = tmin[0]
                valive.remove(a)
            else:
                for r in valive:
                    targets[(r, a)] = (r, b)
                    life[(r, a)] = tmin[0]
                halive.remove(a)
    return GridCollisionRecord(m, n, GridArb(m, n, targets), tuple(events), life, cfg, tuple(exact))


def total_lifespan(record) -> Fraction:
    vals = record.lifespans.values() if isinstance(record.lifespans, dict) else record.lifespans
    return sum(vals, Fraction(0))


# export ----------------------------------------------------------------------

CSV_FIELDS = ("particle_id", "t_start", "t_end", "pos_start", "pos_end")


def trajectory_segments(record):
    """World-line segments ``(id, t0, t1, x0, x1)``; survivors run one unit past the last event."""
    horizon = (record.events[-1][0] if record.events else Fraction(0)) + 1
    if isinstance(record, CollisionRecord):
        items = {str(i): (record.config.positions[i - 1], record.config.velocities[i - 1])
                 for i in range(1, record.config.n + 1)}
        touches = [(t, str(a), str(b)) for t, a, b in record.events]
    else:
        cfg = record.config
        items = {f"V{r}": (cfg.vertical_positions[r - 1], cfg.vertical_velocities[r - 1])
                 for r in range(1, cfg.m + 1)}
        items.update({f"H{i}": (cfg.horizontal_positions[i - 1], cfg.horizontal_velocities[i - 1])
                      for i in range(1, cfg.n + 1)})
        touches = [(t, f + str(a), f + str(b)) for t, f, a, b in record.events]
    cuts = {k: [Fraction(0)] for k in items}
    end = {k: horizon for k in items}
    for t, a, b in touches:
        end[a] = t
        if cuts[b][-1] != t:
            cuts[b].append(t)
    rows = []
    for k, (p, v) in items.items():
        stops = [t for t in cuts[k] if t < end[k]] + [end[k]]
        if stops[0] != 0:
            stops.insert(0, Fraction(0))
        if len(stops) == 1:
            stops.append(end[k])
        for t0, t1 in zip(stops, stops[1:]):
            rows.append((k, t0, t1, p + v * t0, p + v * t1))
    return rows


def trajectories_csv(record) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_FIELDS)
    for k, t0, t1, x0, x1 in trajectory_segments(record):
        wr.writerow([k, rat_str(t0), rat_str(t1), rat_str(x0), rat_str(x1)])
    return buf.getvalue()


def read_trajectories_csv(text: str):
    rows = list(csv.DictReader(io.StringIO(text)))
    return [(r["particle_id"], Fraction(r["t_start"]), Fraction(r["t_end"]),
             Fraction(r["pos_start"]), Fraction(r["pos_end"])) for r in rows]


def export_trajectories(record, fmt: str, path) -> None:
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(trajectories_csv(record))
    elif fmt == "svg":
        from .plotting import plot_world_lines
        plot_world_lines(trajectory_segments(record), path)
    else:
        raise ValueError(f"unknown export format {fmt!r}; use csv or svg")
