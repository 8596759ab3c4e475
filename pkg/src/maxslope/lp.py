"""Exact strict-inequality feasibility.

A system of constraints ``a.x > b``, ``a.x >= b`` and ``a.x = b`` over the
rationals is decided by maximizing a slack ``delta`` in

    a.x - delta >= b   (strict rows)
    a.x         >= b   (weak rows)
    a.x          = b   (equality rows)
    -B <= x_j <= B,    0 <= delta <= 1

and answering *feasible* iff the optimum is positive.  The LP is solved by
a two-phase primal simplex on an integer-preserving (fraction-free)
tableau with Bland's least-index rule, so it terminates and never rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

DEFAULT_BOX = 2 ** 20

_RELATIONS = (">", ">=", "=", "<", "<=")


@dataclass(frozen=True)
class StrictSystem:
    """A list of ``(a, relation, b)`` constraints sharing one dimension."""

    constraints: tuple = ()
    dim: int | None = field(default=None)

    def __post_init__(self):
        rows = []
        dim = self.dim
        for a, rel, b in self.constraints:
            if rel not in _RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            a = tuple(Fraction(x) for x in a)
            if dim is None:
                dim = len(a)
            elif len(a) != dim:
                raise ValueError(f"constraint of length {len(a)} in a system of dimension {dim}")
            rows.append((a, rel, Fraction(b)))
        object.__setattr__(self, "constraints", tuple(rows))
        object.__setattr__(self, "dim", dim or 0)

    def add(self, a, rel, b=0) -> "StrictSystem":
        return StrictSystem(self.constraints + ((a, rel, b),), self.dim)

    def normalized(self):
        """Yield constraints rewritten with relations in {'>', '>=', '='}."""
        for a, rel, b in self.constraints:
            if rel == "<":
                yield tuple(-x for x in a), ">", -b
            elif rel == "<=":
                yield tuple(-x for x in a), ">=", -b
            else:
                yield a, rel, b

    def satisfied_by(self, x: Sequence) -> bool:
        for a, rel, b in self.normalized():
            lhs = sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))
            if rel == ">" and not lhs > b:
                return False
            if rel == ">=" and not lhs >= b:
                return False
            if rel == "=" and lhs != b:
                return False
        return True


class Unbounded(Exception):
    pass


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = lcm(*(Fraction(v).denominator for v in row)) if row else 1
    return [int(Fraction(v) * den) for v in row]


class _Tableau:
    """Fraction-free simplex tableau.

    The true tableau is ``rows / den``; every entry stays an integer because
    each one is a minor of the original constraint matrix.
    """

    def __init__(self, rows, basis, ncols):
        self.rows = rows  # constraint rows, last entry is the rhs
        self.basis = basis
        self.ncols = ncols
        self.den = 1
        self.obj: list[int] = [0] * (ncols + 1)

    def pivot(self, r: int, s: int) -> None:
        rows, den = self.rows, self.den
        prow = rows[r]
        p = prow[s]
        everything = rows + [self.obj]
        for i, row in enumerate(everything):
            if i == r:
                continue
            f = row[s]
            if f == 0:
                if p != den:
                    everything[i] = [(v * p) // den for v in row]
                continue
            everything[i] = [(v * p - f * pv) // den for v, pv in zip(row, prow)]
        self.rows = everything[:-1]
        self.obj = everything[-1]
        self.den = p
        if p < 0:
            self.rows = [[-v for v in row] for row in self.rows]
            self.obj = [-v for v in self.obj]
            self.den = -p
        self.basis[r] = s

    def set_objective(self, costs: Sequence[int]) -> None:
        """Install ``maximize costs.z`` as the reduced-cost row (scaled by den)."""
        obj = [-c * self.den for c in costs] + [0]
        for i, b in enumerate(self.basis):
            cb = costs[b]
            if cb:
                obj = [o + cb * v for o, v in zip(obj, self.rows[i])]
        self.obj = obj

    def optimize(self, allowed: int) -> None:
        """Bland's rule over columns ``< allowed``."""
        while True:
            s = next((j for j in range(allowed) if self.obj[j] < 0), None)
            if s is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[s]
                if a <= 0:
                    continue
                if best is None:
                    best = i
                    continue
                rb, ab = self.rows[best][-1], self.rows[best][s]
                lhs, rhs = row[-1] * ab, rb * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
            if best is None:
                raise Unbounded
            self.pivot(best, s)


def maximize(rows, senses, rhs, costs, nvars):
    """Maximize ``costs.z`` subject to ``rows z (<=|>=|=) rhs`` and ``z >= 0``.

    Returns ``(value, z)`` with exact rationals, or ``None`` if infeasible.
    Raises :class:`Unbounded` if the objective is unbounded.
    """
    cons = []
    for a, sense, b in zip(rows, senses, rhs):
        a = [Fraction(v) for v in a]
        b = Fraction(b)
        if sense == ">=":
            a, b, sense = [-v for v in a], -b, "<="
        if b < 0:
            a, b = [-v for v in a], -b
            sense = {"<=": ">=", "=": "="}[sense]
        cons.append((a, sense, b))

    nslack = sum(1 for _, s, _ in cons if s != "=")
    nart = sum(1 for _, s, _ in cons if s != "<=")
    ncols = nvars + nslack + nart
    first_art = nvars + nslack

    table, basis = [], []
    slack, art = nvars, first_art
    for a, sense, b in cons:
        row = a + [Fraction(0)] * (nslack + nart) + [b]
        if sense == "<=":
            row[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        elif sense == ">=":
            row[slack] = Fraction(-1)
            slack += 1
            row[art] = Fraction(1)
            basis.append(art)
            art += 1
        else:
            row[art] = Fraction(1)
            basis.append(art)
            art += 1
        table.append(_integer_row(row))

    t = _Tableau(table, basis, ncols)
    if nart:
        t.set_objective([0] * first_art + [-1] * nart)
        t.optimize(ncols)
        if t.obj[-1] < 0:
            return None
        # drive zero-level artificials out of the basis, drop redundant rows
        i = 0
        while i < len(t.rows):
            if t.basis[i] >= first_art:
                s = next((j for j in range(first_art) if t.rows[i][j] != 0), None)
                if s is None:
                    del t.rows[i]
                    del t.basis[i]
                    continue
                t.pivot(i, s)
            i += 1
        t.rows = [row[:first_art] + row[-1:] for row in t.rows]
        t.ncols = first_art

    int_costs = _integer_row(list(costs))
    t.set_objective(int_costs + [0] * (t.ncols - nvars))
    t.optimize(t.ncols)

    z = [Fraction(0)] * nvars
    for i, b in enumerate(t.basis):
        if b < nvars:
            z[b] = Fraction(t.rows[i][-1], t.den)
    value = sum((Fraction(c) * v for c, v in zip(costs, z)), Fraction(0))
    return value, z


def strict_feasible(system: StrictSystem, box: int = DEFAULT_BOX):
    """Return an exact rational point satisfying ``system`` or ``None``.

    Strict rows hold strictly at the returned point.  The search is confined
    to ``[-box, box]^d``.
    """
    d = system.dim
    box = Fraction(box)
    rows, senses, rhs = [], [], []
    # variables: y = x + box (d of them), then delta
    for a, rel, b in system.normalized():
        shift = b + box * sum(a, Fraction(0))
        if rel == ">":
            rows.append(list(a) + [Fraction(-1)])
            senses.append(">=")
        else:
            rows.append(list(a) + [Fraction(0)])
            senses.append(">=" if rel == ">=" else "=")
        rhs.append(shift)
    for j in range(d):
        e = [Fraction(0)] * (d + 1)
        e[j] = Fraction(1)
        rows.append(e)
        senses.append("<=")
        rhs.append(2 * box)
    e = [Fraction(0)] * d + [Fraction(1)]
    rows.append(e)
    senses.append("<=")
    rhs.append(Fraction(1))

    res = maximize(rows, senses, rhs, [0] * d + [1], d + 1)
    if res is None:
        return None
    value, z = res
    if value <= 0:
        return None
    x = tuple(zj - box for zj in z[:d])
    assert system.satisfied_by(x), "strict_feasible produced an unsound witness"
    return x
