"""Max-slope arborescences of a simplex with increasing objective c_1 < ... < c_n.

Node indices are 1-based.  An arborescence is a map ``A: [n-1] -> [n]`` with
``A(i) > i``; :class:`SimplexArb` stores it as the tuple ``(A(1), ..., A(n-1))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .core import Arborescence, LpInstance, check_chain, fvec, slope
from .lp import StrictSystem


class CrossingError(ValueError):
    pass


class IncompleteBracketingError(ValueError):
    pass


@dataclass(frozen=True)
class SimplexArb:
    targets: tuple

    def __post_init__(self):
        t = tuple(int(x) for x in self.targets)
        object.__setattr__(self, "targets", t)
        n = len(t) + 1
        for i, a in enumerate(t, start=1):
            if not i < a <= n:
                raise ValueError(f"A({i}) = {a} is not in ({i}, {n}]")

    @property
    def n(self) -> int:
        return len(self.targets) + 1

    def __call__(self, i: int) -> int:
        """``A(i)`` with the convention ``A(0) = n``."""
        if i == 0:
            return self.n
        return self.targets[i - 1]

    def orbit(self, a: int):
        """``A(a), A^2(a), ...`` up to and including the sink ``n``."""
        while a < self.n:
            a = self(a)
            yield a

    def preimages(self, k: int):
        return [i for i, a in enumerate(self.targets, start=1) if a == k]

    def __str__(self):
        return "{" + ",".join(f"{i}->{a}" for i, a in enumerate(self.targets, start=1)) + "}"

    def to_json(self) -> str:
        return json.dumps(list(self.targets))

    @classmethod
    def from_json(cls, s) -> "SimplexArb":
        return cls(tuple(json.loads(s) if isinstance(s, str) else s))

    @classmethod
    def from_map(cls, mapping: dict) -> "SimplexArb":
        return cls(tuple(mapping[i] for i in range(1, len(mapping) + 1)))

    def to_arborescence(self) -> Arborescence:
        return Arborescence(tuple(a - 1 for a in self.targets) + (None,))

    @classmethod
    def from_arborescence(cls, arb: Arborescence) -> "SimplexArb":
        return cls(tuple(t + 1 for t in arb.targets[:-1]))


def max_slope(w, c) -> SimplexArb:
    """The max-slope arborescence of the simplex, computed from slopes directly."""
    from .core import TieError
    n = len(c)
    targets = []
    for i in range(1, n):
        slopes = [(slope(w, c, i, j), j) for j in range(i + 1, n + 1)]
        best = max(s for s, _ in slopes)
        winners = [j for s, j in slopes if s == best]
        if len(winners) > 1:
            raise TieError(f"max-slope tie at node {i} between {winners}")
        targets.append(winners[0])
    return SimplexArb(tuple(targets))


def max_slopes(w, c, arb: SimplexArb | None = None) -> tuple[Fraction, ...]:
    """``tau(i) = max_j tau(i, j)`` for ``i < n``."""
    n = len(c)
    if arb is not None:
        return tuple(slope(w, c, i, arb(i)) for i in range(1, n))
    return tuple(max(slope(w, c, i, j) for j in range(i + 1, n + 1)) for i in range(1, n))


def is_noncrossing(arb: SimplexArb) -> bool:
    A = arb
    for a in range(1, arb.n):
        b = A(a)
        for i in range(a + 1, b):
            if A(i) > b:
                return False
    return True


def enumerate_arbs(n: int) -> list[SimplexArb]:
    if n < 1:
        raise ValueError("n must be positive")
    return [SimplexArb(t) for t in product(*(range(i + 1, n + 1) for i in range(1, n)))]


def compose(left: SimplexArb, right: SimplexArb) -> SimplexArb:
    """Inverse of :func:`decompose`: glue ``left`` on [1, r] and ``right`` on [r+1, n]."""
    r = left.n
    n = r + right.n
    return SimplexArb(left.targets + (n,) + tuple(t + r for t in right.targets))


def decompose(arb: SimplexArb) -> tuple[SimplexArb, SimplexArb, int]:
    n = arb.n
    if n < 2:
        raise ValueError("decompose needs at least two nodes")
    r = next(i for i in range(1, n) if arb(i) == n)
    left = SimplexArb(arb.targets[: r - 1])
    right = SimplexArb(tuple(arb(r + i) - r for i in range(1, n - r)))
    return left, right, r


@lru_cache(maxsize=None)
def _noncrossing(n: int) -> tuple[SimplexArb, ...]:
    if n == 1:
        return (SimplexArb(()),)
    out = []
    for r in range(1, n):
        for left in _noncrossing(r):
            for right in _noncrossing(n - r):
                out.append(compose(left, right))
    return tuple(sorted(out, key=lambda a: a.targets))


def enumerate_noncrossing(n: int) -> list[SimplexArb]:
    """Noncrossing arborescences on ``n`` nodes, built from the decomposition."""
    if n < 1:
        raise ValueError("n must be positive")
    return list(_noncrossing(n))


def catalan(k: int) -> int:
    """Catalan numbers from the convolution recurrence."""
    cs = [1]
    for j in range(k):
        cs.append(sum(cs[i] * cs[j - i] for i in range(j + 1)))
    return cs[k]


def leaves(arb: SimplexArb) -> list[int]:
    hit = set(arb.targets)
    return [k for k in range(1, arb.n) if k not in hit]


def immediate_leaves(arb: SimplexArb) -> list[int]:
    return [k for k in leaves(arb) if arb(k) == k + 1]


def remove_node(arb: SimplexArb, l: int) -> SimplexArb:
    """Drop a leaf ``l`` and relabel the remaining nodes consecutively."""
    if arb.preimages(l):
        raise ValueError(f"{l} is not a leaf")
    shift = lambda j: j - 1 if j > l else j
    return SimplexArb(tuple(shift(arb(i)) for i in range(1, arb.n) if i != l))


def coherence_system(arb: SimplexArb, c) -> StrictSystem:
    """The inequalities ``L_{i,k}(w) > 0`` for all ``i < k``, ``k != A(i)``."""
    c = fvec(c)
    n = arb.n
    rows = []
    for i in range(1, n):
        a = arb(i)
        for k in range(i + 1, n + 1):
            if k == a:
                continue
            row = [Fraction(0)] * n
            row[a - 1] += c[k - 1] - c[i - 1]
            row[k - 1] -= c[a - 1] - c[i - 1]
            row[i - 1] += c[a - 1] - c[k - 1]
            rows.append((tuple(row), ">", 0))
    return StrictSystem(tuple(rows), n)


def witness_weight(arb: SimplexArb, c, priority=None) -> tuple[Fraction, ...]:
    """A weight ``w`` with ``max_slope(w, c) == arb``.

    Peels off an immediate leaf ``l``, realizes the rest recursively and puts
    ``w_l`` one below the smallest upper bound the remaining inequalities
    impose on it.  By default the smallest immediate leaf is peeled.  With
    ``priority`` (a key on nodes) the leaf of least priority is peeled and
    ``tau(l)`` is additionally forced above every remaining ``tau``, so the
    max slopes come out strictly decreasing in peeling order.
    """
    c = check_chain(c)
    if len(c) != arb.n:
        raise ValueError("c has the wrong length")
    if not is_noncrossing(arb):
        raise CrossingError(f"{arb} is crossing and has no max-slope witness")
    nodes = list(range(1, arb.n + 1))
    w = _witness(arb, c, nodes, priority)
    return tuple(w)


def _witness(arb, c, nodes, priority):
    n = arb.n
    if n <= 2:
        return [Fraction(0)] * n
    imm = immediate_leaves(arb)
    if priority is None:
        l = imm[0]
    else:
        l = min(imm, key=lambda k: (priority(nodes[k - 1]), nodes[k - 1]))
    rest = remove_node(arb, l)
    sub_c = c[: l - 1] + c[l:]
    sub_w = _witness(rest, sub_c, nodes[: l - 1] + nodes[l:], priority)
    w = sub_w[: l - 1] + [None] + sub_w[l - 1:]
    bounds = []
    cl = c[l - 1]
    # l = i < k, A(l) = l + 1
    for k in range(l + 2, n + 1):
        ck = c[k - 1]
        cn = c[l]
        bounds.append(((ck - cl) * w[l] - (cn - cl) * w[k - 1]) / (ck - cn))
    # i < k = l, A(i) != l
    for i in range(1, l):
        a = arb(i)
        ci, ca = c[i - 1], c[a - 1]
        bounds.append(((cl - ci) * w[a - 1] + (ca - cl) * w[i - 1]) / (ca - ci))
    if priority is not None:
        others = [slope(w, c, i, arb(i)) for i in range(1, n) if i != l]
        if others:
            bounds.append(w[l] - max(others) * (c[l] - cl))
    w[l - 1] = (min(bounds) if bounds else Fraction(0)) - 1
    return w


# bracketings --------------------------------------------------------------

@dataclass(frozen=True)
class Bracketing:
    """Non-singleton brackets ``(lo, hi)`` of ``[n]``; always includes ``(1, n)``."""

    n: int
    brackets: frozenset

    def __post_init__(self):
        br = frozenset((int(a), int(b)) for a, b in self.brackets)
        object.__setattr__(self, "brackets", br)
        for a, b in br:
            if not 1 <= a < b <= self.n:
                raise ValueError(f"[{a},{b}] is not a non-singleton bracket of [{self.n}]")
        if self.n >= 2 and (1, self.n) not in br:
            raise ValueError("a bracketing must contain [1, n]")
        for (a, b) in br:
            for (x, y) in br:
                nested = (a <= x and y <= b) or (x <= a and b <= y)
                if not nested and not (b < x or y < a):
                    raise ValueError(f"brackets [{a},{b}] and [{x},{y}] overlap")

    @property
    def complete(self) -> bool:
        return len(self.brackets) == self.n - 1

    def sorted(self):
        return sorted(self.brackets)

    def to_json(self) -> str:
        return json.dumps([list(b) for b in self.sorted()])

    def __contains__(self, item):
        return tuple(item) in self.brackets


def to_bracketing(arb: SimplexArb) -> Bracketing:
    if not is_noncrossing(arb):
        raise CrossingError(f"{arb} is crossing")
    return Bracketing(arb.n, frozenset(_brackets(arb, 0)))


def _brackets(arb, offset):
    n = arb.n
    if n < 2:
        return set()
    left, right, r = decompose(arb)
    out = {(offset + 1, offset + n)}
    out |= _brackets(left, offset)
    out |= _brackets(right, offset + r)
    return out


def from_bracketing(br: Bracketing) -> SimplexArb:
    if not br.complete:
        raise IncompleteBracketingError(
            f"bracketing has {len(br.brackets)} brackets, a complete one on [{br.n}] has {br.n - 1}")
    return _from_brackets(br.brackets, 1, br.n)


def _from_brackets(brs, lo, hi):
    n = hi - lo + 1
    if n == 1:
        return SimplexArb(())
    inner = [b for (a, b) in brs if a == lo and b < hi]
    r = max(inner) - lo + 1 if inner else 1
    left = _from_brackets(brs, lo, lo + r - 1)
    right = _from_brackets(brs, lo + r, hi)
    return compose(left, right)


def bracket_member(arb: SimplexArb, a: int, b: int) -> bool:
    """``[a, b]`` is a bracket of ``arb`` iff ``A(a-1) >= b`` and ``A^k(a) = b``."""
    if not 1 <= a < b <= arb.n:
        raise ValueError(f"need 1 <= a < b <= n, got ({a}, {b})")
    return arb(a - 1) >= b and b in arb.orbit(a)


# collision poset ----------------------------------------------------------

@dataclass(frozen=True)
class CollisionPoset:
    """Partial order on ``[n-1]``; ``(a, b)`` in ``relation`` means ``a <= b``."""

    size: int
    relation: frozenset

    @property
    def covers(self) -> frozenset:
        strict = {(a, b) for a, b in self.relation if a != b}
        return frozenset((a, b) for a, b in strict
                         if not any((a, x) in strict and (x, b) in strict for x in range(1, self.size + 1)))

    def leq(self, a, b) -> bool:
        return (a, b) in self.relation

    def minima(self) -> list[int]:
        return [x for x in range(1, self.size + 1)
                if not any((y, x) in self.relation for y in range(1, self.size + 1) if y != x)]

    def to_json(self) -> str:
        return json.dumps([list(p) for p in sorted(self.covers)])


def collision_poset(arb: SimplexArb) -> CollisionPoset:
    """``a <= b`` iff ``a <= b`` and ``b = A^k(a)``, or ``b < a`` and ``A(b) = A^{k+1}(a)``."""
    if not is_noncrossing(arb):
        raise CrossingError(f"{arb} is crossing")
    n = arb.n
    rel = set()
    for a in range(1, n):
        orbit = [a] + list(arb.orbit(a))
        for b in range(1, n):
            if a <= b and b in orbit:
                rel.add((a, b))
            elif b < a and arb(b) in orbit[1:]:
                rel.add((a, b))
    return CollisionPoset(n - 1, frozenset(rel))


# facets ---------------------------------------------------------------------

def facet_normal_rs(n: int, c, r: int, s: int) -> tuple[Fraction, ...]:
    """``w^{r,s}``: minus the locations ``(c_1..c_{r-1}, c_s..c_s, c_{s+1}..c_n)``."""
    c = fvec(c)
    if len(c) != n:
        raise ValueError("c has the wrong length")
    if not 1 <= r < s <= n or (r, s) == (1, n):
        raise ValueError(f"(r, s) = ({r}, {s}) does not name a facet")
    loc = [c[i - 1] if i < r or i > s else c[s - 1] for i in range(1, n + 1)]
    return tuple(-x for x in loc)


def facet_lifespan(n: int, r: int, s: int) -> int:
    return n - 1 - (s - r)


def facets(n: int):
    return [(r, s) for r in range(1, n) for s in range(r + 1, n + 1) if (r, s) != (1, n)]


def vertex_on_facet(arb: SimplexArb, r: int, s: int) -> bool:
    """``A`` maps ``[r, s-1]`` into ``[r, s]`` and its complement into its complement."""
    inside = range(r, s)
    for i in range(1, arb.n):
        a = arb(i)
        if i in inside:
            if not r <= a <= s:
                return False
        elif r <= a <= s - 1:
            return False
    return True
