"""Arborescences of a product of two simplices and their rectangular preorders.

Nodes are pairs ``(r, i)`` with ``r`` in ``[m]`` and ``i`` in ``[n]``; the sink
is ``(m, n)``.  A step ``(r, i) -> (s, i)`` changes the first coordinate and a
step ``(r, i) -> (r, j)`` the second.  Lines are labelled ``("V", r)`` for the
vertical line ``L'_r`` (``r < m``) and ``("H", i)`` for the horizontal line
``L''_i`` (``i < n``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import prod

from .core import TieError, check_chain, fvec
from .simplex import SimplexArb, collision_poset, is_noncrossing, max_slope, max_slopes


@dataclass(frozen=True)
class GridArb:
    m: int
    n: int
    targets: tuple  # sorted ((r, i), (s, j)) pairs

    def __init__(self, m, n, targets):
        items = targets.items() if isinstance(targets, dict) else targets
        items = tuple(sorted(((int(a), int(b)), (int(c), int(d))) for (a, b), (c, d) in items))
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "targets", items)
        self._validate()

    def _validate(self):
        m, n = self.m, self.n
        mp = dict(self.targets)
        expected = {(r, i) for r in range(1, m + 1) for i in range(1, n + 1)} - {(m, n)}
        if set(mp) != expected or len(mp) != len(self.targets):
            raise ValueError("targets must cover every node except the sink exactly once")
        for (r, i), (s, j) in mp.items():
            if not ((r < s <= m and i == j) or (r == s and i < j <= n)):
                raise ValueError(f"({r},{i}) -> ({s},{j}) is not an improving edge")

    def __call__(self, r, i):
        return self.map[(r, i)]

    @property
    def map(self) -> dict:
        return dict(self.targets)

    def __str__(self):
        return "{" + ", ".join(f"{r}{i}->{s}{j}" for (r, i), (s, j) in self.targets) + "}"

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "targets": [[r, i, s, j] for (r, i), (s, j) in self.targets]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, doc) -> "GridArb":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc["m"], doc["n"], [((r, i), (s, j)) for r, i, s, j in doc["targets"]])

    def transpose(self) -> "GridArb":
        return GridArb(self.n, self.m, [((i, r), (j, s)) for (r, i), (s, j) in self.targets])

    def to_arborescence(self, lp):
        from .core import Arborescence
        return Arborescence.from_labels(lp, self.map)

    @classmethod
    def from_arborescence(cls, lp, arb) -> "GridArb":
        m, n = lp.params["m"], lp.params["n"]
        return cls(m, n, arb.labelled(lp))


def product_max_slope(m, n, c1, c2, w1, w2) -> GridArb:
    """The max-slope arborescence of the product from the two factor slopes."""
    c1, c2 = check_chain(c1, "c'"), check_chain(c2, "c''")
    w1, w2 = fvec(w1), fvec(w2)
    if (len(c1), len(c2), len(w1), len(w2)) != (m, n, m, n):
        raise ValueError("weight and objective lengths must be (m, n, m, n)")
    a1, a2 = max_slope(w1, c1), max_slope(w2, c2)
    t1, t2 = max_slopes(w1, c1, a1), max_slopes(w2, c2, a2)
    targets = {}
    for r in range(1, m + 1):
        for i in range(1, n + 1):
            if (r, i) == (m, n):
                continue
            if r == m:
                targets[(r, i)] = (r, a2(i))
            elif i == n:
                targets[(r, i)] = (a1(r), i)
            elif t1[r - 1] > t2[i - 1]:
                targets[(r, i)] = (a1(r), i)
            elif t1[r - 1] < t2[i - 1]:
                targets[(r, i)] = (r, a2(i))
            else:
                raise TieError(f"tau'({r}) = tau''({i}) at node ({r},{i})")
    return GridArb(m, n, targets)


def count_arbs(m: int, n: int) -> int:
    """Number of arborescences of the grid: each node picks any improving neighbour."""
    return prod((m - r) + (n - i) for r in range(1, m + 1) for i in range(1, n + 1) if (r, i) != (m, n))


def product_formula(m: int, n: int) -> int:
    """``prod_{i<m} prod_{j<n} (i + j)``."""
    return prod(i + j for i in range(1, m) for j in range(1, n))


def enumerate_arbs(m: int, n: int):
    nodes = [(r, i) for r in range(1, m + 1) for i in range(1, n + 1) if (r, i) != (m, n)]
    choices = [[(s, i) for s in range(r + 1, m + 1)] + [(r, j) for j in range(i + 1, n + 1)]
               for r, i in nodes]
    for pick in product(*choices):
        yield GridArb(m, n, tuple(zip(nodes, pick)))


def induced_arbs(g: GridArb) -> tuple[SimplexArb, SimplexArb]:
    mp = g.map
    a1 = SimplexArb(tuple(mp[(r, g.n)][0] for r in range(1, g.m)))
    a2 = SimplexArb(tuple(mp[(g.m, i)][1] for i in range(1, g.n)))
    return a1, a2


def is_consistent(g: GridArb) -> bool:
    a1, a2 = induced_arbs(g)
    for (r, i), (s, j) in g.targets:
        if i == j and a1(r) != s:
            return False
        if r == s and a2(i) != j:
            return False
    return True


def is_grid_noncrossing(g: GridArb) -> bool:
    a1, a2 = induced_arbs(g)
    if not (is_noncrossing(a1) and is_noncrossing(a2)):
        return False
    mp = g.map
    vertical = [(s, i, k) for (s, i), (s2, k) in mp.items() if s == s2]    # si -> sk
    horizontal = [(r, t, j) for (r, j), (t, j2) in mp.items() if j == j2]  # rj -> tj
    for s, i, k in vertical:
        for r, t, j in horizontal:
            if r <= s < t and i <= j < k and (r, i) != (s, j):
                return False
    return True


# reducibility -----------------------------------------------------------------

def _remove_row(mp, m, n, r):
    out = {}
    for (a, i), (s, j) in mp.items():
        if a == r:
            continue
        out[(a - (a > r), i)] = (s - (s > r), j)
    return out


def _transpose_map(mp):
    return {(i, r): (j, s) for (r, i), (s, j) in mp.items()}


def _leaf_rows(mp, m, n):
    """Rows ``r`` whose nodes are all immediate leaves."""
    hit = set(mp.values())
    rows = []
    for r in range(1, m):
        if all((r, i) not in hit and mp[(r, i)] in ((r + 1, i), (r, i + 1)) for i in range(1, n + 1)):
            rows.append(r)
    return rows


def is_reducible(g: GridArb) -> bool:
    return _reducible(g.m, g.n, g.targets)


@lru_cache(maxsize=None)
def _reducible(m, n, items):
    if m == 1 and n == 1:
        return True
    mp = dict(items)
    for r in _leaf_rows(mp, m, n):
        if _reducible(m - 1, n, tuple(sorted(_remove_row(mp, m, n, r).items()))):
            return True
    tp = _transpose_map(mp)
    for i in _leaf_rows(tp, n, m):
        rest = _transpose_map(_remove_row(tp, n, m, i))
        if _reducible(m, n - 1, tuple(sorted(rest.items()))):
            return True
    return False


def _insert_row(mp, m, n, r):
    """Inverse of row removal: new row ``r`` of immediate leaves in an ``(m+1) x n`` grid."""
    out = {}
    for (a, i), (s, j) in mp.items():
        out[(a + (a >= r), i)] = (s + (s >= r), j)
    for i in range(1, n + 1):
        out[(r, i)] = (r + 1, i)
    return out


@lru_cache(maxsize=None)
def _reducible_set(m, n):
    if m == 1 and n == 1:
        return frozenset({()})
    out = set()
    if m > 1:
        for items in _reducible_set(m - 1, n):
            mp = dict(items)
            for r in range(1, m):
                out.add(tuple(sorted(_insert_row(mp, m - 1, n, r).items())))
    if n > 1:
        for items in _reducible_set(m, n - 1):
            tp = _transpose_map(dict(items))
            for i in range(1, n):
                out.add(tuple(sorted(_transpose_map(_insert_row(tp, n - 1, m, i)).items())))
    return frozenset(out)


def reducible_arbs(m: int, n: int) -> list[GridArb]:
    """All reducible arborescences, built up by inserting rows and columns of immediate leaves."""
    return [GridArb(m, n, items) for items in sorted(_reducible_set(m, n))]


def consistent_arbs(m: int, n: int):
    """Consistent arborescences with noncrossing ``A'``, ``A''``."""
    from .simplex import enumerate_noncrossing
    inner = [(r, i) for r in range(1, m) for i in range(1, n)]
    for a1 in enumerate_noncrossing(m):
        for a2 in enumerate_noncrossing(n):
            base = {(r, n): (a1(r), n) for r in range(1, m)}
            base.update({(m, i): (m, a2(i)) for i in range(1, n)})
            for bits in product((0, 1), repeat=len(inner)):
                mp = dict(base)
                for (r, i), b in zip(inner, bits):
                    mp[(r, i)] = (a1(r), i) if b else (r, a2(i))
                yield GridArb(m, n, mp)


def find_irreducible_witness(max_m=4, max_n=4):
    """Smallest consistent, grid-noncrossing, non-reducible arborescence."""
    sizes = sorted(((m, n) for m in range(1, max_m + 1) for n in range(1, max_n + 1)),
                   key=lambda p: (p[0] * p[1], p))
    for m, n in sizes:
        for g in consistent_arbs(m, n):
            if is_grid_noncrossing(g) and not is_reducible(g):
                return g
    return None


def product_witness(g: GridArb, c1, c2):
    """A weight ``(w', w'')`` realizing ``g`` or ``None``, via strict feasibility."""
    from .core import product_instance, realizing_weight
    lp = product_instance(c1, c2)
    w = realizing_weight(lp, g.to_arborescence(lp))
    if w is None:
        return None
    return tuple(w[: g.m]), tuple(w[g.m:])


# rectangular preorders --------------------------------------------------------

def ground_set(m: int, n: int) -> tuple:
    return tuple(("V", r) for r in range(1, m)) + tuple(("H", i) for i in range(1, n))


def line_name(x) -> str:
    return ("L'" if x[0] == "V" else "L''") + str(x[1])


@dataclass(frozen=True)
class RectPreorder:
    m: int
    n: int
    relation: frozenset  # pairs (x, y) meaning x <= y

    def __post_init__(self):
        ground = ground_set(self.m, self.n)
        rel = set(self.relation) | {(x, x) for x in ground}
        for x, y in rel:
            if x not in ground or y not in ground:
                raise ValueError(f"{x} or {y} is not a line label")
        for (x, y) in list(rel):
            for z in ground:
                if (y, z) in rel and (x, z) not in rel:
                    raise ValueError(f"relation is not transitive at {line_name(x)}, "
                                     f"{line_name(y)}, {line_name(z)}")
        object.__setattr__(self, "relation", frozenset(rel))

    @property
    def ground(self):
        return ground_set(self.m, self.n)

    def leq(self, x, y) -> bool:
        return (x, y) in self.relation

    def lt(self, x, y) -> bool:
        return (x, y) in self.relation and (y, x) not in self.relation

    def is_partial_order(self) -> bool:
        return not any(x != y and (y, x) in self.relation for x, y in self.relation)

    def classes(self):
        seen, out = set(), []
        for x in self.ground:
            if x in seen:
                continue
            cls = tuple(y for y in self.ground if self.leq(x, y) and self.leq(y, x))
            seen.update(cls)
            out.append(cls)
        return out

    def is_full(self) -> bool:
        return len(self.relation) == len(self.ground) ** 2

    def __str__(self):
        strict = sorted((x, y) for x, y in self.relation if x != y)
        return "{" + ", ".join(f"{line_name(x)}<={line_name(y)}" for x, y in strict) + "}"

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n,
            "ground": [line_name(x) for x in self.ground],
            "relation": sorted([line_name(x), line_name(y)] for x, y in self.relation if x != y),
        }


def good_rect_poset(g: GridArb) -> RectPreorder:
    """The order on lines recording which must be absorbed first."""
    if not is_reducible(g):
        raise ValueError(f"{g} is not reducible")
    m, n = g.m, g.n
    rel = set()
    # P1
    for r in range(1, m):
        for i in range(1, n):
            s, j = g(r, i)
            if j == i:
                rel.add((("V", r), ("H", i)))
            else:
                rel.add((("H", i), ("V", r)))
    cross = set(rel)
    a1, a2 = induced_arbs(g)
    # P2, P3
    for fam, other, arb in (("V", "H", a1), ("H", "V", a2)):
        if arb.n < 2:
            continue
        pos = collision_poset(arb)
        size = arb.n - 1
        for a in range(1, size + 1):
            for b in range(1, size + 1):
                x, y = (fam, a), (fam, b)
                if pos.leq(a, b) or any((x, (other, k)) in cross and ((other, k), y) in cross
                                        for k in range(1, (n if fam == "V" else m))):
                    rel.add((x, y))
    return RectPreorder(m, n, frozenset(rel))


def _family_ok(p: RectPreorder, fam, other) -> bool:
    for o, q in combinations(fam, 2):
        comparable = p.leq(o, q) or p.leq(q, o)
        link = any((p.leq(o, x) and p.leq(x, q)) or (p.leq(q, x) and p.leq(x, o)) for x in other)
        gap = any(p.lt(o, z) and p.lt(q, z) for z in fam if o[1] < z[1] < q[1])
        if comparable != (link or not gap):
            return False
    return True


def is_good_rectangular(p: RectPreorder) -> bool:
    """Orthogonal comparability plus the orthogonal-link / no-gaps rule in each family.

    Two lines of the same family are comparable exactly when they are linked
    through a line of the other family or no line strictly between them lies
    above both.
    """
    verts = [x for x in p.ground if x[0] == "V"]
    hors = [x for x in p.ground if x[0] == "H"]
    for x in verts:
        for y in hors:
            if not (p.leq(x, y) or p.leq(y, x)):
                return False
    return _family_ok(p, verts, hors) and _family_ok(p, hors, verts)


def refines(p1: RectPreorder, p2: RectPreorder) -> bool:
    """``p2`` is refined by ``p1``: every relation of ``p1`` holds in ``p2``."""
    if (p1.m, p1.n) != (p2.m, p2.n):
        raise ValueError("preorders live on different ground sets")
    return p1.relation <= p2.relation


def enumerate_preorders(m: int, n: int):
    """All preorders on the line labels, by brute force over relation sets."""
    ground = ground_set(m, n)
    pairs = [(x, y) for x in ground for y in ground if x != y]
    if len(pairs) > 20:
        raise ValueError("ground set too large for brute-force preorder enumeration")
    out = []
    for bits in product((0, 1), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if all((x, z) in rel or x == z for x, y in rel for y2, z in rel if y == y2):
            out.append(RectPreorder(m, n, frozenset(rel)))
    return out


def good_rectangular_preorders(m: int, n: int):
    return [p for p in enumerate_preorders(m, n) if is_good_rectangular(p)]


# coarsest preorders and facet normals ------------------------------------------

def intervals(k: int):
    return [(a, b) for a in range(1, k + 1) for b in range(a, k + 1)]


def discontinuous_families(k: int):
    """Nonempty families of pairwise disjoint intervals of ``[k]`` no two of which touch."""
    out = []

    def rec(start, chosen):
        for a in range(start, k + 1):
            for b in range(a, k + 1):
                fam = chosen + [(a, b)]
                out.append(tuple(fam))
                rec(b + 2, fam)

    rec(1, [])
    return out


@dataclass(frozen=True)
class Facet:
    kind: str  # VC, HC or MC
    data: tuple
    preorder: RectPreorder
    locations: tuple  # -w as (w', w'') concatenated
    formula_lifespan: int

    @property
    def normal(self) -> tuple:
        return tuple(-x for x in self.locations)

    def exact_lifespan(self) -> int:
        """Particles absorbed at time 1 when lines in ``M`` merge at time 0."""
        m, n = self.preorder.m, self.preorder.n
        a = sum(1 for x in self.members if x[0] == "V")
        b = sum(1 for x in self.members if x[0] == "H")
        return m * n - 1 - n * a - m * b + a * b

    @property
    def members(self) -> tuple:
        return next(c for c in self.preorder.classes()
                    if all(self.preorder.leq(c[0], y) for y in self.preorder.ground))

    def label(self) -> str:
        def iv(fam):
            return "{" + ",".join(f"[{a},{b}]" for a, b in fam) + "}"
        if self.kind == "MC":
            return f"MC {iv(self.data[0])} {iv(self.data[1])}"
        return f"{self.kind} [{self.data[0]},{self.data[1]}]"


def _two_class_preorder(m, n, members) -> RectPreorder:
    ground = ground_set(m, n)
    members = set(members)
    rel = {(x, y) for x in ground for y in ground if x in members or y not in members}
    return RectPreorder(m, n, frozenset(rel))


def _squash(c, fam):
    """Locations equal to ``c_{t+1}`` on each interval ``[r, t]`` and ``c_s`` elsewhere."""
    out = list(c)
    for a, b in fam:
        for s in range(a, b + 1):
            out[s - 1] = c[b]
    return tuple(out)


def coarsest_preorders(m: int, n: int, c1=None, c2=None) -> list[Facet]:
    if m < 2 or n < 2:
        raise ValueError("need m, n >= 2")
    c1 = check_chain(c1 if c1 is not None else range(1, m + 1), "c'")
    c2 = check_chain(c2 if c2 is not None else range(m + 1, m + n + 1), "c''")
    out = []
    for r, t in intervals(m - 1):
        mem = [("V", s) for s in range(r, t + 1)]
        out.append(Facet("VC", (r, t), _two_class_preorder(m, n, mem),
                         _squash(c1, [(r, t)]) + c2, (n - 1) * (m - 1 - (t - r))))
    for i, k in intervals(n - 1):
        mem = [("H", j) for j in range(i, k + 1)]
        out.append(Facet("HC", (i, k), _two_class_preorder(m, n, mem),
                         c1 + _squash(c2, [(i, k)]), (m - 1) * (n - 1 - (k - i))))
    for f1 in discontinuous_families(m - 1):
        for f2 in discontinuous_families(n - 1):
            if f1 == ((1, m - 1),) and f2 == ((1, n - 1),):
                continue
            u1 = [s for a, b in f1 for s in range(a, b + 1)]
            u2 = [j for a, b in f2 for j in range(a, b + 1)]
            mem = [("V", s) for s in u1] + [("H", j) for j in u2]
            out.append(Facet("MC", (f1, f2), _two_class_preorder(m, n, mem),
                             _squash(c1, f1) + _squash(c2, f2),
                             (m - 1) * (n - 1) - len(u1) * len(u2)))
    return out


def maximal_nontrivial(preorders):
    """Coarsest preorders other than the full relation."""
    cands = [p for p in preorders if not p.is_full()]
    return [p for p in cands if not any(q.relation > p.relation for q in cands)]
