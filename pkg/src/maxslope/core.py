"""Linear programs given by vertices and edges, and the max-slope rule on them.

Everything is exact: scalars are :class:`fractions.Fraction` and ties are
reported instead of broken.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .lp import StrictSystem, strict_feasible

FAMILIES = ("simplex", "product", "simplex_times_cube", "general")


class TieError(ValueError):
    """The argmax of a max-slope choice is not unique (non-generic weight)."""


class OrderingError(ValueError):
    """An objective chain is not strictly increasing and positive."""


class InvalidArborescenceError(ValueError):
    pass


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fvec(xs) -> tuple[Fraction, ...]:
    return tuple(frac(x) for x in xs)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a, b) -> tuple[Fraction, ...]:
    return tuple(x - y for x, y in zip(a, b))


def rat_str(x) -> str:
    x = frac(x)
    return f"{x.numerator}/{x.denominator}"


def slope(w, c, i: int, j: int) -> Fraction:
    """Slope ``(w_j - w_i) / (c_j - c_i)`` for 1-based ``i < j``."""
    if not i < j:
        raise ValueError(f"slope needs i < j, got ({i}, {j})")
    dc = frac(c[j - 1]) - frac(c[i - 1])
    if dc == 0:
        raise ZeroDivisionError(f"c_{i} = c_{j}: objective is not edge-generic")
    return (frac(w[j - 1]) - frac(w[i - 1])) / dc


def check_chain(chain, name="c") -> tuple[Fraction, ...]:
    chain = fvec(chain)
    if any(x <= 0 for x in chain) or any(a >= b for a, b in zip(chain, chain[1:])):
        raise OrderingError(f"{name} must be strictly increasing and positive, got "
                            + ", ".join(rat_str(x) for x in chain))
    return chain


@dataclass(frozen=True)
class LpInstance:
    """Vertices, undirected edges and an edge-generic objective.

    ``labels`` name the vertices in family terms: ``i`` for simplices,
    ``(r, i)`` for products and ``(i, frozenset(B))`` for simplex x cube.
    """

    vertices: tuple
    edges: frozenset
    objective: tuple
    family: str = "general"
    params: dict = field(default_factory=dict, compare=False)
    labels: tuple | None = None

    def __post_init__(self):
        verts = tuple(fvec(v) for v in self.vertices)
        obj = fvec(self.objective)
        edges = frozenset(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "edges", edges)
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(len(verts))))
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        d = len(obj)
        if any(len(v) != d for v in verts):
            raise ValueError("vertices and objective have different dimensions")
        values = [dot(obj, v) for v in verts]
        for u, v in edges:
            if values[u] == values[v]:
                raise ValueError(f"objective is not edge-generic on edge {u}-{v}")
        object.__setattr__(self, "_values", tuple(values))
        nbrs = {v: [] for v in range(len(verts))}
        for u, v in sorted(edges):
            nbrs[u].append(v)
            nbrs[v].append(u)
        object.__setattr__(self, "_up", {
            v: tuple(u for u in nbrs[v] if values[u] > values[v]) for v in nbrs})
        sinks = [v for v in nbrs if not self._up[v]]
        if len(sinks) != 1:
            raise ValueError(f"graph must have a unique c-sink, found {len(sinks)}")
        object.__setattr__(self, "_opt", sinks[0])
        object.__setattr__(self, "_index", {lab: k for k, lab in enumerate(self.labels)})

    @property
    def dim(self) -> int:
        return len(self.objective)

    @property
    def opt(self) -> int:
        return self._opt

    def value(self, v: int) -> Fraction:
        return self._values[v]

    def improving(self, v: int) -> tuple[int, ...]:
        return self._up[v]

    def index(self, label) -> int:
        return self._index[label]

    def label(self, v: int):
        return self.labels[v]

    def edge_slope(self, w, v: int, u: int) -> Fraction:
        d = sub(self.vertices[u], self.vertices[v])
        return dot(w, d) / dot(self.objective, d)

    def translated(self, b) -> "LpInstance":
        b = fvec(b)
        verts = [tuple(x + y for x, y in zip(v, b)) for v in self.vertices]
        return LpInstance(verts, self.edges, self.objective, self.family, dict(self.params), self.labels)

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        params = {}
        for k, v in self.params.items():
            params[k] = [rat_str(x) for x in v] if isinstance(v, (tuple, list)) else v
        return {
            "family": self.family,
            "params": params,
            "c": [rat_str(x) for x in self.objective],
            "vertices": [[rat_str(x) for x in v] for v in self.vertices],
            "edges": [list(e) for e in sorted(self.edges)],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, doc) -> "LpInstance":
        if isinstance(doc, str):
            doc = json.loads(doc)
        family = doc["family"]
        params = {k: (fvec(v) if isinstance(v, list) else v) for k, v in doc.get("params", {}).items()}
        if family != "general":
            rebuilt = build_instance(family, params)
            if rebuilt.objective != fvec(doc["c"]):
                raise ValueError("objective does not match the family parameters")
            return rebuilt
        return cls(tuple(fvec(v) for v in doc["vertices"]),
                   frozenset(tuple(e) for e in doc["edges"]), fvec(doc["c"]), "general", params)


@dataclass(frozen=True)
class Arborescence:
    """Map from every non-optimal vertex index to an improving neighbor.

    ``targets[v]`` is ``None`` exactly at the optimum.
    """

    targets: tuple

    def __getitem__(self, v):
        return self.targets[v]

    def items(self):
        return ((v, t) for v, t in enumerate(self.targets) if t is not None)

    def validate(self, lp: LpInstance) -> None:
        if len(self.targets) != len(lp.vertices):
            raise InvalidArborescenceError("arborescence has the wrong number of vertices")
        for v, t in enumerate(self.targets):
            if v == lp.opt:
                if t is not None:
                    raise InvalidArborescenceError("optimum must not have a target")
                continue
            if t not in lp.improving(v):
                raise InvalidArborescenceError(
                    f"target of {lp.label(v)} is {lp.label(t) if t is not None else None}, "
                    "not an improving neighbor")

    def labelled(self, lp: LpInstance) -> dict:
        return {lp.label(v): lp.label(t) for v, t in self.items()}

    @classmethod
    def from_labels(cls, lp: LpInstance, mapping: dict) -> "Arborescence":
        targets = [None] * len(lp.vertices)
        for a, b in mapping.items():
            targets[lp.index(a)] = lp.index(b)
        return cls(tuple(targets))


@dataclass(frozen=True)
class GkzPoint:
    coords: tuple

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


# instances ---------------------------------------------------------------

def _unit(d, *ks):
    e = [Fraction(0)] * d
    for k in ks:
        e[k] += 1
    return tuple(e)


def simplex_instance(c) -> LpInstance:
    c = check_chain(c)
    n = len(c)
    verts = [_unit(n, i) for i in range(n)]
    edges = frozenset(combinations(range(n), 2))
    return LpInstance(verts, edges, c, "simplex", {"n": n}, tuple(range(1, n + 1)))


def product_instance(c1, c2) -> LpInstance:
    c1 = check_chain(c1, "c'")
    c2 = check_chain(c2, "c''")
    m, n = len(c1), len(c2)
    labels = tuple((r, i) for r in range(1, m + 1) for i in range(1, n + 1))
    idx = {lab: k for k, lab in enumerate(labels)}
    verts = [_unit(m + n, r - 1, m + i - 1) for r, i in labels]
    edges = set()
    for r, i in labels:
        for s in range(r + 1, m + 1):
            edges.add((idx[r, i], idx[s, i]))
        for j in range(i + 1, n + 1):
            edges.add((idx[r, i], idx[r, j]))
    return LpInstance(verts, frozenset(edges), c1 + c2, "product", {"m": m, "n": n}, labels)


def cube_instance(c, r) -> LpInstance:
    """Delta_{n-1} x [0,1]^k with objective (c, r)."""
    c = check_chain(c)
    r = fvec(r)
    if any(x <= 0 for x in r):
        raise OrderingError("cube objective r must be positive")
    n, k = len(c), len(r)
    labels = tuple((i, frozenset(b for b in range(1, k + 1) if mask >> (b - 1) & 1))
                   for i in range(1, n + 1) for mask in range(2 ** k))
    idx = {lab: t for t, lab in enumerate(labels)}
    verts = [_unit(n + k, i - 1, *(n + b - 1 for b in B)) for i, B in labels]
    edges = set()
    for i, B in labels:
        for j in range(i + 1, n + 1):
            edges.add((idx[i, B], idx[j, B]))
        for b in range(1, k + 1):
            if b not in B:
                edges.add((idx[i, B], idx[i, B | {b}]))
    return LpInstance(verts, frozenset(edges), c + r, "simplex_times_cube", {"n": n, "k": k}, labels)


def build_instance(family: str, params: dict | None = None, cdata=None) -> LpInstance:
    """Construct a family instance.

    ``params`` holds sizes (``n``; ``m, n``; ``n, k``) and optionally the
    objective chains ``c``/``c1``/``c2``/``r``; ``cdata`` may override them.
    Missing chains default to ``1..n`` (and ``m+1..m+n`` for the second
    factor of a product, ``1,...,1`` for the cube).
    """
    p = dict(params or {})
    if cdata:
        p.update(cdata)
    if family == "simplex":
        c = p.get("c") or range(1, p["n"] + 1)
        return simplex_instance(c)
    if family == "product":
        m = p.get("m") or len(p["c1"])
        n = p.get("n") or len(p["c2"])
        c1 = p.get("c1") or range(1, m + 1)
        c2 = p.get("c2") or range(m + 1, m + n + 1)
        return product_instance(c1, c2)
    if family == "simplex_times_cube":
        n = p.get("n") or len(p["c"])
        k = p["k"] if "k" in p else len(p["r"])
        c = p.get("c") or range(1, n + 1)
        r = p.get("r") or [1] * k
        return cube_instance(c, r)
    raise ValueError(f"build_instance cannot construct family {family!r}")


# max-slope rule ----------------------------------------------------------

def max_slope_target(lp: LpInstance, w, v: int) -> int:
    best, best_s, tied = None, None, []
    for u in lp.improving(v):
        s = lp.edge_slope(w, v, u)
        if best is None or s > best_s:
            best, best_s, tied = u, s, [u]
        elif s == best_s:
            tied.append(u)
    if len(tied) > 1:
        raise TieError(f"max-slope tie at vertex {lp.label(v)} between "
                       + ", ".join(str(lp.label(u)) for u in tied))
    return best


def max_slope_arborescence(lp: LpInstance, w) -> Arborescence:
    w = fvec(w)
    targets = [None if v == lp.opt else max_slope_target(lp, w, v) for v in range(len(lp.vertices))]
    return Arborescence(tuple(targets))


def gkz_point(lp: LpInstance, arb: Arborescence) -> GkzPoint:
    arb.validate(lp)
    total = [Fraction(0)] * lp.dim
    for v, t in arb.items():
        d = sub(lp.vertices[t], lp.vertices[v])
        scale = dot(lp.objective, d)
        for j, x in enumerate(d):
            if x:
                total[j] += x / scale
    return GkzPoint(tuple(total))


def coherence_system(lp: LpInstance, arb: Arborescence) -> StrictSystem:
    """Linear strict inequalities in ``w`` whose solutions realize ``arb``.

    At each vertex ``v`` the chosen edge must have strictly larger slope than
    every other improving edge; denominators are positive so the comparison
    clears to ``a.w > 0``.
    """
    rows = []
    for v, t in arb.items():
        dt = sub(lp.vertices[t], lp.vertices[v])
        ct = dot(lp.objective, dt)
        for u in lp.improving(v):
            if u == t:
                continue
            du = sub(lp.vertices[u], lp.vertices[v])
            cu = dot(lp.objective, du)
            rows.append((tuple(x * cu - y * ct for x, y in zip(dt, du)), ">", 0))
    return StrictSystem(tuple(rows), lp.dim)


def realizing_weight(lp: LpInstance, arb: Arborescence, box=None):
    """A weight ``w`` with ``max_slope_arborescence(lp, w) == arb``, or None."""
    sys_ = coherence_system(lp, arb)
    return strict_feasible(sys_) if box is None else strict_feasible(sys_, box)


def realizable_arborescences(lp: LpInstance):
    """All max-slope arborescences by backtracking over partial assignments.

    Each partial assignment is kept only if its coherence constraints are
    strictly feasible.  Returns a list of ``(Arborescence, witness)``.
    """
    order = sorted((v for v in range(len(lp.vertices)) if v != lp.opt),
                   key=lambda v: (-len(lp.improving(v)), v))
    out = []

    def rows_for(v, t):
        dt = sub(lp.vertices[t], lp.vertices[v])
        ct = dot(lp.objective, dt)
        rows = []
        for u in lp.improving(v):
            if u != t:
                du = sub(lp.vertices[u], lp.vertices[v])
                cu = dot(lp.objective, du)
                rows.append((tuple(x * cu - y * ct for x, y in zip(dt, du)), ">", 0))
        return tuple(rows)

    def rec(depth, assigned, rows, witness):
        if depth == len(order):
            targets = [None] * len(lp.vertices)
            for v, t in assigned.items():
                targets[v] = t
            out.append((Arborescence(tuple(targets)), witness))
            return
        v = order[depth]
        for t in lp.improving(v):
            new_rows = rows + rows_for(v, t)
            sys_ = StrictSystem(new_rows, lp.dim)
            # a witness of the parent often works for one child; skip the LP then
            if witness is not None and sys_.satisfied_by(witness):
                wit = witness
            else:
                wit = strict_feasible(sys_)
            if wit is None:
                continue
            assigned[v] = t
            rec(depth + 1, assigned, new_rows, wit)
            del assigned[v]

    rec(0, {}, (), tuple(Fraction(0) for _ in range(lp.dim)) if len(order) == 0 else None)
    return out


def min_total_lifespan(lp: LpInstance, w) -> Fraction:
    """``-h(w)`` of the pivot polytope computed as a per-vertex minimum.

    The pivot polytope is the hull of the GKZ points of *all* arborescences,
    and ``<-w, GKZ(A)>`` splits into independent per-vertex terms, so the
    minimum is taken vertex by vertex.
    """
    w = fvec(w)
    neg = tuple(-x for x in w)
    total = Fraction(0)
    for v in range(len(lp.vertices)):
        if v == lp.opt:
            continue
        total += min(lp.edge_slope(neg, v, u) for u in lp.improving(v))
    return total


# linear algebra ------------------------------------------------------------

def rank(rows) -> int:
    m = [list(fvec(r)) for r in rows]
    if not m:
        return 0
    rk, ncols = 0, len(m[0])
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][col]
        for i in range(rk + 1, len(m)):
            f = m[i][col]
            if f:
                m[i] = [a - f * b / p for a, b in zip(m[i], m[rk])]
        rk += 1
        if rk == len(m):
            break
    return rk


def affine_dim(points) -> int:
    points = [fvec(p) for p in points]
    if not points:
        raise ValueError("affine_dim of an empty point set")
    base = points[0]
    return rank([sub(p, base) for p in points[1:]])
