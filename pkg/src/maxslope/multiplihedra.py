"""Max-slope arborescences of a simplex times a cube and their evaluation triples.

Vertices of ``Delta_{n-1} x [0,1]^k`` are pairs ``(i, B)`` with ``B`` a subset
of ``[k]``.  A realizable arborescence is encoded by an evaluation triple
``(sigma, tree, phi)``: the order in which cube directions are taken, the
binary search tree of the simplex part, and for every tree node the number of
cube steps taken from ``(i, {})`` before the first simplex step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from functools import lru_cache
from math import factorial

from .core import TieError, check_chain, fvec, rat_str
from .simplex import (CollisionPoset, SimplexArb, catalan, collision_poset, compose,
                      max_slope, max_slopes, witness_weight)


def _fs(b):
    return frozenset(int(x) for x in b)


@dataclass(frozen=True)
class CubeArborescence:
    n: int
    k: int
    targets: tuple  # sorted ((i, B), (j, C)) with B, C frozensets

    def __init__(self, n, k, targets):
        items = targets.items() if isinstance(targets, dict) else targets
        items = tuple(sorted((((int(i), _fs(B)), (int(j), _fs(C))) for (i, B), (j, C) in items),
                             key=lambda e: (e[0][0], sorted(e[0][1]))))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "targets", items)
        full = frozenset(range(1, self.k + 1))
        mp = dict(items)
        if len(mp) != self.n * 2 ** self.k - 1 or (self.n, full) in mp:
            raise ValueError("targets must cover every vertex except (n, [k]) exactly once")
        for (i, B), (j, C) in items:
            if not ((i < j <= self.n and B == C) or (i == j and B < C and len(C - B) == 1 and C <= full)):
                raise ValueError(f"({i},{sorted(B)}) -> ({j},{sorted(C)}) is not an improving edge")

    @property
    def map(self) -> dict:
        return dict(self.targets)

    def __call__(self, i, B):
        return self.map[(i, _fs(B))]

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k,
                "targets": [[i, sorted(B), j, sorted(C)] for (i, B), (j, C) in self.targets]}

    @classmethod
    def from_json(cls, doc) -> "CubeArborescence":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc["n"], doc["k"], [((i, B), (j, C)) for i, B, j, C in doc["targets"]])

    def to_arborescence(self, lp):
        from .core import Arborescence
        return Arborescence.from_labels(lp, self.map)

    @classmethod
    def from_arborescence(cls, lp, arb) -> "CubeArborescence":
        return cls(lp.params["n"], lp.params["k"], arb.labelled(lp))


def cube_max_slope(n, k, c, r, w, s) -> CubeArborescence:
    """The case formula: leave the cube layer when ``tau(i)`` beats the best cube slope.

    The cube edge in direction ``h`` has slope ``s_h / r_h``; ``h`` is the
    remaining direction with the largest such slope.
    """
    c = check_chain(c)
    r, w, s = fvec(r), fvec(w), fvec(s)
    if (len(c), len(w), len(r), len(s)) != (n, n, k, k):
        raise ValueError("lengths of c, w, r, s must be (n, n, k, k)")
    if any(x <= 0 for x in r):
        raise ValueError("cube objective r must be positive")
    cs = [s[h] / r[h] for h in range(k)]
    if len(set(cs)) != k:
        raise TieError("two cube directions have the same slope")
    arb = max_slope(w, c) if n > 1 else SimplexArb(())
    tau = max_slopes(w, c, arb) if n > 1 else ()
    full = frozenset(range(1, k + 1))
    targets = {}
    for i in range(1, n + 1):
        for mask in range(2 ** k):
            B = frozenset(b for b in range(1, k + 1) if mask >> (b - 1) & 1)
            if i == n and B == full:
                continue
            rest = [h for h in range(1, k + 1) if h not in B]
            h = max(rest, key=lambda x: cs[x - 1]) if rest else None
            if h is None:
                targets[(i, B)] = (arb(i), B)
            elif i == n:
                targets[(i, B)] = (i, B | {h})
            elif tau[i - 1] > cs[h - 1]:
                targets[(i, B)] = (arb(i), B)
            elif tau[i - 1] < cs[h - 1]:
                targets[(i, B)] = (i, B | {h})
            else:
                raise TieError(f"tau({i}) equals the slope of cube direction {h} at ({i},{sorted(B)})")
    return CubeArborescence(n, k, targets)


# binary search trees ---------------------------------------------------------

def _shapes(lo, hi):
    """Nested ``(root, left, right)`` search trees on ``[lo, hi]``."""
    if lo > hi:
        return [None]
    out = []
    for root in range(lo, hi + 1):
        for left in _shapes(lo, root - 1):
            for right in _shapes(root + 1, hi):
                out.append((root, left, right))
    return out


def _below(shape):
    if shape is None:
        return []
    root, left, right = shape
    return [root] + _below(left) + _below(right)


def shape_poset(shape, m: int) -> CollisionPoset:
    rel = {(x, x) for x in range(1, m + 1)}

    def walk(sh):
        if sh is None:
            return
        root, left, right = sh
        for x in _below(left) + _below(right):
            rel.add((x, root))
        walk(left)
        walk(right)

    walk(shape)
    return CollisionPoset(m, frozenset(rel))


def enumerate_bsts(m: int) -> list[CollisionPoset]:
    """Binary search trees on ``[m]`` as posets whose root is the maximum."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return [shape_poset(sh, m) for sh in _shapes(1, m)]


def tree_root(tree: CollisionPoset, nodes) -> int:
    return next(x for x in nodes if all(tree.leq(y, x) for y in nodes))


def arb_from_tree(tree: CollisionPoset) -> SimplexArb:
    """The unique noncrossing arborescence on ``size + 1`` nodes with this collision poset."""

    def rec(lo, hi):
        if lo > hi:
            return SimplexArb(())
        root = tree_root(tree, range(lo, hi + 1))
        return compose(rec(lo, root - 1), rec(root + 1, hi))

    return rec(1, tree.size)


def linear_extensions(tree: CollisionPoset) -> int:
    count = 0
    for perm in permutations(range(1, tree.size + 1)):
        pos = {x: p for p, x in enumerate(perm)}
        if all(pos[a] <= pos[b] for a, b in tree.relation):
            count += 1
    return count


# polynomials -------------------------------------------------------------------

class RationalPolynomial:
    """Dense polynomial with Fraction coefficients in ascending degree."""

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return RationalPolynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __mul__(self, other):
        if not isinstance(other, RationalPolynomial):
            return RationalPolynomial([c * Fraction(other) for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    @classmethod
    def interpolate(cls, xs, ys) -> "RationalPolynomial":
        """Exact Lagrange interpolation."""
        xs, ys = fvec(xs), fvec(ys)
        total = RationalPolynomial()
        for i, (xi, yi) in enumerate(zip(xs, ys)):
            term = RationalPolynomial([yi])
            for j, xj in enumerate(xs):
                if j != i:
                    term = term * RationalPolynomial([-xj / (xi - xj), 1 / (xi - xj)])
            total = total + term
        return total

    def __repr__(self):
        return f"RationalPolynomial({[rat_str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.format()

    def format(self, var="k") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
            if a.denominator != 1:
                body = f"({a.numerator}/{a.denominator}){mono}"
            elif a == 1 and mono:
                body = mono
            else:
                body = f"{a.numerator}{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self):
        return [rat_str(c) for c in self.coeffs]


def _children(tree: CollisionPoset):
    kids = {x: [] for x in range(1, tree.size + 1)}
    for a, b in tree.covers:
        kids[b].append(a)
    return kids


def count_order_preserving(tree: CollisionPoset, l: int) -> int:
    """Maps ``f`` into ``[l]`` with ``f(a) <= f(b)`` whenever ``a`` is below ``b``."""
    if tree.size == 0:
        return 1
    kids = _children(tree)

    def table(v):
        # table[x-1] = number of maps on the subtree of v with f(v) = x
        t = [1] * l
        for ch in kids[v]:
            sub = table(ch)
            acc, cum = 0, []
            for val in sub:
                acc += val
                cum.append(acc)
            t = [a * b for a, b in zip(t, cum)]
        return t

    root = tree_root(tree, range(1, tree.size + 1))
    return sum(table(root))


def order_polynomial(tree: CollisionPoset) -> RationalPolynomial:
    xs = list(range(1, tree.size + 2))
    return RationalPolynomial.interpolate(xs, [count_order_preserving(tree, x) for x in xs])


def forest_count(n: int, l: int) -> int:
    """``sum_T Omega_T(l)`` over search trees on ``n`` nodes, summed shape by shape.

    ``S[m][x]`` counts pairs (tree on ``m`` nodes, order-preserving map with
    root value ``x``); a root sees its two subtrees through prefix sums.
    """
    cum = [[1] * l]  # prefix sums of S[0], the empty subtree
    for m in range(1, n + 1):
        row = [sum(cum[a][x] * cum[m - 1 - a][x] for a in range(m)) for x in range(l)]
        acc, pre = 0, []
        for v in row:
            acc += v
            pre.append(acc)
        cum.append(pre)
    return cum[n][-1] if l else int(n == 0)


@lru_cache(maxsize=None)
def v_polynomial(n: int) -> RationalPolynomial:
    """``V_n(k)``: sum over search trees ``T`` on ``n`` nodes of ``Omega_T(k + 1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    ks = list(range(n + 1))
    return RationalPolynomial.interpolate(ks, [forest_count(n, k + 1) for k in ks])


# power series ------------------------------------------------------------------

def series_mul(a, b, order):
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] += x * y
    return out


def series_compose(f, g, order):
    """``f(g(y))`` truncated after ``y^order``; needs ``g(0) = 0``."""
    if g and g[0] != 0:
        raise ValueError("inner series must have zero constant term")
    out = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    for a in f[: order + 1]:
        if a:
            out = [o + a * p for o, p in zip(out, power)]
        power = series_mul(power, g, order)
    return out


def catalan_series(order=12):
    """``C(y) = sum_{j >= 1} C_{j-1} y^j``."""
    return [Fraction(0)] + [Fraction(catalan(j - 1)) for j in range(1, order + 1)]


def iterated_catalan(times: int, order=12):
    """``C^{(times)}``: the Catalan series composed with itself."""
    c = catalan_series(order)
    out = c
    for _ in range(times - 1):
        out = series_compose(c, out, order)
    return out


def series_count(n: int, k: int, order=None) -> int:
    """``k! [y^n] C^{(k+1)}(y)``."""
    order = max(order or 12, n)
    return factorial(k) * int(iterated_catalan(k + 1, order)[n])


# evaluation triples ------------------------------------------------------------

class InvalidTripleError(ValueError):
    pass


@dataclass(frozen=True)
class EvaluationTriple:
    """``sigma`` lists cube directions in the order they are taken."""

    sigma: tuple
    tree: CollisionPoset
    phi: tuple

    def __post_init__(self):
        k = len(self.sigma)
        if sorted(self.sigma) != list(range(1, k + 1)):
            raise InvalidTripleError(f"sigma = {self.sigma} is not a permutation of [{k}]")
        if len(self.phi) != self.tree.size:
            raise InvalidTripleError("phi must have one value per tree node")
        if any(not 0 <= p <= k for p in self.phi):
            raise InvalidTripleError(f"phi takes values in 0..{k}")
        for a, b in self.tree.relation:
            if self.phi[a - 1] > self.phi[b - 1]:
                raise InvalidTripleError(f"phi is not order-preserving: {a} below {b} "
                                         f"but phi({a}) > phi({b})")

    @property
    def n(self):
        return self.tree.size + 1

    @property
    def k(self):
        return len(self.sigma)

    def to_json(self) -> dict:
        return {"sigma": list(self.sigma), "tree": json.loads(self.tree.to_json()), "phi": list(self.phi)}


def evaluation_to_arb(ev: EvaluationTriple) -> CubeArborescence:
    """The arborescence the triple describes, read off combinatorially."""
    n, k = ev.n, ev.k
    a = arb_from_tree(ev.tree)
    full = frozenset(range(1, k + 1))
    targets = {}
    for i in range(1, n + 1):
        for mask in range(2 ** k):
            B = frozenset(b for b in range(1, k + 1) if mask >> (b - 1) & 1)
            if i == n and B == full:
                continue
            rest = [h for h in ev.sigma if h not in B]
            if not rest:
                targets[(i, B)] = (a(i), B)
            elif i == n or rest[0] in ev.sigma[: ev.phi[i - 1]]:
                targets[(i, B)] = (i, B | {rest[0]})
            else:
                targets[(i, B)] = (a(i), B)
    return CubeArborescence(n, k, targets)


def arb_to_evaluation(arb: CubeArborescence) -> EvaluationTriple:
    n, k = arb.n, arb.k
    full = frozenset(range(1, k + 1))
    mp = arb.map
    simplex = SimplexArb(tuple(mp[(i, full)][0] for i in range(1, n)))
    sigma, B = [], frozenset()
    while B != full:
        _, C = mp[(n, B)]
        sigma.append(next(iter(C - B)))
        B = C
    phi = []
    for i in range(1, n):
        steps, B = 0, frozenset()
        while True:
            j, C = mp[(i, B)]
            if j != i:
                break
            steps += 1
            B = C
        phi.append(steps)
    try:
        ev = EvaluationTriple(tuple(sigma), collision_poset(simplex), tuple(phi))
    except ValueError as exc:
        raise InvalidTripleError(f"arborescence is not max-slope: {exc}") from exc
    if evaluation_to_arb(ev) != arb:
        raise InvalidTripleError("arborescence is not max-slope: it differs from the arborescence of its triple")
    return ev


def enumerate_evaluations(n: int, k: int) -> list[EvaluationTriple]:
    out = []
    for tree in enumerate_bsts(n - 1):
        for phi in product(range(k + 1), repeat=n - 1):
            try:
                base = EvaluationTriple(tuple(range(1, k + 1)), tree, phi)
            except InvalidTripleError:
                continue
            for sigma in permutations(range(1, k + 1)):
                out.append(EvaluationTriple(sigma, tree, base.phi))
    return out


def evaluation_to_witness(ev: EvaluationTriple, c, r=None):
    """Weights ``(w, s)`` with ``cube_max_slope(..., w, s) == evaluation_to_arb(ev)``.

    ``w`` comes from the noncrossing witness construction, peeling tree nodes
    in increasing ``phi`` so that ``tau`` decreases along the peeling order.
    The cube slopes are then slotted between the ``tau`` values.
    """
    n, k = ev.n, ev.k
    c = check_chain(c)
    r = fvec(r if r is not None else [1] * k)
    if len(c) != n or len(r) != k:
        raise ValueError("c must have n entries and r must have k entries")
    a = arb_from_tree(ev.tree)
    phi = ev.phi
    if n > 1:
        w = witness_weight(a, c, priority=lambda x: phi[x - 1] if x < n else k + 1)
        tau = max_slopes(w, c, a)
    else:
        w, tau = (Fraction(0),), ()
    bounds = []
    for p in range(1, k + 1):
        lo = max((t for t, f in zip(tau, phi) if f >= p), default=None)
        hi = min((t for t, f in zip(tau, phi) if f < p), default=None)
        bounds.append((lo, hi))
    vals = [None] * k
    p = 0
    while p < k:
        q = p
        while q + 1 < k and bounds[q + 1] == bounds[p]:
            q += 1
        lo, hi = bounds[p]
        g = q - p + 1
        for j in range(g):
            if lo is not None and hi is not None:
                vals[p + j] = lo + (hi - lo) * Fraction(g - j, g + 1)
            elif lo is not None:
                vals[p + j] = lo + (g - j)
            elif hi is not None:
                vals[p + j] = hi - (j + 1)
            else:
                vals[p + j] = Fraction(-(j + 1))
        p = q + 1
    s = [Fraction(0)] * k
    for p, h in enumerate(ev.sigma):
        s[h - 1] = vals[p] * r[h - 1]
    return tuple(w), tuple(s)


def multiplihedron_count(n: int, k: int, c=None, r=None, max_vertices=64, brute=True) -> dict:
    """Brute-force vertex count of the pivot polytope of ``Delta_{n-1} x [0,1]^k`` and the closed forms.

    With ``brute=False`` only the closed forms are filled in.
    """
    from .core import cube_instance, realizable_arborescences
    from .polytope import BudgetError
    count = None
    if brute:
        if n * 2 ** k > max_vertices:
            raise BudgetError(f"instance with {n * 2 ** k} vertices exceeds the budget of {max_vertices}")
        lp = cube_instance(c if c is not None else range(1, n + 1), r if r is not None else [1] * k)
        count = len(realizable_arborescences(lp))
    f = factorial(k)
    out = {
        "n": n, "k": k, "brute_force": count,
        "k!V_n(k)": f * int(v_polynomial(n)(k)),
        "k!V_{n-1}(k)": f * int(v_polynomial(n - 1)(k)) if n >= 2 else f,
        "series_y^n": series_count(n, k),
        "series_y^{n+1}": series_count(n + 1, k),
    }
    return out
