"""Pivot polytopes as lists of GKZ points, their faces and isomorphism certificates.

Facets are not computed by a hull algorithm.  Each certificate takes an
explicit family of facet normals, checks that vertex-in-face incidence
matches the combinatorial model exactly, and checks the dimension; a vertex
bijection plus a facet bijection preserving incidence is enough for a
combinatorial isomorphism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .core import (LpInstance, TieError, affine_dim, dot, fvec, gkz_point, max_slope_arborescence,
                   rat_str, realizable_arborescences, simplex_instance, sub)
from .lp import StrictSystem, strict_feasible


class BudgetError(ValueError):
    pass


DEFAULT_BUDGET = {"simplex": 8, "product": 7, "simplex_times_cube": 5}


@dataclass(frozen=True)
class PivotPolytope:
    instance: LpInstance
    vertices: tuple  # (Arborescence, GkzPoint, witness weight)
    facets: tuple = ()  # (label, normal)

    @property
    def points(self):
        return [tuple(p) for _, p, _ in self.vertices]

    @property
    def arborescences(self):
        return [a for a, _, _ in self.vertices]

    def with_facets(self, facets) -> "PivotPolytope":
        return PivotPolytope(self.instance, self.vertices, tuple((lab, fvec(w)) for lab, w in facets))

    def to_json(self) -> dict:
        lp = self.instance
        return {
            "instance": lp.to_json(),
            "vertices": [{
                "arborescence": [[_lab(lp.label(v)), _lab(lp.label(t))] for v, t in a.items()],
                "gkz": [rat_str(x) for x in p],
                "witness": [rat_str(x) for x in w],
            } for a, p, w in self.vertices],
            "facets": [{"label": lab, "normal": [rat_str(x) for x in w]} for lab, w in self.facets],
        }


def _lab(label):
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[1], frozenset):
        return [label[0], sorted(label[1])]
    return list(label) if isinstance(label, tuple) else label


def _check_budget(lp, budget):
    b = dict(DEFAULT_BUDGET)
    b.update(budget or {})
    p = lp.params
    if lp.family == "simplex" and p["n"] > b["simplex"]:
        raise BudgetError(f"simplex with n = {p['n']} exceeds the budget n <= {b['simplex']}")
    if lp.family == "product" and p["m"] + p["n"] > b["product"]:
        raise BudgetError(f"product with m + n = {p['m'] + p['n']} exceeds the budget {b['product']}")
    if lp.family == "simplex_times_cube" and p["k"] > b["simplex_times_cube"]:
        raise BudgetError(f"cube dimension k = {p['k']} exceeds the budget {b['simplex_times_cube']}")
    if lp.family == "general" and len(lp.vertices) > b.get("general", 40):
        raise BudgetError(f"general instance with {len(lp.vertices)} vertices exceeds the budget")


def _candidates_fast(lp):
    """Max-slope arborescences with witnesses, from the combinatorial characterizations."""
    if lp.family == "simplex":
        from .simplex import enumerate_noncrossing, witness_weight
        for a in enumerate_noncrossing(lp.params["n"]):
            yield a.to_arborescence(), witness_weight(a, lp.objective)
    elif lp.family == "product":
        from .core import realizing_weight
        from .products import reducible_arbs
        for g in reducible_arbs(lp.params["m"], lp.params["n"]):
            arb = g.to_arborescence(lp)
            w = realizing_weight(lp, arb)
            if w is None:
                raise AssertionError(f"reducible arborescence {g} has no witness")
            yield arb, w
    elif lp.family == "simplex_times_cube":
        from .multiplihedra import enumerate_evaluations, evaluation_to_arb, evaluation_to_witness
        n, k = lp.params["n"], lp.params["k"]
        c, r = lp.objective[:n], lp.objective[n:]
        for ev in enumerate_evaluations(n, k):
            w, s = evaluation_to_witness(ev, c, r)
            yield evaluation_to_arb(ev).to_arborescence(lp), w + s
    else:
        yield from realizable_arborescences(lp)


def build_pivot_polytope(lp: LpInstance, method: str = "fast", budget=None) -> PivotPolytope:
    """Vertices of the max-slope pivot polytope, each with a self-certifying witness.

    ``method="fast"`` enumerates candidates combinatorially, ``"oracle"`` by
    strict-feasibility backtracking over all arborescences.
    """
    _check_budget(lp, budget)
    if method == "fast":
        cands = list(_candidates_fast(lp))
    elif method == "oracle":
        cands = realizable_arborescences(lp)
    else:
        raise ValueError(f"unknown method {method!r}")
    verts = []
    for arb, w in cands:
        if max_slope_arborescence(lp, w) != arb:
            raise AssertionError("witness does not reproduce its arborescence")
        verts.append((arb, gkz_point(lp, arb), tuple(w)))
    verts.sort(key=lambda v: tuple(-1 if t is None else t for t in v[0].targets))
    return PivotPolytope(lp, tuple(verts))


def support_function(pp: PivotPolytope, w) -> Fraction:
    w = fvec(w)
    return max(dot(w, p) for p in pp.points)


def face_vertices(pp: PivotPolytope, w) -> list[int]:
    w = fvec(w)
    vals = [dot(w, p) for p in pp.points]
    top = max(vals)
    return [i for i, v in enumerate(vals) if v == top]


@dataclass(frozen=True)
class IncidenceMatrix:
    rows: tuple  # vertex indices
    columns: tuple  # facet labels
    entries: tuple  # tuple of tuples of bool

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def well_formed(self) -> bool:
        cols = [self.column(j) for j in range(len(self.columns))]
        return len(set(cols)) == len(cols) and not any(all(c) for c in cols)


def incidence(pp: PivotPolytope, facets=None) -> IncidenceMatrix:
    facets = pp.facets if facets is None else tuple((lab, fvec(w)) for lab, w in facets)
    faces = [set(face_vertices(pp, w)) for _, w in facets]
    entries = tuple(tuple(i in f for f in faces) for i in range(len(pp.vertices)))
    return IncidenceMatrix(tuple(range(len(pp.vertices))), tuple(lab for lab, _ in facets), entries)


def is_edge(pp: PivotPolytope, i: int, j: int) -> bool:
    """Some ``w`` has ``<w, x_i> = <w, x_j>`` strictly above every other vertex."""
    pts = pp.points
    rows = [(sub(pts[i], pts[j]), "=", 0)]
    rows += [(sub(pts[i], p), ">", 0) for t, p in enumerate(pts) if t not in (i, j)]
    return strict_feasible(StrictSystem(tuple(rows), len(pts[i]))) is not None


def edges(pp: PivotPolytope) -> list[tuple[int, int]]:
    return [(i, j) for i, j in combinations(range(len(pp.vertices)), 2) if is_edge(pp, i, j)]


# certificates ----------------------------------------------------------------------

class Certificate:
    def __init__(self, name):
        self.name = name
        self.checks = []
        self.dimensions = {}
        self.counts = {}
        self.observations = {}

    def check(self, name, ok, counterexample=None):
        entry = {"name": name, "status": "pass" if ok else "fail"}
        if not ok and counterexample is not None:
            entry["counterexample"] = counterexample
        self.checks.append(entry)
        return ok

    @property
    def passed(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json(self) -> dict:
        doc = {"certificate": self.name, "checks": self.checks,
               "dimensions": self.dimensions, "counts": self.counts}
        if self.observations:
            doc["observations"] = self.observations
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, default=str)


def _face_dims(pp, faces):
    pts = pp.points
    return [affine_dim([pts[i] for i in f]) for f in faces]


def verify_associahedron(n: int, c=None, max_n: int = 8) -> Certificate:
    from .simplex import (Bracketing, SimplexArb, facet_lifespan, facet_normal_rs, facets,
                          from_bracketing, to_bracketing)
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > max_n:
        raise BudgetError(f"n = {n} exceeds the budget n <= {max_n}")
    c = fvec(c if c is not None else range(1, n + 1))
    cert = Certificate(f"associahedron n={n}")
    lp = simplex_instance(c)
    pp = build_pivot_polytope(lp, budget={"simplex": max_n})
    arbs = [SimplexArb.from_arborescence(a) for a in pp.arborescences]
    brs = [to_bracketing(a) for a in arbs]
    all_brs = {Bracketing(n, frozenset(b)) for b in _complete_bracketings(1, n)}
    cert.counts.update(vertices=len(arbs), complete_bracketings=len(all_brs))
    cert.check("vertices biject with complete bracketings",
               len(set(brs)) == len(brs) == len(all_brs) and set(brs) == all_brs
               and all(from_bracketing(b) == a for a, b in zip(arbs, brs)),
               {"missing": [b.to_json() for b in all_brs - set(brs)]})
    pts = pp.points
    cert.check("gkz points are distinct", len(set(pts)) == len(pts))
    cert.check("gkz points lie on <c,x> = n-1",
               all(dot(c, p) == n - 1 for p in pts))
    fs = facets(n)
    pp = pp.with_facets([(f"[{r},{s}]", facet_normal_rs(n, c, r, s)) for r, s in fs])
    cert.counts["facets"] = len(fs)
    cert.check("facet normals index every bracket other than [1,n]",
               sorted(fs) == sorted((a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)
                                    if (a, b) != (1, n)))
    bad = []
    for (r, s), (_, w) in zip(fs, pp.facets):
        val = -support_function(pp, w)
        if val != facet_lifespan(n, r, s):
            bad.append({"facet": [r, s], "value": rat_str(val)})
    cert.check("-h(w^{r,s}) = n-1-(s-r)", not bad, bad)
    inc = incidence(pp)
    bad = []
    for i, b in enumerate(brs):
        for j, (r, s) in enumerate(fs):
            if inc.entries[i][j] != ((r, s) in b):
                bad.append({"vertex": list(arbs[i].targets), "facet": [r, s]})
    cert.check("vertex on facet iff bracket in bracketing", not bad, bad[:5])
    cert.check("incidence columns distinct and proper", inc.well_formed())
    faces = [[i for i in range(len(pts)) if inc.entries[i][j]] for j in range(len(fs))]
    fd = _face_dims(pp, faces)
    cert.check("every facet face has dimension n-3", all(d == n - 3 for d in fd) if n > 2 else True,
               [f for f, d in zip(fs, fd) if d != n - 3])
    dim = affine_dim(pts)
    cert.dimensions = {"polytope": dim, "expected": n - 2}
    cert.check("affine dimension n-2", dim == n - 2)
    return cert


def _complete_bracketings(lo, hi):
    if lo == hi:
        return [set()]
    out = []
    for k in range(lo, hi):
        for left in _complete_bracketings(lo, k):
            for right in _complete_bracketings(k + 1, hi):
                out.append({(lo, hi)} | left | right)
    return out


def verify_constrainahedron(m: int, n: int, c1=None, c2=None, max_sum: int = 7) -> Certificate:
    from .core import product_instance
    from .products import (GridArb, coarsest_preorders, good_rect_poset, good_rectangular_preorders,
                           ground_set, is_good_rectangular, maximal_nontrivial, refines)
    if m < 2 or n < 2:
        raise ValueError("need m, n >= 2")
    if m + n > max_sum:
        raise BudgetError(f"m + n = {m + n} exceeds the budget {max_sum}")
    c1 = fvec(c1 if c1 is not None else range(1, m + 1))
    c2 = fvec(c2 if c2 is not None else range(m + 1, m + n + 1))
    cert = Certificate(f"constrainahedron m={m} n={n}")
    lp = product_instance(c1, c2)
    pp = build_pivot_polytope(lp, budget={"product": max_sum})
    grids = [GridArb.from_arborescence(lp, a) for a in pp.arborescences]
    posets = [good_rect_poset(g) for g in grids]
    cert.counts["vertices"] = len(grids)
    cert.check("vertex posets are good rectangular partial orders",
               all(p.is_partial_order() and is_good_rectangular(p) for p in posets))
    cert.check("vertex to poset map is injective", len(set(posets)) == len(posets))
    facets = coarsest_preorders(m, n, c1, c2)
    cert.counts["facets"] = len(facets)
    cert.counts["facet_types"] = {t: sum(f.kind == t for f in facets) for t in ("VC", "HC", "MC")}
    if len(ground_set(m, n)) <= 4:
        good = good_rectangular_preorders(m, n)
        gp = {p for p in good if p.is_partial_order()}
        cert.counts["good_rectangular_preorders"] = len(good)
        cert.check("every good rectangular poset is a vertex poset", gp == set(posets))
        coarse = set(maximal_nontrivial(good))
        cert.check("coarsest preorders are exactly VC, HC and MC", coarse == {f.preorder for f in facets})
    pp = pp.with_facets([(f.label(), f.normal) for f in facets])
    bad = []
    for f in facets:
        val = -support_function(pp, f.normal)
        if val != f.exact_lifespan():
            bad.append({"facet": f.label(), "value": rat_str(val)})
    cert.check("-h at each facet normal equals the count of particles surviving time 0", not bad, bad)
    cert.observations["formula_lifespan_mismatches"] = [
        {"facet": f.label(), "support": rat_str(-support_function(pp, f.normal)),
         "formula": f.formula_lifespan}
        for f in facets if -support_function(pp, f.normal) != f.formula_lifespan]
    inc = incidence(pp)
    bad = []
    for i, p in enumerate(posets):
        for j, f in enumerate(facets):
            if inc.entries[i][j] != refines(p, f.preorder):
                bad.append({"vertex": grids[i].to_json(), "facet": f.label()})
    cert.check("vertex on facet iff its poset refines the facet preorder", not bad, bad[:5])
    cert.check("incidence columns distinct and proper", inc.well_formed())
    pts = pp.points
    faces = [[i for i in range(len(pts)) if inc.entries[i][j]] for j in range(len(facets))]
    fd = _face_dims(pp, faces)
    cert.check("every facet face has dimension m+n-4", all(d == m + n - 4 for d in fd),
               [f.label() for f, d in zip(facets, fd) if d != m + n - 4])
    dim = affine_dim(pts)
    cert.dimensions = {"polytope": dim, "expected": m + n - 3}
    cert.check("affine dimension m+n-3", dim == m + n - 3)
    if len(pts) <= 40:
        deg = [0] * len(pts)
        for i, j in edges(pp):
            deg[i] += 1
            deg[j] += 1
        cert.observations["vertex_degrees"] = sorted(set(deg))
    return cert


def verify_permutahedron(k: int, max_k: int = 5) -> Certificate:
    from .core import cube_instance
    if k < 1:
        raise ValueError("k must be positive")
    if k > max_k:
        raise BudgetError(f"k = {k} exceeds the budget {max_k}")
    cert = Certificate(f"permutahedron k={k}")
    lp = cube_instance([1], [1] * k)
    pp = build_pivot_polytope(lp, budget={"simplex_times_cube": max_k})
    oracle = build_pivot_polytope(lp, method="oracle", budget={"simplex_times_cube": max_k})
    cert.check("combinatorial and oracle enumerations agree",
               set(pp.arborescences) == set(oracle.arborescences))
    cert.counts["vertices"] = len(pp.vertices)
    fact = 1
    for x in range(2, k + 1):
        fact *= x
    cert.counts["expected"] = fact
    cert.check("k! vertices", len(pp.vertices) == fact)
    n = 1
    perms = []
    for _, _, w in pp.vertices:
        s = w[n:]
        perms.append(tuple(sorted(range(1, k + 1), key=lambda h: -s[h - 1])))
    cert.check("witness orders biject with permutations", sorted(perms) == sorted(permutations(range(1, k + 1))))
    # the arborescence itself determines the order: follow the path from (1, {})
    readoff = []
    for arb in pp.arborescences:
        mp, B, seq = arb.labelled(lp), frozenset(), []
        while len(B) < k:
            _, C = mp[(1, B)]
            seq.append(next(iter(C - B)))
            B = C
        readoff.append(tuple(seq))
    cert.check("path from the source reads off the same permutation", readoff == perms)
    found = {frozenset((perms[i], perms[j])) for i, j in edges(pp)} if len(perms) > 1 else set()
    expected = set()
    for p in perms:
        for t in range(k - 1):
            q = list(p)
            q[t], q[t + 1] = q[t + 1], q[t]
            expected.add(frozenset((p, tuple(q))))
    cert.counts["edges"] = len(found)
    cert.check("edges are adjacent transpositions", found == expected,
               {"extra": [sorted(e) for e in found - expected][:3],
                "missing": [sorted(e) for e in expected - found][:3]})
    dim = affine_dim(pp.points)
    cert.dimensions = {"polytope": dim, "expected": k - 1}
    cert.check("affine dimension k-1", dim == k - 1)
    return cert
