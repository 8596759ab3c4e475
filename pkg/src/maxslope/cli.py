"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import core, multiplihedra, particles, polytope, products, simplex
from .core import rat_str


class UsageError(Exception):
    pass


def _rats(text):
    try:
        return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}") from exc


def _out(line=""):
    print(line)


# enumerate ------------------------------------------------------------------------

def cmd_enumerate(a):
    fam = a.family
    if fam == "simplex":
        _need(a, "n")
        arbs = simplex.enumerate_noncrossing(a.n) if a.noncrossing else simplex.enumerate_arbs(a.n)
        lines = [json.dumps(list(x.targets)) for x in arbs]
    elif fam == "product":
        _need(a, "m", "n")
        if a.reducible:
            grids = products.reducible_arbs(a.m, a.n)
        else:
            if products.count_arbs(a.m, a.n) > 10 ** 6:
                raise UsageError("too many arborescences to list; add --reducible or use --count")
            grids = list(products.enumerate_arbs(a.m, a.n))
        lines = [json.dumps(g.to_json()["targets"]) for g in grids]
    elif fam == "cube":
        _need(a, "n", "k")
        evs = multiplihedra.enumerate_evaluations(a.n, a.k)
        lines = [json.dumps(ev.to_json()) for ev in evs]
    else:
        raise UsageError(f"unknown family {fam!r}")
    if a.count:
        _out(str(len(lines)))
    else:
        for line in lines:
            _out(line)
    return 0


def _need(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m for m in missing))


# simulate / export ------------------------------------------------------------------

def _line_config(a):
    if a.weights is not None:
        c = a.c if a.c is not None else tuple(Fraction(i) for i in range(1, len(a.weights) + 1))
        return particles.LineConfig.from_weights(a.weights, c)
    if a.positions is None:
        raise UsageError("--line needs --positions or --weights")
    if a.velocities is not None:
        vel = a.velocities
    elif a.c is not None:
        vel = tuple(-x for x in a.c)
    else:
        vel = tuple(-Fraction(i) for i in range(1, len(a.positions) + 1))
    return particles.LineConfig(a.positions, vel)


def _grid_config(a):
    if a.w1 is not None or a.w2 is not None:
        _need(a, "w1", "w2")
        m, n = len(a.w1), len(a.w2)
        c1 = a.c1 if a.c1 is not None else tuple(Fraction(i) for i in range(1, m + 1))
        c2 = a.c2 if a.c2 is not None else tuple(Fraction(i) for i in range(m + 1, m + n + 1))
        return particles.GridConfig.from_weights(c1, c2, a.w1, a.w2)
    _need(a, "vpos", "hpos")
    vvel = a.vvel if a.vvel is not None else tuple(-Fraction(i) for i in range(1, len(a.vpos) + 1))
    hvel = a.hvel if a.hvel is not None else tuple(-Fraction(len(a.vpos) + i) for i in range(1, len(a.hpos) + 1))
    return particles.GridConfig(a.vpos, vvel, a.hpos, hvel)


def _simulate(a):
    if a.grid:
        return particles.simulate_grid(_grid_config(a), perturb=a.perturb)
    return particles.simulate_line(_line_config(a), perturb=a.perturb)


def cmd_simulate(a):
    rec = _simulate(a)
    _out("time\tabsorbed\tabsorber")
    if a.grid:
        for t, f, x, y in rec.events:
            _out(f"{rat_str(t)}\t{f}{x}\t{f}{y}")
        _out("pattern\t" + json.dumps(rec.pattern.to_json()["targets"]))
    else:
        for t, x, y in rec.events:
            _out(f"{rat_str(t)}\t{x}\t{y}")
        _out("pattern\t" + json.dumps(list(rec.pattern.targets)))
    _out("total_lifespan\t" + rat_str(particles.total_lifespan(rec)))
    if a.svg:
        particles.export_trajectories(rec, "svg", a.svg)
    if a.csv:
        particles.export_trajectories(rec, "csv", a.csv)
    return 0


def cmd_export(a):
    rec = _simulate(a)
    if a.out is None:
        if a.format != "csv":
            raise UsageError("svg export needs --out")
        sys.stdout.write(particles.trajectories_csv(rec))
    else:
        particles.export_trajectories(rec, a.format, a.out)
    return 0


# polytope ----------------------------------------------------------------------------

def _instance(a):
    if a.family == "simplex":
        _need(a, "n")
        return core.build_instance("simplex", {"n": a.n})
    if a.family == "product":
        _need(a, "m", "n")
        return core.build_instance("product", {"m": a.m, "n": a.n})
    if a.family == "cube":
        _need(a, "n", "k")
        return core.build_instance("simplex_times_cube", {"n": a.n, "k": a.k})
    raise UsageError(f"unknown family {a.family!r}")


def cmd_polytope(a):
    lp = _instance(a)
    pp = polytope.build_pivot_polytope(lp, method=a.method)
    pts = pp.points
    _out(f"family\t{lp.family}")
    _out(f"vertices\t{len(pts)}")
    _out(f"dimension\t{core.affine_dim(pts)}")
    for arb, p, _ in pp.vertices:
        _out("\t".join(rat_str(x) for x in p))
    if a.out:
        with open(a.out, "w") as fh:
            json.dump(pp.to_json(), fh, indent=1)
    if a.plot:
        from .plotting import plot_polytope
        edge_list = polytope.edges(pp) if len(pts) <= 40 else []
        plot_polytope(pts, edge_list, a.plot, title=f"{lp.family} {lp.params}")
    return 0


# verify ----------------------------------------------------------------------------

def _random_collision_checks(n, trials, rng):
    """Line simulation against the max-slope rule on random generic data."""
    fails = []
    for _ in range(trials):
        c = sorted(rng.sample(range(1, 10 * n), n))
        w = [Fraction(rng.randint(-60, 60), rng.randint(1, 6)) for _ in range(n)]
        try:
            target = simplex.max_slope(w, c)
            rec = particles.simulate_line(particles.LineConfig.from_weights(w, c))
        except core.TieError:
            continue
        if rec.pattern != target:
            fails.append({"w": [rat_str(x) for x in w], "c": c})
    return fails


def cmd_verify(a):
    certs = []
    if a.associahedron:
        _need(a, "n")
        certs.append(polytope.verify_associahedron(a.n))
    if a.constrainahedron:
        _need(a, "m", "n")
        certs.append(polytope.verify_constrainahedron(a.m, a.n))
    if a.permutahedron:
        _need(a, "k")
        certs.append(polytope.verify_permutahedron(a.k))
    if a.collisions:
        _need(a, "n")
        rng = random.Random(a.seed)
        cert = polytope.Certificate(f"collisions n={a.n}")
        fails = _random_collision_checks(a.n, a.trials, rng)
        cert.counts["trials"] = a.trials
        cert.check("collision pattern equals max-slope arborescence", not fails, fails[:3])
        certs.append(cert)
    if not certs:
        raise UsageError("choose --associahedron, --constrainahedron, --permutahedron or --collisions")
    ok = True
    for cert in certs:
        for ch in cert.checks:
            _out(f"{cert.name}\t{ch['name']}\t{ch['status']}")
        ok = ok and cert.passed
    if a.out:
        with open(a.out, "w") as fh:
            json.dump([c.to_json() for c in certs], fh, indent=1, default=str)
    return 0 if ok else 1


# tables ---------------------------------------------------------------------------

def cmd_tables(a):
    if not (a.vpoly or a.counts):
        raise UsageError("choose --vpoly or --counts")
    if a.vpoly:
        polys = {n: multiplihedra.v_polynomial(n) for n in range(2, a.max_n + 1)}
        if a.csv:
            _out("n,degree,coefficient")
            for n, p in polys.items():
                for d, cf in enumerate(p.coeffs):
                    _out(f"{n},{d},{rat_str(cf)}")
        else:
            for n, p in polys.items():
                _out(f"{n}\t{p}")
        if a.plot:
            from .plotting import plot_polynomials
            plot_polynomials(polys, a.plot)
    if a.counts:
        _out("n\tk\tbrute_force\tk!V_n(k)\tk!V_{n-1}(k)\tseries_y^n\tseries_y^{n+1}")
        for n in range(1, a.max_n + 1):
            for k in range(0, a.max_k + 1):
                # brute force only where the instance fits the budget
                r = multiplihedra.multiplihedron_count(n, k, brute=n * 2 ** k <= a.brute_max)
                if r["brute_force"] is None:
                    r["brute_force"] = "-"
                _out("\t".join(str(r[x]) for x in ("n", "k", "brute_force", "k!V_n(k)", "k!V_{n-1}(k)",
                                                    "series_y^n", "series_y^{n+1}")))
    return 0


# parser -----------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="maxslope", description="Exact max-slope pivot rule toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="list arborescences")
    e.add_argument("--family", choices=("simplex", "product", "cube"), default="simplex")
    e.add_argument("--n", type=int)
    e.add_argument("--m", type=int)
    e.add_argument("--k", type=int)
    e.add_argument("--noncrossing", action="store_true")
    e.add_argument("--reducible", action="store_true")
    e.add_argument("--count", action="store_true", help="print only the number")
    e.set_defaults(func=cmd_enumerate)

    def sim_args(s):
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--line", action="store_true")
        g.add_argument("--grid", action="store_true")
        s.add_argument("--positions", type=_rats, help="line: initial locations, weakly increasing")
        s.add_argument("--velocities", type=_rats, help="line: velocities; write --velocities=-1,-2,...")
        s.add_argument("--c", type=_rats, help="line: speeds c (velocities are -c)")
        s.add_argument("--weights", type=_rats, help="line: weights w; locations are -(w - alpha c)")
        s.add_argument("--w1", type=_rats, help="grid: vertical weights w'")
        s.add_argument("--w2", type=_rats, help="grid: horizontal weights w''")
        s.add_argument("--c1", type=_rats)
        s.add_argument("--c2", type=_rats)
        s.add_argument("--vpos", type=_rats)
        s.add_argument("--vvel", type=_rats)
        s.add_argument("--hpos", type=_rats)
        s.add_argument("--hvel", type=_rats)
        s.add_argument("--perturb", action="store_true", help="break ties by a symbolic perturbation")

    s = sub.add_parser("simulate", help="run a collision simulation")
    sim_args(s)
    s.add_argument("--svg")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_simulate)

    x = sub.add_parser("export", help="write trajectories of a simulation")
    sim_args(x)
    x.add_argument("--format", choices=("csv", "svg"), default="csv")
    x.add_argument("--out")
    x.set_defaults(func=cmd_export)

    q = sub.add_parser("polytope", help="build a pivot polytope")
    q.add_argument("--family", choices=("simplex", "product", "cube"), required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--m", type=int)
    q.add_argument("--k", type=int)
    q.add_argument("--method", choices=("fast", "oracle"), default="fast")
    q.add_argument("--out")
    q.add_argument("--plot")
    q.set_defaults(func=cmd_polytope)

    v = sub.add_parser("verify", help="run isomorphism certificates")
    v.add_argument("--associahedron", action="store_true")
    v.add_argument("--constrainahedron", action="store_true")
    v.add_argument("--permutahedron", action="store_true")
    v.add_argument("--collisions", action="store_true")
    v.add_argument("--n", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tables", help="print the V_n(k) table or vertex counts")
    t.add_argument("--vpoly", action="store_true")
    t.add_argument("--counts", action="store_true")
    t.add_argument("--max-n", type=int, default=9)
    t.add_argument("--max-k", type=int, default=2)
    t.add_argument("--brute-max", type=int, default=16,
                   help="largest vertex count n*2^k brute-forced by --counts (default 16)")
    t.add_argument("--csv", action="store_true")
    t.add_argument("--plot")
    t.set_defaults(func=cmd_tables)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, polytope.BudgetError) as exc:
        # TieError and OrderingError are ValueErrors; the message is passed through unchanged
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
