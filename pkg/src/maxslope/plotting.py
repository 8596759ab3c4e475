"""Static figures.  Floats appear only here, after all exact work is done."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_world_lines(segments, path, title=None):
    """Time on the x-axis, position on the y-axis, one colour per particle."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ids = sorted({s[0] for s in segments}, key=lambda x: (len(x), x))
    colours = {k: plt.cm.viridis(i / max(1, len(ids) - 1)) for i, k in enumerate(ids)}
    for k, t0, t1, x0, x1 in segments:
        ax.plot([float(t0), float(t1)], [float(x0), float(x1)], color=colours[k], lw=1.5)
    for k in ids:
        first = next(s for s in segments if s[0] == k)
        ax.annotate(k, (0, float(first[3])), textcoords="offset points", xytext=(-12, 0),
                    fontsize=7, va="center")
    ax.set_xlabel("time")
    ax.set_ylabel("position")
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_polynomials(polys: dict, path, kmax=6):
    """``polys`` maps a label to a callable on integers; plotted on a log scale."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ks = list(range(kmax + 1))
    for label, p in polys.items():
        ax.plot(ks, [float(p(k)) for k in ks], marker="o", ms=3, label=str(label))
    ax.set_yscale("log")
    ax.set_xlabel("k")
    ax.set_ylabel("V_n(k)")
    ax.legend(title="n", fontsize=7)
    _save(fig, path)


def plot_polytope(points, edge_list, path, title=None):
    """Planar projection of vertices and edges onto two fixed directions."""
    d = len(points[0])
    u = [((i * 7 + 3) % 11) - 5 for i in range(d)]
    v = [((i * 5 + 1) % 13) - 6 for i in range(d)]
    xy = [(float(sum(a * b for a, b in zip(p, u))), float(sum(a * b for a, b in zip(p, v)))) for p in points]
    fig, ax = plt.subplots(figsize=(5, 5))
    for i, j in edge_list:
        ax.plot([xy[i][0], xy[j][0]], [xy[i][1], xy[j][1]], color="0.4", lw=1)
    ax.scatter([p[0] for p in xy], [p[1] for p in xy], s=12, color="C3", zorder=3)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title)
    _save(fig, path)
