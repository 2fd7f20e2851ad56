"""Hasse diagram PNGs for J-orders and congruence lattices."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .congruences import CongruenceLattice  # noqa: E402
from .green import JPoset  # noqa: E402


def _heights(nodes, edges):
    """Length of the longest chain from a minimal node, by relaxation over cover edges."""
    h = {v: 0 for v in nodes}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            if h[b] < h[a] + 1:
                h[b] = h[a] + 1
                changed = True
    return h


def hasse_png(nodes: list, edges: list, path, title: str = "", captions: dict = None):
    """Draw covering pairs (lower, upper) bottom to top and save as PNG."""
    h = _heights(nodes, edges)
    levels = {}
    for v in nodes:
        levels.setdefault(h[v], []).append(v)
    pos = {}
    for y, row in levels.items():
        for k, v in enumerate(row):
            pos[v] = (k - (len(row) - 1) / 2, y)
    width = max(len(r) for r in levels.values()) if levels else 1
    fig, ax = plt.subplots(figsize=(max(4, 1.9 * width), max(3, 0.9 * (len(levels) + 1))))
    for a, b in edges:
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], color="0.45", lw=1, zorder=1)
    for v, (x, y) in pos.items():
        text = v if not captions or v not in captions else f"{v}\n{captions[v]}"
        ax.text(x, y, text, ha="center", va="center", fontsize=7, zorder=2,
                bbox=dict(boxstyle="round,pad=0.25", fc="white", ec="0.2", lw=0.8))
    ax.set_xlim(-width / 2 - 0.3, width / 2 + 0.3)
    ax.set_ylim(-0.6, max(levels) + 0.6 if levels else 0.6)
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def jposet_png(poset: JPoset, path, title: str = ""):
    sizes = {lab: len(mem) for lab, mem in zip(poset.class_labels, poset.members)}
    return hasse_png(list(poset.class_labels), poset.hasse_edges(), path, title, sizes)


def lattice_png(lat: CongruenceLattice, path, title: str = ""):
    nodes = [lat.name(i) for i in range(len(lat))]
    edges = sorted((lat.name(a), lat.name(b)) for a, b in lat.covers())
    return hasse_png(nodes, edges, path, title)
