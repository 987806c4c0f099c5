"""Matplotlib figures for maps and edge-labeled trees.

Figures are built on :class:`matplotlib.figure.Figure` with an Agg canvas,
so nothing here touches pyplot state or needs a display.
"""

from __future__ import annotations

import math

import networkx as nx
from matplotlib import colormaps
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.lines import Line2D

from .compat import RecognitionResult
from .io import _color_of
from .model import LabeledTree, SymmetricMap


def _tree_graph(tree: LabeledTree) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(tree.vertices)
    g.add_edges_from(tree.edges)
    return g


def _palette(tree: LabeledTree) -> dict[frozenset[str], str]:
    sets = sorted({c for c in tree.labels.values() if c}, key=lambda c: (len(c), sorted(c)))
    if len(sets) > 20:
        return {c: _color_of(c) for c in sets}
    cmap = colormaps["tab10" if len(sets) <= 10 else "tab20"]
    return {c: cmap(i) for i, c in enumerate(sets)}


def draw_tree(tree: LabeledTree, ax, title: str | None = None) -> None:
    """Empty-labeled edges dashed gray; others colored by label set and annotated."""
    g = _tree_graph(tree)
    palette = _palette(tree)
    pos = nx.kamada_kawai_layout(g) if len(g) > 2 else {v: (i, 0) for i, v in enumerate(tree.vertices)}
    handles = {}
    for e in tree.edges:
        (x0, y0), (x1, y1) = pos[e[0]], pos[e[1]]
        cols = tree.labels[e]
        if cols:
            color = palette[cols]
            ax.plot([x0, x1], [y0, y1], color=color, lw=2.2, zorder=1)
            ax.text((x0 + x1) / 2, (y0 + y1) / 2, ",".join(sorted(cols)), fontsize=7, color=color,
                    ha="center", va="center", bbox=dict(fc="white", ec="none", pad=0.5), zorder=3)
            handles.setdefault(cols, Line2D([], [], color=color, lw=2.2))
        else:
            ax.plot([x0, x1], [y0, y1], color="0.55", lw=1.2, ls="--", zorder=1)
            handles.setdefault(frozenset(), Line2D([], [], color="0.55", lw=1.2, ls="--"))
    leaves = set(tree.leaves)
    for v, (x, y) in pos.items():
        if v in leaves:
            ax.text(x, y, v, ha="center", va="center", fontsize=9, zorder=4,
                    bbox=dict(boxstyle="circle,pad=0.25", fc="white", ec="black", lw=0.8))
        else:
            ax.plot([x], [y], "o", color="black", ms=4, zorder=2)
    order = sorted(handles, key=lambda c: (len(c), sorted(c)))
    ax.legend([handles[c] for c in order], ["{" + ",".join(sorted(c)) + "}" for c in order],
              fontsize=7, loc="lower right", frameon=False)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=10)


def draw_color_graph(emap: SymmetricMap, m: str, ax) -> None:
    """Graph of the pairs carrying color ``m`` on a circular layout."""
    n = emap.n
    pos = {x: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i, x in enumerate(emap.leaves)}
    for (x, y), cols in emap.items():
        if m in cols:
            ax.plot([pos[x][0], pos[y][0]], [pos[x][1], pos[y][1]], color="tab:blue", lw=1.2, zorder=1)
    for x, (px, py) in pos.items():
        ax.text(px, py, x, ha="center", va="center", fontsize=8, zorder=2,
                bbox=dict(boxstyle="circle,pad=0.2", fc="white", ec="black", lw=0.6))
    ax.set_xlim(-1.3, 1.3)
    ax.set_ylim(-1.3, 1.3)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(f"color {m}", fontsize=9)


def report_figure(emap: SymmetricMap, result: RecognitionResult | None = None, title: str = "") -> Figure:
    """One row of color-graph panels plus the witness tree when there is one."""
    colors = list(emap.colors)
    ncols = max(len(colors), 1)
    has_tree = result is not None and result.witness is not None
    fig = Figure(figsize=(2.4 * max(ncols, 2), 2.6 + (3.4 if has_tree else 0.0)), layout="constrained")
    FigureCanvasAgg(fig)
    grid = fig.add_gridspec(2 if has_tree else 1, ncols, height_ratios=[1, 1.5] if has_tree else None)
    for j, m in enumerate(colors):
        draw_color_graph(emap, m, fig.add_subplot(grid[0, j]))
    if not colors:
        ax = fig.add_subplot(grid[0, 0])
        ax.text(0.5, 0.5, "no colors", ha="center", va="center")
        ax.axis("off")
    if has_tree:
        draw_tree(result.witness, fig.add_subplot(grid[1, :]), title="witness")
    head = title
    if result is not None:
        head = f"{title}  [{result.decision}]".strip()
        if result.reason is not None:
            head += "\n" + _reason_text(result.reason)
    if head:
        fig.suptitle(head, fontsize=11)
    return fig


def _reason_text(reason: dict) -> str:
    if reason["kind"] == "non-partition":
        return f"neighborhoods of color {reason['color']} overlap at {reason['leaf']}"
    if "subsplits" in reason:
        return "incompatible: " + ", ".join(reason["subsplits"])
    return "no tree displays all subsplits"


def save_figure(fig: Figure, path: str, dpi: int = 120) -> None:
    fig.savefig(path, dpi=dpi)
