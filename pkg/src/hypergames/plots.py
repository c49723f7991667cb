"""Matplotlib rendering for game graphs and bijection reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .transition import STAR
from .types import pretty


def render_graph(states, edges, path: str) -> None:
    """Draw the bounded unfolding as a layered tree figure."""
    depth = {0: 0}
    children: dict[int, list[int]] = {}
    for src, _, tgt in edges:
        depth[tgt] = depth[src] + 1
        children.setdefault(src, []).append(tgt)
    by_level: dict[int, list[int]] = {}
    for node, d in depth.items():
        by_level.setdefault(d, []).append(node)
    pos = {}
    for d, nodes in sorted(by_level.items()):
        for k, node in enumerate(sorted(nodes)):
            pos[node] = (k - (len(nodes) - 1) / 2.0, -d)
    fig, ax = plt.subplots(figsize=(max(6, 2 * max(len(v) for v in by_level.values())), 1.8 * (max(by_level) + 1)))
    for src, label, tgt in edges:
        (x1, y1), (x2, y2) = pos[src], pos[tgt]
        ax.annotate(
            "",
            xy=(x2, y2),
            xytext=(x1, y1),
            arrowprops=dict(arrowstyle="->", color="gray"),
        )
        ax.text((x1 + x2) / 2, (y1 + y2) / 2, str(label), fontsize=7, color="darkblue", ha="center")
    for node, (x, y) in pos.items():
        text = "*" if states[node] is STAR else pretty(states[node])
        ax.text(
            x,
            y,
            text,
            ha="center",
            va="center",
            fontsize=8,
            bbox=dict(boxstyle="round", facecolor="lightyellow", edgecolor="black"),
        )
    ax.set_axis_off()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_check_figure(report, path: str) -> None:
    """Bar chart comparing the two sides of a bijection report."""
    fig, ax = plt.subplots(figsize=(5, 4))
    labels = ["terms", "strategies"]
    values = [report.n_terms, report.n_strategies]
    colors = ["#4878cf", "#6acc65" if report.ok else "#d65f5f"]
    ax.bar(labels, values, color=colors)
    for i, v in enumerate(values):
        ax.text(i, v, str(v), ha="center", va="bottom")
    ax.set_ylabel("count")
    ax.set_title(
        f"{pretty(report.root_type)}\nbijection: {'OK' if report.ok else 'MISMATCH'}"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
