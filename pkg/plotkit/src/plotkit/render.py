"""Matplotlib renderers for each figure kind.

Charts plot the mean capacity with standard-error bars per series.
Axis limits are fixed from the data extents so re-rendering identical
inputs yields an identical layout.  Mode colors follow the convention
blue = mode 1, green = mode 2.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")  # offline batch tool

import matplotlib.pyplot as plt
import numpy as np

from .data import PlotkitError, read_graph, read_records, require_columns
from .recipes import FigureRecipe

MODE_COLORS = ("tab:blue", "tab:green", "tab:orange", "tab:purple")


def _series_stats(rows, x_col, y_col="capacity_nats"):
    """x -> (mean, stderr) over rows sharing the x value."""
    groups: dict[float, list[float]] = {}
    for r in rows:
        groups.setdefault(r[x_col], []).append(r[y_col])
    xs = sorted(groups)
    means = [float(np.mean(groups[x])) for x in xs]
    errs = [
        float(np.std(groups[x], ddof=1) / math.sqrt(len(groups[x]))) if len(groups[x]) > 1 else 0.0
        for x in xs
    ]
    return xs, means, errs


def _fix_axes(ax, all_x, all_y):
    x_lo, x_hi = min(all_x), max(all_x)
    y_hi = max(all_y) if all_y else 1.0
    pad = 0.05 * (x_hi - x_lo) if x_hi > x_lo else 1.0
    ax.set_xlim(x_lo - pad, x_hi + pad)
    ax.set_ylim(0.0, y_hi * 1.1 if y_hi > 0 else 1.0)


def _line_chart(recipe: FigureRecipe, x_col: str, series_of, x_label: str):
    multi = len(recipe.records) > 1
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    all_x: list[float] = []
    all_y: list[float] = []
    for src in recipe.records:
        rows = read_records(src.path)
        require_columns(rows, (x_col, "algorithm", "capacity_nats"), src.path)
        for label, subset in series_of(src, rows, multi):
            xs, means, errs = _series_stats(subset, x_col)
            ax.errorbar(xs, means, yerr=errs, marker="o", capsize=3, label=label)
            all_x += xs
            all_y += [m + e for m, e in zip(means, errs)]
    if not all_x:
        raise PlotkitError("no series matched the recipe")
    _fix_axes(ax, all_x, all_y)
    ax.set_xlabel(x_label)
    ax.set_ylabel("capacity (nats/symbol)")
    if recipe.title:
        ax.set_title(recipe.title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(recipe.output, dpi=150)
    plt.close(fig)


def _by_algorithm(src, rows, multi):
    prefix = f"{src.label}: " if multi else ""
    for alg in sorted({r["algorithm"] for r in rows}):
        yield prefix + alg, [r for r in rows if r["algorithm"] == alg]


def render(recipe: FigureRecipe) -> str:
    """Produce the recipe's image; returns the output path."""
    if recipe.kind == "capacity-vs-N":
        _line_chart(recipe, "n_nodes", _by_algorithm, "number of friendly nodes")
    elif recipe.kind == "capacity-vs-distance":
        _line_chart(recipe, "sweep_value", _by_algorithm, "distance (grid units)")
    elif recipe.kind == "alpha-comparison":

        def by_alpha(src, rows, multi):
            subset = [r for r in rows if r["algorithm"] == recipe.algorithm]
            if not subset:
                raise PlotkitError(f"{src.path}: no rows for algorithm {recipe.algorithm!r}")
            for alpha in sorted({r["alpha"] for r in subset}):
                yield f"alpha = {alpha:g}", [r for r in subset if r["alpha"] == alpha]

        _line_chart(recipe, "n_nodes", by_alpha, "number of friendly nodes")
    elif recipe.kind == "multi-adversary":

        def by_k(src, rows, multi):
            require_columns(rows, ("n_adversaries",), src.path)
            subset = [r for r in rows if r["algorithm"] == recipe.algorithm]
            if not subset:
                raise PlotkitError(f"{src.path}: no rows for algorithm {recipe.algorithm!r}")
            for k in sorted({r["n_adversaries"] for r in subset}):
                label = f"{src.label}, K = {k}" if multi else f"K = {k}"
                yield label, [r for r in subset if r["n_adversaries"] == k]

        _line_chart(recipe, "n_nodes", by_k, "number of friendly nodes")
    else:  # path-render
        _render_path(recipe)
    return recipe.output


def _render_path(recipe: FigureRecipe) -> None:
    g = read_graph(recipe.graph)
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    pos = {n.id: (n.x, n.y) for n in g.nodes}

    # route edges: one strand per mode, width proportional to its power share
    for e in g.edges:
        (x0, y0), (x1, y1) = pos[e.src], pos[e.dst]
        dx, dy = x1 - x0, y1 - y0
        norm = math.hypot(dx, dy) or 1.0
        ox, oy = -dy / norm, dx / norm  # perpendicular offset between strands
        for m, frac in enumerate(e.mode_fractions):
            if frac <= 0.0:
                continue
            shift = (m - (g.modes - 1) / 2.0) * 0.6
            ax.plot(
                [x0 + ox * shift, x1 + ox * shift],
                [y0 + oy * shift, y1 + oy * shift],
                color=MODE_COLORS[m % len(MODE_COLORS)],
                linewidth=0.8 + 6.0 * frac,
                solid_capstyle="round",
                zorder=2,
            )

    relay = [n for n in g.nodes if n.role == "relay"]
    route = [n for n in g.nodes if n.role == "route"]
    ends = [n for n in g.nodes if n.role in ("source", "dest")]
    if relay:
        ax.scatter([n.x for n in relay], [n.y for n in relay], s=18, c="0.7", zorder=3)
    if route:
        ax.scatter([n.x for n in route], [n.y for n in route], s=30, c="0.2", zorder=4)
    for n in ends:
        ax.scatter([n.x], [n.y], s=90, c="0.1", marker="s", zorder=5)
        ax.annotate(n.role, (n.x, n.y), textcoords="offset points", xytext=(6, 6))
    for a in g.adversaries:
        ax.scatter([a.x], [a.y], s=120, c="tab:red", marker="x", linewidths=2.5, zorder=5)
    for n in g.nodes:
        if n.role in ("route", "relay"):
            ax.annotate(str(n.id), (n.x, n.y), textcoords="offset points", xytext=(4, 4), fontsize=7)

    handles = [
        plt.Line2D([0], [0], color=MODE_COLORS[m % len(MODE_COLORS)], lw=3, label=f"mode {m + 1}")
        for m in range(g.modes)
    ]
    handles.append(
        plt.Line2D([0], [0], color="tab:red", marker="x", lw=0, markersize=9, label="adversary")
    )
    ax.legend(handles=handles, loc="best", fontsize=8)

    xs = [n.x for n in (*g.nodes, *g.adversaries)]
    ys = [n.y for n in (*g.nodes, *g.adversaries)]
    pad_x = 0.06 * (max(xs) - min(xs) or 1.0)
    pad_y = 0.06 * (max(ys) - min(ys) or 1.0)
    ax.set_xlim(min(xs) - pad_x, max(xs) + pad_x)
    ax.set_ylim(min(ys) - pad_y, max(ys) + pad_y)
    ax.set_aspect("equal")
    if recipe.title:
        ax.set_title(recipe.title)
    fig.tight_layout()
    fig.savefig(recipe.output, dpi=150)
    plt.close(fig)
