"""Figure rendering for reports; every function writes one image file."""

from __future__ import annotations

import numpy as np
from matplotlib.figure import Figure

from .ranking import LogisticParams, reverse_rank

__all__ = ["save_fit_figure", "save_error_figure", "save_study_figure"]

_MAX_SCATTER = 5000


def _new_axes(width: float = 6.4, height: float = 4.4):
    fig = Figure(figsize=(width, height), dpi=120)
    ax = fig.subplots()
    ax.grid(True, alpha=0.3, linewidth=0.5)
    return fig, ax


def save_fit_figure(path, closeness, reverse_ranks, curves, title: str = "") -> None:
    """Scatter of observed reverse ranks with fitted curves on top.

    ``curves`` is a list of (label, LogisticParams) pairs.  Large point
    clouds are subsampled evenly; curves are drawn on a log-spaced
    closeness grid spanning the data.
    """
    closeness = np.asarray(closeness, dtype=np.float64)
    reverse_ranks = np.asarray(reverse_ranks, dtype=np.float64)
    fig, ax = _new_axes()
    if closeness.size > _MAX_SCATTER:
        step = closeness.size // _MAX_SCATTER + 1
        shown = slice(None, None, step)
    else:
        shown = slice(None)
    ax.scatter(closeness[shown], reverse_ranks[shown], s=5, alpha=0.35,
               color="#46627f", label="observed", linewidths=0)
    grid = np.geomspace(closeness.min(), closeness.max(), 400)
    for label, params in curves:
        ax.plot(grid, reverse_rank(params, grid), linewidth=1.8, label=label)
    ax.set_xlabel("closeness centrality")
    ax.set_ylabel("reverse rank")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.savefig(path, bbox_inches="tight")


def save_error_figure(path, reports, title: str = "") -> None:
    """Grouped bars of paae and weighted error per evaluated method."""
    reports = list(reports)
    fig, ax = _new_axes()
    pos = np.arange(len(reports), dtype=np.float64)
    width = 0.38
    ax.bar(pos - width / 2, [r.paae for r in reports], width,
           label="paae %", color="#4878a8")
    ax.bar(pos + width / 2, [r.wtd for r in reports], width,
           label="weighted %", color="#b46a55")
    ax.set_xticks(pos)
    ax.set_xticklabels([r.method for r in reports])
    ax.set_ylabel("mean rank error, % of n")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.savefig(path, bbox_inches="tight")


def save_study_figure(path, rows, title: str = "") -> None:
    """Fitted slope against edge density for the generated-graph sweep."""
    rows = list(rows)
    fig, ax = _new_axes()
    ax.plot([row.density for row in rows], [row.p for row in rows],
            marker="o", markersize=4, linewidth=1.4, color="#46627f")
    ax.set_xlabel("edge density")
    ax.set_ylabel("fitted slope p")
    if title:
        ax.set_title(title)
    fig.savefig(path, bbox_inches="tight")
