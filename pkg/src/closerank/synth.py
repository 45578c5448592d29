"""Synthetic scale-free graphs and the slope-vs-density sweep.

The generator grows a preferential-attachment graph: starting from a star,
each new node attaches to ``m_attach`` distinct existing nodes drawn with
probability proportional to degree.  The star seed guarantees the graph is
connected from the first step, and attaching only to existing nodes keeps
it connected throughout.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

import numpy as np

from . import curvefit
from .graph import Graph, from_edges
from .ranking import exact_ranks
from .traversal import closeness_all

__all__ = ["BAConfig", "generate_ba", "StudyRow", "slope_density_study",
           "write_study_csv"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BAConfig:
    """Preferential-attachment parameters.

    ``n`` total nodes, ``m_attach`` edges per new node.  The initial star
    uses ``m_attach + 1`` nodes, and at least one node must be left to
    grow, so ``n > m_attach + 1`` is required.  The final graph has
    exactly ``m_attach * (n - m_attach)`` edges.
    """

    n: int
    m_attach: int
    seed: int = 0

    def __post_init__(self):
        if self.m_attach < 1:
            raise ValueError("m_attach must be at least 1")
        if self.n <= self.m_attach + 1:
            raise ValueError(
                f"n={self.n} leaves no room to grow beyond the initial "
                f"star of {self.m_attach + 1} nodes"
            )


def generate_ba(config: BAConfig) -> Graph:
    """Grow a preferential-attachment graph; deterministic in the seed.

    Attachment targets are drawn from a list holding each endpoint of
    every existing edge once, i.e. each node appears as often as its
    degree.  Draws repeat until ``m_attach`` distinct targets are found.
    """
    rng = random.Random(config.seed)
    m = config.m_attach
    edges: list[tuple[int, int]] = [(0, leaf) for leaf in range(1, m + 1)]
    endpoints: list[int] = []
    for u, v in edges:
        endpoints.append(u)
        endpoints.append(v)
    for new in range(m + 1, config.n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(endpoints[rng.randrange(len(endpoints))])
        chosen = sorted(targets)
        for t in chosen:
            edges.append((t, new))
        endpoints.extend(chosen)
        endpoints.extend([new] * m)
    return from_edges(edges, n=config.n)


@dataclass(frozen=True)
class StudyRow:
    """One fitted point of the slope-vs-density sweep."""

    m_attach: int
    density: float
    p: float
    converged: bool


def slope_density_study(n: int, m_attach_values, seed: int = 0,
                        threads: int | None = None,
                        config: curvefit.FitConfig | None = None) -> list[StudyRow]:
    """Fit the slope on one generated graph per attachment count.

    Each graph gets an independent seed derived from ``seed``.  Density is
    2m / (n (n - 1)).  Graphs whose fit fails outright are skipped with a
    warning; rows come back sorted by density.
    """
    values = list(m_attach_values)
    if not values:
        raise ValueError("no m_attach values given")
    children = np.random.SeedSequence(seed).spawn(len(values))
    rows: list[StudyRow] = []
    for m_attach, child in zip(values, children):
        graph = generate_ba(
            BAConfig(n=n, m_attach=int(m_attach), seed=int(child.generate_state(1)[0]))
        )
        density = 2.0 * graph.edge_count / (n * (n - 1))
        closeness_values = closeness_all(graph, threads=threads)
        ranks = exact_ranks(closeness_values)
        rev = (n - ranks + 1).astype(np.float64)
        try:
            fit = curvefit.fit_logistic(
                np.column_stack([closeness_values, rev]), n, config
            )
        except curvefit.FitError as exc:
            log.warning("skipping m_attach=%d: %s", m_attach, exc)
            continue
        rows.append(StudyRow(
            m_attach=int(m_attach),
            density=density,
            p=fit.params.p,
            converged=fit.converged,
        ))
    rows.sort(key=lambda row: row.density)
    return rows


def write_study_csv(rows, file_or_path) -> None:
    """Study rows as CSV: m_attach,density,p,converged."""
    from .evaluation import _open_for_write

    fh, owned = _open_for_write(file_or_path)
    try:
        fh.write("m_attach,density,p,converged\n")
        for row in rows:
            fh.write(f"{row.m_attach},{row.density!r},{row.p!r},{row.converged}\n")
    finally:
        if owned:
            fh.close()
