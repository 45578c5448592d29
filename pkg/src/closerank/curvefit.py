"""Least-squares fit of the logistic reverse-rank curve.

Given per-node (closeness, reverse rank) points the fitter recovers c_mid
and the slope p of the model in :mod:`closerank.ranking`.  The optimizer
is a damped Gauss-Newton iteration (Levenberg-Marquardt) with the
classical diagonal scaling: each parameter's damping is weighted by the
largest Jacobian column norm seen so far, which keeps the step well
conditioned even though c_mid and p live on very different scales.  Steps
that do not reduce the residual are rejected and retried with ten times
the damping, so the objective is non-increasing across iterations.

Internally the curve is parameterized by (log c_mid, p); the logistic
then becomes a function of p * (log c - log c_mid), which is where the
analytic Jacobian below comes from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .ranking import DEFAULT_SLOPE, LogisticParams, exact_ranks
from .traversal import closeness_all

__all__ = [
    "FitError",
    "DegenerateProfileError",
    "FitConfig",
    "FitResult",
    "fit_logistic",
    "reverse_rank_jacobian",
    "slope_table",
]


class FitError(Exception):
    """Curve fitting could not proceed."""


class DegenerateProfileError(FitError):
    """All closeness values coincide; the curve has no information."""


@dataclass
class FitConfig:
    """Fitting knobs.

    Parameters
    ----------
    max_iterations : int
        Outer iteration budget.
    tolerance : float
        Stop once an accepted step shrinks the residual norm by less than
        this relative amount.
    initial_c_mid : float, optional
        Starting midpoint; defaults to the median closeness of the data.
    initial_p : float
        Starting slope.
    free_asymptotes : bool
        Also fit the lower/upper rank plateaus instead of pinning them to
        1 and n.  Off by default; the pinned fit is the reference model.
    """

    max_iterations: int = 1000
    tolerance: float = 1e-4
    initial_c_mid: float | None = None
    initial_p: float = DEFAULT_SLOPE
    free_asymptotes: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.initial_c_mid is not None and not 0.0 < self.initial_c_mid <= 1.0:
            raise ValueError("initial_c_mid must lie in (0, 1]")
        if not self.initial_p > 0.0:
            raise ValueError("initial_p must be positive")


@dataclass(frozen=True)
class FitResult:
    """Outcome of one fit.

    ``asymptotes`` echoes the rank plateaus used: (1, n) unless
    ``free_asymptotes`` let the fitter move them.
    """

    params: LogisticParams
    residual_norm: float
    iterations_used: int
    converged: bool
    asymptotes: tuple[float, float]


def _expit(z: np.ndarray) -> np.ndarray:
    # overflow of exp saturates to 0/1, which is the exact limit value
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def _model(theta: np.ndarray, x: np.ndarray, n: int, free: bool):
    """Reverse-rank curve and its Jacobian at log-closeness ``x``.

    theta is (mu, p) or (mu, p, lo, hi) with mu = log c_mid.  Returns
    (values, Jacobian) with one column per theta entry.
    """
    mu, p = theta[0], theta[1]
    lo, hi = (theta[2], theta[3]) if free else (1.0, float(n))
    q = _expit(-(p * (x - mu)))          # 1 / (1 + (c/c_mid)^p)
    w = q * (1.0 - q)
    span = hi - lo
    values = hi - span * q
    cols = [span * p * w * -1.0, span * w * (x - mu)]
    if free:
        cols.extend([q, 1.0 - q])
    return values, np.column_stack(cols)


def _levmar(theta0, x, y, n, free, max_iterations, tolerance):
    """Damped least squares on the logistic model.

    Returns (theta, residual norm, iterations, converged, ssr history).
    The history holds the accepted objective values; it never increases.
    """
    theta = np.asarray(theta0, dtype=np.float64).copy()
    values, jac = _model(theta, x, n, free)
    resid = values - y
    ssr = float(resid @ resid)
    history = [ssr]
    scale = np.zeros(theta.size)
    lam = 1e-3
    iterations = 0
    converged = False
    for _ in range(max_iterations):
        iterations += 1
        col_norms = np.sqrt(np.einsum("ij,ij->j", jac, jac))
        scale = np.maximum(scale, col_norms)
        damp = np.where(scale > 0.0, scale, 1.0) ** 2
        grad = jac.T @ resid
        normal = jac.T @ jac
        accepted = False
        solved_once = False
        for _ in range(40):
            try:
                step = np.linalg.solve(normal + lam * np.diag(damp), -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            if not np.all(np.isfinite(step)):
                lam *= 10.0
                continue
            solved_once = True
            candidate = theta + step
            cand_values, cand_jac = _model(candidate, x, n, free)
            cand_resid = cand_values - y
            cand_ssr = float(cand_resid @ cand_resid)
            if np.isfinite(cand_ssr) and cand_ssr <= ssr:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            if not solved_once and iterations == 1:
                raise FitError("singular normal equations; cannot start descent")
            # no step reduces the objective: numerically stationary
            converged = True
            break
        previous_norm = np.sqrt(ssr)
        theta, resid, jac, ssr = candidate, cand_resid, cand_jac, cand_ssr
        history.append(ssr)
        lam = max(lam * 0.1, 1e-14)
        if ssr == 0.0:
            converged = True
            break
        if (previous_norm - np.sqrt(ssr)) / previous_norm < tolerance:
            converged = True
            break
    return theta, float(np.sqrt(ssr)), iterations, converged, history


def fit_logistic(points, n: int, config: FitConfig | None = None) -> FitResult:
    """Fit the reverse-rank curve to (closeness, reverse rank) points.

    Parameters
    ----------
    points : array-like, shape (N, 2)
        Column 0 holds closeness values (positive), column 1 the observed
        reverse ranks.
    n : int
        Node count of the underlying graph; fixes the rank plateaus.
    config : FitConfig, optional

    Returns
    -------
    FitResult
        ``converged`` is False when the iteration budget ran out first.

    Raises
    ------
    DegenerateProfileError
        If every point has the same closeness.
    FitError
        If no descent direction exists at the start.
    """
    config = config or FitConfig()
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (N, 2) array of (closeness, rank)")
    if pts.shape[0] < 2:
        raise ValueError("need at least two points to fit")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    if np.any(pts[:, 0] <= 0.0):
        raise ValueError("closeness values must be positive")
    if n < 2:
        raise ValueError("model needs n >= 2")
    # canonical order makes the fit independent of how points were stacked
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    c = pts[:, 0]
    y = pts[:, 1]
    if np.all(c == c[0]):
        raise DegenerateProfileError(
            "degenerate profile: all closeness values identical"
        )
    x = np.log(c)
    c_mid0 = config.initial_c_mid
    if c_mid0 is None:
        c_mid0 = float(np.median(c))
    theta0 = [np.log(c_mid0), config.initial_p]
    if config.free_asymptotes:
        theta0.extend([1.0, float(n)])
    theta, residual_norm, iterations, converged, _ = _levmar(
        theta0, x, y, n, config.free_asymptotes,
        config.max_iterations, config.tolerance,
    )
    params = LogisticParams(n=n, c_mid=float(np.exp(theta[0])), p=float(theta[1]))
    asymptotes = (
        (float(theta[2]), float(theta[3]))
        if config.free_asymptotes
        else (1.0, float(n))
    )
    return FitResult(
        params=params,
        residual_norm=residual_norm,
        iterations_used=iterations,
        converged=converged,
        asymptotes=asymptotes,
    )


def reverse_rank_jacobian(params: LogisticParams, c) -> np.ndarray:
    """Analytic d reverse_rank / d (c_mid, p), shape (N, 2).

    Matches finite differences of :func:`closerank.ranking.reverse_rank`;
    the fitter consumes the same expressions via the log-c_mid chain rule.
    """
    arr = np.atleast_1d(np.asarray(c, dtype=np.float64))
    if np.any(arr <= 0.0):
        raise ValueError("closeness values must be positive")
    x = np.log(arr)
    mu = np.log(params.c_mid)
    q = _expit(-(params.p * (x - mu)))
    w = q * (1.0 - q)
    span = params.n - 1.0
    d_cmid = -span * params.p * w / params.c_mid
    d_p = span * w * (x - mu)
    return np.column_stack([d_cmid, d_p])


def slope_table(graphs, config: FitConfig | None = None,
                threads: int | None = None) -> tuple[list[tuple[str, float]], float]:
    """Fit the slope per graph and average the results.

    ``graphs`` is an iterable of (name, Graph) pairs (a dict works too).
    Returns the per-graph table and the mean fitted slope.  Fit failures
    propagate; a complete graph, for instance, has a degenerate profile.
    """
    items = graphs.items() if hasattr(graphs, "items") else graphs
    rows: list[tuple[str, float]] = []
    for name, graph in items:
        values = closeness_all(graph, threads=threads)
        ranks = exact_ranks(values)
        rev = graph.node_count - ranks + 1
        result = fit_logistic(
            np.column_stack([values, rev.astype(np.float64)]),
            graph.node_count,
            config,
        )
        rows.append((name, result.params.p))
    if not rows:
        raise ValueError("no graphs to fit")
    mean_p = float(np.mean([p for _, p in rows]))
    return rows, mean_p
