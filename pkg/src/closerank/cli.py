"""Command-line interface.

Data goes to stdout (or files under ``--outdir``); progress and errors go
to stderr.  Exit codes: 0 on success, 1 for usage problems, 2 for data
problems (unreadable input, unknown node, failed fit).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import evaluation, plots
from .curvefit import FitConfig, FitError, fit_logistic
from .graph import Graph, GraphError, largest_connected_component, load_edge_list, save_edge_list
from .ranking import (
    DEFAULT_SLOPE,
    exact_ranks,
    heuristic_estimate,
    randomized_estimate,
    rank_from_closeness,
)
from .synth import BAConfig, generate_ba, slope_density_study, write_study_csv
from .traversal import closeness_all

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

THREADS_ENV = "CLOSERANK_THREADS"

log = logging.getLogger("closerank")


@dataclass
class RunConfig:
    """Common run parameters shared by the subcommands."""

    p: float = DEFAULT_SLOPE
    k: int = 50
    repetitions: int = 40
    seed: int = 0
    threads: int | None = None
    outdir: Path | None = None


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; we reserve 2 for data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_threads() -> int | None:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring %s=%r: not an integer", THREADS_ENV, env)
    return None


def _run_config(args) -> RunConfig:
    return RunConfig(
        p=getattr(args, "p", DEFAULT_SLOPE),
        k=getattr(args, "k", 50),
        repetitions=getattr(args, "repetitions", 40),
        seed=getattr(args, "seed", 0),
        threads=args.threads if args.threads is not None else _default_threads(),
        outdir=Path(args.outdir) if getattr(args, "outdir", None) else None,
    )


def _graph_name(path: str) -> str:
    return Path(path).name.partition(".")[0]


def _load_component(path: str) -> Graph:
    raw = load_edge_list(path)
    lcc = largest_connected_component(raw)
    log.info(
        "%s: parsed %d nodes / %d edges; largest component %d nodes / %d edges",
        path, raw.node_count, raw.edge_count, lcc.node_count, lcc.edge_count,
    )
    return lcc


def _emit(record: dict) -> None:
    sys.stdout.write(json.dumps(record) + "\n")


def _fit_reverse_ranks(graph: Graph, threads: int | None,
                       config: FitConfig | None = None):
    """Ground-truth profile plus fit: the O(n * m) reference path."""
    values = closeness_all(graph, threads=threads)
    ranks = exact_ranks(values)
    rev = (graph.node_count - ranks + 1).astype(np.float64)
    fit = fit_logistic(np.column_stack([values, rev]), graph.node_count, config)
    return values, ranks, rev, fit


def _cmd_rank(args) -> int:
    cfg = _run_config(args)
    graph = _load_component(args.input)
    try:
        node = graph.node_id(args.node)
    except KeyError:
        raise GraphError(
            f"node {args.node!r} not found in the largest connected component"
        ) from None
    n = graph.node_count
    record: dict = {"node": args.node, "method": args.method, "n": n}
    if args.method == "exact":
        values = closeness_all(graph, threads=cfg.threads)
        record.update(
            closeness=float(values[node]),
            estimated_rank=int(exact_ranks(values)[node]),
            c_mid=None,
            p=None,
            k=None,
            seed=None,
            bfs_traversals=n,
        )
    elif args.method == "bestfit":
        values, _, _, fit = _fit_reverse_ranks(graph, cfg.threads)
        record.update(
            closeness=float(values[node]),
            estimated_rank=rank_from_closeness(fit.params, float(values[node])),
            c_mid=fit.params.c_mid,
            p=fit.params.p,
            k=None,
            seed=None,
            bfs_traversals=n,
        )
    elif args.method == "heuristic":
        est = heuristic_estimate(graph, node, p=cfg.p, rng_seed=cfg.seed)
        record.update(
            closeness=est.closeness,
            estimated_rank=est.estimated_rank,
            c_mid=est.params.c_mid,
            p=est.params.p,
            k=None,
            seed=cfg.seed,
            bfs_traversals=3,
        )
    else:
        est = randomized_estimate(graph, node, p=cfg.p, k=cfg.k, rng_seed=cfg.seed)
        record.update(
            closeness=est.closeness,
            estimated_rank=est.estimated_rank,
            c_mid=est.params.c_mid,
            p=est.params.p,
            k=est.samples_used,
            seed=cfg.seed,
            bfs_traversals=cfg.k + 1,
        )
    _emit(record)
    return EXIT_OK


def _cmd_eval(args) -> int:
    cfg = _run_config(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in evaluation.METHODS:
            raise GraphError(
                f"unknown method {m!r}; expected a subset of "
                + ",".join(evaluation.METHODS)
            )
    name = args.name or _graph_name(args.input)
    graph = _load_component(args.input)
    reports = []
    for method in methods:
        log.info("evaluating %s on %s", method, name)
        reports.append(evaluation.run_experiment(
            graph, method,
            p=cfg.p, k=cfg.k, repetitions=cfg.repetitions, rng_seed=cfg.seed,
            graph_name=name, keep_per_node=args.per_node,
            sample_nodes=args.sample_nodes, threads=cfg.threads,
        ))
    if cfg.outdir is None:
        evaluation.write_reports_csv(reports, sys.stdout)
        return EXIT_OK
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    evaluation.write_reports_csv(reports, cfg.outdir / "report.csv")
    evaluation.write_reports_json(reports, cfg.outdir / "report.json")
    if args.per_node:
        for report in reports:
            evaluation.write_per_node_csv(
                report, cfg.outdir / f"per_node_{report.method}.csv"
            )
    plots.save_error_figure(cfg.outdir / "errors.png", reports, title=name)
    log.info("wrote report.csv, report.json and errors.png to %s", cfg.outdir)
    return EXIT_OK


def _cmd_fit(args) -> int:
    cfg = _run_config(args)
    fit_config = FitConfig(
        max_iterations=args.max_iterations,
        tolerance=args.tolerance,
        initial_p=args.initial_p,
        free_asymptotes=args.free_asymptotes,
    )
    slopes = []
    if cfg.outdir is not None:
        cfg.outdir.mkdir(parents=True, exist_ok=True)
    for path in args.inputs:
        name = _graph_name(path)
        graph = _load_component(path)
        values, _, rev, fit = _fit_reverse_ranks(graph, cfg.threads, fit_config)
        slopes.append(fit.params.p)
        record = {
            "graph": name,
            "n": graph.node_count,
            "c_mid": fit.params.c_mid,
            "p": fit.params.p,
            "residual_norm": fit.residual_norm,
            "iterations": fit.iterations_used,
            "converged": fit.converged,
        }
        if args.free_asymptotes:
            record["asymptotes"] = list(fit.asymptotes)
        _emit(record)
        if cfg.outdir is not None:
            plots.save_fit_figure(
                cfg.outdir / f"fit_{name}.png",
                values, rev, [(f"fit p={fit.params.p:.2f}", fit.params)],
                title=name,
            )
    if len(args.inputs) > 1:
        _emit({"graphs": len(slopes), "mean_p": float(np.mean(slopes))})
    return EXIT_OK


def _cmd_gen_ba(args) -> int:
    graph = generate_ba(BAConfig(n=args.n, m_attach=args.m, seed=args.seed))
    save_edge_list(graph, args.output)
    log.info(
        "wrote %d nodes / %d edges to %s",
        graph.node_count, graph.edge_count, args.output,
    )
    return EXIT_OK


def _parse_m_values(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _cmd_study(args) -> int:
    cfg = _run_config(args)
    try:
        m_values = _parse_m_values(args.m)
    except ValueError:
        raise GraphError(
            f"cannot parse attachment counts from {args.m!r}; "
            "use e.g. 1..10 or 1,2,5"
        ) from None
    rows = slope_density_study(args.n, m_values, seed=cfg.seed, threads=cfg.threads)
    if cfg.outdir is None:
        write_study_csv(rows, sys.stdout)
        return EXIT_OK
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    write_study_csv(rows, cfg.outdir / "study.csv")
    with open(cfg.outdir / "study.json", "w") as fh:
        json.dump([row.__dict__ for row in rows], fh, indent=2)
        fh.write("\n")
    plots.save_study_figure(cfg.outdir / "study.png", rows,
                            title=f"n={args.n}, seed={cfg.seed}")
    log.info("wrote study.csv, study.json and study.png to %s", cfg.outdir)
    return EXIT_OK


def _add_threads(parser) -> None:
    parser.add_argument(
        "--threads", type=int, default=None,
        help=f"worker threads for full sweeps (default: ${THREADS_ENV} or all cores)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="closerank",
        description="Estimate closeness-centrality ranks from a few traversals.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p_rank = sub.add_parser("rank", help="rank one node")
    p_rank.add_argument("input", help="edge-list file (optionally .gz)")
    p_rank.add_argument("--node", required=True, help="node label to rank")
    p_rank.add_argument(
        "--method", default="heuristic",
        choices=["exact", "bestfit", "heuristic", "randomized"],
    )
    p_rank.add_argument("--p", type=float, default=DEFAULT_SLOPE,
                        help="model slope (default %(default)s)")
    p_rank.add_argument("--k", type=int, default=50,
                        help="sample size for the randomized method")
    p_rank.add_argument("--seed", type=int, default=0)
    _add_threads(p_rank)
    p_rank.set_defaults(func=_cmd_rank)

    p_eval = sub.add_parser("eval", help="score estimators against exact ranks")
    p_eval.add_argument("input")
    p_eval.add_argument("--methods", default="bestfit,heuristic,randomized",
                        help="comma-separated subset of bestfit,heuristic,randomized")
    p_eval.add_argument("--p", type=float, default=DEFAULT_SLOPE)
    p_eval.add_argument("--k", type=int, default=50)
    p_eval.add_argument("--repetitions", type=int, default=40)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--name", default=None, help="graph name for the report")
    p_eval.add_argument("--per-node", action="store_true",
                        help="also keep per-node error rows")
    p_eval.add_argument("--sample-nodes", type=int, default=None,
                        help="evaluate on a uniform node subset of this size")
    p_eval.add_argument("--outdir", default=None,
                        help="write report.csv/report.json/errors.png here "
                             "instead of CSV to stdout")
    _add_threads(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_fit = sub.add_parser("fit", help="fit the rank curve to exact profiles")
    p_fit.add_argument("inputs", nargs="+", metavar="input")
    p_fit.add_argument("--max-iterations", type=int, default=1000)
    p_fit.add_argument("--tolerance", type=float, default=1e-4)
    p_fit.add_argument("--initial-p", type=float, default=DEFAULT_SLOPE)
    p_fit.add_argument("--free-asymptotes", action="store_true",
                       help="also fit the rank plateaus instead of pinning 1 and n")
    p_fit.add_argument("--outdir", default=None,
                       help="also render fit_<name>.png per input")
    _add_threads(p_fit)
    p_fit.set_defaults(func=_cmd_fit)

    p_gen = sub.add_parser("gen-ba", help="generate a preferential-attachment graph")
    p_gen.add_argument("output", help="edge-list path to write (.gz supported)")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True,
                       help="edges attached per new node")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.set_defaults(func=_cmd_gen_ba)

    p_study = sub.add_parser("study", help="slope vs density on generated graphs")
    p_study.add_argument("--n", type=int, required=True)
    p_study.add_argument("--m", required=True,
                         help="attachment counts, e.g. 1..10 or 1,2,5")
    p_study.add_argument("--seed", type=int, default=0)
    p_study.add_argument("--outdir", default=None,
                         help="write study.csv/study.json/study.png here "
                              "instead of CSV to stdout")
    _add_threads(p_study)
    p_study.set_defaults(func=_cmd_study)
    return parser


def main(argv=None) -> int:
    # force=True rebinds the handler to the current sys.stderr so repeated
    # in-process invocations (tests, notebooks) do not log to a stale stream
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(message)s", force=True)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:      # argparse exits on usage errors and --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (GraphError, FitError, ValueError, OSError) as exc:
        log.error("error: %s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
