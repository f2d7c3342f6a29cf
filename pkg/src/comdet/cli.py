"""Command-line front end: ``comdet detect|pipeline|verify``.

Exit codes: 0 success, 2 input error, 3 verification failure,
4 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import datasets
from .graph import FORMATS, UNIPARTITE, GraphError, load_edge_list
from .louvain import LouvainConfig, louvain
from .modularity import EmptyGraphError
from .nash import InvariantError, StabilizationError, StabilizeConfig, stabilize, unstable_vertices
from .overlap import alpha_cut, legitimacy_matrix
from .report import input_metadata, partition_json, pipeline_report, to_dot
from .verify import faulty_rm, rm, run_verification, verify_edge

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3
EXIT_INTERNAL = 4

SEED_ENV = "COMDET_SEED"

log = logging.getLogger("comdet")


class InputError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{SEED_ENV}={env!r} is not an integer") from None


def _read_graph(args):
    if args.dataset:
        path = datasets.data_path(args.dataset) if args.dataset != "dolphins" else datasets.dolphins_path()
        if path is None:
            raise InputError(f"dolphins network not bundled; set {datasets.DOLPHINS_ENV}")
        fmt = datasets._FORMATS[args.dataset]
    elif args.input:
        path, fmt = Path(args.input), args.format
    else:
        raise InputError("one of --input or --dataset is required")
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    g = load_edge_list(data, format=fmt)
    if g.m == 0:
        raise InputError("empty graph")
    return g, input_metadata(g, str(path), fmt, data)


def _emit(obj, output) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_detect(args) -> int:
    seed = _seed(args)
    g, meta = _read_graph(args)
    p = louvain(g, LouvainConfig(seed=seed))
    report = {"input": meta, "config": {"seed": seed}, "partition": partition_json(g, p)}
    _emit(report, args.output)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    seed = _seed(args)
    if not 0.0 <= args.alpha <= 1.0:
        raise InputError("--alpha must lie in [0, 1]")
    if not args.epsilon > 0:
        raise InputError("--epsilon must be > 0")
    timings = {}
    t0 = time.perf_counter()
    g, meta = _read_graph(args)
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    initial = louvain(g, LouvainConfig(seed=seed))
    timings["louvain"] = time.perf_counter() - t0

    cfg = StabilizeConfig(
        epsilon=args.epsilon, max_moves=args.max_moves, allow_empty_target=args.allow_empty_target
    )
    t0 = time.perf_counter()
    unstable = unstable_vertices(g, initial, cfg.epsilon)
    final, trace = stabilize(g, initial, cfg)
    timings["stabilize"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    legit = legitimacy_matrix(g, final)
    overlap = alpha_cut(legit, args.alpha)
    timings["overlap"] = time.perf_counter() - t0

    csv_path = args.csv
    if csv_path is None and args.output:
        csv_path = str(Path(args.output).with_suffix(".legitimacy.csv"))
    if csv_path:
        Path(csv_path).write_text(legit.to_csv(), encoding="utf-8")
    if args.dot:
        Path(args.dot).write_text(to_dot(g, final), encoding="utf-8")

    config = {
        "seed": seed,
        "epsilon": args.epsilon,
        "alpha": args.alpha,
        "max_moves": args.max_moves,
        "allow_empty_target": args.allow_empty_target,
    }
    report = pipeline_report(g, meta, config, initial, final, trace, unstable, legit, overlap, csv_path)
    if report["q_stabilized"] < report["q_initial"]:
        raise InvariantError("stabilised modularity fell below the initial value")
    if args.timings:
        report["timings"] = timings
    _emit(report, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = _seed(args)
    if args.max_n < 2:
        raise InputError("--max-n must be >= 2")
    rm_fn = faulty_rm if args.inject_fault else rm
    summary = run_verification(args.verify_trials, args.max_n, seed, args.edge_prob, rm_fn=rm_fn)
    edge = verify_edge(rm_fn=rm_fn)
    summary.checks += edge.checks
    summary.failures.extend(edge.failures)
    result = summary.to_json()
    result["config"] = {"trials": args.verify_trials, "max_n": args.max_n, "seed": seed,
                        "edge_prob": args.edge_prob}
    _emit(result, args.output)
    if not summary.ok:
        sys.stderr.write(
            f"verification failed: {len(summary.failures)} mismatches; first instance:\n"
            + json.dumps(summary.failures[0].to_json()) + "\n"
        )
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comdet",
        description="Modularity community detection with Nash-equilibrium refinement and overlaps.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_args(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--input", help="edge-list file")
        src.add_argument("--dataset", choices=sorted(datasets._FORMATS), help="bundled benchmark")
        p.add_argument("--format", choices=FORMATS, default=UNIPARTITE)
        p.add_argument("--seed", type=int, default=None, help=f"Louvain seed (default: ${SEED_ENV} or 0)")
        p.add_argument("--output", help="write the JSON report here instead of stdout")

    p = sub.add_parser("detect", help="Louvain partition only")
    graph_args(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("pipeline", help="Louvain, then stabilise, then legitimacy overlaps")
    graph_args(p)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--max-moves", type=int, default=100_000)
    p.add_argument("--allow-empty-target", action="store_true")
    p.add_argument("--dot", help="write a Graphviz file of the final communities")
    p.add_argument("--csv", help="legitimacy CSV path (default: next to --output)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify", help="random cross-check of RM against brute force")
    p.add_argument("--verify-trials", type=int, default=100)
    p.add_argument("--max-n", type=int, default=30)
    p.add_argument("--edge-prob", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, GraphError, EmptyGraphError, FileNotFoundError) as exc:
        sys.stderr.write(f"comdet: error: {exc}\n")
        return EXIT_INPUT
    except StabilizationError as exc:
        sys.stderr.write(f"comdet: {exc}\n")
        sys.stderr.write(json.dumps({"partial_trace": exc.trace.to_json()}) + "\n")
        return EXIT_INTERNAL
    except InvariantError as exc:
        sys.stderr.write(f"comdet: invariant breach: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
