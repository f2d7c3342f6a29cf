"""Randomised cross-check of the fast formulas against brute force.

For each random graph and random partition this compares, within ``tol``:

* ``rm`` against full modularity re-evaluation, for every vertex and target;
* incrementally maintained community statistics against a recount;
* RM corrected with the table after a random move against RM recomputed
  on the moved partition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .graph import Graph
from .modularity import Partition, check_stats, exact_delta_q
from .nash import MoveEvaluation, classify, rm, rm_correction


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p) with string labels ``0..n-1``."""
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(zip(iu[keep].tolist(), ju[keep].tolist()), n=n)


def random_partition(g: Graph, rng: np.random.Generator) -> Partition:
    k = int(rng.integers(1, g.n + 1))
    return Partition(g, rng.integers(0, k, size=g.n).tolist())


@dataclass
class Mismatch:
    check: str
    detail: dict

    def to_json(self) -> dict:
        return {"check": self.check, **self.detail}


@dataclass
class VerificationSummary:
    trials: int = 0
    skipped: int = 0
    checks: int = 0
    max_error: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "skipped_edgeless": self.skipped,
            "checks": self.checks,
            "max_error": self.max_error,
            "ok": self.ok,
            "failures": [f.to_json() for f in self.failures[:10]],
        }


def _instance(g: Graph, p: Partition) -> dict:
    return {"n": g.n, "edges": g.edges(), "partition": p.labels.tolist()}


def verify_instance(
    g: Graph,
    p: Partition,
    rng: np.random.Generator,
    summary: VerificationSummary,
    tol: float = 1e-12,
    rm_fn: Callable = rm,
) -> None:
    def record(name, err, **detail):
        summary.checks += 1
        summary.max_error = max(summary.max_error, err)
        if not err <= tol:
            summary.failures.append(Mismatch(name, {"error": err, **detail, **_instance(g, p)}))

    targets = p.communities + [p.new_community_id()]
    for w in range(g.n):
        for c in targets:
            fast = rm_fn(g, p, w, c, True)
            slow = exact_delta_q(g, p, w, c)
            record("rm_vs_exact", abs(fast - slow), vertex=w, target=c, rm=fast, exact=slow)

    w = int(rng.integers(g.n))
    choices = [c for c in targets if c != p.community_of(w)]
    if not choices:
        return
    c2 = int(choices[rng.integers(len(choices))])
    move = MoveEvaluation(w, p.community_of(w), c2, rm_fn(g, p, w, c2, True))
    before = {
        (z, c): rm_fn(g, p, z, c, True) for z in range(g.n) if z != w for c in targets
    }
    moved = p.copy()
    moved.move(g, w, c2)
    problem = check_stats(g, moved)
    summary.checks += 1
    if problem:
        summary.failures.append(Mismatch("incremental_stats", {"problem": problem, **_instance(g, p)}))

    for (z, c), old in before.items():
        corr = rm_correction(g, z, classify(p.community_of(z), move), classify(c, move), move)
        new = rm_fn(g, moved, z, c, True)
        record("correction_table", abs(old + corr - new), vertex=z, target=c, moved=w, to=c2)


def run_verification(
    n_trials: int = 100,
    max_n: int = 30,
    seed: int = 0,
    edge_prob: float = 0.2,
    tol: float = 1e-12,
    rm_fn: Callable = rm,
    min_n: int = 2,
) -> VerificationSummary:
    """Run ``n_trials`` random instances with ``min_n <= n <= max_n``.

    Edgeless draws (modularity undefined) are redrawn.
    """
    if max_n < min_n:
        raise ValueError(f"max_n must be >= {min_n}")
    rng = np.random.default_rng(seed)
    summary = VerificationSummary()
    while summary.trials < n_trials:
        n = int(rng.integers(min_n, max_n + 1))
        g = random_graph(n, edge_prob, rng)
        if g.m == 0:
            summary.skipped += 1
            continue
        verify_instance(g, random_partition(g, rng), rng, summary, tol, rm_fn)
        summary.trials += 1
    return summary


def faulty_rm(g, p, w, target, allow_empty_target=False) -> float:
    """``rm`` with a deliberate off-by-one in the link count, for harness self-tests."""
    value = rm(g, p, w, target, allow_empty_target)
    if target != p.community_of(w):
        value += 1.0 / g.m
    return value


def verify_edge(tol: float = 1e-12, rm_fn: Optional[Callable] = None) -> VerificationSummary:
    """Smallest non-trivial case: a single edge, both vertices apart."""
    g = Graph.from_edges([(0, 1)])
    summary = VerificationSummary(trials=1)
    verify_instance(g, Partition.singletons(g), np.random.default_rng(0), summary, tol, rm_fn or rm)
    return summary
