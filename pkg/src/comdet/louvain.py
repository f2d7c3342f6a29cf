"""Louvain modularity maximisation (local moving + aggregation)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .graph import Graph
from .modularity import EmptyGraphError, Partition


@dataclass(frozen=True)
class LouvainConfig:
    seed: int = 0
    max_levels: int = 32
    min_gain: float = 1e-9

    def __post_init__(self):
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")
        if self.min_gain < 0:
            raise ValueError("min_gain must be >= 0")


@dataclass
class AggregateGraph:
    """Weighted undirected graph used between Louvain levels.

    ``weights[i]`` maps each neighbour ``j`` (possibly ``i`` itself) to
    ``A_ij``. A self-loop stores the full diagonal entry, so a community
    with ``e`` internal edges collapses to a vertex with ``A_ii = 2e``.
    """

    weights: list = field(default_factory=list)

    @classmethod
    def from_graph(cls, g: Graph) -> "AggregateGraph":
        return cls([{v: 1.0 for v in nbrs} for nbrs in g.adjacency])

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def strengths(self) -> np.ndarray:
        return np.array([sum(w.values()) for w in self.weights], dtype=float)

    @property
    def total_weight(self) -> float:
        """``2m``: the sum of all adjacency entries."""
        return float(sum(sum(w.values()) for w in self.weights))

    def self_loop(self, i: int) -> float:
        return self.weights[i].get(i, 0.0)


def weighted_modularity(ag: AggregateGraph, labels: Sequence[int]) -> float:
    two_m = ag.total_weight
    if two_m == 0:
        raise EmptyGraphError("empty graph has undefined modularity")
    inside: dict = {}
    tot: dict = {}
    for i, nbrs in enumerate(ag.weights):
        c = labels[i]
        tot[c] = tot.get(c, 0.0) + sum(nbrs.values())
        inside[c] = inside.get(c, 0.0) + sum(w for j, w in nbrs.items() if labels[j] == c)
    return sum(inside[c] / two_m - (tot[c] / two_m) ** 2 for c in tot)


def local_move_pass(
    ag: Union[AggregateGraph, Graph],
    labels: Sequence[int],
    order: Sequence[int],
    min_gain: float = 1e-9,
) -> tuple[list, bool]:
    """One sweep of greedy vertex moves over ``order``.

    Each vertex goes to the neighbouring community with the largest
    modularity gain, provided it beats staying put by more than
    ``min_gain``. Equal gains resolve to the lowest community id.
    Returns the new labels and whether anything moved.
    """
    if isinstance(ag, Graph):
        ag = AggregateGraph.from_graph(ag)
    labels = list(labels)
    if sorted(order) != list(range(ag.n)):
        raise ValueError("order must be a permutation of the vertices")
    two_m = ag.total_weight
    if two_m == 0:
        return labels, False
    m = two_m / 2.0
    k = ag.strengths
    tot: dict = {}
    for i, c in enumerate(labels):
        tot[c] = tot.get(c, 0.0) + k[i]

    improved = False
    for i in order:
        own = labels[i]
        k_in: dict = {own: 0.0}
        for j, w in ag.weights[i].items():
            if j != i:
                k_in[labels[j]] = k_in.get(labels[j], 0.0) + w
        tot[own] -= k[i]

        def gain(c):
            return k_in[c] / m - k[i] * tot.get(c, 0.0) / (2.0 * m * m)

        stay = gain(own)
        best, best_gain = own, stay
        for c in sorted(k_in):
            if c == own:
                continue
            gc = gain(c)
            if gc > best_gain:
                best, best_gain = c, gc
        if best != own and best_gain - stay > min_gain:
            labels[i] = best
            improved = True
        else:
            best = own
        tot[best] = tot.get(best, 0.0) + k[i]
    return labels, improved


def aggregate(ag: Union[AggregateGraph, Graph], labels: Sequence[int]) -> tuple[AggregateGraph, dict]:
    """Collapse each community into one vertex.

    Returns the aggregate graph and the map from community id to aggregate
    vertex (communities numbered in sorted id order).
    """
    if isinstance(ag, Graph):
        ag = AggregateGraph.from_graph(ag)
    index = {c: i for i, c in enumerate(sorted(set(labels)))}
    weights: list = [dict() for _ in index]
    for i, nbrs in enumerate(ag.weights):
        ci = index[labels[i]]
        row = weights[ci]
        for j, w in nbrs.items():
            cj = index[labels[j]]
            row[cj] = row.get(cj, 0.0) + w
    return AggregateGraph(weights), index


def louvain_levels(g: Graph, cfg: Optional[LouvainConfig] = None) -> tuple[Partition, list]:
    """Run Louvain; also return the modularity reached after each level."""
    cfg = cfg or LouvainConfig()
    if g.m == 0:
        raise EmptyGraphError("empty graph has undefined modularity")
    rng = np.random.default_rng(cfg.seed)
    ag = AggregateGraph.from_graph(g)
    membership = list(range(g.n))
    history = []
    for _ in range(cfg.max_levels):
        labels = list(range(ag.n))
        moved = False
        while True:
            order = rng.permutation(ag.n).tolist()
            labels, improved = local_move_pass(ag, labels, order, cfg.min_gain)
            if not improved:
                break
            moved = True
        if not moved:
            break
        ag, index = aggregate(ag, labels)
        membership = [index[labels[x]] for x in membership]
        history.append(weighted_modularity(ag, list(range(ag.n))))
    return Partition(g, membership).relabeled(), history


def louvain(g: Graph, cfg: Optional[LouvainConfig] = None) -> Partition:
    """Louvain partition of ``g``'s vertices, deterministic for a given seed."""
    return louvain_levels(g, cfg)[0]
