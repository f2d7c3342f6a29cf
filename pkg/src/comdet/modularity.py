"""Partitions, per-community statistics and Newman modularity."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .graph import Graph


class EmptyGraphError(ValueError):
    pass


@dataclass
class CommunityStats:
    """Aggregates of one community: member count, edges inside, degree sum."""

    members: int = 0
    internal_edges: int = 0
    degree_sum: int = 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.members, self.internal_edges, self.degree_sum)


class Partition:
    """Assignment of every vertex to exactly one community.

    Community ids are arbitrary non-negative integers. Per-community
    :class:`CommunityStats` and member sets are kept in step with the
    assignment by :meth:`move`; communities that lose their last member are
    dropped.
    """

    def __init__(self, g: Graph, labels: Iterable[int]):
        labels = [int(c) for c in labels]
        if len(labels) != g.n:
            raise ValueError(f"partition has {len(labels)} entries, graph has {g.n} vertices")
        if any(c < 0 for c in labels):
            raise ValueError("community ids must be non-negative")
        self._community_of = labels
        self._members: dict[int, set] = {}
        for v, c in enumerate(labels):
            self._members.setdefault(c, set()).add(v)
        self._stats = community_stats(g, self)

    @classmethod
    def singletons(cls, g: Graph) -> "Partition":
        return cls(g, range(g.n))

    @classmethod
    def whole(cls, g: Graph) -> "Partition":
        return cls(g, [0] * g.n)

    @property
    def n(self) -> int:
        return len(self._community_of)

    @property
    def labels(self) -> np.ndarray:
        return np.array(self._community_of, dtype=np.int64)

    @property
    def communities(self) -> list[int]:
        return sorted(self._members)

    @property
    def stats(self) -> dict[int, CommunityStats]:
        return self._stats

    def community_of(self, v: int) -> int:
        return self._community_of[v]

    def members(self, c: int) -> set:
        return self._members[c]

    def __contains__(self, c: int) -> bool:
        return c in self._members

    def __len__(self) -> int:
        return len(self._members)

    def new_community_id(self) -> int:
        return max(self._members, default=-1) + 1

    def copy(self) -> "Partition":
        new = object.__new__(Partition)
        new._community_of = list(self._community_of)
        new._members = {c: set(s) for c, s in self._members.items()}
        new._stats = {c: CommunityStats(*s.as_tuple()) for c, s in self._stats.items()}
        return new

    def links(self, g: Graph, w: int) -> dict[int, int]:
        """Number of edges from ``w`` into each community it touches."""
        out: dict[int, int] = {}
        cof = self._community_of
        for u in g.adjacency[w]:
            c = cof[u]
            out[c] = out.get(c, 0) + 1
        return out

    def move(self, g: Graph, w: int, target: int) -> None:
        """Reassign ``w`` to ``target``, updating statistics incrementally.

        ``target`` may be a community id not yet in use; it is created.
        """
        source = self._community_of[w]
        if target == source:
            return
        if target < 0:
            raise ValueError("community ids must be non-negative")
        links = self.links(g, w)
        d_w = len(g.adjacency[w])

        src = self._stats[source]
        src.members -= 1
        src.internal_edges -= links.get(source, 0)
        src.degree_sum -= d_w
        self._members[source].discard(w)
        if src.members == 0:
            del self._stats[source]
            del self._members[source]

        dst = self._stats.setdefault(target, CommunityStats())
        dst.members += 1
        dst.internal_edges += links.get(target, 0)
        dst.degree_sum += d_w
        self._members.setdefault(target, set()).add(w)
        self._community_of[w] = target

    def relabeled(self) -> "Partition":
        """Copy with community ids renumbered 0..k-1 by first appearance."""
        mapping: dict[int, int] = {}
        for c in self._community_of:
            mapping.setdefault(c, len(mapping))
        new = object.__new__(Partition)
        new._community_of = [mapping[c] for c in self._community_of]
        new._members = {mapping[c]: set(s) for c, s in self._members.items()}
        new._stats = {mapping[c]: CommunityStats(*s.as_tuple()) for c, s in self._stats.items()}
        return new

    def same_grouping(self, other: "Partition") -> bool:
        """True when both partitions group vertices identically, ignoring ids."""
        a = {frozenset(s) for s in self._members.values()}
        b = {frozenset(s) for s in other._members.values()}
        return a == b

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self._community_of == other._community_of

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, communities={len(self)})"


def community_stats(g: Graph, p: Partition) -> dict[int, CommunityStats]:
    """Recount every community's statistics from scratch."""
    cof = p._community_of
    stats: dict[int, CommunityStats] = {c: CommunityStats() for c in set(cof)}
    for v in range(g.n):
        s = stats[cof[v]]
        s.members += 1
        s.degree_sum += len(g.adjacency[v])
    for u, v in g.edges():
        if cof[u] == cof[v]:
            stats[cof[u]].internal_edges += 1
    return stats


def modularity(g: Graph, p: Partition) -> float:
    """Newman modularity ``sum_C |e_C|/m - (d_C/2m)^2``.

    Statistics are recounted, so the result does not depend on any
    incremental bookkeeping inside ``p``.
    """
    if g.m == 0:
        raise EmptyGraphError("empty graph has undefined modularity")
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, graph has {g.n}")
    m = g.m
    q = 0.0
    for s in community_stats(g, p).values():
        q += s.internal_edges / m - (s.degree_sum / (2.0 * m)) ** 2
    return q


def exact_delta_q(g: Graph, p: Partition, w: int, target: int) -> float:
    """Change in modularity from moving ``w`` to ``target``, by re-evaluation.

    ``target`` may be an unused id (a fresh, empty community).
    """
    if not 0 <= w < g.n:
        raise IndexError(f"vertex {w} out of range for graph with {g.n} vertices")
    if target == p.community_of(w):
        return 0.0
    moved = p.copy()
    moved.move(g, w, target)
    return modularity(g, moved) - modularity(g, p)


def check_stats(g: Graph, p: Partition) -> Optional[str]:
    """Compare ``p``'s incremental statistics with a recount.

    Returns a description of the first mismatch, or None.
    """
    fresh = community_stats(g, p)
    if set(fresh) != set(p.stats):
        return f"community sets differ: {sorted(p.stats)} vs {sorted(fresh)}"
    for c, s in fresh.items():
        if s != p.stats[c]:
            return f"community {c}: incremental {p.stats[c].as_tuple()} vs recount {s.as_tuple()}"
        if p.members(c) != {v for v in range(g.n) if p.community_of(v) == c}:
            return f"community {c}: member set out of date"
    return None
