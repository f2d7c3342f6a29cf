"""Legitimacy (fuzzy community membership), alpha-cuts and deviant vertices.

The legitimacy of vertex ``u`` toward community ``c`` is the number of edges
from ``u`` into ``c`` divided by the number of members of ``c`` that ``u``
could be adjacent to: members of the opposite part in a bipartite graph,
every member other than ``u`` itself in a unipartite one.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .modularity import Partition

DENOMINATOR_RULE = {
    "bipartite": "opposite-part members of the community",
    "unipartite": "community size, excluding the vertex itself",
}


@dataclass
class LegitimacyMatrix:
    """Vertex x community legitimacy values.

    Attributes
    ----------
    values : ndarray of shape (n_vertices, n_communities)
        Legitimacy in [0, 1]; zero wherever the denominator is zero.
    denominators : ndarray of shape (n_vertices, n_communities)
        Eligible community size used for each entry.
    communities : list of int
        Community id of each column.
    assignment : ndarray of shape (n_vertices,)
        Community each vertex was assigned to.
    labels : tuple of str
        Vertex labels, one per row.
    """

    values: np.ndarray
    denominators: np.ndarray
    communities: list
    assignment: np.ndarray
    labels: tuple = ()
    metadata: dict = field(default_factory=dict)

    def column(self, c: int) -> int:
        return self.communities.index(c)

    def row(self, u: int) -> dict:
        return {c: float(self.values[u, j]) for j, c in enumerate(self.communities)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["vertex", "assigned"] + [str(c) for c in self.communities])
        for u in range(self.values.shape[0]):
            label = self.labels[u] if self.labels else str(u)
            writer.writerow(
                [label, int(self.assignment[u])] + [repr(float(x)) for x in self.values[u]]
            )
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "communities": [int(c) for c in self.communities],
            "vertices": list(self.labels) if self.labels else list(range(len(self.assignment))),
            "assigned": [int(c) for c in self.assignment],
            "values": self.values.tolist(),
            "metadata": dict(self.metadata),
        }


@dataclass
class OverlapReport:
    """Result of an alpha-cut.

    ``memberships[u]`` always contains u's assigned community; ``weak`` lists
    the vertices whose assigned community fell below ``alpha``.
    """

    alpha: float
    memberships: list
    deviants: list
    weak: list

    def overlapping(self) -> list[int]:
        return [u for u, ms in enumerate(self.memberships) if len(ms) > 1]


def _eligible_counts(g: Graph, p: Partition, communities: list) -> np.ndarray:
    """Per-vertex, per-community denominators."""
    n, k = g.n, len(communities)
    col = {c: j for j, c in enumerate(communities)}
    den = np.zeros((n, k))
    if g.parts is not None:
        per_part: dict = {}
        for v in range(g.n):
            key = (g.parts[v], col[p.community_of(v)])
            per_part[key] = per_part.get(key, 0) + 1
        for u in range(n):
            opposite = "BOTTOM" if g.parts[u] == "TOP" else "TOP"
            for j in range(k):
                den[u, j] = per_part.get((opposite, j), 0)
    else:
        sizes = np.array([len(p.members(c)) for c in communities], dtype=float)
        den[:] = sizes
        for u in range(n):
            den[u, col[p.community_of(u)]] -= 1
    return den


def legitimacy_matrix(g: Graph, p: Partition) -> LegitimacyMatrix:
    communities = p.communities
    col = {c: j for j, c in enumerate(communities)}
    counts = np.zeros((g.n, len(communities)))
    for u in range(g.n):
        for v in g.adjacency[u]:
            counts[u, col[p.community_of(v)]] += 1
    den = _eligible_counts(g, p, communities)
    values = np.divide(counts, den, out=np.zeros_like(counts), where=den > 0)
    kind = "bipartite" if g.is_bipartite else "unipartite"
    return LegitimacyMatrix(
        values=values,
        denominators=den,
        communities=communities,
        assignment=p.labels,
        labels=g.labels,
        metadata={"graph": kind, "denominator": DENOMINATOR_RULE[kind]},
    )


def legitimacy(g: Graph, p: Partition, u: int) -> np.ndarray:
    """Legitimacy of ``u`` toward each community, in ``p.communities`` order."""
    if not 0 <= u < g.n:
        raise IndexError(f"vertex {u} out of range for graph with {g.n} vertices")
    communities = p.communities
    col = {c: j for j, c in enumerate(communities)}
    counts = np.zeros(len(communities))
    for v in g.adjacency[u]:
        counts[col[p.community_of(v)]] += 1
    den = np.zeros(len(communities))
    own = p.community_of(u)
    for j, c in enumerate(communities):
        members = p.members(c)
        if g.parts is not None:
            den[j] = sum(1 for v in members if g.parts[v] != g.parts[u])
        else:
            den[j] = len(members) - (1 if c == own else 0)
    return np.divide(counts, den, out=np.zeros_like(counts), where=den > 0)


def alpha_cut(L: LegitimacyMatrix, alpha: float) -> OverlapReport:
    """Crisp memberships ``{c : L(u, c) >= alpha, L(u, c) > 0}`` plus deviants.

    A vertex is deviant when its largest legitimacy lies outside its assigned
    community; a tie with the assigned community is not deviance.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    memberships, deviants, weak = [], [], []
    for u in range(L.values.shape[0]):
        row = L.values[u]
        own = int(L.assignment[u])
        j_own = L.column(own)
        ms = {L.communities[j] for j in range(len(row)) if row[j] > 0 and row[j] >= alpha}
        if own not in ms:
            weak.append(u)
            ms.add(own)
        memberships.append(ms)
        if row.size and row.max() > row[j_own]:
            deviants.append(u)
    return OverlapReport(alpha=alpha, memberships=memberships, deviants=deviants, weak=weak)
