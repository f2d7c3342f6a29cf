"""Reassignment gains and greedy refinement to a Nash equilibrium.

Vertices are players, their strategies are community ids, and a vertex's
payoff for switching community is the reassignment gain ``rm``. Because
``rm`` equals the exact change in modularity, modularity is an exact
potential for this game, so repeatedly applying the best strictly positive
move must stop, and it stops at a pure Nash equilibrium.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import Graph
from .modularity import EmptyGraphError, Partition, check_stats, modularity


class StabilizationError(RuntimeError):
    """The move budget ran out; ``trace`` holds the moves made so far."""

    def __init__(self, message: str, trace: "MoveTrace", partition: Partition):
        super().__init__(message)
        self.trace = trace
        self.partition = partition


class InvariantError(AssertionError):
    pass


class Case(str, enum.Enum):
    """Position of a community relative to a move ``w: C1 -> C2``."""

    SOURCE = "C1"
    TARGET = "C2"
    OTHER = "other"


# CORRECTION[to][from]: multiple of delta_r/m added to RM(z: from -> to)
# after some other vertex w moves C1 -> C2.
CORRECTION = {
    Case.SOURCE: {Case.SOURCE: 0, Case.TARGET: -2, Case.OTHER: -1},
    Case.TARGET: {Case.SOURCE: 2, Case.TARGET: 0, Case.OTHER: 1},
    Case.OTHER: {Case.SOURCE: 1, Case.TARGET: -1, Case.OTHER: 0},
}
_COEF = np.array(
    [[CORRECTION[t][f] for f in (Case.OTHER, Case.SOURCE, Case.TARGET)]
     for t in (Case.OTHER, Case.SOURCE, Case.TARGET)],
    dtype=float,
)


@dataclass(frozen=True)
class MoveEvaluation:
    vertex: int
    source: int
    target: int
    gain: float


@dataclass(frozen=True)
class TraceEntry:
    move: MoveEvaluation
    q_before: float
    q_after: float


@dataclass
class MoveTrace:
    entries: list = field(default_factory=list)
    initial_q: float = 0.0
    final_q: float = 0.0
    iterations: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def moved_vertices(self) -> list[int]:
        return [e.move.vertex for e in self.entries]

    def to_json(self, g: Optional[Graph] = None) -> list[dict]:
        out = []
        for e in self.entries:
            row = {
                "vertex": e.move.vertex,
                "from": e.move.source,
                "to": e.move.target,
                "gain": e.move.gain,
                "q_before": e.q_before,
                "q_after": e.q_after,
            }
            if g is not None:
                row["label"] = g.labels[e.move.vertex]
            out.append(row)
        return out


@dataclass(frozen=True)
class StabilizeConfig:
    epsilon: float = 1e-9
    max_moves: int = 100_000
    allow_empty_target: bool = False
    debug: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.max_moves < 0:
            raise ValueError("max_moves must be >= 0")


def _require_edges(g: Graph) -> float:
    if g.m == 0:
        raise EmptyGraphError("empty graph has undefined modularity")
    return float(g.m)


def rm(g: Graph, p: Partition, w: int, target: int, allow_empty_target: bool = False) -> float:
    """Modularity gain of moving ``w`` from its community to ``target``.

    ``(l2 - l1)/m - (d_w^2 + d_w (D2 - D1)) / (2 m^2)`` where ``l1``, ``l2``
    count edges from ``w`` to the other members of the source and target,
    ``D1`` is the source degree sum (including ``w``) and ``D2`` the target's.
    Moving to the current community is a no-op with gain 0.
    """
    m = _require_edges(g)
    if not 0 <= w < g.n:
        raise IndexError(f"vertex {w} out of range for graph with {g.n} vertices")
    source = p.community_of(w)
    if target == source:
        return 0.0
    if target not in p and not allow_empty_target:
        raise KeyError(f"unknown community {target}; pass allow_empty_target=True for a fresh one")
    links = p.links(g, w)
    d_w = g.degree(w)
    d_source = p.stats[source].degree_sum
    d_target = p.stats[target].degree_sum if target in p else 0
    return (links.get(target, 0) - links.get(source, 0)) / m - (
        d_w * d_w + d_w * (d_target - d_source)
    ) / (2.0 * m * m)


def rm_all(g: Graph, p: Partition, allow_empty_target: bool = False) -> list[MoveEvaluation]:
    """Evaluate every vertex against every community other than its own.

    With ``allow_empty_target`` each vertex is also evaluated against a fresh
    empty community (id ``p.new_community_id()``).
    """
    targets = p.communities
    if allow_empty_target:
        targets = targets + [p.new_community_id()]
    out = []
    for w in range(g.n):
        own = p.community_of(w)
        for c in targets:
            if c != own:
                out.append(MoveEvaluation(w, own, c, rm(g, p, w, c, allow_empty_target)))
    return out


def unstable_vertices(g: Graph, p: Partition, epsilon: float = 1e-9) -> list[int]:
    return sorted({e.vertex for e in rm_all(g, p) if e.gain > epsilon})


def delta_r(g: Graph, w: int, z: int) -> float:
    """``A_wz - d_z d_w / 2m``."""
    if w == z:
        raise ValueError("delta_r needs two distinct vertices")
    m = _require_edges(g)
    return float(g.has_edge(w, z)) - g.degree(z) * g.degree(w) / (2.0 * m)


def rm_correction(g: Graph, z: int, z_from: Case, z_to: Case, w_move: MoveEvaluation) -> float:
    """Change in ``RM(z: from -> to)`` caused by ``w_move``.

    ``z_from``/``z_to`` say whether z's current community and the candidate
    target are the move's source, its target, or some other community.
    """
    try:
        z_from, z_to = Case(z_from), Case(z_to)
    except ValueError as exc:
        raise ValueError(f"invalid case id: {exc}") from None
    if z == w_move.vertex:
        raise ValueError("the moved vertex itself must be re-evaluated, not corrected")
    if w_move.source == w_move.target:
        raise ValueError("w_move is a no-op; there is nothing to correct")
    return CORRECTION[z_to][z_from] * delta_r(g, w_move.vertex, z) / g.m


def classify(c: int, move: MoveEvaluation) -> Case:
    if c == move.source:
        return Case.SOURCE
    if c == move.target:
        return Case.TARGET
    return Case.OTHER


def _gain_column(g: Graph, p: Partition, target: int, links: np.ndarray, deg: np.ndarray, rows=None):
    """From-scratch RM of ``rows`` (default: all vertices) toward ``target``."""
    m = float(g.m)
    rows = np.arange(g.n) if rows is None else np.asarray(rows, dtype=np.int64)
    own = np.array([p.community_of(v) for v in rows], dtype=np.int64)
    l_own = np.array([links[v].get(c, 0) for v, c in zip(rows, own)], dtype=float)
    l_tgt = np.array([links[v].get(target, 0) for v in rows], dtype=float)
    d_own = np.array([p.stats[c].degree_sum for c in own], dtype=float)
    d_tgt = float(p.stats[target].degree_sum) if target in p else 0.0
    d = deg[rows]
    out = (l_tgt - l_own) / m - (d * d + d * (d_tgt - d_own)) / (2.0 * m * m)
    out[own == target] = 0.0
    return out


class _GainTable:
    """RM of every vertex toward every candidate community, kept current
    across moves with the correction table."""

    def __init__(self, g: Graph, p: Partition, allow_empty_target: bool):
        self.g = g
        self.p = p
        self.m = float(g.m)
        self.deg = g.degrees.astype(float)
        self.allow_empty = allow_empty_target
        self.links = [p.links(g, v) for v in range(g.n)]
        self.cols: dict[int, np.ndarray] = {}
        for c in p.communities:
            self.cols[c] = _gain_column(g, p, c, self.links, self.deg)
        self.fresh = None
        if allow_empty_target:
            self._add_fresh()

    def _add_fresh(self):
        self.fresh = max(max(self.p.communities, default=-1), max(self.cols, default=-1)) + 1
        self.cols[self.fresh] = _gain_column(self.g, self.p, self.fresh, self.links, self.deg)

    def best(self) -> MoveEvaluation:
        ids = sorted(self.cols)
        mat = np.column_stack([self.cols[c] for c in ids])
        own = np.array(self.p.labels)
        own_mask = own[:, None] == np.array(ids)[None, :]
        mat = np.where(own_mask, -np.inf, mat)
        flat = int(np.argmax(mat))
        w, j = divmod(flat, len(ids))
        return MoveEvaluation(w, int(own[w]), ids[j], float(mat[w, j]))

    def apply(self, move: MoveEvaluation) -> None:
        g, p = self.g, self.p
        w, c1, c2 = move.vertex, move.source, move.target
        adj = np.zeros(g.n)
        adj[list(g.adjacency[w])] = 1.0
        delta = (adj - self.deg * self.deg[w] / (2.0 * self.m)) / self.m
        labels = p.labels
        from_cls = np.where(labels == c1, 1, np.where(labels == c2, 2, 0))
        for c, col in self.cols.items():
            to_cls = 1 if c == c1 else 2 if c == c2 else 0
            col += _COEF[to_cls][from_cls] * delta

        p.move(g, w, c2)
        for u in g.adjacency[w]:
            lu = self.links[u]
            lu[c1] -= 1
            if lu[c1] == 0:
                del lu[c1]
            lu[c2] = lu.get(c2, 0) + 1

        if c1 not in p:
            del self.cols[c1]
        if c2 == self.fresh:
            self._add_fresh()
        touched = sorted({w} | p.members(c2) | (p.members(c1) if c1 in p else set()))
        for c in self.cols:
            self.cols[c][touched] = _gain_column(g, p, c, self.links, self.deg, touched)

    def max_error(self) -> float:
        err = 0.0
        for c, col in self.cols.items():
            fresh = _gain_column(self.g, self.p, c, self.links, self.deg)
            err = max(err, float(np.max(np.abs(fresh - col), initial=0.0)))
        return err


def stabilize(
    g: Graph, p: Partition, cfg: Optional[StabilizeConfig] = None
) -> tuple[Partition, MoveTrace]:
    """Greedily apply the best positive reassignment until none remains.

    Each round takes the largest gain over all (vertex, community) pairs;
    ties go to the lowest vertex id, then the lowest community id. The
    input partition is not modified.

    Raises
    ------
    StabilizationError
        If ``cfg.max_moves`` moves were made and a positive gain remains.
    """
    cfg = cfg or StabilizeConfig()
    _require_edges(g)
    p = p.copy()
    table = _GainTable(g, p, cfg.allow_empty_target)
    q = modularity(g, p)
    trace = MoveTrace(initial_q=q, final_q=q)
    while True:
        trace.iterations += 1
        move = table.best()
        if not move.gain > cfg.epsilon:
            break
        if len(trace) >= cfg.max_moves:
            raise StabilizationError(
                f"still unstable after {cfg.max_moves} moves (best gain {move.gain:.3e})", trace, p
            )
        table.apply(move)
        q_after = modularity(g, p)
        trace.entries.append(TraceEntry(move, q, q_after))
        trace.final_q = q = q_after
        if cfg.debug:
            problem = check_stats(g, p)
            if problem:
                raise InvariantError(problem)
            err = table.max_error()
            if err > 1e-9:
                raise InvariantError(f"incremental RM drifted by {err:.3e} from recomputation")
    return p, trace


def is_nash_equilibrium(
    g: Graph, p: Partition, epsilon: float = 1e-9, allow_empty_target: bool = False
) -> bool:
    """Exhaustive check that no vertex gains more than ``epsilon`` by moving.

    Statistics are recounted from the assignment alone.
    """
    fresh = Partition(g, p.labels)
    return all(e.gain <= epsilon for e in rm_all(g, fresh, allow_empty_target))
