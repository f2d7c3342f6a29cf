"""Simple undirected binary graphs and edge-list ingestion.

Bipartite graphs are stored as ordinary unipartite graphs over the union of
both parts; each vertex additionally carries a part tag (``TOP`` or
``BOTTOM``) so that part-aware measures can tell the layers apart.
"""
from __future__ import annotations

import bisect
import io
import os
import warnings
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

TOP = "TOP"
BOTTOM = "BOTTOM"

UNIPARTITE = "unipartite"
BIPARTITE = "bipartite"
FORMATS = (UNIPARTITE, BIPARTITE)


class GraphError(ValueError):
    """Raised for structurally invalid graphs."""


class EdgeListError(GraphError):
    """Raised when an edge-list file cannot be parsed.

    ``lineno`` is the 1-based line number of the offending line, or None when
    the problem is not tied to a single line.
    """

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DuplicateEdgeWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph with unit edge weights.

    Parameters
    ----------
    labels : sequence of str
        Original vertex names; vertex ``i`` is ``labels[i]``.
    adjacency : sequence of sequences of int
        Sorted neighbour lists.
    parts : sequence of str, optional
        Per-vertex part tag for bipartite graphs.

    Use :meth:`from_edges` or :func:`load_edge_list` rather than calling the
    constructor directly; they validate and normalise the input.
    """

    labels: tuple
    adjacency: tuple
    parts: Optional[tuple] = None
    _index: dict = field(default=None, repr=False)
    _degrees: np.ndarray = field(default=None, repr=False)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        n: Optional[int] = None,
        labels: Optional[Sequence[str]] = None,
        parts: Optional[Sequence[str]] = None,
    ) -> "Graph":
        """Build a graph from integer vertex pairs.

        Duplicate edges are collapsed silently; self-loops raise
        :class:`GraphError`. ``n`` defaults to one more than the largest id
        seen (or ``len(labels)`` when labels are given).
        """
        edges = [(int(u), int(v)) for u, v in edges]
        if n is None:
            if labels is not None:
                n = len(labels)
            else:
                n = 1 + max((max(e) for e in edges), default=-1)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise GraphError(f"got {len(labels)} labels for {n} vertices")
        nbrs: list[set] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop on vertex {labels[u]!r}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        if parts is not None:
            parts = tuple(parts)
            if len(parts) != n:
                raise GraphError(f"got {len(parts)} part tags for {n} vertices")
            bad = set(parts) - {TOP, BOTTOM}
            if bad:
                raise GraphError(f"unknown part tags {sorted(bad)}")
            for u in range(n):
                for v in nbrs[u]:
                    if parts[u] == parts[v]:
                        raise GraphError(
                            f"edge ({labels[u]!r}, {labels[v]!r}) lies inside part {parts[u]}"
                        )
        return cls(
            labels=tuple(str(s) for s in labels),
            adjacency=tuple(tuple(sorted(s)) for s in nbrs),
            parts=parts,
        )

    def __post_init__(self):
        index: dict = {}
        for i, label in enumerate(self.labels):
            key = (self.parts[i], label) if self.parts is not None else label
            if key in index:
                raise GraphError(f"duplicate vertex label {label!r}")
            index[key] = i
        object.__setattr__(self, "_index", index)
        deg = np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=len(self.adjacency))
        deg.flags.writeable = False
        object.__setattr__(self, "_degrees", deg)

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @property
    def m(self) -> int:
        return int(self._degrees.sum()) // 2

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def is_bipartite(self) -> bool:
        return self.parts is not None

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple:
        self._check_vertex(v)
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        a = self.adjacency[u]
        i = bisect.bisect_left(a, v)
        return i < len(a) and a[i] == v

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` pairs with ``u < v``, lexicographically sorted."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def edge_set(self) -> set:
        return {frozenset((self.labels[u], self.labels[v])) for u, v in self.edges()}

    def index(self, label: str, part: Optional[str] = None) -> int:
        """Vertex id of ``label``.

        In a bipartite graph the same label may name one vertex in each part;
        pass ``part`` to disambiguate.
        """
        if self.parts is None:
            try:
                return self._index[label]
            except KeyError:
                raise KeyError(f"no vertex labelled {label!r}") from None
        if part is not None:
            try:
                return self._index[(part, label)]
            except KeyError:
                raise KeyError(f"no {part} vertex labelled {label!r}") from None
        hits = [self._index[(p, label)] for p in (TOP, BOTTOM) if (p, label) in self._index]
        if not hits:
            raise KeyError(f"no vertex labelled {label!r}")
        if len(hits) > 1:
            raise KeyError(f"label {label!r} exists in both parts; pass part=")
        return hits[0]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for graph with {self.n} vertices")

    def __repr__(self) -> str:
        kind = BIPARTITE if self.is_bipartite else UNIPARTITE
        return f"Graph(n={self.n}, m={self.m}, {kind})"


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def _lines(source) -> Iterator[str]:
    """Decoded lines of ``source``; bad UTF-8 is reported with its line."""
    if isinstance(source, io.TextIOBase):
        yield from source
        return
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from _decode(fh)
    elif isinstance(source, (bytes, bytearray)):
        yield from _decode(io.BytesIO(bytes(source)))
    else:
        yield from _decode(source)


def _decode(stream) -> Iterator[str]:
    for lineno, raw in enumerate(stream, start=1):
        try:
            yield raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EdgeListError(f"input is not valid UTF-8 ({exc.reason})", lineno) from exc


def load_edge_list(
    source: Union[str, os.PathLike, bytes, IO],
    format: str = UNIPARTITE,
) -> Graph:
    """Read a whitespace-separated edge list.

    ``#`` starts a comment and blank lines are skipped. In unipartite mode a
    line holding a single label declares an isolated vertex. In bipartite mode
    first-column labels are tagged ``TOP`` and second-column labels
    ``BOTTOM``; the two columns are separate namespaces.

    Duplicate edges are dropped with a :class:`DuplicateEdgeWarning`.
    Self-loops, weight columns and malformed lines raise
    :class:`EdgeListError` carrying the line number.
    """
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    bipartite = format == BIPARTITE

    ids: dict = {}
    labels: list[str] = []
    parts: list[str] = []
    edges: set = set()

    def vid(label: str, part: Optional[str]) -> int:
        key = (part, label)
        if key not in ids:
            ids[key] = len(labels)
            labels.append(label)
            parts.append(part)
        return ids[key]

    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) == 1 and not bipartite:
            vid(tokens[0], None)
            continue
        if len(tokens) != 2:
            if len(tokens) == 3:
                raise EdgeListError(
                    "found 3 columns; weighted edges are not supported (binary graphs only)",
                    lineno,
                )
            raise EdgeListError(f"expected 2 vertex labels, found {len(tokens)} tokens", lineno)
        a, b = tokens
        if bipartite:
            u, v = vid(a, TOP), vid(b, BOTTOM)
        else:
            if a == b:
                raise EdgeListError(f"self-loop on vertex {a!r}", lineno)
            u, v = vid(a, None), vid(b, None)
        key = (min(u, v), max(u, v))
        if key in edges:
            warnings.warn(
                f"line {lineno}: duplicate edge {a} {b} ignored", DuplicateEdgeWarning, stacklevel=2
            )
            continue
        edges.add(key)

    return Graph.from_edges(
        sorted(edges), n=len(labels), labels=labels, parts=parts if bipartite else None
    )


def dumps_edge_list(g: Graph) -> str:
    """Serialise ``g`` in the format read by :func:`load_edge_list`.

    Bipartite graphs are written TOP-first so column position keeps encoding
    the part. Isolated vertices of a unipartite graph become one-label lines.
    """
    lines = []
    for u, v in g.edges():
        if g.parts is not None and g.parts[u] == BOTTOM:
            u, v = v, u
        lines.append(f"{g.labels[u]}\t{g.labels[v]}")
    if g.parts is None:
        lines.extend(g.labels[v] for v in range(g.n) if not g.adjacency[v])
    return "\n".join(lines) + ("\n" if lines else "")
