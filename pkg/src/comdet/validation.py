"""Input coercion for the estimator API."""
from __future__ import annotations

import os
from numbers import Real

import numpy as np

from .graph import BOTTOM, TOP, UNIPARTITE, Graph, GraphError, load_edge_list
from .modularity import Partition


def check_graph(X, format: str = UNIPARTITE) -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a Graph, an edge-list path, a networkx-style undirected graph
    (nodes with a ``bipartite`` attribute of 0/1 become TOP/BOTTOM), or a
    square symmetric 0/1 adjacency matrix (dense or scipy sparse).
    """
    if isinstance(X, Graph):
        return X
    if isinstance(X, (str, os.PathLike)):
        return load_edge_list(X, format=format)
    if hasattr(X, "nodes") and hasattr(X, "edges") and hasattr(X, "is_directed"):
        return _from_networkx(X)
    if hasattr(X, "tocoo"):
        X = X.toarray()
    A = np.asarray(X)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise GraphError(f"adjacency matrix must be square, got shape {A.shape}")
    if not np.array_equal(A, A.T):
        raise GraphError("adjacency matrix must be symmetric (undirected graphs only)")
    if not np.isin(A, (0, 1)).all():
        raise GraphError("adjacency matrix must be binary")
    if np.any(np.diag(A)):
        raise GraphError("adjacency matrix has self-loops")
    rows, cols = np.nonzero(np.triu(A, 1))
    return Graph.from_edges(zip(rows.tolist(), cols.tolist()), n=A.shape[0])


def _from_networkx(G) -> Graph:
    if G.is_directed():
        raise GraphError("directed graphs are not supported")
    if G.is_multigraph():
        raise GraphError("multigraphs are not supported")
    nodes = list(G.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    sides = [G.nodes[v].get("bipartite") for v in nodes]
    parts = None
    if nodes and all(s in (0, 1) for s in sides):
        parts = [TOP if s == 0 else BOTTOM for s in sides]
    return Graph.from_edges(
        [(index[u], index[v]) for u, v in G.edges()],
        n=len(nodes),
        labels=[str(v) for v in nodes],
        parts=parts,
    )


def check_partition(g: Graph, labels) -> Partition:
    """Coerce community labels (array-like, Partition or list of sets) for ``g``."""
    if isinstance(labels, Partition):
        if labels.n != g.n:
            raise ValueError(f"partition covers {labels.n} vertices, graph has {g.n}")
        return labels
    if isinstance(labels, (list, tuple)) and labels and isinstance(labels[0], (set, frozenset)):
        out = [-1] * g.n
        for c, members in enumerate(labels):
            for v in members:
                if out[v] != -1:
                    raise ValueError(f"vertex {v} appears in more than one community")
                out[v] = c
        if -1 in out:
            raise ValueError(f"vertex {out.index(-1)} is in no community")
        return Partition(g, out)
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError(f"labels must be 1-dimensional, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise ValueError("community labels must be integers")
    return Partition(g, arr.tolist())


def check_scalar(x, name: str, kind=Real, lo=None, hi=None, lo_open=False):
    if not isinstance(x, kind) or isinstance(x, bool):
        raise TypeError(f"{name} must be {kind.__name__}, got {type(x).__name__}")
    if lo is not None and (x < lo or (lo_open and x == lo)):
        raise ValueError(f"{name} must be {'>' if lo_open else '>='} {lo}, got {x}")
    if hi is not None and x > hi:
        raise ValueError(f"{name} must be <= {hi}, got {x}")
    return x
