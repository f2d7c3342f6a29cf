"""scikit-learn style estimators wrapping the detection pipeline.

``X`` is a graph in any form accepted by :func:`comdet.validation.check_graph`;
cluster labels are per-vertex community ids.
"""
from __future__ import annotations

from numbers import Integral, Real

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin, clone
from sklearn.utils.validation import check_is_fitted

from .louvain import LouvainConfig, louvain_levels
from .modularity import modularity
from .nash import StabilizeConfig, stabilize, unstable_vertices
from .overlap import alpha_cut, legitimacy_matrix
from .validation import check_graph, check_partition, check_scalar


class LouvainCommunities(ClusterMixin, BaseEstimator):
    """Louvain modularity maximisation.

    Parameters
    ----------
    seed : int, default=0
        Seed for the per-pass vertex visiting order.
    max_levels : int, default=32
        Maximum number of aggregation levels.
    min_gain : float, default=1e-9
        A local move is taken only if it beats staying put by more than this.
    format : {'unipartite', 'bipartite'}, default='unipartite'
        Used only when ``X`` is an edge-list path.

    Attributes
    ----------
    labels_ : ndarray of shape (n_vertices,)
    partition_ : Partition
    modularity_ : float
    level_modularity_ : list of float
        Modularity after each aggregation level.
    n_communities_ : int
    """

    def __init__(self, seed=0, max_levels=32, min_gain=1e-9, format="unipartite"):
        self.seed = seed
        self.max_levels = max_levels
        self.min_gain = min_gain
        self.format = format

    def fit(self, X, y=None):
        check_scalar(self.seed, "seed", Integral)
        check_scalar(self.max_levels, "max_levels", Integral, lo=1)
        check_scalar(self.min_gain, "min_gain", Real, lo=0)
        g = check_graph(X, self.format)
        cfg = LouvainConfig(seed=int(self.seed), max_levels=int(self.max_levels), min_gain=float(self.min_gain))
        self.partition_, self.level_modularity_ = louvain_levels(g, cfg)
        self.labels_ = self.partition_.labels
        self.modularity_ = modularity(g, self.partition_)
        self.n_communities_ = len(self.partition_)
        self.n_vertices_ = g.n
        return self


class NashRefiner(ClusterMixin, BaseEstimator):
    """Refine a partition to a Nash equilibrium of the reassignment game.

    Parameters
    ----------
    init : 'louvain', estimator or array-like, default='louvain'
        Starting partition. An estimator is cloned and its ``fit_predict``
        used; an array gives the labels directly.
    seed : int, default=0
        Louvain seed when ``init='louvain'``.
    epsilon : float, default=1e-9
        Gains at or below this are treated as non-positive.
    max_moves : int, default=100000
    allow_empty_target : bool, default=False
        Whether a vertex may move into a fresh, empty community.

    Attributes
    ----------
    labels_ : ndarray
        Stabilised labels.
    initial_labels_ : ndarray
    trace_ : MoveTrace
    modularity_, initial_modularity_ : float
    unstable_ : list of int
        Vertices with a positive gain in the starting partition.
    """

    def __init__(self, init="louvain", seed=0, epsilon=1e-9, max_moves=100_000,
                 allow_empty_target=False, format="unipartite"):
        self.init = init
        self.seed = seed
        self.epsilon = epsilon
        self.max_moves = max_moves
        self.allow_empty_target = allow_empty_target
        self.format = format

    def _initial_labels(self, X, g):
        if isinstance(self.init, str):
            if self.init != "louvain":
                raise ValueError(f"init must be 'louvain', an estimator or labels; got {self.init!r}")
            return LouvainCommunities(seed=self.seed).fit_predict(g)
        if hasattr(self.init, "fit_predict"):
            return clone(self.init).fit_predict(g)
        return self.init

    def fit(self, X, y=None):
        check_scalar(self.epsilon, "epsilon", Real, lo=0, lo_open=True)
        check_scalar(self.max_moves, "max_moves", Integral, lo=0)
        g = check_graph(X, self.format)
        start = check_partition(g, self._initial_labels(X, g))
        cfg = StabilizeConfig(
            epsilon=float(self.epsilon),
            max_moves=int(self.max_moves),
            allow_empty_target=bool(self.allow_empty_target),
        )
        self.initial_labels_ = start.labels
        self.unstable_ = unstable_vertices(g, start, cfg.epsilon)
        self.partition_, self.trace_ = stabilize(g, start, cfg)
        self.labels_ = self.partition_.labels
        self.initial_modularity_ = self.trace_.initial_q
        self.modularity_ = self.trace_.final_q
        self.n_vertices_ = g.n
        return self


class LegitimacyTransformer(TransformerMixin, BaseEstimator):
    """Fuzzy community membership of every vertex.

    ``fit(X, y)`` takes the graph and its community labels; ``transform(X)``
    returns the (n_vertices, n_communities) legitimacy matrix, columns in
    ascending community id.

    Parameters
    ----------
    alpha : float, default=0.2
        Threshold for the crisp overlapping memberships in ``report_``.
    """

    def __init__(self, alpha=0.2, format="unipartite"):
        self.alpha = alpha
        self.format = format

    def fit(self, X, y):
        check_scalar(self.alpha, "alpha", Real, lo=0, hi=1)
        g = check_graph(X, self.format)
        p = check_partition(g, y)
        self.matrix_ = legitimacy_matrix(g, p)
        self.report_ = alpha_cut(self.matrix_, float(self.alpha))
        self.communities_ = np.array(self.matrix_.communities)
        self.deviants_ = list(self.report_.deviants)
        self.n_vertices_ = g.n
        return self

    def transform(self, X):
        check_is_fitted(self, "matrix_")
        g = check_graph(X, self.format)
        if g.n != self.n_vertices_:
            raise ValueError(f"fitted on {self.n_vertices_} vertices, got {g.n}")
        p = check_partition(g, self.matrix_.assignment)
        return legitimacy_matrix(g, p).values
