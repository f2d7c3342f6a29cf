"""Modularity community detection with Nash-equilibrium refinement.

Louvain produces a starting partition; :func:`stabilize` then applies the
best single-vertex reassignment until no vertex can raise modularity by
switching community, and :func:`legitimacy_matrix` reports fuzzy
memberships from which overlapping communities are read off.
"""
from .estimators import LegitimacyTransformer, LouvainCommunities, NashRefiner
from .graph import BIPARTITE, BOTTOM, TOP, UNIPARTITE, Graph, load_edge_list
from .louvain import LouvainConfig, louvain
from .modularity import CommunityStats, Partition, community_stats, exact_delta_q, modularity
from .nash import (
    MoveEvaluation,
    MoveTrace,
    StabilizeConfig,
    delta_r,
    is_nash_equilibrium,
    rm,
    rm_all,
    rm_correction,
    stabilize,
)
from .overlap import LegitimacyMatrix, OverlapReport, alpha_cut, legitimacy, legitimacy_matrix

__version__ = "0.1.0"
