"""Run reports (JSON) and Graphviz DOT export."""
from __future__ import annotations

import hashlib
from typing import Optional

from .graph import BOTTOM, TOP, Graph
from .modularity import Partition, modularity
from .nash import MoveTrace
from .overlap import LegitimacyMatrix, OverlapReport

PALETTE = (
    "#e41a1c", "#377eb8", "#ffd92f", "#4daf4a", "#984ea3",
    "#ff7f00", "#a65628", "#f781bf", "#999999", "#66c2a5",
)


def input_metadata(g: Graph, path: Optional[str], fmt: str, data: Optional[bytes] = None) -> dict:
    meta = {"path": path, "format": fmt, "n": g.n, "m": g.m}
    if data is not None:
        meta["sha256"] = hashlib.sha256(data).hexdigest()
    return meta


def partition_json(g: Graph, p: Partition) -> dict:
    return {
        "n_communities": len(p),
        "modularity": modularity(g, p),
        "assignment": {g.labels[v]: int(p.community_of(v)) for v in range(g.n)},
        "communities": {
            str(c): [g.labels[v] for v in sorted(p.members(c))] for c in p.communities
        },
    }


def pipeline_report(
    g: Graph,
    meta: dict,
    config: dict,
    initial: Partition,
    final: Partition,
    trace: MoveTrace,
    unstable: list,
    legit: LegitimacyMatrix,
    overlap: OverlapReport,
    legitimacy_ref: Optional[str] = None,
) -> dict:
    report = {
        "input": meta,
        "config": config,
        "initial": partition_json(g, initial),
        "stabilized": partition_json(g, final),
        "q_initial": trace.initial_q,
        "q_stabilized": trace.final_q,
        "unstable_initial": [g.labels[v] for v in unstable],
        "trace": trace.to_json(g),
        "iterations": trace.iterations,
        "deviants": [g.labels[v] for v in overlap.deviants],
        "overlaps": {
            g.labels[u]: sorted(int(c) for c in ms)
            for u, ms in enumerate(overlap.memberships)
            if len(ms) > 1
        },
        "legitimacy": legitimacy_ref if legitimacy_ref is not None else legit.to_json(),
        "legitimacy_metadata": legit.metadata,
    }
    return report


def _quote(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, p: Partition, name: str = "communities") -> str:
    """Graphviz source with vertices coloured by community.

    Bipartite graphs get a two-layer layout: TOP vertices share one rank and
    BOTTOM vertices another.
    """
    colour = {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(p.communities)}
    node_id = [f"{g.parts[v][0]}:{g.labels[v]}" if g.parts else g.labels[v] for v in range(g.n)]
    lines = [f"graph {_quote(name)} {{", "  node [style=filled];"]
    if g.parts is not None:
        lines.append("  rankdir=TB;")
        for part in (TOP, BOTTOM):
            members = [v for v in range(g.n) if g.parts[v] == part]
            lines.append(f"  subgraph {_quote('layer_' + part.lower())} {{")
            lines.append("    rank=same;")
            for v in members:
                lines.append(_node_line(node_id[v], g.labels[v], p.community_of(v), colour, "    "))
            lines.append("  }")
    else:
        for v in range(g.n):
            lines.append(_node_line(node_id[v], g.labels[v], p.community_of(v), colour, "  "))
    for u, v in g.edges():
        if g.parts is not None and g.parts[u] == BOTTOM:
            u, v = v, u
        lines.append(f"  {_quote(node_id[u])} -- {_quote(node_id[v])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node_line(node: str, label: str, c: int, colour: dict, indent: str) -> str:
    return (
        f"{indent}{_quote(node)} [label={_quote(label)}, fillcolor={_quote(colour[c])}, "
        f"comment=\"community {int(c)}\"];"
    )
