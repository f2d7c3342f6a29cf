"""Bundled benchmark graphs.

``karate.tsv`` and ``southern_women.tsv`` ship with the package (see the
header comments in each file for provenance). The dolphins network is not
bundled; point ``COMDET_DOLPHINS`` at an edge list of it, or drop a
``dolphins.tsv`` into the data directory.
"""
from __future__ import annotations

import os
from importlib import resources
from pathlib import Path
from typing import Optional

from ..graph import BIPARTITE, UNIPARTITE, Graph, load_edge_list

DOLPHINS_ENV = "COMDET_DOLPHINS"

_FORMATS = {
    "karate": UNIPARTITE,
    "southern_women": BIPARTITE,
    "dolphins": UNIPARTITE,
}


def data_path(name: str) -> Path:
    return Path(str(resources.files(__name__) / "data" / f"{name}.tsv"))


def load(name: str) -> Graph:
    if name not in _FORMATS:
        raise KeyError(f"unknown dataset {name!r}; choose from {sorted(_FORMATS)}")
    if name == "dolphins":
        return load_dolphins()
    return load_edge_list(data_path(name), format=_FORMATS[name])


def load_karate() -> Graph:
    """Zachary's karate club: 34 vertices, 78 edges."""
    return load("karate")


def load_southern_women() -> Graph:
    """Davis Southern Women: 18 women (TOP, W1..W18) x 14 events (BOTTOM)."""
    return load("southern_women")


def dolphins_path() -> Optional[Path]:
    env = os.environ.get(DOLPHINS_ENV)
    if env:
        return Path(env)
    bundled = data_path("dolphins")
    return bundled if bundled.exists() else None


def load_dolphins(path=None) -> Graph:
    """Lusseau's bottlenose dolphins (62 vertices, 159 edges), if available."""
    path = path or dolphins_path()
    if path is None:
        raise FileNotFoundError(
            f"dolphins network not bundled; set {DOLPHINS_ENV} to an edge-list file"
        )
    return load_edge_list(path, format=UNIPARTITE)
