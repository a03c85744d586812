"""Indegree (popularity) and per-window betweenness centrality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .errors import UnknownOrg
from .ingest import GraphSnapshot, ReportGraph


@dataclass(frozen=True)
class IndegreeScore:
    org: str
    value: int


@dataclass(frozen=True)
class CentralitySeries:
    org: str
    values: tuple


def _check(org: str, known) -> None:
    if known is not None and org not in known:
        raise UnknownOrg(f"{org!r} is not a registered organization")


def indegree(graph: ReportGraph, org: str, registered: Iterable[str] | None = None) -> IndegreeScore:
    """Number of distinct organizations that reported ``org`` at least once."""
    _check(org, None if registered is None else set(registered))
    return IndegreeScore(org, len(graph.in_neighbors(org)))


def to_csr(snapshot: GraphSnapshot):
    """Sorted node list and CSR arrays (indptr, indices) of a snapshot."""
    nodes = sorted(snapshot.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    nbrs: list[list[int]] = [[] for _ in nodes]
    for u, v in snapshot.edges:
        if u == v:
            continue
        nbrs[index[u]].append(index[v])
        nbrs[index[v]].append(index[u])
    indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
    for i, row in enumerate(nbrs):
        row.sort()
        indptr[i + 1] = indptr[i] + len(row)
    indices = np.fromiter((j for row in nbrs for j in row), dtype=np.int64, count=int(indptr[-1]))
    return nodes, indptr, indices


def betweenness(snapshot: GraphSnapshot) -> dict[str, float]:
    """Unnormalized Freeman betweenness on the binarized, undirected snapshot.

    Brandes' algorithm with one BFS per source; each unordered pair {s, t}
    is counted once.
    """
    nodes, indptr, indices = to_csr(snapshot)
    scores = kernels.betweenness_csr(indptr, indices, len(nodes))
    return {v: float(x) for v, x in zip(nodes, scores)}


def betweenness_all(snapshots: Sequence[GraphSnapshot]) -> list[dict[str, float]]:
    return [betweenness(s) for s in snapshots]


def betweenness_series(
    snapshots: Sequence[GraphSnapshot],
    org: str,
    registered: Iterable[str] | None = None,
    scores: Sequence[dict[str, float]] | None = None,
) -> CentralitySeries:
    """Betweenness of ``org`` in each window, 0 where it is absent.

    Pass ``scores`` (from :func:`betweenness_all`) to avoid recomputing the
    per-window maps for many organizations.
    """
    if not snapshots:
        raise ValueError("need at least one snapshot")
    _check(org, None if registered is None else set(registered))
    if scores is None:
        scores = betweenness_all(snapshots)
    return CentralitySeries(org, tuple(s.get(org, 0.0) for s in scores))
