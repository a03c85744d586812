"""Per-firm network variables: indegree, RL, coreness and institutional ties."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .centrality import betweenness_all
from .core_periphery import AnnealConfig, discrete_partition
from .errors import DegenerateGraph
from .ingest import (
    CommunicationEvent,
    GraphSnapshot,
    OrgKind,
    OrgRecord,
    WindowSpec,
    aggregate_graph,
    build_snapshots,
    report_graph,
)
from .rotating_leadership import ExtremaConfig, count_extrema

log = logging.getLogger(__name__)


@dataclass
class NetworkMetrics:
    indegree: dict = field(default_factory=dict)
    rl: dict = field(default_factory=dict)
    coreness: dict = field(default_factory=dict)
    core_members: frozenset = frozenset()
    fit: Optional[float] = None
    partition_method: Optional[str] = None
    ties_universities: dict = field(default_factory=dict)
    ties_big_pharma: dict = field(default_factory=dict)
    contacts_hospital: dict = field(default_factory=dict)
    contacts_nonprofit: dict = field(default_factory=dict)
    n_windows: int = 0
    snapshots: list = field(default_factory=list, repr=False)


def network_metrics(
    registry: Sequence[OrgRecord],
    events: Sequence[CommunicationEvent],
    window: Optional[WindowSpec],
    anneal: AnnealConfig = AnnealConfig(),
    extrema: ExtremaConfig = ExtremaConfig(),
) -> NetworkMetrics:
    """Compute every network variable for the registry's biotech firms.

    ``window`` may be None only when there are no events; RL is then 0.
    A graph without edges yields zero coreness and an empty core.
    """
    firms = [r.id for r in registry if r.kind.is_biotech]
    kinds = {r.id: r.kind for r in registry}
    out = NetworkMetrics()

    rg = report_graph(events)
    out.indegree = {f: len(rg.in_neighbors(f)) for f in firms}

    snapshots: list[GraphSnapshot] = []
    if window is not None:
        snapshots = build_snapshots(list(events), window)
    elif events:
        raise ValueError("a window specification is required when events are present")
    out.snapshots = snapshots
    out.n_windows = len(snapshots)
    if snapshots:
        scores = betweenness_all(snapshots)
        out.rl = {f: count_extrema([s.get(f, 0.0) for s in scores], extrema).rl for f in firms}
    else:
        out.rl = {f: 0 for f in firms}

    agg = aggregate_graph(events, nodes=kinds)
    try:
        cp = discrete_partition(agg, anneal)
        out.coreness = {f: cp.scores.get(f, 0.0) for f in firms}
        out.core_members = cp.core_members
        out.fit = cp.fit
        out.partition_method = cp.method
    except DegenerateGraph:
        log.warning("aggregate graph has no edges; coreness set to 0 and the core left empty")
        out.coreness = {f: 0.0 for f in firms}

    adj = agg.adjacency()
    for f in firms:
        nb = adj.get(f, set())
        out.ties_universities[f] = sum(1 for x in nb if kinds.get(x) is OrgKind.University)
        out.ties_big_pharma[f] = sum(1 for x in nb if kinds.get(x) is OrgKind.BigPharma)
        out.contacts_hospital[f] = any(kinds.get(x) is OrgKind.HospitalAggregate for x in nb)
        out.contacts_nonprofit[f] = any(kinds.get(x) is OrgKind.NonProfitAggregate for x in nb)
    return out
