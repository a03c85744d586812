"""Rotating leadership: turns in a firm's betweenness series.

A series is first collapsed so that runs of equal consecutive values become a
single point. An interior point of the collapsed series is a local maximum
if it is strictly greater than both neighbours and a local minimum if it is
strictly smaller. The first and last points are never counted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .centrality import CentralitySeries, betweenness_all, betweenness_series
from .errors import UnknownOrg
from .ingest import GraphSnapshot


class PlateauPolicy(enum.Enum):
    CollapsePlateaus = "CollapsePlateaus"


class EndpointPolicy(enum.Enum):
    ExcludeEndpoints = "ExcludeEndpoints"


@dataclass(frozen=True)
class ExtremaConfig:
    plateau_policy: PlateauPolicy = PlateauPolicy.CollapsePlateaus
    endpoint_policy: EndpointPolicy = EndpointPolicy.ExcludeEndpoints

    def as_dict(self) -> dict:
        return {"plateau_policy": self.plateau_policy.value, "endpoint_policy": self.endpoint_policy.value}


@dataclass(frozen=True)
class RotatingLeadershipScore:
    org: str
    n_maxima: int
    n_minima: int
    rl: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rl", self.n_maxima + self.n_minima)


def collapse_plateaus(values: Sequence[float]) -> list[float]:
    out: list[float] = []
    for x in values:
        if not out or x != out[-1]:
            out.append(x)
    return out


def count_extrema(series: CentralitySeries | Sequence[float], config: ExtremaConfig = ExtremaConfig()) -> RotatingLeadershipScore:
    if isinstance(series, CentralitySeries):
        org, values = series.org, series.values
    else:
        org, values = "", series
    pts = collapse_plateaus(values)
    n_max = n_min = 0
    for prev, x, nxt in zip(pts, pts[1:], pts[2:]):
        if x > prev and x > nxt:
            n_max += 1
        elif x < prev and x < nxt:
            n_min += 1
    return RotatingLeadershipScore(org, n_max, n_min)


def rotating_leadership_all(
    snapshots: Sequence[GraphSnapshot],
    orgs: Sequence[str],
    config: ExtremaConfig = ExtremaConfig(),
    registered=None,
    scores=None,
) -> list[RotatingLeadershipScore]:
    """RL score per org, in input order.

    ``registered`` (an iterable of known ids) enables the unknown-org check;
    ``scores`` reuses precomputed per-window betweenness maps.
    """
    if not snapshots:
        raise ValueError("need at least one snapshot")
    known = None if registered is None else set(registered)
    if known is not None:
        for org in orgs:
            if org not in known:
                raise UnknownOrg(f"{org!r} is not a registered organization")
    if scores is None:
        scores = betweenness_all(snapshots)
    return [count_extrema(betweenness_series(snapshots, org, scores=scores), config) for org in orgs]
