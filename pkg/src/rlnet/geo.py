"""Great-circle distances and the core x location grouping."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import MissingCoordinates, OutOfRangeCoordinate, UnknownOrg
from .ingest import OrgRecord

EARTH_RADIUS_KM = 6371.0


@dataclass(frozen=True)
class GeoPoint:
    latitude: float
    longitude: float

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0 or not -180.0 <= self.longitude <= 180.0:
            raise OutOfRangeCoordinate(f"invalid point ({self.latitude}, {self.longitude})")


class ProximityGroup(enum.Enum):
    G1 = "G1"  # core, inside the postal cluster
    G2 = "G2"  # periphery, inside
    G3 = "G3"  # periphery, outside
    G4 = "G4"  # core, outside


def haversine_km(p: GeoPoint, q: GeoPoint, radius: float = EARTH_RADIUS_KM) -> float:
    phi1, phi2 = math.radians(p.latitude), math.radians(q.latitude)
    dphi = phi2 - phi1
    dlmb = math.radians(q.longitude - p.longitude)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    # rounding can push h marginally past 1 for antipodal points
    h = min(1.0, max(0.0, h))
    return 2.0 * radius * math.asin(math.sqrt(h))


def distance_from_center(
    registry: Iterable[OrgRecord], center: GeoPoint, radius: float = EARTH_RADIUS_KM
) -> dict[str, float]:
    """Distance (km) of every biotech firm to ``center``."""
    out = {}
    for rec in registry:
        if not rec.kind.is_biotech:
            continue
        if rec.latitude is None or rec.longitude is None:
            raise MissingCoordinates(f"{rec.id!r} has no coordinates")
        out[rec.id] = haversine_km(GeoPoint(rec.latitude, rec.longitude), center, radius)
    return out


def group_of(in_core: bool, inside: bool) -> ProximityGroup:
    if in_core:
        return ProximityGroup.G1 if inside else ProximityGroup.G4
    return ProximityGroup.G2 if inside else ProximityGroup.G3


def assign_group(core_members: Iterable[str], registry: Iterable[OrgRecord]) -> dict[str, ProximityGroup]:
    """G1-G4 for every biotech firm, from core membership and the postal flag."""
    records: Mapping[str, OrgRecord] = {r.id: r for r in registry}
    core = set(core_members)
    unknown = core - records.keys()
    if unknown:
        raise UnknownOrg(f"core members not in registry: {sorted(unknown)}")
    return {
        oid: group_of(oid in core, bool(rec.in_postal_cluster))
        for oid, rec in records.items()
        if rec.kind.is_biotech
    }
