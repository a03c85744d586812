import math

import numpy as np
import pytest

from oracles import haversine_reference
from rlnet.errors import MissingCoordinates, OutOfRangeCoordinate, UnknownOrg
from rlnet.geo import EARTH_RADIUS_KM, GeoPoint, ProximityGroup, assign_group, distance_from_center, haversine_km
from rlnet.ingest import OrgKind, OrgRecord
from rlnet.synthgen import SynthConfig, generate


def firm(oid, lat, lon, inside=True, kind=OrgKind.BiotechInCluster):
    return OrgRecord(oid, kind, lat, lon, inside, 1.0, 1, 0, 0)


def test_identical_points():
    p = GeoPoint(42.36, -71.09)
    assert haversine_km(p, p) == 0.0


def test_half_and_quarter_circumference():
    assert haversine_km(GeoPoint(0, 0), GeoPoint(0, 180)) == pytest.approx(math.pi * 6371, abs=0.01)
    assert haversine_km(GeoPoint(0, 0), GeoPoint(0, 180)) == pytest.approx(20015.09, abs=0.01)
    assert haversine_km(GeoPoint(0, 0), GeoPoint(0, 90)) == pytest.approx(10007.54, abs=0.01)
    assert haversine_km(GeoPoint(90, 0), GeoPoint(-90, 0)) == pytest.approx(math.pi * EARTH_RADIUS_KM, abs=0.01)


def test_point_validation():
    with pytest.raises(OutOfRangeCoordinate):
        GeoPoint(91, 0)
    with pytest.raises(OutOfRangeCoordinate):
        GeoPoint(0, -181)


def test_random_pairs_match_vector_formula():
    rng = np.random.default_rng(1)
    for _ in range(2000):
        lat1, lat2 = rng.uniform(-90, 90, 2)
        lon1, lon2 = rng.uniform(-180, 180, 2)
        assert haversine_km(GeoPoint(lat1, lon1), GeoPoint(lat2, lon2)) == pytest.approx(
            haversine_reference(lat1, lon1, lat2, lon2), abs=1e-6)


def test_distance_from_center():
    c = GeoPoint(42.3626, -71.0843)
    reg = [
        firm("at", 42.3626, -71.0843),
        firm("n", 42.4626, -71.0843),
        firm("s", 42.2626, -71.0843, inside=False, kind=OrgKind.BiotechOutside),
        OrgRecord("U1", OrgKind.University),
    ]
    d = distance_from_center(reg, c)
    assert set(d) == {"at", "n", "s"}
    assert d["at"] == 0.0
    # symmetric in longitude offsets about the center
    e = distance_from_center([firm("e", 42.3626, -71.0), firm("w", 42.3626, -71.1686)], c)
    assert e["e"] == pytest.approx(e["w"], abs=1e-9)
    with pytest.raises(MissingCoordinates):
        distance_from_center([OrgRecord("x", OrgKind.BiotechInCluster)], c)


def test_distance_from_center_synthetic():
    data = generate(SynthConfig(seed=2, weeks=2))
    c = data.config.geo_model.center
    d = distance_from_center(data.registry, c)
    for r in data.registry:
        if r.kind.is_biotech:
            assert d[r.id] == pytest.approx(
                haversine_reference(r.latitude, r.longitude, c.latitude, c.longitude), abs=1e-6)


def test_groups():
    reg = [firm("a", 0, 0, True), firm("b", 0, 0, True), firm("c", 0, 0, False), firm("d", 0, 0, False),
           OrgRecord("U1", OrgKind.University)]
    g = assign_group({"a", "c", "U1"}, reg)
    assert g == {"a": ProximityGroup.G1, "b": ProximityGroup.G2, "c": ProximityGroup.G4, "d": ProximityGroup.G3}
    with pytest.raises(UnknownOrg):
        assign_group({"zz"}, reg)
