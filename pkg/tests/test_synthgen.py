import math

import pytest

from rlnet.core_periphery import AnnealConfig, discrete_partition
from rlnet.errors import InvalidConfig
from rlnet.ingest import UNKNOWN, aggregate_graph, parse_event_log, parse_org_registry, serialize_events, serialize_registry
from rlnet.synthgen import (
    GeoModel,
    SynthConfig,
    destination,
    format_keyvalue,
    generate,
    parse_keyvalue,
)
from rlnet.geo import GeoPoint, haversine_km


def test_same_seed_identical_bytes():
    a, b = generate(SynthConfig(seed=5)), generate(SynthConfig(seed=5))
    assert serialize_registry(a.registry) == serialize_registry(b.registry)
    assert serialize_events(a.events) == serialize_events(b.events)
    c = generate(SynthConfig(seed=6))
    assert serialize_events(a.events) != serialize_events(c.events)


def test_outputs_parse_with_ingest():
    d = generate(SynthConfig(seed=1))
    reg = parse_org_registry(serialize_registry(d.registry))
    ev = parse_event_log(serialize_events(d.events), reg, d.config.start, d.config.study_end)
    assert ev == d.events
    assert sum(r.kind.is_biotech for r in reg) == 70
    assert all(r.is_complete for r in reg if r.kind.is_biotech)


def test_no_periphery_periphery_events_when_zero():
    d = generate(SynthConfig(seed=3, p_periphery_periphery=0.0))
    firms = {r.id for r in d.registry if r.kind.is_biotech}
    for e in d.events:
        if e.reporter in firms and e.partner in firms:
            assert e.reporter in d.core or e.partner in d.core


def test_block_densities_converge():
    cfg = SynthConfig(seed=8, weeks=500, p_core_periphery=0.02, p_periphery_periphery=0.002)
    d = generate(cfg)
    firms = [r.id for r in d.registry if r.kind.is_biotech]
    core = d.core
    counts = {"cc": 0, "cp": 0, "pp": 0}
    for e in d.events:
        if e.partner in firms:
            key = ("c" if e.reporter in core else "p") + ("c" if e.partner in core else "p")
            counts["cp" if key == "pc" else key] += 1
    k, m = cfg.n_core, cfg.n_periphery
    ordered_pairs = {"cc": k * (k - 1), "cp": 2 * k * m, "pp": m * (m - 1)}
    probs = {"cc": cfg.p_core_core, "cp": cfg.p_core_periphery, "pp": cfg.p_periphery_periphery}
    for key, trials in ordered_pairs.items():
        trials *= cfg.weeks
        p = probs[key]
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(counts[key] / trials - p) <= 3 * se, key
    unknown = sum(e.partner == UNKNOWN for e in d.events)
    p, trials = cfg.p_unknown, len(firms) * cfg.weeks
    assert abs(unknown / trials - p) <= 3 * math.sqrt(p * (1 - p) / trials)


def test_events_fall_in_study_period_and_weekdays_spread():
    d = generate(SynthConfig(seed=2))
    assert d.events[0].date >= d.config.start
    assert d.events[-1].date < d.config.study_end
    assert len({e.date.weekday() for e in d.events}) == 7


def test_geography_inside_and_outside():
    d = generate(SynthConfig(seed=4))
    g = d.config.geo_model
    for r in d.registry:
        if not r.kind.is_biotech:
            continue
        dist = haversine_km(GeoPoint(r.latitude, r.longitude), g.center)
        if r.in_postal_cluster:
            assert dist <= g.inside_radius_km + 1e-3
        else:
            assert g.outside_min_km - 1e-3 <= dist <= g.outside_max_km + 1e-3


def test_destination_round_trip():
    c = GeoPoint(42.3626, -71.0843)
    for km, bearing in ((0.0, 0.0), (3.2, 1.0), (75.0, 4.0), (5000.0, 2.5)):
        assert haversine_km(c, destination(c, km, bearing)) == pytest.approx(km, abs=1e-3)


def test_config_flat_round_trip():
    cfg = SynthConfig(seed=12, weeks=30, geo_model=GeoModel(fraction_outside=0.3))
    text = format_keyvalue(cfg.to_flat())
    assert SynthConfig.from_flat(parse_keyvalue(text)) == cfg


@pytest.mark.parametrize("flat", [
    {"bogus": "1"},
    {"weeks": "abc"},
    {"weeks": "0"},
    {"p_core_core": "1.5"},
    {"p_core_core": "0.001", "p_core_periphery": "0.01"},
    {"fraction_outside": "2"},
    {"center_lat": "95"},
])
def test_config_validation(flat):
    with pytest.raises(InvalidConfig):
        SynthConfig.from_flat(flat)


def test_keyvalue_parsing():
    assert parse_keyvalue("# comment\nseed = 3\n\nweeks=10 # trailing\n") == {"seed": "3", "weeks": "10"}
    with pytest.raises(InvalidConfig):
        parse_keyvalue("seed 3\n")


def test_planted_core_recovery():
    # at least 9 of the 10 planted core firms land in the fitted core, in >= 95 of 100 seeds
    hits = 0
    for seed in range(100):
        d = generate(SynthConfig(seed=seed))
        nodes = [r.id for r in d.registry]
        r = discrete_partition(aggregate_graph(d.events, nodes), AnnealConfig(seed=seed), with_scores=False)
        hits += len(r.core_members & d.core) >= 9
    assert hits >= 95
