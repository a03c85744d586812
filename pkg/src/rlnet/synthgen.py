"""Seeded synthetic registries and event logs with planted structure.

Firms are split into a planted core and periphery. Every week each ordered
firm pair (reporter, partner) emits an event with the probability of its
block, on a random day of that week. Firms also report universities, big
pharma, the two aggregate nodes and the unspecified dummy partner at low
rates. Patent counts are drawn from a linear model of the *measured*
coreness, indegree and RL of each firm, so planted coefficients can be
compared directly with regression estimates.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from datetime import date, timedelta
from typing import Mapping

import numpy as np

from .core_periphery import AnnealConfig
from .errors import InvalidConfig
from .geo import EARTH_RADIUS_KM, GeoPoint
from .ingest import UNKNOWN, CommunicationEvent, OrgKind, OrgRecord, WindowSpec
from .metrics import network_metrics

DEFAULT_START = date(2005, 7, 4)


@dataclass(frozen=True)
class PatentModel:
    intercept: float = 0.0
    beta_coreness: float = 12.0
    beta_indegree: float = 0.15
    beta_rl: float = 0.2
    noise_sd: float = 1.5


@dataclass(frozen=True)
class GeoModel:
    center_lat: float = 42.3626
    center_lon: float = -71.0843
    inside_radius_km: float = 5.0
    outside_min_km: float = 10.0
    outside_max_km: float = 80.0
    fraction_outside: float = 0.45

    @property
    def center(self) -> GeoPoint:
        return GeoPoint(self.center_lat, self.center_lon)


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    n_core: int = 10
    n_periphery: int = 60
    weeks: int = 52
    p_core_core: float = 0.15
    p_core_periphery: float = 0.01
    p_periphery_periphery: float = 0.001
    n_universities: int = 6
    n_big_pharma: int = 5
    p_institution: float = 0.004
    p_unknown: float = 0.02
    start: date = DEFAULT_START
    window_length: int = 182
    step: int = 7
    patent_model: PatentModel = field(default_factory=PatentModel)
    geo_model: GeoModel = field(default_factory=GeoModel)

    def __post_init__(self):
        for name in ("n_core", "n_periphery", "weeks", "window_length", "step"):
            if getattr(self, name) < 1:
                raise InvalidConfig(f"{name} must be >= 1")
        for name in ("n_universities", "n_big_pharma"):
            if getattr(self, name) < 0:
                raise InvalidConfig(f"{name} must be >= 0")
        probs = ("p_core_core", "p_core_periphery", "p_periphery_periphery", "p_institution", "p_unknown")
        for name in probs:
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidConfig(f"{name} must lie in [0, 1]")
        if not self.p_core_core >= self.p_core_periphery >= self.p_periphery_periphery:
            raise InvalidConfig("need p_core_core >= p_core_periphery >= p_periphery_periphery")
        g = self.geo_model
        if not 0.0 <= g.fraction_outside <= 1.0:
            raise InvalidConfig("fraction_outside must lie in [0, 1]")
        if not 0.0 <= g.inside_radius_km <= g.outside_min_km <= g.outside_max_km:
            raise InvalidConfig("need 0 <= inside_radius_km <= outside_min_km <= outside_max_km")
        if self.patent_model.noise_sd < 0:
            raise InvalidConfig("noise_sd must be >= 0")
        if not (-90.0 <= g.center_lat <= 90.0 and -180.0 <= g.center_lon <= 180.0):
            raise InvalidConfig(f"center ({g.center_lat}, {g.center_lon}) is not a valid coordinate")

    @property
    def study_end(self) -> date:
        return self.start + timedelta(days=7 * self.weeks)

    @property
    def window_spec(self) -> WindowSpec:
        return WindowSpec(self.start, self.study_end, self.window_length, self.step)

    # flat key=value form
    def to_flat(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("patent_model", "geo_model")}
        d["start"] = self.start.isoformat()
        d.update(asdict(self.patent_model))
        d.update(asdict(self.geo_model))
        return d

    @classmethod
    def from_flat(cls, flat: Mapping[str, str]) -> "SynthConfig":
        types = {f.name: f.type for f in fields(cls)}
        pm_keys = {f.name for f in fields(PatentModel)}
        gm_keys = {f.name for f in fields(GeoModel)}
        top, pm, gm = {}, {}, {}
        for key, raw in flat.items():
            raw = str(raw).strip()
            try:
                if key in pm_keys:
                    pm[key] = float(raw)
                elif key in gm_keys:
                    gm[key] = float(raw)
                elif key == "start":
                    top[key] = date.fromisoformat(raw)
                elif key in types and key not in ("patent_model", "geo_model"):
                    top[key] = int(raw) if types[key] in (int, "int") else float(raw)
                else:
                    raise InvalidConfig(f"unknown config key {key!r}")
            except ValueError:
                raise InvalidConfig(f"bad value for {key!r}: {raw!r}")
        return cls(**top, patent_model=PatentModel(**pm), geo_model=GeoModel(**gm))


def parse_keyvalue(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfig(f"config line {lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def format_keyvalue(flat: Mapping) -> str:
    return "".join(f"{k}={v}\n" for k, v in flat.items())


def destination(center: GeoPoint, distance_km: float, bearing: float, radius: float = EARTH_RADIUS_KM) -> GeoPoint:
    """Point reached from ``center`` after ``distance_km`` along ``bearing`` (radians)."""
    d = distance_km / radius
    lat1, lon1 = math.radians(center.latitude), math.radians(center.longitude)
    lat2 = math.asin(math.sin(lat1) * math.cos(d) + math.cos(lat1) * math.sin(d) * math.cos(bearing))
    lon2 = lon1 + math.atan2(math.sin(bearing) * math.sin(d) * math.cos(lat1),
                             math.cos(d) - math.sin(lat1) * math.sin(lat2))
    lon2 = (lon2 + 3 * math.pi) % (2 * math.pi) - math.pi
    return GeoPoint(round(math.degrees(lat2), 6), round(math.degrees(lon2), 6))


@dataclass
class SynthData:
    registry: list
    events: list
    core: frozenset
    config: SynthConfig


def generate(config: SynthConfig = SynthConfig()) -> SynthData:
    rng = np.random.default_rng(config.seed)
    n_firms = config.n_core + config.n_periphery
    width = len(str(n_firms))
    ids = [f"F{i + 1:0{width}d}" for i in range(n_firms)]
    is_core = np.zeros(n_firms, dtype=bool)
    is_core[rng.choice(n_firms, config.n_core, replace=False)] = True

    g = config.geo_model
    outside = rng.random(n_firms) < g.fraction_outside
    dist = np.where(
        outside,
        rng.uniform(g.outside_min_km, g.outside_max_km, n_firms),
        g.inside_radius_km * np.sqrt(rng.random(n_firms)),
    )
    bearing = rng.uniform(0.0, 2 * math.pi, n_firms)
    ages = rng.integers(1, 28, n_firms)
    sizes = np.rint(np.exp(rng.uniform(math.log(2), math.log(3017), n_firms))).astype(int)

    # ordered-pair block probabilities
    P = np.where(
        is_core[:, None] & is_core[None, :], config.p_core_core,
        np.where(is_core[:, None] | is_core[None, :], config.p_core_periphery, config.p_periphery_periphery),
    )
    np.fill_diagonal(P, 0.0)

    institutions = (
        [(f"U{i + 1}", OrgKind.University) for i in range(config.n_universities)]
        + [(f"P{i + 1}", OrgKind.BigPharma) for i in range(config.n_big_pharma)]
        + [("HOSPITALS", OrgKind.HospitalAggregate), ("NONPROFITS", OrgKind.NonProfitAggregate)]
    )
    partners_ext = [iid for iid, _ in institutions] + [UNKNOWN]
    p_ext = np.array([config.p_institution] * len(institutions) + [config.p_unknown])

    events = []
    for week in range(config.weeks):
        monday = config.start + timedelta(days=7 * week)
        hits = np.argwhere(rng.random((n_firms, n_firms)) < P)
        days = rng.integers(0, 7, len(hits))
        for (i, j), dd in zip(hits, days):
            events.append(CommunicationEvent(monday + timedelta(days=int(dd)), ids[i], ids[j]))
        ext = np.argwhere(rng.random((n_firms, len(partners_ext))) < p_ext[None, :])
        days = rng.integers(0, 7, len(ext))
        for (i, j), dd in zip(ext, days):
            events.append(CommunicationEvent(monday + timedelta(days=int(dd)), ids[i], partners_ext[j]))
    events.sort()

    registry = []
    for i, oid in enumerate(ids):
        pt = destination(g.center, float(dist[i]), float(bearing[i]))
        registry.append(OrgRecord(
            oid, OrgKind.BiotechOutside if outside[i] else OrgKind.BiotechInCluster,
            pt.latitude, pt.longitude, not bool(outside[i]), float(ages[i]), int(sizes[i]), 0, 0,
        ))
    registry += [OrgRecord(iid, kind) for iid, kind in institutions]

    m = network_metrics(registry, events, config.window_spec, AnnealConfig(seed=config.seed))
    pm = config.patent_model
    mean = np.array([
        pm.intercept + pm.beta_coreness * m.coreness[f] + pm.beta_indegree * m.indegree[f] + pm.beta_rl * m.rl[f]
        for f in ids
    ])
    p06 = np.rint(np.maximum(0.0, mean + rng.normal(0.0, pm.noise_sd, n_firms))).astype(int)
    p07 = np.rint(np.maximum(0.0, mean + rng.normal(0.0, pm.noise_sd, n_firms))).astype(int)
    registry = [
        replace(r, patents_2006=int(p06[i]), patents_2007=int(p07[i])) if i < n_firms else r
        for i, r in enumerate(registry)
    ]
    core = frozenset(oid for oid, c in zip(ids, is_core) if c)
    return SynthData(registry, events, core, config)
