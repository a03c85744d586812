"""Registry and event-log ingestion, report graph and windowed snapshots."""

from __future__ import annotations

import csv
import enum
import io
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Iterable, Mapping, Optional

from .errors import (
    DateOutsideStudyPeriod,
    DuplicateOrgId,
    EmptyStudyPeriod,
    MalformedInput,
    MissingRequiredField,
    OutOfRangeCoordinate,
    SelfLoopEvent,
    UnknownPartner,
    UnknownReporter,
)

UNKNOWN = "UNKNOWN"

REGISTRY_HEADER = (
    "id", "kind", "lat", "lon", "in_postal_cluster",
    "age", "size", "patents_2006", "patents_2007",
)
EVENT_HEADER = ("date", "reporter", "partner")


class OrgKind(enum.Enum):
    BiotechInCluster = "BiotechInCluster"
    BiotechOutside = "BiotechOutside"
    University = "University"
    BigPharma = "BigPharma"
    HospitalAggregate = "HospitalAggregate"
    NonProfitAggregate = "NonProfitAggregate"
    Dummy = "Dummy"

    @property
    def is_biotech(self) -> bool:
        return self in (OrgKind.BiotechInCluster, OrgKind.BiotechOutside)

    @property
    def is_aggregate(self) -> bool:
        return self in (OrgKind.HospitalAggregate, OrgKind.NonProfitAggregate)


@dataclass(frozen=True)
class OrgRecord:
    id: str
    kind: OrgKind
    latitude: Optional[float] = None
    longitude: Optional[float] = None
    in_postal_cluster: Optional[bool] = None
    age: Optional[float] = None
    size: Optional[int] = None
    patents_2006: Optional[int] = None
    patents_2007: Optional[int] = None

    @property
    def is_complete(self) -> bool:
        """True when every control and outcome variable is present."""
        return None not in (self.age, self.size, self.patents_2006, self.patents_2007)


@dataclass(frozen=True, order=True)
class CommunicationEvent:
    date: date
    reporter: str
    partner: str


@dataclass(frozen=True)
class WindowSpec:
    """Sliding windows ``[start + k*step, start + k*step + window_length)``.

    ``study_end`` is exclusive; the last windows are truncated at it.
    """

    study_start: date
    study_end: date
    window_length: int = 182
    step: int = 7

    def __post_init__(self):
        if self.step < 1 or self.window_length < self.step:
            raise MalformedInput(
                f"need window_length >= step >= 1, got {self.window_length}/{self.step}"
            )

    def windows(self) -> list[tuple[date, date]]:
        out = []
        start = self.study_start
        while start < self.study_end:
            out.append((start, min(start + timedelta(days=self.window_length), self.study_end)))
            start += timedelta(days=self.step)
        return out


@dataclass(frozen=True)
class GraphSnapshot:
    window_index: int
    nodes: frozenset
    # (u, v) with u < v -> number of events in the window
    edges: Mapping[tuple[str, str], int] = field(default_factory=dict)
    start: Optional[date] = None
    end: Optional[date] = None

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


class ReportGraph:
    """Directed multigraph with one arc reporter -> partner per event."""

    def __init__(self, arcs: Iterable[tuple[str, str]] = ()):
        self.arcs = tuple(arcs)
        self._multiplicity = Counter(self.arcs)
        self._in: dict[str, set[str]] = {}
        for u, v in self.arcs:
            self._in.setdefault(v, set()).add(u)

    def multiplicity(self, u: str, v: str) -> int:
        return self._multiplicity[(u, v)]

    def in_neighbors(self, v: str) -> frozenset:
        return frozenset(self._in.get(v, ()))

    @property
    def nodes(self) -> frozenset:
        return frozenset(x for arc in self.arcs for x in arc)

    def __len__(self):
        return len(self.arcs)


def _rows(text: str, header: tuple, what: str):
    reader = csv.reader(io.StringIO(text))
    try:
        got = next(reader)
    except StopIteration:
        raise MalformedInput(f"{what}: empty file, expected header {','.join(header)}")
    if tuple(h.strip() for h in got) != header:
        raise MalformedInput(f"{what}: bad header {got!r}, expected {','.join(header)}")
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise MalformedInput(f"{what} line {lineno}: expected {len(header)} fields, got {len(row)}")
        yield lineno, [c.strip() for c in row]


def _opt(value: str, conv, lineno: int, name: str):
    if value == "":
        return None
    try:
        return conv(value)
    except ValueError:
        raise MalformedInput(f"line {lineno}: cannot parse {name}={value!r}")


def _bool(value: str) -> bool:
    if value not in ("true", "false"):
        raise ValueError(value)
    return value == "true"


def _int(value: str) -> int:
    f = float(value)
    if f != int(f):
        raise ValueError(value)
    return int(f)


def parse_org_registry(text: str) -> list[OrgRecord]:
    records: list[OrgRecord] = []
    seen: set[str] = set()
    aggregates: Counter = Counter()
    for lineno, (oid, kind_tok, lat, lon, inpc, age, size, p6, p7) in _rows(
        text, REGISTRY_HEADER, "registry"
    ):
        if not oid:
            raise MissingRequiredField(f"registry line {lineno}: empty id")
        try:
            kind = OrgKind(kind_tok)
        except ValueError:
            raise MalformedInput(f"registry line {lineno}: unknown kind {kind_tok!r}")
        if oid in seen:
            raise DuplicateOrgId(f"registry line {lineno}: duplicate id {oid!r}")
        seen.add(oid)
        if (kind is OrgKind.Dummy) != (oid == UNKNOWN):
            raise MalformedInput(f"registry line {lineno}: kind Dummy is reserved for {UNKNOWN}")
        if kind.is_aggregate:
            aggregates[kind] += 1
            if aggregates[kind] > 1:
                raise MalformedInput(f"registry line {lineno}: more than one {kind.value} node")

        rec = OrgRecord(
            id=oid,
            kind=kind,
            latitude=_opt(lat, float, lineno, "lat"),
            longitude=_opt(lon, float, lineno, "lon"),
            in_postal_cluster=_opt(inpc, _bool, lineno, "in_postal_cluster"),
            age=_opt(age, float, lineno, "age"),
            size=_opt(size, _int, lineno, "size"),
            patents_2006=_opt(p6, _int, lineno, "patents_2006"),
            patents_2007=_opt(p7, _int, lineno, "patents_2007"),
        )
        if kind.is_biotech:
            for name in ("latitude", "longitude", "in_postal_cluster"):
                if getattr(rec, name) is None:
                    raise MissingRequiredField(f"registry line {lineno}: {oid!r} lacks {name}")
        if rec.latitude is not None and not -90.0 <= rec.latitude <= 90.0:
            raise OutOfRangeCoordinate(f"registry line {lineno}: latitude {rec.latitude}")
        if rec.longitude is not None and not -180.0 <= rec.longitude <= 180.0:
            raise OutOfRangeCoordinate(f"registry line {lineno}: longitude {rec.longitude}")
        if rec.age is not None and rec.age < 0:
            raise MalformedInput(f"registry line {lineno}: negative age")
        if rec.size is not None and rec.size < 1 and not kind.is_aggregate:
            raise MalformedInput(f"registry line {lineno}: size must be >= 1")
        for p in (rec.patents_2006, rec.patents_2007):
            if p is not None and p < 0:
                raise MalformedInput(f"registry line {lineno}: negative patent count")
        records.append(rec)
    return records


def parse_event_log(
    text: str,
    registry: Iterable[OrgRecord],
    study_start: Optional[date] = None,
    study_end: Optional[date] = None,
) -> list[CommunicationEvent]:
    """Parse ``date,reporter,partner`` rows.

    ``study_end`` is exclusive. When the period bounds are omitted no date
    check is made. The result is stably sorted by date.
    """
    kinds = {r.id: r.kind for r in registry}
    events = []
    for lineno, (day, reporter, partner) in _rows(text, EVENT_HEADER, "events"):
        try:
            d = date.fromisoformat(day)
        except ValueError:
            raise MalformedInput(f"events line {lineno}: bad date {day!r}")
        if len(day) != 10:
            raise MalformedInput(f"events line {lineno}: dates must be YYYY-MM-DD")
        if reporter == partner:
            raise SelfLoopEvent(f"events line {lineno}: {reporter!r} reports itself")
        kind = kinds.get(reporter)
        if kind is None or not kind.is_biotech:
            raise UnknownReporter(f"events line {lineno}: {reporter!r} is not a registered biotech firm")
        if partner != UNKNOWN and partner not in kinds:
            raise UnknownPartner(f"events line {lineno}: partner {partner!r} not in registry")
        if (study_start is not None and d < study_start) or (study_end is not None and d >= study_end):
            raise DateOutsideStudyPeriod(f"events line {lineno}: {d} outside study period")
        events.append(CommunicationEvent(d, reporter, partner))
    events.sort(key=lambda e: e.date)
    return events


def serialize_events(events: Iterable[CommunicationEvent]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EVENT_HEADER)
    for e in events:
        w.writerow((e.date.isoformat(), e.reporter, e.partner))
    return buf.getvalue()


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def serialize_registry(records: Iterable[OrgRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REGISTRY_HEADER)
    for r in records:
        w.writerow((
            r.id, r.kind.value, _fmt(r.latitude), _fmt(r.longitude), _fmt(r.in_postal_cluster),
            _fmt(r.age), _fmt(r.size), _fmt(r.patents_2006), _fmt(r.patents_2007),
        ))
    return buf.getvalue()


def _pair(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


def _edge_counts(events: Iterable[CommunicationEvent]) -> Counter:
    return Counter(_pair(e.reporter, e.partner) for e in events if e.partner != UNKNOWN)


def build_snapshots(events: list[CommunicationEvent], spec: WindowSpec) -> list[GraphSnapshot]:
    """One undirected snapshot per window position.

    Nodes are the endpoints of the window's edges; dummy-partner events are
    dropped.
    """
    windows = spec.windows()
    if not windows:
        raise EmptyStudyPeriod(f"no window fits in [{spec.study_start}, {spec.study_end})")
    dated = sorted((e for e in events if e.partner != UNKNOWN), key=lambda e: e.date)
    days = [e.date for e in dated]

    snapshots = []
    for k, (ws, we) in enumerate(windows):
        lo, hi = bisect_left(days, ws), bisect_left(days, we)
        counts = _edge_counts(dated[lo:hi])
        nodes = frozenset(x for pair in counts for x in pair)
        snapshots.append(GraphSnapshot(k, nodes, dict(sorted(counts.items())), ws, we))
    return snapshots


def aggregate_graph(events: Iterable[CommunicationEvent], nodes: Iterable[str] = ()) -> GraphSnapshot:
    """Full-period symmetrized graph; ``nodes`` adds isolated vertices."""
    counts = _edge_counts(events)
    allnodes = {x for pair in counts for x in pair} | {n for n in nodes if n != UNKNOWN}
    return GraphSnapshot(-1, frozenset(allnodes), dict(sorted(counts.items())))


def report_graph(events: Iterable[CommunicationEvent]) -> ReportGraph:
    return ReportGraph((e.reporter, e.partner) for e in events)


def ingestion_stats(events: list[CommunicationEvent]) -> dict:
    n_unknown = sum(1 for e in events if e.partner == UNKNOWN)
    return {
        "n_events": len(events),
        "n_unknown_partner": n_unknown,
        "first_date": events[0].date.isoformat() if events else None,
        "last_date": events[-1].date.isoformat() if events else None,
    }
