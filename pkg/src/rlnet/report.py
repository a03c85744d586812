"""End-to-end pipeline and the machine-readable table analogs it emits."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from datetime import date, timedelta
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .core_periphery import AnnealConfig
from .distributions import MC_REPLICATES, MC_SEED
from .errors import DegenerateDataError
from .geo import EARTH_RADIUS_KM, GeoPoint, ProximityGroup, distance_from_center, group_of
from .ingest import (
    CommunicationEvent,
    OrgRecord,
    WindowSpec,
    ingestion_stats,
    parse_event_log,
    parse_org_registry,
    serialize_events,
    serialize_registry,
)
from .metrics import network_metrics
from .rotating_leadership import ExtremaConfig
from .stats import (
    LABELS,
    STARS_TABLE2,
    STARS_TABLE3,
    STARS_TABLE4,
    VARIABLE_NAMES,
    FirmMetricsRecord,
    anova_oneway,
    column,
    descriptive_stats,
    ols,
    pearson_matrix,
    significance_band,
    tukey_hsd,
)

log = logging.getLogger(__name__)

SIG_DIGITS = 6

# (model label, dependent, predictors)
MODELS = (
    ("Model 1", "patents_2006", ("age", "size")),
    ("Model 2", "patents_2006", ("age", "size", "coreness", "distance_km")),
    ("Model 3", "patents_2006", ("age", "size", "rl", "indegree")),
    ("Model 4", "patents_2007", ("age", "size")),
    ("Model 5", "patents_2007", ("age", "size", "coreness", "distance_km")),
    ("Model 6", "patents_2007", ("age", "size", "rl", "indegree")),
)
TABLE4_ROWS = ("age", "size", "coreness", "distance_km", "rl", "indegree")


@dataclass(frozen=True)
class PipelineOptions:
    center: GeoPoint
    window_days: int = 182
    step_days: int = 7
    seed: int = 0
    study_start: Optional[date] = None
    study_end: Optional[date] = None
    mc_replicates: int = MC_REPLICATES
    mc_seed: int = MC_SEED
    anneal_restarts: int = 16

    def as_dict(self) -> dict:
        d = asdict(self)
        d["center"] = {"latitude": self.center.latitude, "longitude": self.center.longitude}
        d["study_start"] = self.study_start.isoformat() if self.study_start else None
        d["study_end"] = self.study_end.isoformat() if self.study_end else None
        return d


@dataclass
class AnalysisReport:
    metadata: dict
    table1: dict
    table2: dict
    table3: dict
    table4: list
    firm_metrics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _clean({
            "metadata": self.metadata,
            "table1": self.table1,
            "table2": self.table2,
            "table3": self.table3,
            "table4": self.table4,
            "firm_metrics": self.firm_metrics,
        })

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(d["metadata"], d["table1"], d["table2"], d["table3"], d["table4"], d["firm_metrics"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))

    def records(self) -> list[FirmMetricsRecord]:
        return [FirmMetricsRecord.from_dict(r) for r in self.firm_metrics]


def round_sig(x: float, digits: int = SIG_DIGITS) -> Optional[float]:
    if not math.isfinite(x):
        return None
    return float(f"{x:.{digits}g}")


def _clean(obj):
    """Round floats to 6 significant digits; non-finite values become None."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _clean(obj.item())
    return obj


def _flagged(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def _table2(records: Sequence[FirmMetricsRecord], opts: PipelineOptions) -> dict:
    groups = {}
    for g in ProximityGroup:
        vals = [r.patents_2006 + r.patents_2007 for r in records if r.group is g]
        if vals:
            groups[g.value] = vals
    out: dict = {
        "dependent": "patents_2006 + patents_2007",
        "group_sizes": {g.value: sum(1 for r in records if r.group is g) for g in ProximityGroup},
    }
    try:
        a = anova_oneway(groups)
    except DegenerateDataError as exc:
        out["anova"] = _flagged(exc)
        out["tukey"] = _flagged(exc)
        return out
    out["anova"] = {
        "rows": [
            {"source": "Between groups", "sum_of_squares": a.sum_squares_between, "df": a.df_between,
             "mean_square": a.ms_between, "F": a.f_statistic, "p_value": a.p_value,
             "star_band": significance_band(a.p_value, STARS_TABLE2)},
            {"source": "Within groups", "sum_of_squares": a.sum_squares_within, "df": a.df_within,
             "mean_square": a.ms_within},
            {"source": "Total", "sum_of_squares": a.sum_squares_total, "df": a.df_between + a.df_within},
        ],
        "group_means": a.group_means,
    }
    try:
        t = tukey_hsd(groups, replicates=opts.mc_replicates, seed=opts.mc_seed)
        out["tukey"] = {"replicates": t.replicates, "seed": t.seed,
                        "pairwise": [asdict(p) for p in t.pairwise]}
    except DegenerateDataError as exc:
        out["tukey"] = _flagged(exc)
    return out


def _table3(records) -> dict:
    try:
        mat = pearson_matrix(records, VARIABLE_NAMES, STARS_TABLE3)
    except DegenerateDataError as exc:
        return {"variables": list(VARIABLE_NAMES), **_flagged(exc)}
    return {"variables": list(VARIABLE_NAMES), "labels": [LABELS[v] for v in VARIABLE_NAMES], "matrix": mat}


def _table4(records) -> list:
    out = []
    for label, dep, preds in MODELS:
        entry = {"model": label, "dependent": dep, "predictors": list(preds), "n": len(records)}
        try:
            y = column(records, dep)
            X = np.column_stack([column(records, p) for p in preds])
            fit = ols(y, X, preds)
        except DegenerateDataError as exc:
            entry.update(_flagged(exc))
            out.append(entry)
            continue
        entry.update({
            "coefficients": fit.coefficients,
            "standard_errors": fit.standard_errors,
            "t_values": fit.t_values,
            "p_values": fit.p_values,
            "star_bands": {k: significance_band(p, STARS_TABLE4) for k, p in fit.p_values.items()},
            "r_squared": fit.r_squared,
            "adjusted_r_squared": fit.adjusted_r_squared,
            "n": fit.n,
        })
        out.append(entry)
    return out


def _config_hash(registry_text: str, events_text: str, opts: PipelineOptions) -> str:
    h = hashlib.sha256()
    h.update(registry_text.encode())
    h.update(b"\0")
    h.update(events_text.encode())
    h.update(b"\0")
    h.update(json.dumps(opts.as_dict(), sort_keys=True).encode())
    return h.hexdigest()


def build_records(registry: Sequence[OrgRecord], events: Sequence[CommunicationEvent],
                  opts: PipelineOptions):
    """Network metrics and per-firm records; returns (records, metadata extras)."""
    if opts.study_start is not None or opts.study_end is not None or events:
        start = opts.study_start or events[0].date
        end = opts.study_end or (events[-1].date + timedelta(days=1))
        window = WindowSpec(start, end, opts.window_days, opts.step_days)
    else:
        window = None
    anneal = AnnealConfig(seed=opts.seed, restarts=opts.anneal_restarts)
    m = network_metrics(registry, events, window, anneal)
    dist = distance_from_center(registry, opts.center)

    records, excluded = [], []
    for rec in registry:
        if not rec.kind.is_biotech:
            continue
        if not rec.is_complete:
            log.info("excluding %s: incomplete control or outcome variables", rec.id)
            excluded.append(rec.id)
            continue
        f = rec.id
        records.append(FirmMetricsRecord(
            org=f, age=rec.age, size=rec.size, indegree=m.indegree[f], rl=m.rl[f],
            coreness=m.coreness[f], distance_km=dist[f],
            ties_universities=m.ties_universities[f], ties_big_pharma=m.ties_big_pharma[f],
            contacts_hospital=m.contacts_hospital[f], contacts_nonprofit=m.contacts_nonprofit[f],
            patents_2006=rec.patents_2006, patents_2007=rec.patents_2007,
            group=group_of(f in m.core_members, bool(rec.in_postal_cluster)),
        ))
    extras = {
        "study_start": window.study_start.isoformat() if window else None,
        "study_end": window.study_end.isoformat() if window else None,
        "n_windows": m.n_windows,
        "core_members": sorted(m.core_members),
        "partition_fit": m.fit,
        "partition_method": m.partition_method,
        "excluded_incomplete": excluded,
    }
    return records, extras


def run_pipeline_data(registry: Sequence[OrgRecord], events: Sequence[CommunicationEvent],
                      opts: PipelineOptions, config_hash: Optional[str] = None,
                      firm_metrics_only: bool = False) -> AnalysisReport:
    if config_hash is None:
        config_hash = _config_hash(serialize_registry(registry), serialize_events(events), opts)
    records, extras = build_records(registry, events, opts)
    metadata = {
        "version": __version__,
        "config_hash": config_hash,
        "window": {"window_length_days": opts.window_days, "step_days": opts.step_days},
        "center": {"latitude": opts.center.latitude, "longitude": opts.center.longitude},
        "earth_radius_km": EARTH_RADIUS_KM,
        "seeds": {"annealing": opts.seed, "monte_carlo": opts.mc_seed},
        "monte_carlo_replicates": opts.mc_replicates,
        "annealing": asdict(AnnealConfig(seed=opts.seed, restarts=opts.anneal_restarts)),
        "extrema": ExtremaConfig().as_dict(),
        "ingestion": ingestion_stats(list(events)),
        "n_firms": len(records) + len(extras["excluded_incomplete"]),
        "n": len(records),
        **extras,
    }
    firm_rows = [r.as_dict() for r in records]
    if firm_metrics_only:
        return AnalysisReport(metadata, {}, {}, {}, [], firm_rows)
    try:
        table1 = {"labels": dict(LABELS), "stats": descriptive_stats(records)}
    except DegenerateDataError as exc:
        table1 = _flagged(exc)
    return AnalysisReport(metadata, table1, _table2(records, opts), _table3(records), _table4(records), firm_rows)


def run_pipeline(registry_path, events_path, opts: PipelineOptions, firm_metrics_only: bool = False) -> AnalysisReport:
    with open(registry_path, encoding="utf-8") as fh:
        reg_text = fh.read()
    with open(events_path, encoding="utf-8") as fh:
        ev_text = fh.read()
    registry = parse_org_registry(reg_text)
    events = parse_event_log(ev_text, registry, opts.study_start, opts.study_end)
    return run_pipeline_data(registry, events, opts, _config_hash(reg_text, ev_text, opts), firm_metrics_only)


# ---- emission -------------------------------------------------------------

def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        r = round_sig(x)
        return "" if r is None else f"{r:.{SIG_DIGITS}g}"
    return str(x)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def table1_csv(report: AnalysisReport) -> str:
    rows = [("variable", "M", "SD", "Min", "Max")]
    stats = report.table1.get("stats")
    if stats is None:
        rows.append(("error", report.table1.get("error", "")))
    else:
        for v in VARIABLE_NAMES:
            s = stats[v]
            rows.append((LABELS[v], _num(s["mean"]), _num(s["sd"]), _num(s["min"]), _num(s["max"])))
    return _csv(rows)


def table2_csv(report: AnalysisReport) -> str:
    t2 = report.table2
    rows = [("source", "sum_of_squares", "df", "mean_square", "F", "p_value", "sig")]
    anova = t2.get("anova", {})
    if "rows" in anova:
        for r in anova["rows"]:
            rows.append((r["source"], _num(r.get("sum_of_squares")), _num(r.get("df")),
                         _num(r.get("mean_square")), _num(r.get("F")), _num(r.get("p_value")),
                         r.get("star_band", "")))
        rows.append(())
        rows.append(("group", "n", "mean"))
        for g, mean in anova["group_means"].items():
            rows.append((g, t2["group_sizes"][g], _num(mean)))
    else:
        rows.append(("error", anova.get("error", "")))
    tukey = t2.get("tukey", {})
    if "pairwise" in tukey:
        rows.append(())
        rows.append(("group_a", "group_b", "mean_diff", "q_statistic", "p_value", "band"))
        for p in tukey["pairwise"]:
            rows.append((p["group_a"], p["group_b"], _num(p["mean_diff"]), _num(p["q_statistic"]),
                         _num(p["p_value"]), p["significance_band"]))
    return _csv(rows)


def table3_csv(report: AnalysisReport) -> str:
    t3 = report.table3
    rows = [("variable_a", "variable_b", "r", "p_value", "band")]
    mat = t3.get("matrix")
    if mat is None:
        rows.append(("error", t3.get("error", "")))
        return _csv(rows)
    names = t3["variables"]
    for i, a in enumerate(names):
        for j in range(i + 1):
            cell = mat[i][j]
            band = cell.get("error", cell["star_band"])
            rows.append((LABELS[a], LABELS[names[j]], _num(cell["r"]), _num(cell["p_value"]), band))
    return _csv(rows)


def table4_csv(report: AnalysisReport) -> str:
    models = report.table4
    rows = [["variable"] + [m["model"] for m in models],
            ["dependent"] + [m["dependent"] for m in models]]

    def cell(m, key):
        if "coefficients" not in m or key not in m["coefficients"]:
            return ""
        return _num(m["coefficients"][key]) + m["star_bands"][key]

    for key in TABLE4_ROWS:
        rows.append([LABELS[key]] + [cell(m, key) for m in models])
    rows.append(["Constant"] + [cell(m, "const") for m in models])
    rows.append(["Adj R-Squared"] + [_num(m.get("adjusted_r_squared")) for m in models])
    rows.append(["N"] + [str(m["n"]) for m in models])
    rows.append(["Status"] + [m.get("error", "ok") for m in models])
    return _csv(rows)


FIRM_COLUMNS = ("org", "group") + tuple(
    n for n in FirmMetricsRecord.__dataclass_fields__ if n not in ("org", "group")
)


def firm_metrics_csv(report: AnalysisReport) -> str:
    rows = [FIRM_COLUMNS]
    for r in report.firm_metrics:
        rows.append(tuple(_num(r[c]) for c in FIRM_COLUMNS))
    return _csv(rows)


def emit(report: AnalysisReport, fmt: str, out_dir, firm_metrics_only: bool = False) -> list[str]:
    """Write the report; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    if fmt == "json":
        payload = report.to_dict()
        if firm_metrics_only:
            payload = {"metadata": payload["metadata"], "firm_metrics": payload["firm_metrics"]}
        name = "firm_metrics.json" if firm_metrics_only else "report.json"
        files = {name: json.dumps(payload, indent=2, allow_nan=False) + "\n"}
    elif fmt == "csv":
        files = {"firm_metrics.csv": firm_metrics_csv(report)}
        if not firm_metrics_only:
            files.update({
                "table1.csv": table1_csv(report),
                "table2.csv": table2_csv(report),
                "table3.csv": table3_csv(report),
                "table4.csv": table4_csv(report),
            })
    else:
        raise ValueError(f"unknown format {fmt!r}")
    paths = []
    for name, text in sorted(files.items()):
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths.append(path)
    return paths
