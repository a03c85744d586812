"""Descriptive statistics, Pearson correlations, OLS, one-way ANOVA, Tukey HSD."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Mapping, Optional, Sequence

import numpy as np

from .distributions import MC_REPLICATES, MC_SEED, f_sf, studentized_range, t_sf_two_sided
from .errors import (
    ConstantVariable,
    DegenerateGroups,
    InsufficientData,
    InsufficientObservations,
    RankDeficient,
    ZeroWithinVariance,
)
from .geo import ProximityGroup

# (alpha, token), most lenient first; "p < alpha" earns the token
STARS_TABLE2 = ((0.1, "*"), (0.05, "**"), (0.01, "***"))
STARS_TABLE3 = ((0.05, "*"), (0.01, "**"))
STARS_TABLE4 = STARS_TABLE3
TUKEY_BANDS = ((0.1, "p<.1"), (0.05, "p<.05"), (0.01, "p<.01"))

RANK_TOL = 1e-10


def significance_band(p: Optional[float], bands=STARS_TABLE3, default: str = "") -> str:
    if p is None or math.isnan(p):
        return default
    token = default
    for alpha, tok in sorted(bands, reverse=True):
        if p < alpha:
            token = tok
    return token


@dataclass(frozen=True)
class FirmMetricsRecord:
    org: str
    age: float
    size: int
    indegree: int
    rl: int
    coreness: float
    distance_km: float
    ties_universities: int
    ties_big_pharma: int
    contacts_hospital: bool
    contacts_nonprofit: bool
    patents_2006: int
    patents_2007: int
    group: ProximityGroup

    def as_dict(self) -> dict:
        d = asdict(self)
        d["group"] = self.group.value
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "FirmMetricsRecord":
        d = dict(d)
        d["group"] = ProximityGroup(d["group"])
        return cls(**d)


# attribute name -> row label, in the order of the descriptive and correlation tables
VARIABLES = (
    ("age", "Age"),
    ("size", "Size"),
    ("indegree", "Indegree"),
    ("rl", "Oscillation in Betweenness"),
    ("coreness", "Coreness"),
    ("distance_km", "Distance from Cluster Center"),
    ("ties_universities", "Ties to Universities"),
    ("ties_big_pharma", "Ties to Big Pharmas"),
    ("patents_2006", "Patents Applications 2006"),
    ("patents_2007", "Patents Applications 2007"),
)
VARIABLE_NAMES = tuple(v for v, _ in VARIABLES)
LABELS = dict(VARIABLES)


def column(records: Sequence[FirmMetricsRecord], name: str) -> np.ndarray:
    return np.array([float(getattr(r, name)) for r in records])


def descriptive_stats(records: Sequence[FirmMetricsRecord], variables: Sequence[str] = VARIABLE_NAMES) -> dict:
    """Mean, sample SD (n-1), min and max of each variable."""
    if len(records) < 2:
        raise InsufficientData(f"descriptive statistics need >= 2 records, got {len(records)}")
    out = {}
    for name in variables:
        x = column(records, name)
        out[name] = {
            "mean": float(x.mean()),
            "sd": float(x.std(ddof=1)),
            "min": float(x.min()),
            "max": float(x.max()),
        }
    return out


def pearson(x, y) -> tuple[float, float]:
    """Correlation and its two-sided p-value (t test, n-2 dof)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    if n < 3:
        raise InsufficientData("correlation needs >= 3 observations")
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ConstantVariable("correlation undefined for a constant variable")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return r, t_sf_two_sided(t, n - 2)


def pearson_matrix(records: Sequence[FirmMetricsRecord], variables: Sequence[str] = VARIABLE_NAMES,
                   bands=STARS_TABLE3) -> list[list[dict]]:
    """Symmetric matrix of ``{"r", "p_value", "star_band"}`` cells.

    Cells involving a constant variable carry ``r = None`` and
    ``"error": "ConstantVariable"`` instead of raising.
    """
    if len(records) < 3:
        raise InsufficientData(f"correlation matrix needs >= 3 records, got {len(records)}")
    cols = {v: column(records, v) for v in variables}
    constant = {v for v, x in cols.items() if np.all(x == x[0])}
    k = len(variables)
    mat: list[list[dict]] = [[{} for _ in range(k)] for _ in range(k)]
    for i, vi in enumerate(variables):
        for j in range(i, k):
            vj = variables[j]
            if vi in constant or vj in constant:
                cell = {"r": None, "p_value": None, "star_band": "", "error": "ConstantVariable"}
            elif i == j:
                cell = {"r": 1.0, "p_value": 0.0, "star_band": ""}
            else:
                r, p = pearson(cols[vi], cols[vj])
                cell = {"r": r, "p_value": p, "star_band": significance_band(p, bands)}
            mat[i][j] = cell
            mat[j][i] = dict(cell)
    return mat


@dataclass(frozen=True)
class RegressionFit:
    """OLS estimates keyed by predictor name; the intercept is keyed ``const``."""

    names: tuple
    coefficients: dict
    standard_errors: dict
    t_values: dict
    p_values: dict
    r_squared: float
    adjusted_r_squared: float
    n: int
    df_resid: int
    residuals: tuple = field(default=(), repr=False, compare=False)

    @property
    def intercept(self) -> float:
        return self.coefficients["const"]


def ols(y, X, names: Sequence[str]) -> RegressionFit:
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, p = X.shape
    if len(names) != p:
        raise ValueError("one name per predictor column required")
    if n <= p + 1:
        raise InsufficientObservations(f"need n > p + 1 (n={n}, p={p})")
    for j, name in enumerate(names):
        if np.all(X[:, j] == X[0, j]):
            raise ConstantVariable(f"predictor {name!r} is constant")
    D = np.column_stack([np.ones(n), X])
    Q, R = np.linalg.qr(D)
    diag = np.abs(np.diag(R))
    if diag.min() <= RANK_TOL * diag.max():
        raise RankDeficient("design matrix is rank deficient")
    beta = np.linalg.solve(R, Q.T @ y)
    resid = y - D @ beta
    df = n - p - 1
    rss = float(resid @ resid)
    dy = y - y.mean()
    tss = float(dy @ dy)
    r2 = 1.0 - rss / tss if tss > 0 else 0.0
    adj = 1.0 - (1.0 - r2) * (n - 1) / df
    Rinv = np.linalg.inv(R)
    se = np.sqrt(rss / df * np.sum(Rinv * Rinv, axis=1))

    keys = ("const",) + tuple(names)
    coefs, ses, ts, ps = {}, {}, {}, {}
    for key, b, s in zip(keys, beta, se):
        b, s = float(b), float(s)
        if s > 0:
            t = b / s
            pv = t_sf_two_sided(t, df)
        elif b == 0:
            t, pv = 0.0, 1.0
        else:
            t, pv = math.copysign(math.inf, b), 0.0
        coefs[key], ses[key], ts[key], ps[key] = b, s, t, pv
    return RegressionFit(tuple(names), coefs, ses, ts, ps, r2, adj, n, df, tuple(resid.tolist()))


@dataclass(frozen=True)
class AnovaResult:
    f_statistic: float
    df_between: int
    df_within: int
    p_value: float
    group_means: dict
    group_sizes: dict
    sum_squares_between: float
    sum_squares_within: float
    sum_squares_total: float

    @property
    def ms_between(self) -> float:
        return self.sum_squares_between / self.df_between

    @property
    def ms_within(self) -> float:
        return self.sum_squares_within / self.df_within


def _group_arrays(groups: Mapping) -> dict:
    out = {}
    for label, values in groups.items():
        key = label.value if isinstance(label, ProximityGroup) else label
        out[key] = np.asarray(values, dtype=float)
    return dict(sorted(out.items()))


def anova_oneway(groups: Mapping) -> AnovaResult:
    g = _group_arrays(groups)
    k = len(g)
    n = sum(len(v) for v in g.values())
    if k < 2 or any(len(v) == 0 for v in g.values()) or n <= k:
        raise DegenerateGroups(f"ANOVA needs >= 2 non-empty groups and n > k (k={k}, n={n})")
    allv = np.concatenate(list(g.values()))
    grand = allv.mean()
    means = {lab: float(v.mean()) for lab, v in g.items()}
    ssb = float(sum(len(v) * (v.mean() - grand) ** 2 for v in g.values()))
    ssw = float(sum(((v - v.mean()) ** 2).sum() for v in g.values()))
    sst = float(((allv - grand) ** 2).sum())
    dfb, dfw = k - 1, n - k
    if ssw == 0.0:
        if ssb == 0.0:
            raise DegenerateGroups("no variation within or between groups")
        F, p = math.inf, 0.0
    else:
        F = (ssb / dfb) / (ssw / dfw)
        p = f_sf(F, dfb, dfw)
    return AnovaResult(F, dfb, dfw, p, means, {lab: len(v) for lab, v in g.items()}, ssb, ssw, sst)


@dataclass(frozen=True)
class TukeyPair:
    group_a: str
    group_b: str
    mean_diff: float
    q_statistic: float
    p_value: float
    significance_band: str


@dataclass(frozen=True)
class TukeyResult:
    pairwise: tuple
    replicates: int
    seed: int


def tukey_hsd(groups: Mapping, alpha_bands=TUKEY_BANDS, replicates: int = MC_REPLICATES,
              seed: int = MC_SEED) -> TukeyResult:
    """Tukey-Kramer pairwise comparisons.

    ``q = |mean_a - mean_b| / sqrt(MS_within / 2 * (1/n_a + 1/n_b))``, with
    p-values from the simulated studentized range for ``k`` groups and
    ``n - k`` degrees of freedom.
    """
    g = _group_arrays(groups)
    anova = anova_oneway(g)
    msw = anova.ms_within
    if msw <= 0.0:
        raise ZeroWithinVariance("Tukey HSD needs positive within-group variance")
    dist = studentized_range(len(g), anova.df_within, replicates, seed)
    pairs = []
    for a, b in combinations(g, 2):
        diff = float(g[a].mean() - g[b].mean())
        q = abs(diff) / math.sqrt(msw / 2.0 * (1.0 / len(g[a]) + 1.0 / len(g[b])))
        p = dist.sf(q)
        pairs.append(TukeyPair(a, b, diff, q, p, significance_band(p, alpha_bands, "ns")))
    return TukeyResult(tuple(pairs), replicates, seed)
