"""Student-t, F and studentized-range tail probabilities.

t and F go through the regularized incomplete beta function, evaluated with
the modified Lentz continued fraction. The studentized range is simulated:
``max(Z) - min(Z)`` over ``k`` standard normals divided by an independent
``sqrt(chi2_df / df)``, with a fixed seed so results are reproducible.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

CF_EPS = 1e-12
CF_MAX_ITER = 10_000
_TINY = 1e-300

MC_REPLICATES = 1_000_000
MC_SEED = 20050101


def _betacf(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lbt = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    bt = math.exp(lbt)
    # the fraction converges fast only on this side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def t_cdf(t: float, df: float) -> float:
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = 0.5 * betainc(df / 2.0, 0.5, df / (df + t * t))
    return 1.0 - tail if t > 0 else tail


def t_sf_two_sided(t: float, df: float) -> float:
    if math.isinf(t):
        return 0.0
    return betainc(df / 2.0, 0.5, df / (df + t * t))


def f_cdf(x: float, d1: float, d2: float) -> float:
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    return betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2))


def f_sf(x: float, d1: float, d2: float) -> float:
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    return betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x))


class StudentizedRange:
    """Monte Carlo sample of the studentized range for ``k`` groups, ``df`` dof."""

    def __init__(self, k: int, df: int, replicates: int = MC_REPLICATES, seed: int = MC_SEED,
                 chunk: int = 200_000):
        if k < 2 or df < 1:
            raise ValueError("need k >= 2 and df >= 1")
        self.k, self.df, self.replicates, self.seed = k, df, replicates, seed
        rng = np.random.default_rng(seed)
        out = np.empty(replicates)
        for lo in range(0, replicates, chunk):
            m = min(chunk, replicates - lo)
            z = rng.standard_normal((m, k))
            s = np.sqrt(rng.chisquare(df, m) / df)
            out[lo:lo + m] = (z.max(axis=1) - z.min(axis=1)) / s
        out.sort()
        self.samples = out

    def sf(self, q: float) -> float:
        """P(Q >= q), estimated."""
        return float(self.replicates - np.searchsorted(self.samples, q, side="left")) / self.replicates

    def ppf(self, p: float) -> float:
        return float(np.quantile(self.samples, p))


@lru_cache(maxsize=32)
def studentized_range(k: int, df: int, replicates: int = MC_REPLICATES, seed: int = MC_SEED) -> StudentizedRange:
    return StudentizedRange(k, df, replicates, seed)
