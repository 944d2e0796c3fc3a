"""Independent brute-force oracles used to check the library.

Everything here is deliberately written the slow, obvious way in plain
Python (math.fsum, explicit loops, no numpy) so agreement with the
vectorized implementations is meaningful evidence rather than the same
code twice.
"""
from __future__ import annotations

import math


def sse(values) -> float:
    """Sum of squared deviations from the mean."""
    values = list(values)
    if not values:
        return 0.0
    mean = math.fsum(values) / len(values)
    return math.fsum((v - mean) ** 2 for v in values)


def brute_split(X, y, min_samples_leaf: int = 1, min_gain: float = 0.0):
    """Exhaustive best-split search: every feature, every midpoint.

    Returns (feature, threshold, total_child_sse) or None.  Candidates
    are scanned with features ascending and thresholds ascending, and a
    new candidate wins only on strictly smaller SSE, so ties resolve to
    the lowest feature index, then the lowest threshold.  Rows with
    value <= threshold go left.
    """
    n = len(y)
    p = len(X[0]) if n else 0
    parent = sse(y)
    best = None
    best_sse = math.inf
    for f in range(p):
        col = [X[i][f] for i in range(n)]
        distinct = sorted(set(col))
        for lo, hi in zip(distinct, distinct[1:]):
            threshold = (lo + hi) / 2.0
            if threshold >= hi:
                # midpoint rounded up to the right value; fall back to the
                # left value so the cut still separates lo from hi
                threshold = lo
            left = [y[i] for i in range(n) if col[i] <= threshold]
            right = [y[i] for i in range(n) if col[i] > threshold]
            if len(left) < min_samples_leaf or len(right) < min_samples_leaf:
                continue
            total = sse(left) + sse(right)
            gain = parent - total
            if gain <= 0.0 or gain < min_gain:
                continue
            if total < best_sse:
                best_sse = total
                best = (f, threshold, total)
    return best


def pearson(x, y) -> float:
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    num = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    dx = math.sqrt(math.fsum((a - mx) ** 2 for a in x))
    dy = math.sqrt(math.fsum((b - my) ** 2 for b in y))
    return num / (dx * dy)


def quantile_type7(values, q: float) -> float:
    """Linear interpolation between order statistics (the type-7 rule)."""
    s = sorted(values)
    n = len(s)
    h = (n - 1) * q
    lo = int(math.floor(h))
    if lo + 1 >= n:
        return float(s[-1])
    frac = h - lo
    return s[lo] + frac * (s[lo + 1] - s[lo])


def iqr_flags(values, k: float = 1.5):
    """Indices strictly outside the Tukey fences, plus the fences."""
    q1 = quantile_type7(values, 0.25)
    q3 = quantile_type7(values, 0.75)
    spread = q3 - q1
    lower = q1 - k * spread
    upper = q3 + k * spread
    flagged = [i for i, v in enumerate(values) if v < lower or v > upper]
    return flagged, lower, upper, q1, q3


def rmse(pred, actual) -> float:
    n = len(pred)
    return math.sqrt(math.fsum((p - a) ** 2 for p, a in zip(pred, actual)) / n)


def r2(pred, actual) -> float:
    n = len(actual)
    mean = math.fsum(actual) / n
    ss_tot = math.fsum((a - mean) ** 2 for a in actual)
    ss_res = math.fsum((a - p) ** 2 for p, a in zip(pred, actual))
    return 1.0 - ss_res / ss_tot


def mape(pred, actual):
    kept = [(p, a) for p, a in zip(pred, actual) if a != 0]
    excluded = len(actual) - len(kept)
    value = math.fsum(abs(p - a) / abs(a) for p, a in kept) / len(kept)
    return value, excluded


def cosine(u, v) -> float:
    dot = math.fsum(a * b for a, b in zip(u, v))
    nu = math.sqrt(math.fsum(a * a for a in u))
    nv = math.sqrt(math.fsum(b * b for b in v))
    return dot / (nu * nv)
