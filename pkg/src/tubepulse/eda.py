"""Correlation screening and box-plot (IQR) outlier handling.

Quartiles use linear interpolation between order statistics (numpy's
default "linear" method, the classic type-7 convention); the Tukey fence
multiplier defaults to 1.5.  Outlier removal is one-pass: fences are
computed once on the input and re-running on the cleaned output may flag
further rows.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateSeriesError,
    InsufficientDataError,
    ParameterError,
    ShapeError,
)
from .features import FeatureMatrix

DEFAULT_CORRELATION_THRESHOLD = 0.5
DEFAULT_IQR_MULTIPLIER = 1.5


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric Pearson matrix over the named columns (unit diagonal)."""

    labels: tuple[str, ...]
    values: np.ndarray
    degenerate: tuple[str, ...] = ()

    def value(self, a: str, b: str) -> float:
        return float(self.values[self.labels.index(a), self.labels.index(b)])

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "values": [[float(v) for v in row] for row in self.values],
            "degenerate_columns": list(self.degenerate),
        }


@dataclass(frozen=True)
class OutlierReport:
    """Tukey-fence summary for one column."""

    column: str
    q1: float
    q3: float
    iqr: float
    lower_fence: float
    upper_fence: float
    outlier_row_indices: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "column": self.column,
            "q1": self.q1,
            "q3": self.q3,
            "iqr": self.iqr,
            "lower_fence": self.lower_fence,
            "upper_fence": self.upper_fence,
            "outlier_row_indices": list(self.outlier_row_indices),
        }


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson product-moment correlation of two equally long series."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.ndim != 1 or ya.ndim != 1 or xa.shape != ya.shape:
        raise ShapeError(f"series shapes differ: {xa.shape} vs {ya.shape}")
    if xa.size < 2:
        raise InsufficientDataError("pearson needs at least 2 points")
    xd = xa - xa.mean()
    yd = ya - ya.mean()
    sx = np.sqrt(np.sum(xd * xd))
    sy = np.sqrt(np.sum(yd * yd))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateSeriesError("zero-variance series has no correlation")
    return float(np.sum(xd * yd) / (sx * sy))


def correlation_matrix(m: FeatureMatrix, cols: Sequence[str] | None = None) -> CorrelationMatrix:
    """Pairwise Pearson over the selected columns.

    Zero-variance columns are excluded from the matrix and listed in
    ``degenerate`` rather than silently zeroed.  Includes the target as
    'views' when the matrix carries one.
    """
    names = list(cols) if cols is not None else list(m.columns) + (
        ["views"] if m.y is not None else []
    )
    if m.n_rows < 2:
        raise InsufficientDataError("correlation needs at least 2 rows")

    series: dict[str, np.ndarray] = {}
    for name in names:
        if name == "views" and m.y is not None:
            series[name] = m.y
        else:
            series[name] = m.column(name)

    kept, degenerate = [], []
    for name in names:
        s = series[name]
        if np.all(s == s[0]):
            degenerate.append(name)
        else:
            kept.append(name)

    k = len(kept)
    values = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            r = pearson(series[kept[i]], series[kept[j]])
            values[i, j] = values[j, i] = r
    return CorrelationMatrix(labels=tuple(kept), values=values,
                             degenerate=tuple(degenerate))


def threshold_pairs(cm: CorrelationMatrix, t: float = DEFAULT_CORRELATION_THRESHOLD
                    ) -> list[tuple[str, str, float]]:
    """All unordered label pairs with |r| >= t, strongest first."""
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"threshold must be in [0, 1], got {t}")
    pairs = []
    for i in range(len(cm.labels)):
        for j in range(i + 1, len(cm.labels)):
            r = float(cm.values[i, j])
            if abs(r) >= t:
                pairs.append((cm.labels[i], cm.labels[j], r))
    pairs.sort(key=lambda p: -abs(p[2]))
    return pairs


def iqr_outliers(x: Sequence[float], k: float = DEFAULT_IQR_MULTIPLIER,
                 column: str = "") -> OutlierReport:
    """Flag indices of values strictly outside the Tukey fences."""
    xa = np.asarray(x, dtype=np.float64)
    if xa.ndim != 1:
        raise ShapeError(f"expected a 1-d series, got shape {xa.shape}")
    if xa.size < 4:
        raise InsufficientDataError(
            f"outlier fences need at least 4 values, got {xa.size}"
        )
    if k < 0:
        raise ParameterError(f"fence multiplier must be >= 0, got {k}")
    q1 = float(np.quantile(xa, 0.25))
    q3 = float(np.quantile(xa, 0.75))
    iqr = q3 - q1
    lower = q1 - k * iqr
    upper = q3 + k * iqr
    flagged = np.nonzero((xa < lower) | (xa > upper))[0]
    return OutlierReport(
        column=column, q1=q1, q3=q3, iqr=iqr,
        lower_fence=lower, upper_fence=upper,
        outlier_row_indices=tuple(int(i) for i in flagged),
    )


def remove_outliers(records: Sequence, columns: Iterable[str],
                    k: float = DEFAULT_IQR_MULTIPLIER
                    ) -> tuple[list, list[OutlierReport]]:
    """Drop records flagged in ANY listed numeric column (single pass).

    Fences are computed on the full input per column; reports are returned
    per column alongside the surviving records.
    """
    records = list(records)
    reports = []
    drop: set[int] = set()
    for column in columns:
        series = [float(getattr(r, column)) for r in records]
        report = iqr_outliers(series, k=k, column=column)
        reports.append(report)
        drop.update(report.outlier_row_indices)
    kept = [r for i, r in enumerate(records) if i not in drop]
    return kept, reports
