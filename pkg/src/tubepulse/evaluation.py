"""70:30 split protocol, regression metrics, and train/test score reports.

Metrics are computed in raw view space (after inverting the target
transform) and again in the transform's own space; both appear in the
report, labeled.  The headline "accuracy %" columns are R-squared x 100,
with the raw coefficients always shown alongside.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateSeriesError, InsufficientDataError, ParameterError, ShapeError
from .ensemble import BoostParams, ForestParams, fit_boosted, fit_forest, fit_tree_model
from .features import FeatureMatrix
from .model import (
    KIND_BOOSTED,
    KIND_FOREST,
    KIND_TREE,
    RegressionModel,
    dataset_fingerprint,
    invert_target,
    predict_matrix_model_space,
    transform_target,
)
from .trees import TreeParams


@dataclass(frozen=True)
class SplitIndices:
    """Disjoint, exhaustive train/test row partition."""

    train: np.ndarray
    test: np.ndarray
    seed: int
    ratio: float


def train_test_split(n: int, ratio: float = 0.7, seed: int = 0) -> SplitIndices:
    """Uniform random partition with |train| = round(ratio * n)."""
    if n < 2:
        raise InsufficientDataError(f"need at least 2 rows to split, got {n}")
    if not 0.0 < ratio < 1.0:
        raise ParameterError(f"split ratio must be in (0, 1), got {ratio}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    perm = rng.permutation(n)
    n_train = min(n - 1, max(1, round(ratio * n)))
    return SplitIndices(train=perm[:n_train], test=perm[n_train:],
                        seed=seed, ratio=ratio)


def _paired(pred, actual) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(pred, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if p.shape != a.shape or p.ndim != 1:
        raise ShapeError(f"prediction/actual shapes differ: {p.shape} vs {a.shape}")
    if p.size == 0:
        raise InsufficientDataError("no rows to score")
    return p, a


def rmse(pred, actual) -> float:
    p, a = _paired(pred, actual)
    return float(np.sqrt(np.mean((p - a) ** 2)))


def r2(pred, actual) -> float:
    """1 - SS_res / SS_tot; negative when worse than predicting the mean."""
    p, a = _paired(pred, actual)
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateSeriesError("actuals have zero variance; R2 undefined")
    ss_res = float(np.sum((a - p) ** 2))
    return 1.0 - ss_res / ss_tot


def mape(pred, actual) -> tuple[float, int]:
    """Mean |pred - actual| / |actual| over rows with actual != 0.

    Returns (value, excluded_row_count).
    """
    p, a = _paired(pred, actual)
    keep = a != 0.0
    excluded = int(np.sum(~keep))
    if not keep.any():
        raise DegenerateSeriesError("every actual is zero; MAPE undefined")
    value = float(np.mean(np.abs(p[keep] - a[keep]) / np.abs(a[keep])))
    return value, excluded


@dataclass(frozen=True)
class MetricSet:
    r2: float
    rmse: float
    mape: float
    mape_excluded: int

    def to_dict(self) -> dict:
        return {"r2": self.r2, "rmse": self.rmse,
                "mape": self.mape, "mape_excluded": self.mape_excluded}


@dataclass(frozen=True)
class ScoreReport:
    """Train/test metrics for one model, in raw and transformed space."""

    kind: str
    seed: int
    ratio: float
    transform: str
    n_train: int
    n_test: int
    train_raw: MetricSet
    test_raw: MetricSet
    train_transformed: MetricSet
    test_transformed: MetricSet

    def to_dict(self) -> dict:
        return {
            "model": self.kind,
            "seed": self.seed,
            "ratio": self.ratio,
            "transform": self.transform,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "train_accuracy_pct": self.train_raw.r2 * 100.0,
            "test_accuracy_pct": self.test_raw.r2 * 100.0,
            "raw_space": {"train": self.train_raw.to_dict(), "test": self.test_raw.to_dict()},
            "transformed_space": {
                "train": self.train_transformed.to_dict(),
                "test": self.test_transformed.to_dict(),
            },
        }


def _metric_set(pred, actual) -> MetricSet:
    m, excluded = mape(pred, actual)
    return MetricSet(r2=r2(pred, actual), rmse=rmse(pred, actual),
                     mape=m, mape_excluded=excluded)


def _fit(kind: str, X, y, params, seed: int, profile, transform: str,
         meta: dict) -> RegressionModel:
    if kind == KIND_TREE:
        params = params or TreeParams()
        return fit_tree_model(X, y, params, profile=profile, transform=transform,
                              training_meta=meta)
    if kind == KIND_FOREST:
        params = params or ForestParams()
        if params.seed != seed:
            params = ForestParams(n_trees=params.n_trees,
                                  feature_fraction=params.feature_fraction,
                                  bootstrap=params.bootstrap, seed=seed,
                                  tree=params.tree)
        return fit_forest(X, y, params, profile=profile, transform=transform,
                          training_meta=meta)
    if kind == KIND_BOOSTED:
        params = params or BoostParams()
        return fit_boosted(X, y, params, profile=profile, transform=transform,
                           training_meta=meta)
    raise ParameterError(f"unknown model kind {kind!r}; expected one of "
                         f"{KIND_TREE}/{KIND_FOREST}/{KIND_BOOSTED}")


def score_model(model: RegressionModel, matrix: FeatureMatrix,
                split: SplitIndices) -> ScoreReport:
    """Score an already-fitted model on both halves of a split."""
    if matrix.y is None:
        raise ParameterError("matrix has no targets; cannot score")
    y_t = transform_target(model.transform, matrix.y)
    report_sets = {}
    for label, idx in (("train", split.train), ("test", split.test)):
        pred_t = predict_matrix_model_space(model, matrix.X[idx])
        pred_raw = np.maximum(invert_target(model.transform, pred_t), 0.0)
        report_sets[label + "_transformed"] = _metric_set(pred_t, y_t[idx])
        report_sets[label + "_raw"] = _metric_set(pred_raw, matrix.y[idx])
    return ScoreReport(
        kind=model.kind, seed=split.seed, ratio=split.ratio,
        transform=model.transform, n_train=split.train.size,
        n_test=split.test.size, **report_sets,
    )


def train_and_score(kind: str, matrix: FeatureMatrix, params=None, seed: int = 0,
                    ratio: float = 0.7, transform: str = "log1p",
                    extra_meta: dict | None = None
                    ) -> tuple[RegressionModel, ScoreReport]:
    """Split, fit on the train partition, and score both partitions.

    Returns the fitted model together with its report; the model is the
    one trained on the train partition (what evaluate scores is what you
    get).
    """
    if matrix.y is None:
        raise ParameterError("matrix has no targets; cannot train")
    split = train_test_split(matrix.n_rows, ratio=ratio, seed=seed)
    y_t = transform_target(transform, matrix.y)

    meta = {
        "seed": seed,
        "ratio": ratio,
        "dataset_fingerprint": dataset_fingerprint(matrix),
    }
    if extra_meta:
        meta.update(extra_meta)
    model = _fit(kind, matrix.X[split.train], y_t[split.train], params, seed,
                 matrix.profile, transform, meta)
    return model, score_model(model, matrix, split)


def evaluate(model_kind: str, data: FeatureMatrix, params=None, seed: int = 0,
             ratio: float = 0.7, transform: str = "log1p") -> ScoreReport:
    """Train on the train partition and report scores on both partitions."""
    _, report = train_and_score(model_kind, data, params=params, seed=seed,
                                ratio=ratio, transform=transform)
    return report


_KIND_LABELS = {KIND_TREE: "Decision Tree", KIND_FOREST: "Random Forest",
                KIND_BOOSTED: "Boosted Trees"}


def render_reports(reports: Sequence[ScoreReport]) -> str:
    """Aligned three-column table (model, train, test) plus metric detail."""
    lines = []
    header = f"{'Model':<16} {'Training Accuracy (%)':>22} {'Testing Accuracy (%)':>21}"
    lines.append(header)
    lines.append("-" * len(header))
    for rep in reports:
        label = _KIND_LABELS.get(rep.kind, rep.kind)
        lines.append(f"{label:<16} {rep.train_raw.r2 * 100.0:>22.1f} "
                     f"{rep.test_raw.r2 * 100.0:>21.1f}")
    lines.append("")
    detail = (f"{'Model':<16} {'space':<12} {'R2 train':>9} {'R2 test':>9} "
              f"{'RMSE train':>12} {'RMSE test':>12} {'MAPE train':>11} {'MAPE test':>10}")
    lines.append(detail)
    lines.append("-" * len(detail))
    for rep in reports:
        label = _KIND_LABELS.get(rep.kind, rep.kind)
        for space, tr, te in (("raw views", rep.train_raw, rep.test_raw),
                              (rep.transform, rep.train_transformed, rep.test_transformed)):
            lines.append(
                f"{label:<16} {space:<12} {tr.r2:>9.4f} {te.r2:>9.4f} "
                f"{tr.rmse:>12.4g} {te.rmse:>12.4g} {tr.mape:>11.4g} {te.mape:>10.4g}"
            )
    return "\n".join(lines)
