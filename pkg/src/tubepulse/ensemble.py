"""Bootstrap random forest and stagewise boosted trees.

All randomness flows through numpy's PCG64 generator so identical seeds
reproduce identical models on any platform.  Each forest member gets an
isolated stream derived from (seed, tree index), which keeps members
independent of training order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDatasetError, ParameterError, ShapeError
from .features import FeatureProfile
from .model import KIND_BOOSTED, KIND_FOREST, KIND_TREE, RegressionModel
from .trees import TreeParams, fit_tree, predict_tree_batch


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 100
    feature_fraction: float = 1.0 / 3.0
    bootstrap: bool = True
    seed: int = 0
    tree: TreeParams = field(default_factory=TreeParams)

    def __post_init__(self):
        if self.n_trees < 1:
            raise ParameterError(f"n_trees must be >= 1, got {self.n_trees}")
        if not 0.0 < self.feature_fraction <= 1.0:
            raise ParameterError(
                f"feature_fraction must be in (0, 1], got {self.feature_fraction}"
            )

    def to_dict(self) -> dict:
        return {"n_trees": self.n_trees, "feature_fraction": self.feature_fraction,
                "bootstrap": self.bootstrap, "seed": self.seed, "tree": self.tree.to_dict()}

    @staticmethod
    def from_dict(d: dict) -> "ForestParams":
        return ForestParams(
            n_trees=int(d["n_trees"]), feature_fraction=float(d["feature_fraction"]),
            bootstrap=bool(d["bootstrap"]), seed=int(d["seed"]),
            tree=TreeParams.from_dict(d["tree"]),
        )


@dataclass(frozen=True)
class BoostParams:
    n_rounds: int = 200
    eta: float = 0.1
    leaf_l2: float = 1.0
    base_score: float | None = None  # None -> mean of the training targets
    tree: TreeParams = field(default_factory=lambda: TreeParams(max_depth=4))

    def __post_init__(self):
        if self.n_rounds < 1:
            raise ParameterError(f"n_rounds must be >= 1, got {self.n_rounds}")
        if not 0.0 < self.eta <= 1.0:
            raise ParameterError(f"eta must be in (0, 1], got {self.eta}")
        if self.leaf_l2 < 0:
            raise ParameterError(f"leaf_l2 must be >= 0, got {self.leaf_l2}")

    def to_dict(self) -> dict:
        return {"n_rounds": self.n_rounds, "eta": self.eta, "leaf_l2": self.leaf_l2,
                "base_score": self.base_score, "tree": self.tree.to_dict()}

    @staticmethod
    def from_dict(d: dict) -> "BoostParams":
        return BoostParams(
            n_rounds=int(d["n_rounds"]), eta=float(d["eta"]),
            leaf_l2=float(d["leaf_l2"]),
            base_score=None if d["base_score"] is None else float(d["base_score"]),
            tree=TreeParams.from_dict(d["tree"]),
        )


def _check_xy(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError(f"feature matrix must be 2-d, got shape {X.shape}")
    if y.size == 0:
        raise EmptyDatasetError("cannot fit on zero rows")
    if X.shape[0] != y.size:
        raise ShapeError(f"X has {X.shape[0]} rows but y has {y.size}")
    return X, y


def _member_rng(seed: int, tree_index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(tree_index,)))
    )


def fit_tree_model(X, y, params: TreeParams | None = None, *,
                   profile: FeatureProfile | None = None,
                   transform: str = "identity",
                   training_meta: dict | None = None) -> RegressionModel:
    """Single decision tree wrapped as a RegressionModel."""
    params = params or TreeParams()
    X, y = _check_xy(X, y)
    tree = fit_tree(X, y, params)
    return RegressionModel(
        kind=KIND_TREE, trees=(tree,), transform=transform, profile=profile,
        params={"tree": params.to_dict()}, training_meta=training_meta or {},
    )


def fit_forest(X, y, params: ForestParams | None = None, *,
               profile: FeatureProfile | None = None,
               transform: str = "identity",
               training_meta: dict | None = None) -> RegressionModel:
    """Bootstrap-aggregated trees; prediction is the plain member mean.

    Each tree trains on a with-replacement resample of all n rows (when
    bootstrap is on) and every split draws ceil(feature_fraction * p)
    candidate features without replacement.
    """
    params = params or ForestParams()
    X, y = _check_xy(X, y)
    n, p = X.shape
    k = min(p, max(1, math.ceil(params.feature_fraction * p)))

    members = []
    for i in range(params.n_trees):
        rng = _member_rng(params.seed, i)
        if params.bootstrap:
            idx = rng.integers(0, n, size=n)
            Xi, yi = X[idx], y[idx]
        else:
            Xi, yi = X, y
        sampler = None
        if k < p:
            def sampler(n_features, rng=rng, k=k):
                return np.sort(rng.choice(n_features, size=k, replace=False))
        members.append(fit_tree(Xi, yi, params.tree, feature_sampler=sampler))

    meta = dict(training_meta or {})
    meta.setdefault("seed", params.seed)
    return RegressionModel(
        kind=KIND_FOREST, trees=tuple(members), transform=transform, profile=profile,
        params={"forest": params.to_dict()}, training_meta=meta,
    )


def fit_boosted(X, y, params: BoostParams | None = None, *,
                profile: FeatureProfile | None = None,
                transform: str = "identity",
                training_meta: dict | None = None) -> RegressionModel:
    """Stagewise squared-loss boosting.

    Starts from base_score (mean of y unless pinned), fits each round's
    tree to the current residuals with leaf values sum(r) / (n + leaf_l2),
    and adds it scaled by eta.
    """
    params = params or BoostParams()
    X, y = _check_xy(X, y)
    base = float(np.mean(y)) if params.base_score is None else float(params.base_score)

    current = np.full(y.size, base, dtype=np.float64)
    members = []
    for _ in range(params.n_rounds):
        residuals = y - current
        tree = fit_tree(X, residuals, params.tree, leaf_l2=params.leaf_l2)
        current = current + params.eta * predict_tree_batch(tree, X)
        members.append(tree)

    return RegressionModel(
        kind=KIND_BOOSTED, trees=tuple(members), transform=transform, profile=profile,
        base_score=base, eta=params.eta,
        params={"boost": params.to_dict()}, training_meta=training_meta or {},
    )


def predict_forest(model: RegressionModel, row) -> float:
    """Arithmetic mean of the member trees' outputs (model space)."""
    from .model import predict_model_space

    if model.kind != KIND_FOREST:
        raise ParameterError(f"expected a forest model, got {model.kind!r}")
    return predict_model_space(model, row)


def predict_boosted(model: RegressionModel, row) -> float:
    """base_score + eta * sum of member tree outputs (model space)."""
    from .model import predict_model_space

    if model.kind != KIND_BOOSTED:
        raise ParameterError(f"expected a boosted model, got {model.kind!r}")
    return predict_model_space(model, row)
