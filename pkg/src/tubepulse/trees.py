"""Greedy regression tree grown by variance reduction.

Splits minimize the summed squared deviation (SSE) of targets within the
two children, scanning thresholds at midpoints between consecutive
distinct sorted feature values.  Rows with value <= threshold go left.
Ties are broken toward the lowest feature index, then the lowest
threshold, so training is fully deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import EmptyDatasetError, ParameterError, ShapeError

FeatureSampler = Callable[[int], Sequence[int]]


@dataclass(frozen=True)
class SplitRule:
    """Send rows with feature value <= threshold left, else right."""

    feature: int
    threshold: float


@dataclass(frozen=True)
class TreeParams:
    max_depth: int = 8
    min_samples_leaf: int = 5
    min_gain: float = 0.0

    def __post_init__(self):
        if self.max_depth < 1:
            raise ParameterError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise ParameterError(
                f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}"
            )
        if self.min_gain < 0:
            raise ParameterError(f"min_gain must be >= 0, got {self.min_gain}")

    def to_dict(self) -> dict:
        return {"max_depth": self.max_depth, "min_samples_leaf": self.min_samples_leaf,
                "min_gain": self.min_gain}

    @staticmethod
    def from_dict(d: dict) -> "TreeParams":
        return TreeParams(max_depth=int(d["max_depth"]),
                          min_samples_leaf=int(d["min_samples_leaf"]),
                          min_gain=float(d["min_gain"]))


@dataclass(frozen=True)
class TreeNode:
    """Leaf (value set) or internal node (rule + both children set)."""

    n: int
    n_features: int
    value: float | None = None
    rule: SplitRule | None = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.rule is None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"n": self.n, "value": self.value}
        return {
            "n": self.n,
            "feature": self.rule.feature,
            "threshold": self.rule.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @staticmethod
    def from_dict(d: dict, n_features: int) -> "TreeNode":
        if "value" in d:
            return TreeNode(n=int(d["n"]), n_features=n_features,
                            value=float(d["value"]))
        return TreeNode(
            n=int(d["n"]),
            n_features=n_features,
            rule=SplitRule(int(d["feature"]), float(d["threshold"])),
            left=TreeNode.from_dict(d["left"], n_features),
            right=TreeNode.from_dict(d["right"], n_features),
        )


def tree_size(node: TreeNode) -> int:
    if node.is_leaf:
        return 1
    return 1 + tree_size(node.left) + tree_size(node.right)


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError(f"feature matrix must be 2-d, got shape {X.shape}")
    return X


def _sse_of(total_sum: float, total_sq: float, n: int) -> float:
    return total_sq - total_sum * total_sum / n


def best_split(X, y, candidate_features: Sequence[int], params: TreeParams
               ) -> SplitRule | None:
    """Exhaustive scan for the SSE-minimizing (feature, threshold).

    Returns None when no candidate split satisfies the leaf-size bound or
    reduces SSE by at least min_gain (zero-gain splits are never taken).
    """
    X = _as_matrix(X)
    y = np.asarray(y, dtype=np.float64)
    feats = sorted(int(f) for f in candidate_features)
    if not feats:
        raise ParameterError("candidate_features is empty")
    n = y.size
    if n < 2 * params.min_samples_leaf:
        return None

    total_sum = float(y.sum())
    total_sq = float((y * y).sum())
    parent_sse = _sse_of(total_sum, total_sq, n)

    best_sse = np.inf
    best_rule: SplitRule | None = None
    min_leaf = params.min_samples_leaf
    for f in feats:
        x = X[:, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        ys = y[order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        n_left = np.arange(1, n)
        n_right = n - n_left
        sum_left = csum[:-1]
        sq_left = csq[:-1]
        sse_left = sq_left - sum_left * sum_left / n_left
        sum_right = total_sum - sum_left
        sq_right = total_sq - sq_left
        sse_right = sq_right - sum_right * sum_right / n_right
        valid = (xs[1:] != xs[:-1]) \
            & (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        total = np.where(valid, sse_left + sse_right, np.inf)
        i = int(np.argmin(total))  # first minimum -> lowest threshold
        sse = float(total[i])
        if sse < best_sse:  # strict -> lowest feature index wins ties
            threshold = (xs[i] + xs[i + 1]) / 2.0
            if threshold >= xs[i + 1]:  # midpoint rounded up between adjacent floats
                threshold = float(xs[i])
            best_sse = sse
            best_rule = SplitRule(feature=f, threshold=float(threshold))

    if best_rule is None:
        return None
    gain = parent_sse - best_sse
    if gain <= 0.0 or gain < params.min_gain:
        return None
    return best_rule


def fit_tree(X, y, params: TreeParams,
             feature_sampler: FeatureSampler | None = None,
             leaf_l2: float = 0.0) -> TreeNode:
    """Grow a tree top-down; leaves predict sum(y) / (n + leaf_l2).

    With leaf_l2 = 0 (the default) a leaf predicts the plain mean of its
    targets.  feature_sampler, when given, is called with the feature
    count at every split to pick that split's candidate features.
    """
    X = _as_matrix(X)
    y = np.asarray(y, dtype=np.float64)
    if y.size == 0:
        raise EmptyDatasetError("cannot fit a tree on zero rows")
    if X.shape[0] != y.size:
        raise ShapeError(f"X has {X.shape[0]} rows but y has {y.size}")
    n_features = X.shape[1]
    all_features = range(n_features)

    def grow(Xs: np.ndarray, ys: np.ndarray, depth: int) -> TreeNode:
        leaf_value = float(ys.sum() / (ys.size + leaf_l2))
        if depth >= params.max_depth or ys.size < 2 * params.min_samples_leaf:
            return TreeNode(n=ys.size, n_features=n_features, value=leaf_value)
        candidates = feature_sampler(n_features) if feature_sampler else all_features
        rule = best_split(Xs, ys, candidates, params)
        if rule is None:
            return TreeNode(n=ys.size, n_features=n_features, value=leaf_value)
        mask = Xs[:, rule.feature] <= rule.threshold
        return TreeNode(
            n=ys.size,
            n_features=n_features,
            rule=rule,
            left=grow(Xs[mask], ys[mask], depth + 1),
            right=grow(Xs[~mask], ys[~mask], depth + 1),
        )

    return grow(X, y, 0)


def predict_tree(node: TreeNode, row) -> float:
    """Descend by split rules to a leaf and return its value."""
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1 or row.size != node.n_features:
        raise ShapeError(
            f"row has {row.size} features, tree was trained on {node.n_features}"
        )
    while not node.is_leaf:
        node = node.left if row[node.rule.feature] <= node.rule.threshold else node.right
    return float(node.value)


def predict_tree_batch(node: TreeNode, X) -> np.ndarray:
    """Vectorized predict_tree over the rows of X."""
    X = _as_matrix(X)
    if X.shape[1] != node.n_features:
        raise ShapeError(
            f"rows have {X.shape[1]} features, tree was trained on {node.n_features}"
        )
    out = np.empty(X.shape[0], dtype=np.float64)
    stack = [(node, np.arange(X.shape[0]))]
    while stack:
        nd, idx = stack.pop()
        if idx.size == 0:
            continue
        if nd.is_leaf:
            out[idx] = nd.value
            continue
        mask = X[idx, nd.rule.feature] <= nd.rule.threshold
        stack.append((nd.left, idx[mask]))
        stack.append((nd.right, idx[~mask]))
    return out
