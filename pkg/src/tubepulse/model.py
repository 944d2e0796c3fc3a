"""Trained-model container, target transforms, and persistence.

Models are stored as a versioned JSON container with a magic string and a
SHA-256 integrity checksum.  Serialization is canonical (sorted keys,
compact separators), so identical training inputs produce byte-identical
files.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Union

import numpy as np

from .errors import ModelLoadError, ParameterError, ProfileMismatchError
from .features import FeatureMatrix, FeatureProfile, FeatureVector
from .trees import TreeNode, predict_tree, predict_tree_batch

MAGIC = "tubepulse-model"
FORMAT_VERSION = 1

KIND_TREE = "tree"
KIND_FOREST = "forest"
KIND_BOOSTED = "boosted"
KINDS = (KIND_TREE, KIND_FOREST, KIND_BOOSTED)

# tag -> (forward, inverse); targets are trained in forward space.
_TRANSFORMS = {
    "identity": (lambda a: np.asarray(a, dtype=np.float64), lambda a: np.asarray(a, dtype=np.float64)),
    "log1p": (np.log1p, np.expm1),
}


def transform_target(tag: str, y):
    try:
        fwd, _ = _TRANSFORMS[tag]
    except KeyError:
        raise ParameterError(f"unknown target transform {tag!r}") from None
    return fwd(np.asarray(y, dtype=np.float64))


def invert_target(tag: str, y):
    try:
        _, inv = _TRANSFORMS[tag]
    except KeyError:
        raise ParameterError(f"unknown target transform {tag!r}") from None
    return inv(np.asarray(y, dtype=np.float64))


def dataset_fingerprint(matrix: FeatureMatrix) -> str:
    """Stable digest of column order plus raw cell bytes."""
    h = hashlib.sha256()
    h.update(",".join(matrix.columns).encode("utf-8"))
    h.update(np.ascontiguousarray(matrix.X, dtype=np.float64).tobytes())
    if matrix.y is not None:
        h.update(np.ascontiguousarray(matrix.y, dtype=np.float64).tobytes())
    return h.hexdigest()


@dataclass(frozen=True)
class RegressionModel:
    """A trained predictor: member trees plus everything needed to reuse them."""

    kind: str
    trees: tuple[TreeNode, ...]
    transform: str = "identity"
    profile: FeatureProfile | None = None
    base_score: float = 0.0   # boosted only
    eta: float = 1.0          # boosted only
    params: dict = field(default_factory=dict)
    training_meta: dict = field(default_factory=dict)

    @property
    def version(self) -> str:
        fp = str(self.training_meta.get("dataset_fingerprint", ""))[:12]
        return f"{self.kind}-v{FORMAT_VERSION}" + (f"-{fp}" if fp else "")


def predict_model_space(model: RegressionModel, row) -> float:
    """Raw model output before the target transform is inverted."""
    if model.kind == KIND_TREE:
        return predict_tree(model.trees[0], row)
    if model.kind == KIND_FOREST:
        return float(np.mean([predict_tree(t, row) for t in model.trees]))
    if model.kind == KIND_BOOSTED:
        return model.base_score + model.eta * float(
            np.sum([predict_tree(t, row) for t in model.trees])
        )
    raise ParameterError(f"unknown model kind {model.kind!r}")


def predict_matrix_model_space(model: RegressionModel, X) -> np.ndarray:
    """Vectorized predict_model_space over the rows of X."""
    if model.kind == KIND_TREE:
        return predict_tree_batch(model.trees[0], X)
    if model.kind == KIND_FOREST:
        acc = np.zeros(np.asarray(X).shape[0], dtype=np.float64)
        for t in model.trees:
            acc += predict_tree_batch(t, X)
        return acc / len(model.trees)
    if model.kind == KIND_BOOSTED:
        acc = np.full(np.asarray(X).shape[0], model.base_score, dtype=np.float64)
        for t in model.trees:
            acc += model.eta * predict_tree_batch(t, X)
        return acc
    raise ParameterError(f"unknown model kind {model.kind!r}")


def predict_rows(model: RegressionModel, X) -> np.ndarray:
    """Predicted view counts for each row: inverse-transformed, clamped at 0."""
    raw = invert_target(model.transform, predict_matrix_model_space(model, X))
    return np.maximum(raw, 0.0)


def predict(model: RegressionModel, fv: FeatureVector) -> float:
    """Predicted view count for one feature vector of the model's profile."""
    if model.profile is None:
        raise ParameterError("model carries no feature profile; use predict_rows")
    if (fv.profile.name, fv.profile.version, fv.profile.columns) != (
        model.profile.name, model.profile.version, model.profile.columns
    ):
        raise ProfileMismatchError(
            f"input profile {fv.profile.name} v{fv.profile.version} does not match "
            f"model profile {model.profile.name} v{model.profile.version}"
        )
    value = float(invert_target(model.transform, predict_model_space(model, fv.values)))
    value = max(value, 0.0)
    if not np.isfinite(value):
        raise ParameterError("prediction is not finite")
    return value


def _container(model: RegressionModel) -> dict:
    return {
        "magic": MAGIC,
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "transform": model.transform,
        "profile": model.profile.to_dict() if model.profile else None,
        "base_score": model.base_score,
        "eta": model.eta,
        "params": model.params,
        "training_meta": model.training_meta,
        "trees": [t.to_dict() for t in model.trees],
        "n_features": model.trees[0].n_features,
    }


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def save_model(model: RegressionModel, sink: Union[str, Path, IO[str]]) -> None:
    payload = _container(model)
    payload["checksum"] = hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()
    text = _canonical(payload)
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sink.write(text)


def load_model(source: Union[str, Path, IO[str]]) -> RegressionModel:
    """Inverse of save_model; never returns a partial model."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            text = f.read()
    else:
        text = source.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelLoadError(f"model file is truncated or corrupt: {exc}") from None
    if not isinstance(payload, dict) or payload.get("magic") != MAGIC:
        raise ModelLoadError("not a model file (magic string missing)")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelLoadError(
            f"unsupported model format version {version!r} (this build reads {FORMAT_VERSION})"
        )
    stored = payload.pop("checksum", None)
    expected = hashlib.sha256(_canonical(payload).encode("utf-8")).hexdigest()
    if stored != expected:
        raise ModelLoadError("model checksum mismatch; file is corrupt")
    if payload["kind"] not in KINDS:
        raise ModelLoadError(f"unknown model kind {payload['kind']!r}")
    n_features = int(payload["n_features"])
    return RegressionModel(
        kind=payload["kind"],
        trees=tuple(TreeNode.from_dict(t, n_features) for t in payload["trees"]),
        transform=payload["transform"],
        profile=FeatureProfile.from_dict(payload["profile"]) if payload["profile"] else None,
        base_score=float(payload["base_score"]),
        eta=float(payload["eta"]),
        params=payload["params"],
        training_meta=payload["training_meta"],
    )
