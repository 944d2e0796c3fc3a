"""Turn video records into numeric feature rows.

The engineered columns are the time-difference set used throughout the
toolkit, in this fixed order:

    cid        category id (ordinal; trees split on thresholds)
    cd, rd     comments / ratings disabled, 0 or 1
    dd         whole days between publish and the as-of instant
    dh         total whole hours between publish and the as-of instant
               (NOT the remainder: dd == dh // 24)
    py, pm     publish year and month
    ty, tm     as-of year and month
    tag_count  number of tags
    title_len  title length in Unicode scalar values
    desc_len   description length in Unicode scalar values

plus, under the post-upload profile only, the engagement counts
likes / dislikes / comment_count.  Two profiles exist because a creator
planning a video has no engagement counts yet; models are trained per
profile and the profile travels with the model.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .errors import EmptyDatasetError, OrderingError, ParameterError
from .ingest import parse_timestamp

PROFILE_VERSION = 1

_BASE_COLUMNS = (
    "cid", "cd", "rd", "dd", "dh", "py", "pm", "ty", "tm",
    "tag_count", "title_len", "desc_len",
)
_ENGAGEMENT_COLUMNS = ("likes", "dislikes", "comment_count")
CHANNEL_COUNT_COLUMN = "channel_video_count"


@dataclass(frozen=True)
class FeatureProfile:
    """Named, versioned, ordered feature column set."""

    name: str
    columns: tuple[str, ...]
    version: int = PROFILE_VERSION

    def to_dict(self) -> dict:
        return {"name": self.name, "version": self.version, "columns": list(self.columns)}

    @staticmethod
    def from_dict(d: dict) -> "FeatureProfile":
        return FeatureProfile(
            name=str(d["name"]),
            columns=tuple(str(c) for c in d["columns"]),
            version=int(d["version"]),
        )


PRE_UPLOAD = FeatureProfile("pre_upload", _BASE_COLUMNS)
POST_UPLOAD = FeatureProfile("post_upload", _BASE_COLUMNS + _ENGAGEMENT_COLUMNS)

_PROFILES = {"pre_upload": PRE_UPLOAD, "post_upload": POST_UPLOAD,
             "pre": PRE_UPLOAD, "post": POST_UPLOAD}


def profile_by_name(name: str) -> FeatureProfile:
    try:
        return _PROFILES[name.strip().lower()]
    except KeyError:
        raise ParameterError(
            f"unknown profile {name!r}; expected one of pre_upload, post_upload"
        ) from None


def with_channel_counts(profile: FeatureProfile) -> FeatureProfile:
    """Variant profile with a per-channel video frequency column (off by default)."""
    if CHANNEL_COUNT_COLUMN in profile.columns:
        return profile
    return FeatureProfile(profile.name + "+chan", profile.columns + (CHANNEL_COUNT_COLUMN,),
                          profile.version)


@dataclass(frozen=True)
class FeatureVector:
    """One numeric row, aligned to its profile's column order."""

    profile: FeatureProfile
    values: np.ndarray
    target: float | None = None

    def value(self, column: str) -> float:
        return float(self.values[self.profile.columns.index(column)])


@dataclass(frozen=True)
class FeatureMatrix:
    """Rectangular feature block; row i corresponds to input record i."""

    profile: FeatureProfile
    X: np.ndarray
    y: np.ndarray | None = None

    @property
    def columns(self) -> tuple[str, ...]:
        return self.profile.columns

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.profile.columns.index(name)]


@dataclass(frozen=True)
class Draft:
    """Candidate video details as a creator would enter them pre-upload."""

    title: str
    published_at: datetime
    as_of: datetime
    description: str = ""
    tags: tuple[str, ...] = ()
    category_id: int = 0
    channel_title: str = ""
    likes: int | None = None
    dislikes: int | None = None
    comment_count: int | None = None
    comments_disabled: bool = False
    ratings_disabled: bool = False
    draft_id: str | None = None

    @staticmethod
    def from_dict(d: dict) -> "Draft":
        def opt_count(key: str) -> int | None:
            v = d.get(key)
            if v is None:
                return None
            n = int(v)
            if n < 0:
                raise ParameterError(f"{key} must be non-negative, got {n}")
            return n

        return Draft(
            title=str(d.get("title", "")),
            published_at=parse_timestamp(str(d["published_at"])),
            as_of=parse_timestamp(str(d["as_of"])),
            description=str(d.get("description", "")),
            tags=tuple(str(t) for t in d.get("tags", []) if str(t)),
            category_id=int(d.get("category_id", 0)),
            channel_title=str(d.get("channel_title", "")),
            likes=opt_count("likes"),
            dislikes=opt_count("dislikes"),
            comment_count=opt_count("comment_count"),
            draft_id=str(d["id"]) if "id" in d else None,
        )


def infer_profile(likes, dislikes, comment_count) -> FeatureProfile:
    """Engagement counts all present -> post-upload, else pre-upload."""
    if likes is not None and dislikes is not None and comment_count is not None:
        return POST_UPLOAD
    return PRE_UPLOAD


def time_deltas(published_at: datetime, as_of: datetime) -> tuple[int, int]:
    """Whole days and total whole hours elapsed between the two instants.

    dh counts TOTAL hours (a 3-day 13-hour gap is dh=85) and dd == dh // 24.
    """
    elapsed = (as_of - published_at).total_seconds()
    if elapsed < 0:
        raise OrderingError(
            f"as_of {as_of.isoformat()} earlier than published_at {published_at.isoformat()}"
        )
    dh = int(elapsed // 3600)
    return dh // 24, dh


def featurize(record, as_of: datetime, profile: FeatureProfile,
              channel_video_count: int | None = None) -> FeatureVector:
    """Build the profile's feature row for one record or draft.

    For training rows pass as_of = record.trending_date; the target is
    taken from view_count when the record has one.
    """
    dd, dh = time_deltas(record.published_at, as_of)
    base = {
        "cid": float(record.category_id),
        "cd": 1.0 if getattr(record, "comments_disabled", False) else 0.0,
        "rd": 1.0 if getattr(record, "ratings_disabled", False) else 0.0,
        "dd": float(dd),
        "dh": float(dh),
        "py": float(record.published_at.year),
        "pm": float(record.published_at.month),
        "ty": float(as_of.year),
        "tm": float(as_of.month),
        "tag_count": float(len(record.tags)),
        "title_len": float(len(record.title)),
        "desc_len": float(len(record.description)),
    }
    values = np.empty(len(profile.columns), dtype=np.float64)
    for i, col in enumerate(profile.columns):
        if col in base:
            values[i] = base[col]
        elif col in _ENGAGEMENT_COLUMNS:
            raw = getattr(record, col, None)
            if raw is None:
                raise ParameterError(
                    f"profile {profile.name!r} needs {col}, absent on this input"
                )
            values[i] = float(raw)
        elif col == CHANNEL_COUNT_COLUMN:
            if channel_video_count is None:
                raise ParameterError(
                    f"profile {profile.name!r} needs {CHANNEL_COUNT_COLUMN}"
                )
            values[i] = float(channel_video_count)
        else:
            raise ParameterError(f"unknown feature column {col!r}")
    target = getattr(record, "view_count", None)
    return FeatureVector(profile=profile, values=values,
                         target=None if target is None else float(target))


def build_matrix(records: Sequence, profile: FeatureProfile) -> FeatureMatrix:
    """Featurize a batch with as_of = each record's trending_date."""
    if not records:
        raise EmptyDatasetError("no records to featurize")
    channel_counts = None
    if CHANNEL_COUNT_COLUMN in profile.columns:
        counts: dict[str, int] = {}
        for r in records:
            key = getattr(r, "channel_id", "")
            counts[key] = counts.get(key, 0) + 1
        channel_counts = [counts[getattr(r, "channel_id", "")] for r in records]

    rows = []
    targets = []
    for i, record in enumerate(records):
        fv = featurize(
            record, record.trending_date, profile,
            channel_video_count=None if channel_counts is None else channel_counts[i],
        )
        rows.append(fv.values)
        targets.append(fv.target)
    X = np.vstack(rows)
    y = None
    if all(t is not None for t in targets):
        y = np.asarray(targets, dtype=np.float64)
    return FeatureMatrix(profile=profile, X=X, y=y)


def matrix_to_csv(matrix: FeatureMatrix, sink: Union[str, Path, IO[str]]) -> None:
    """Dump the matrix for inspection; the target goes last as 'views'."""
    owns = isinstance(sink, (str, Path))
    out = open(sink, "w", encoding="utf-8", newline="") if owns else sink
    try:
        header = list(matrix.columns) + (["views"] if matrix.y is not None else [])
        out.write(",".join(header) + "\n")
        for i in range(matrix.n_rows):
            cells = [_num(v) for v in matrix.X[i]]
            if matrix.y is not None:
                cells.append(_num(matrix.y[i]))
            out.write(",".join(cells) + "\n")
    finally:
        if owns:
            out.close()


def _num(v: float) -> str:
    f = float(v)
    return str(int(f)) if f.is_integer() else repr(f)
