"""Trend matching: static word embeddings, cosine similarity, rank boost.

A draft's title, tags, and description are tokenized and averaged into a
single phrase vector, compared against each trending topic's phrase
vector, and the best cosine similarity (clamped to [0, 1]) becomes the
match score.  rank_score = predicted_views * (1 + beta * match_score).
"""
from __future__ import annotations

import datetime as dt
import os
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateSeriesError, FormatError, ParameterError, ShapeError
from .ingest import parse_timestamp

DEFAULT_BOOST = 0.5
DEFAULT_TOPIC_LIMIT = 100

# Deliberately small: enough to strip function words from titles and tags
# without dragging in a full NLP dependency.  Single-character tokens are
# dropped by the length rule before this list is consulted.
STOPWORDS = frozenset("""
    the an and or of to in on for with is are was were be been being this
    that these those it its as at by from but not no nor so if then than
    too very can will just how what when where who whom which why all any
    both each few more most other some such only own same about into over
    under again once here there out off up down do does did doing have has
    had having you your yours we our ours they them their theirs he him his
    she her hers me my mine am
""".split())

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop stopwords and len<2."""
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        if len(tok) < 2 or tok in STOPWORDS:
            continue
        out.append(tok)
    return out


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable token -> vector map with a fixed dimension."""

    dim: int
    entries: dict
    normalization: str = "lowercase"
    duplicates_skipped: int = 0
    zero_rows_skipped: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def vector(self, token: str) -> Optional[np.ndarray]:
        return self.entries.get(token)


def load_embeddings(source) -> EmbeddingTable:
    """Read a word2vec text-format table: "vocab dim" header, then rows.

    Tokens are lowercased; on collision the first occurrence wins.  Rows
    whose vector is all zeros are skipped (cosine against them is
    undefined).  Both kinds of skip are counted on the returned table.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_embeddings(fh)

    header = source.readline()
    parts = header.split()
    if len(parts) != 2:
        raise FormatError(f"line 1: expected header 'vocab_size dim', got {header.strip()!r}")
    try:
        declared_vocab, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"line 1: header fields must be integers, got {header.strip()!r}")
    if dim < 1:
        raise FormatError(f"line 1: dimension must be positive, got {dim}")

    entries: dict = {}
    duplicates = 0
    zero_rows = 0
    for lineno, line in enumerate(source, start=2):
        if not line.strip():
            continue
        cells = line.split()
        if len(cells) != dim + 1:
            raise FormatError(
                f"line {lineno}: expected token plus {dim} values, got {len(cells)} fields")
        token = cells[0].lower()
        try:
            vec = np.array([float(c) for c in cells[1:]], dtype=np.float64)
        except ValueError:
            raise FormatError(f"line {lineno}: non-numeric vector component")
        if not np.any(vec):
            zero_rows += 1
            continue
        if token in entries:
            duplicates += 1
            continue
        entries[token] = vec
    # The declared vocab size is advisory; skipped rows legitimately shrink
    # the table, so only wild disagreement is worth rejecting.
    del declared_vocab
    return EmbeddingTable(dim=dim, entries=entries,
                          duplicates_skipped=duplicates,
                          zero_rows_skipped=zero_rows)


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ShapeError(f"vector dims differ: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise DegenerateSeriesError("cosine similarity is undefined for a zero vector")
    return float(np.dot(u, v) / (nu * nv))


def phrase_vector(phrase: str, table: EmbeddingTable
                  ) -> tuple[Optional[np.ndarray], tuple[str, ...]]:
    """Mean of in-vocabulary token vectors; (None, skipped) when all OOV."""
    tokens = tokenize(phrase)
    vecs = []
    skipped = []
    for tok in tokens:
        vec = table.vector(tok)
        if vec is None:
            skipped.append(tok)
        else:
            vecs.append(vec)
    if not vecs:
        return None, tuple(skipped)
    return np.mean(np.stack(vecs), axis=0), tuple(skipped)


def keyword_text(item) -> str:
    """Title, tags, and description joined with single spaces."""
    pieces = []
    title = getattr(item, "title", "") or ""
    if title:
        pieces.append(title)
    tags = getattr(item, "tags", ()) or ()
    pieces.extend(t for t in tags if t)
    description = getattr(item, "description", "") or ""
    if description:
        pieces.append(description)
    return " ".join(pieces)


@dataclass(frozen=True)
class TrendingTopics:
    topics: tuple
    fetched_at: Optional[dt.datetime] = None
    source: str = ""

    def __len__(self) -> int:
        return len(self.topics)

    def to_dict(self) -> dict:
        return {
            "topics": list(self.topics),
            "fetched_at": self.fetched_at.isoformat() if self.fetched_at else None,
            "source": self.source,
        }


_FETCHED_RE = re.compile(r"#\s*fetched:\s*(\S.*)$")


def load_topics(path, limit: int = DEFAULT_TOPIC_LIMIT) -> TrendingTopics:
    """One phrase per line; '#' comment lines skipped.

    fetched_at comes from a '# fetched: <ISO-8601>' comment when present,
    otherwise the file's mtime.  The list is truncated to `limit`.
    """
    if limit < 1:
        raise ParameterError(f"topic limit must be positive, got {limit}")
    fetched_at = None
    topics = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _FETCHED_RE.match(line)
                if m and fetched_at is None:
                    fetched_at = parse_timestamp(m.group(1).strip())
                continue
            topics.append(line)
    if fetched_at is None:
        fetched_at = dt.datetime.fromtimestamp(os.path.getmtime(path), tz=dt.timezone.utc)
    return TrendingTopics(topics=tuple(topics[:limit]), fetched_at=fetched_at,
                          source=str(path))


@dataclass(frozen=True)
class MatchReport:
    """Per-topic similarities plus the clamped best-match score."""

    per_topic: tuple
    match_score: float
    best_topic: Optional[str]
    skipped_oov_tokens: tuple = ()
    unscorable: bool = False
    skipped_topics: tuple = ()

    def to_dict(self) -> dict:
        return {
            "match_score": self.match_score,
            "best_topic": self.best_topic,
            "per_topic": [{"topic": t, "similarity": s} for t, s in self.per_topic],
            "skipped_oov_tokens": list(self.skipped_oov_tokens),
            "skipped_topics": list(self.skipped_topics),
            "unscorable": self.unscorable,
        }


def match_score(item, topics: TrendingTopics, table: EmbeddingTable) -> MatchReport:
    """Best cosine similarity between the item's keywords and any topic.

    Topics with no in-vocabulary tokens are skipped rather than scored.
    If the item itself has no in-vocabulary tokens, or every topic was
    skipped, the report is flagged unscorable with match_score 0.
    """
    if len(topics) == 0:
        raise ParameterError("trending topics list is empty")
    vec, oov = phrase_vector(keyword_text(item), table)
    if vec is None:
        return MatchReport(per_topic=(), match_score=0.0, best_topic=None,
                           skipped_oov_tokens=oov, unscorable=True,
                           skipped_topics=tuple(topics.topics))

    scored = []
    skipped = []
    for topic in topics.topics:
        tvec, _ = phrase_vector(topic, table)
        if tvec is None:
            skipped.append(topic)
            continue
        scored.append((topic, cosine(vec, tvec)))
    if not scored:
        return MatchReport(per_topic=(), match_score=0.0, best_topic=None,
                           skipped_oov_tokens=oov, unscorable=True,
                           skipped_topics=tuple(skipped))
    # stable sort keeps file order among exact ties
    scored.sort(key=lambda pair: -pair[1])
    best_topic, best_sim = scored[0]
    score = min(1.0, max(0.0, best_sim))
    return MatchReport(per_topic=tuple(scored), match_score=score,
                       best_topic=best_topic, skipped_oov_tokens=oov,
                       skipped_topics=tuple(skipped))


@dataclass(frozen=True)
class RankReport:
    predicted_views: float
    match: MatchReport
    rank_score: float
    boost_factor: float

    def to_dict(self) -> dict:
        return {
            "predicted_views": self.predicted_views,
            "rank_score": self.rank_score,
            "boost_factor": self.boost_factor,
            "match": self.match.to_dict(),
        }


def rank_score(predicted_views: float, match: MatchReport,
               beta: float = DEFAULT_BOOST) -> RankReport:
    """predicted_views * (1 + beta * match_score)."""
    if predicted_views < 0:
        raise ParameterError(f"predicted views must be >= 0, got {predicted_views}")
    if beta < 0:
        raise ParameterError(f"boost factor must be >= 0, got {beta}")
    score = predicted_views * (1.0 + beta * match.match_score)
    return RankReport(predicted_views=float(predicted_views), match=match,
                      rank_score=float(score), boost_factor=float(beta))
