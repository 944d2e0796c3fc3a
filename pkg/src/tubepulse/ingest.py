"""Parse trending-video CSV exports into validated records.

The expected file layout is the public trending-video export: one header
row naming the columns below (spelling is matched case-insensitively and
ignoring underscores), then one row per video. Quoted fields may contain
commas and newlines per RFC-4180.

Rows that fail validation are skipped and reported, never repaired.
"""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Union

from .errors import FormatError, OrderingError, SchemaError

log = logging.getLogger(__name__)

# Tag cell conventions of the public trending dataset: pipe-delimited,
# individual tags may be double-quoted, "[None]" marks a tagless video.
NO_TAGS_SENTINEL = "[none]"

# Canonical column name -> header spellings seen in the wild, normalized
# by lowercasing and dropping underscores.
_REQUIRED_COLUMNS = {
    "video_id": "videoid",
    "title": "title",
    "published_at": "publishedat",
    "channel_id": "channelid",
    "channel_title": "channeltitle",
    "category_id": "categoryid",
    "trending_date": "trendingdate",
    "tags": "tags",
    "view_count": "viewcount",
    "likes": "likes",
    "dislikes": "dislikes",
    "comment_count": "commentcount",
    "thumbnail_link": "thumbnaillink",
    "comments_disabled": "commentsdisabled",
    "ratings_disabled": "ratingsdisabled",
    "description": "description",
}
_OPTIONAL_COLUMNS = {"country": "country", "country_id": "countryid"}

_CSV_HEADER = (
    "video_id", "title", "publishedAt", "channelId", "channelTitle",
    "categoryId", "trending_date", "tags", "view_count", "likes",
    "dislikes", "comment_count", "thumbnail_link", "comments_disabled",
    "ratings_disabled", "description",
)


@dataclass(frozen=True, slots=True)
class VideoRecord:
    """One validated row of a trending-video export."""

    video_id: str
    title: str
    published_at: datetime
    channel_id: str
    channel_title: str
    category_id: int
    trending_date: datetime
    tags: tuple[str, ...]
    view_count: int
    likes: int
    dislikes: int
    comment_count: int
    thumbnail_link: str
    comments_disabled: bool
    ratings_disabled: bool
    description: str
    country: str | None = None


@dataclass(frozen=True)
class IngestReport:
    """Outcome of one parse run: accepted + rejected = total data rows."""

    accepted: int
    rejected: int
    row_errors: tuple[tuple[int, str], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": self.rejected,
            "row_errors": [{"row": r, "reason": m} for r, m in self.row_errors],
        }


def parse_timestamp(raw: str, *, allow_date_only: bool = False) -> datetime:
    """Parse an ISO-8601 instant with an explicit zone into UTC.

    Sub-second precision is truncated to whole seconds.  Zone-less strings
    are rejected; with ``allow_date_only`` a bare ``YYYY-MM-DD`` is read as
    midnight UTC (some exports carry date-only trending stamps).
    """
    text = raw.strip()
    if not text:
        raise FormatError("empty timestamp")
    if allow_date_only and len(text) == 10:
        try:
            d = datetime.strptime(text, "%Y-%m-%d")
        except ValueError:
            raise FormatError(f"not an ISO-8601 timestamp: {raw!r}") from None
        return d.replace(tzinfo=timezone.utc)
    candidate = text[:-1] + "+00:00" if text.endswith(("Z", "z")) else text
    try:
        dt = datetime.fromisoformat(candidate)
    except ValueError:
        raise FormatError(f"not an ISO-8601 timestamp: {raw!r}") from None
    if dt.tzinfo is None:
        raise FormatError(f"timestamp lacks a UTC designator: {raw!r}")
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def parse_tags(raw: str) -> tuple[str, ...]:
    """Split a pipe-delimited tag cell into clean tags.

    Strips surrounding whitespace and quotes, drops empties, maps the
    dataset's no-tag sentinel to an empty tuple.  Total function.
    """
    text = raw.strip()
    if not text or text.lower() == NO_TAGS_SENTINEL:
        return ()
    tags = []
    for part in text.split("|"):
        t = part.strip()
        if len(t) >= 2 and t[0] == t[-1] and t[0] in "\"'":
            t = t[1:-1].strip()
        if t:
            tags.append(t)
    return tuple(tags)


def _parse_count(raw: str, column: str) -> int:
    try:
        value = int(raw.strip())
    except ValueError:
        raise FormatError(f"{column}: not an integer: {raw!r}") from None
    if value < 0:
        raise FormatError(f"{column}: negative value {value}")
    return value


def _parse_bool(raw: str, column: str) -> bool:
    text = raw.strip().lower()
    if text == "true":
        return True
    if text == "false":
        return False
    raise FormatError(f"{column}: expected True/False, got {raw!r}")


def _record_from_cells(cells: dict[str, str]) -> VideoRecord:
    video_id = cells["video_id"].strip()
    if not video_id:
        raise FormatError("video_id: empty")
    published_at = parse_timestamp(cells["published_at"])
    trending_date = parse_timestamp(cells["trending_date"], allow_date_only=True)
    if trending_date < published_at:
        raise OrderingError(
            f"trending_date {trending_date.isoformat()} earlier than "
            f"published_at {published_at.isoformat()}"
        )
    country = cells.get("country") or cells.get("country_id") or None
    if country is not None:
        country = country.strip() or None
    return VideoRecord(
        video_id=video_id,
        title=cells["title"],
        published_at=published_at,
        channel_id=cells["channel_id"].strip(),
        channel_title=cells["channel_title"],
        category_id=_parse_count(cells["category_id"], "category_id"),
        trending_date=trending_date,
        tags=parse_tags(cells["tags"]),
        view_count=_parse_count(cells["view_count"], "view_count"),
        likes=_parse_count(cells["likes"], "likes"),
        dislikes=_parse_count(cells["dislikes"], "dislikes"),
        comment_count=_parse_count(cells["comment_count"], "comment_count"),
        thumbnail_link=cells["thumbnail_link"].strip(),
        comments_disabled=_parse_bool(cells["comments_disabled"], "comments_disabled"),
        ratings_disabled=_parse_bool(cells["ratings_disabled"], "ratings_disabled"),
        description=cells["description"],
        country=country,
    )


Source = Union[str, Path, bytes, IO[bytes], IO[str]]


def _open_text(source: Source) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"), newline="")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def parse_csv(source: Source) -> tuple[list[VideoRecord], IngestReport]:
    """Parse a trending-video CSV into records plus a row-level report.

    Row numbers in the report are 1-based data rows (the header is row 0).
    Raises SchemaError when a required header column is missing; I/O
    problems propagate as OSError.
    """
    stream = _open_text(source)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty file: no header row") from None
        normalized = [h.strip().lower().replace("_", "") for h in header]
        positions: dict[str, int] = {}
        for canonical, spelling in {**_REQUIRED_COLUMNS, **_OPTIONAL_COLUMNS}.items():
            if spelling in normalized:
                positions[canonical] = normalized.index(spelling)
        for canonical in _REQUIRED_COLUMNS:
            if canonical not in positions:
                raise SchemaError(f"missing required column: {canonical}")

        records: list[VideoRecord] = []
        row_errors: list[tuple[int, str]] = []
        for rownum, row in enumerate(reader, start=1):
            if len(row) != len(header):
                row_errors.append(
                    (rownum, f"expected {len(header)} fields, got {len(row)}")
                )
                continue
            cells = {name: row[idx] for name, idx in positions.items()}
            try:
                records.append(_record_from_cells(cells))
            except (FormatError, OrderingError) as exc:
                log.debug("row %d rejected: %s", rownum, exc)
                row_errors.append((rownum, str(exc)))
        report = IngestReport(
            accepted=len(records),
            rejected=len(row_errors),
            row_errors=tuple(row_errors),
        )
        return records, report
    finally:
        if isinstance(source, (str, Path)):
            stream.close()


def _format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def format_tags(tags: Iterable[str]) -> str:
    """Inverse of parse_tags; empty tag lists map to the no-tag sentinel."""
    tags = tuple(tags)
    for t in tags:
        if "|" in t:
            raise FormatError(f"tag may not contain '|': {t!r}")
    return "|".join(tags) if tags else "[None]"


def records_to_csv(records: Iterable[VideoRecord], sink: Union[str, Path, IO[str]]) -> None:
    """Write records back out in the canonical column order.

    Round-trips with parse_csv field-for-field.  The country column is
    emitted only when at least one record carries it.
    """
    records = list(records)
    with_country = any(r.country is not None for r in records)
    header = _CSV_HEADER + (("country",) if with_country else ())

    owns = isinstance(sink, (str, Path))
    out = open(sink, "w", encoding="utf-8", newline="") if owns else sink
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for r in records:
            row = [
                r.video_id, r.title, _format_timestamp(r.published_at),
                r.channel_id, r.channel_title, str(r.category_id),
                _format_timestamp(r.trending_date), format_tags(r.tags),
                str(r.view_count), str(r.likes), str(r.dislikes),
                str(r.comment_count), r.thumbnail_link,
                str(r.comments_disabled), str(r.ratings_disabled),
                r.description,
            ]
            if with_country:
                row.append(r.country or "")
            writer.writerow(row)
    finally:
        if owns:
            out.close()
