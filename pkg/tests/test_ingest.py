import io
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings, strategies as st

from tubepulse.errors import FormatError, SchemaError
from tubepulse.ingest import (
    IngestReport,
    VideoRecord,
    format_tags,
    parse_csv,
    parse_tags,
    parse_timestamp,
    records_to_csv,
)

UTC = timezone.utc

HEADER = ("video_id,title,publishedAt,channelId,channelTitle,categoryId,"
          "trending_date,tags,view_count,likes,dislikes,comment_count,"
          "thumbnail_link,comments_disabled,ratings_disabled,description")


def row(video_id="vid01", title="A Video", published="2018-04-10T14:00:00Z",
        channel_id="chan1", channel_title="Chan", category_id="24",
        trending="2018-04-14T03:00:00Z", tags="music|live",
        view_count="1000", likes="50", dislikes="5", comment_count="10",
        thumb="https://example.invalid/t.jpg", cd="False", rd="False",
        description="desc") -> str:
    return ",".join([video_id, title, published, channel_id, channel_title,
                     category_id, trending, tags, view_count, likes, dislikes,
                     comment_count, thumb, cd, rd, description])


def make_csv(*rows: str) -> bytes:
    return ("\n".join([HEADER, *rows]) + "\n").encode("utf-8")


class TestParseTimestamp:
    def test_utc_designator(self):
        assert parse_timestamp("2018-04-10T14:00:00Z") == datetime(
            2018, 4, 10, 14, 0, 0, tzinfo=UTC)

    def test_epoch(self):
        assert parse_timestamp("1970-01-01T00:00:00Z") == datetime(
            1970, 1, 1, tzinfo=UTC)

    def test_slash_date_rejected(self):
        with pytest.raises(FormatError) as err:
            parse_timestamp("10/04/2018")
        assert "10/04/2018" in str(err.value)

    def test_zone_less_rejected(self):
        with pytest.raises(FormatError):
            parse_timestamp("2018-04-10T14:00:00")

    def test_offset_normalized_to_utc(self):
        got = parse_timestamp("2018-04-10T16:00:00+02:00")
        assert got == datetime(2018, 4, 10, 14, 0, 0, tzinfo=UTC)

    def test_subseconds_truncated(self):
        got = parse_timestamp("2018-04-10T14:00:00.987Z")
        assert got.microsecond == 0

    def test_date_only_needs_opt_in(self):
        with pytest.raises(FormatError):
            parse_timestamp("2018-04-10")
        got = parse_timestamp("2018-04-10", allow_date_only=True)
        assert got == datetime(2018, 4, 10, tzinfo=UTC)


class TestParseTags:
    def test_empty_cell(self):
        assert parse_tags("") == ()

    def test_pipe_delimited(self):
        assert parse_tags("cricket|ipl|highlights") == ("cricket", "ipl", "highlights")

    def test_no_tag_sentinel(self):
        assert parse_tags("[None]") == ()
        assert parse_tags("[none]") == ()

    def test_quotes_and_whitespace_stripped(self):
        assert parse_tags(' "music" | live ') == ("music", "live")

    def test_empties_dropped_order_preserved(self):
        assert parse_tags("a||b|  |c") == ("a", "b", "c")


class TestFormatTags:
    def test_empty_maps_to_sentinel(self):
        assert format_tags(()) == "[None]"

    def test_join(self):
        assert format_tags(("a", "b")) == "a|b"

    def test_pipe_inside_tag_rejected(self):
        with pytest.raises(FormatError):
            format_tags(("a|b",))


class TestParseCsv:
    def test_clean_rows(self):
        records, report = parse_csv(make_csv(row(), row(video_id="vid02"),
                                             row(video_id="vid03")))
        assert len(records) == 3
        assert report == IngestReport(accepted=3, rejected=0)
        assert records[0].category_id == 24
        assert records[0].tags == ("music", "live")

    def test_bad_view_count_rejected_row_named(self):
        records, report = parse_csv(make_csv(row(), row(view_count="abc"), row()))
        assert report.accepted == 2 and report.rejected == 1
        assert report.row_errors[0][0] == 2
        assert "view_count" in report.row_errors[0][1]

    def test_trending_before_publish_rejected(self):
        bad = row(published="2018-04-14T03:00:00Z", trending="2018-04-10T14:00:00Z")
        records, report = parse_csv(make_csv(bad))
        assert report.rejected == 1 and not records
        assert "earlier" in report.row_errors[0][1]

    def test_missing_column_fatal(self):
        text = HEADER.replace("view_count,", "") + "\n"
        with pytest.raises(SchemaError) as err:
            parse_csv(text.encode())
        assert "view_count" in str(err.value)

    def test_header_spelling_variants_accepted(self):
        variant = HEADER.replace("publishedAt", "published_at").replace(
            "categoryId", "category_id")
        records, report = parse_csv((variant + "\n" + row() + "\n").encode())
        assert report.accepted == 1

    def test_quoted_comma_and_newline_fields(self):
        title = '"Hello, world"'
        desc = '"line one\nline two"'
        records, _ = parse_csv(make_csv(row(title=title, description=desc)))
        assert records[0].title == "Hello, world"
        assert records[0].description == "line one\nline two"

    def test_accepted_plus_rejected_equals_total(self):
        rows = [row(), row(likes="-3"), row(view_count="x"), row(video_id="v4")]
        _, report = parse_csv(make_csv(*rows))
        assert report.accepted + report.rejected == len(rows)

    def test_negative_counts_rejected(self):
        _, report = parse_csv(make_csv(row(dislikes="-1")))
        assert report.rejected == 1

    def test_bool_parsing_strict(self):
        _, report = parse_csv(make_csv(row(cd="yes")))
        assert report.rejected == 1
        records, _ = parse_csv(make_csv(row(cd="TRUE", rd="false")))
        assert records[0].comments_disabled is True
        assert records[0].ratings_disabled is False

    def test_empty_file_is_schema_error(self):
        with pytest.raises(SchemaError):
            parse_csv(b"")


def _rt(records: list[VideoRecord]) -> list[VideoRecord]:
    buf = io.StringIO()
    records_to_csv(records, buf)
    parsed, report = parse_csv(buf.getvalue().encode())
    assert report.rejected == 0
    return parsed


def test_round_trip_on_fixture(table4_csv):
    records, report = parse_csv(table4_csv)
    assert report.rejected == 0 and len(records) == 5
    assert _rt(records) == records


def test_round_trip_keeps_country_when_present():
    import dataclasses
    base, _ = parse_csv(make_csv(row()))
    rec = dataclasses.replace(base[0], country="IN")
    assert _rt([rec]) == [rec]


_clean_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\x00\r"),
    max_size=40,
)
_tag = st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Lu", "Nd"),
                           whitelist_characters=" -"),
    min_size=1, max_size=12,
).map(str.strip).filter(lambda t: t and t.lower() != "[none]")


@settings(max_examples=80, deadline=None)
@given(
    title=_clean_text,
    description=_clean_text,
    tags=st.lists(_tag, max_size=6),
    counts=st.tuples(*[st.integers(min_value=0, max_value=10 ** 9)] * 4),
    gap_hours=st.integers(min_value=0, max_value=2000),
    flags=st.tuples(st.booleans(), st.booleans()),
)
def test_round_trip_property(title, description, tags, counts, gap_hours, flags):
    pub = datetime(2018, 3, 1, 12, 30, 0, tzinfo=UTC)
    rec = VideoRecord(
        video_id="fuzzvid", title=title, published_at=pub,
        channel_id="chanF", channel_title="Fuzz Channel", category_id=10,
        trending_date=pub + __import__("datetime").timedelta(hours=gap_hours),
        tags=tuple(tags), view_count=counts[0], likes=counts[1],
        dislikes=counts[2], comment_count=counts[3],
        thumbnail_link="https://example.invalid/x.jpg",
        comments_disabled=flags[0], ratings_disabled=flags[1],
        description=description,
    )
    back = _rt([rec])
    assert back == [rec]
    assert all(t for t in back[0].tags)
    assert back[0].trending_date >= back[0].published_at
