"""Walk a raw trending-video CSV through ingestion and a first look at the data.

Run from anywhere:

    python demos/01_ingest_and_eda.py

The script parses the bundled synthetic corpus, reports what survived
validation, then computes the correlation structure and flags outliers
the same way `tubepulse eda` does.
"""

from pathlib import Path

from tubepulse.eda import correlation_matrix, iqr_outliers, threshold_pairs
from tubepulse.features import POST_UPLOAD, build_matrix
from tubepulse.ingest import parse_csv

DATA = Path(__file__).resolve().parents[1] / "data"


def main() -> None:
    path = DATA / "synthetic_200.csv"
    records, report = parse_csv(path)

    print(f"parsed {path.name}: {report.accepted} accepted, {report.rejected} rejected")
    for line_no, reason in report.row_errors[:5]:
        print(f"  line {line_no}: {reason}")

    first = records[0]
    print(f"\nfirst record: {first.video_id!r}, category {first.category_id}, "
          f"{first.view_count:,} views")
    print(f"  published {first.published_at.isoformat()}")
    print(f"  trending  {first.trending_date.isoformat()}")
    print(f"  tags      {first.tags[:4]}{'...' if len(first.tags) > 4 else ''}")

    matrix = build_matrix(records, POST_UPLOAD)
    print(f"\nfeature matrix: {matrix.n_rows} rows x {matrix.X.shape[1]} columns")
    print(f"  columns: {', '.join(matrix.columns)}")

    # Which engineered columns move with the target?
    corr = correlation_matrix(matrix)
    if corr.degenerate:
        print(f"  constant columns skipped: {', '.join(corr.degenerate)}")

    print("\ncorrelation with views:")
    for name in corr.labels:
        if name == "views" or name in corr.degenerate:
            continue
        r = corr.value(name, "views")
        bar = "#" * int(abs(r) * 40)
        print(f"  {name:>14}  {r:+.3f}  {bar}")

    pairs = threshold_pairs(corr, 0.5)
    print(f"\n{len(pairs)} pairs with |r| >= 0.5:")
    for a, b, r in pairs[:8]:
        print(f"  {a} ~ {b}: {r:+.3f}")

    # Views are heavy tailed; the IQR fence catches the runaway rows.
    views = matrix.y
    fence = iqr_outliers(views, k=1.5)
    flagged = fence.outlier_row_indices
    print(f"\nIQR outliers in views (k=1.5): {len(flagged)} of {len(views)} rows")
    print(f"  fences: [{fence.lower_fence:,.0f}, {fence.upper_fence:,.0f}]")
    for idx in flagged[:5]:
        print(f"  row {idx}: {int(views[idx]):,} views ({records[idx].video_id})")


if __name__ == "__main__":
    main()
