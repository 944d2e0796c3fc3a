"""Train all three regressors on the synthetic corpus and compare them.

    python demos/02_train_and_evaluate.py

Trains a single decision tree, a random forest, and boosted trees on the
same split, prints the comparison table, then saves the best model and
proves the file round-trips.
"""

import tempfile
from pathlib import Path

from tubepulse.ensemble import BoostParams, ForestParams, TreeParams
from tubepulse.evaluation import render_reports, train_and_score
from tubepulse.features import POST_UPLOAD, build_matrix
from tubepulse.ingest import parse_csv
from tubepulse.model import load_model, predict_rows, save_model

DATA = Path(__file__).resolve().parents[1] / "data"

# Small enough to finish in seconds, big enough to separate the three kinds.
MEMBER = TreeParams(max_depth=8, min_samples_leaf=2)
SPECS = [
    ("tree", TreeParams(max_depth=8, min_samples_leaf=2)),
    ("forest", ForestParams(n_trees=30, feature_fraction=1 / 3, tree=MEMBER)),
    ("boosted", BoostParams(n_rounds=60, eta=0.1, leaf_l2=1.0)),
]


def main() -> None:
    records, _ = parse_csv(DATA / "synthetic_200.csv")
    matrix = build_matrix(records, POST_UPLOAD)
    print(f"corpus: {matrix.n_rows} rows, profile {matrix.profile.name!r}")

    reports = []
    best = None
    for kind, params in SPECS:
        model, report = train_and_score(kind, matrix, params=params,
                                        seed=7, ratio=0.7, transform="log1p")
        reports.append(report)
        if kind == "boosted":
            best = model
        print(f"  trained {kind}: test accuracy {report.test_raw.r2 * 100:.1f}%")

    print()
    print(render_reports(reports))

    # Persist the boosted model and make sure the file stands on its own.
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "demo.tpmodel"
        save_model(best, path)
        loaded = load_model(path)
        sample = matrix.X[:3]
        same = (predict_rows(loaded, sample) == predict_rows(best, sample)).all()
        print(f"\nsaved {path.name} ({path.stat().st_size:,} bytes), "
              f"reload predictions identical: {same}")
        print(f"model version: {loaded.version}")


if __name__ == "__main__":
    main()
