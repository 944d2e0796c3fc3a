import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from tubepulse.eda import (
    correlation_matrix,
    iqr_outliers,
    pearson,
    remove_outliers,
    threshold_pairs,
)
from tubepulse.errors import (
    DegenerateSeriesError,
    InsufficientDataError,
    ParameterError,
    ShapeError,
)
from tubepulse.features import POST_UPLOAD, build_matrix
from tubepulse.ingest import parse_csv


class TestPearson:
    def test_perfect_positive(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_perfect_negative(self):
        assert pearson([1, 2, 3], [6, 4, 2]) == pytest.approx(-1.0)

    def test_uncorrelated_symmetric(self):
        # symmetric arrangement, zero covariance by construction
        assert pearson([1, 2, 3, 4], [1, 2, 2, 1]) == pytest.approx(0.0)

    def test_shift_scale_invariance(self):
        x = [3.0, 1.0, 4.0, 1.0, 5.0]
        y = [2.0, 7.0, 1.0, 8.0, 2.0]
        r = pearson(x, y)
        assert pearson([10 * v + 3 for v in x], y) == pytest.approx(r, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            pearson([1, 2], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            pearson([1.0], [2.0])

    def test_constant_series(self):
        with pytest.raises(DegenerateSeriesError):
            pearson([5, 5, 5], [1, 2, 3])

    def test_matches_oracle_on_random_series(self):
        rng = np.random.default_rng(1234)
        for _ in range(40):
            n = int(rng.integers(2, 60))
            x = rng.normal(size=n) * rng.uniform(0.5, 20)
            y = rng.normal(size=n) + 0.3 * x
            assert pearson(x, y) == pytest.approx(
                oracles.pearson(x.tolist(), y.tolist()), abs=1e-9)


def _fixture_matrix(table4_csv):
    records, _ = parse_csv(table4_csv)
    return build_matrix(records, POST_UPLOAD)


class TestCorrelationMatrix:
    def test_symmetric_unit_diagonal(self, table4_csv):
        cm = correlation_matrix(_fixture_matrix(table4_csv))
        assert np.allclose(cm.values, cm.values.T)
        assert np.allclose(np.diag(cm.values), 1.0)
        assert np.all(np.abs(cm.values) <= 1.0 + 1e-12)

    def test_target_column_included(self, table4_csv):
        cm = correlation_matrix(_fixture_matrix(table4_csv))
        assert "views" in cm.labels

    def test_degenerate_columns_listed_not_zeroed(self, table4_csv):
        cm = correlation_matrix(_fixture_matrix(table4_csv))
        # every fixture row has cd == rd == 0 and py == ty == 2018
        for col in ("cd", "rd", "py"):
            assert col in cm.degenerate
            assert col not in cm.labels

    def test_value_lookup_matches_pearson(self, table4_csv):
        m = _fixture_matrix(table4_csv)
        cm = correlation_matrix(m)
        want = pearson(m.column("likes"), m.y)
        assert cm.value("likes", "views") == pytest.approx(want, abs=1e-12)

    def test_explicit_column_subset(self, table4_csv):
        cm = correlation_matrix(_fixture_matrix(table4_csv),
                                cols=["likes", "dislikes", "comment_count"])
        assert set(cm.labels) <= {"likes", "dislikes", "comment_count"}

    def test_single_row_rejected(self, table4_csv):
        records, _ = parse_csv(table4_csv)
        m = build_matrix(records[:1], POST_UPLOAD)
        with pytest.raises(InsufficientDataError):
            correlation_matrix(m)


class TestThresholdPairs:
    def test_threshold_validation(self, table4_csv):
        cm = correlation_matrix(_fixture_matrix(table4_csv))
        for bad in (-0.1, 1.0000001, 2.0):
            with pytest.raises(ParameterError):
                threshold_pairs(cm, t=bad)

    def test_sorted_by_strength_and_boundary_inclusive(self, table4_csv):
        cm = correlation_matrix(_fixture_matrix(table4_csv))
        pairs = threshold_pairs(cm, t=0.5)
        mags = [abs(r) for _, _, r in pairs]
        assert mags == sorted(mags, reverse=True)
        assert all(m >= 0.5 for m in mags)

    def test_t_zero_yields_every_pair(self, table4_csv):
        cm = correlation_matrix(_fixture_matrix(table4_csv))
        k = len(cm.labels)
        assert len(threshold_pairs(cm, t=0.0)) == k * (k - 1) // 2

    def test_negative_correlations_kept_by_magnitude(self):
        m = build_matrix_like([[1, 10], [2, 8], [3, 6], [4, 4]])
        pairs = threshold_pairs(correlation_matrix(m, cols=["a", "b"]), t=0.9)
        assert pairs and pairs[0][2] < 0


def build_matrix_like(rows):
    """Tiny two-column FeatureMatrix stand-in for correlation tests."""
    from tubepulse.features import FeatureMatrix, FeatureProfile
    X = np.asarray(rows, dtype=np.float64)
    prof = FeatureProfile("adhoc", tuple("ab"[: X.shape[1]]))
    return FeatureMatrix(profile=prof, X=X)


class TestIqrOutliers:
    def test_single_extreme(self):
        rep = iqr_outliers([1, 2, 3, 4, 100])
        assert rep.outlier_row_indices == (4,)
        assert rep.q1 == 2.0 and rep.q3 == 4.0
        assert rep.lower_fence == -1.0 and rep.upper_fence == 7.0

    def test_constant_series_has_none(self):
        rep = iqr_outliers([7, 7, 7, 7])
        assert rep.outlier_row_indices == ()
        assert rep.iqr == 0.0

    def test_fences_inclusive(self):
        # value exactly on the fence stays inside
        rep = iqr_outliers([1.0, 2.0, 3.0, 4.0, 7.0])
        assert 7.0 == rep.upper_fence
        assert 4 not in rep.outlier_row_indices

    def test_huge_multiplier_flags_nothing(self):
        rep = iqr_outliers([1, 2, 3, 4, 10 ** 9], k=1e12)
        assert rep.outlier_row_indices == ()

    def test_short_series_rejected(self):
        with pytest.raises(InsufficientDataError):
            iqr_outliers([1, 2, 3])

    def test_negative_multiplier_rejected(self):
        with pytest.raises(ParameterError):
            iqr_outliers([1, 2, 3, 4], k=-0.5)

    def test_matches_oracle_on_random_series(self):
        rng = np.random.default_rng(77)
        for _ in range(40):
            n = int(rng.integers(4, 80))
            xs = rng.standard_cauchy(size=n) * 10  # heavy tails
            rep = iqr_outliers(xs)
            flagged, lower, upper, q1, q3 = oracles.iqr_flags(xs.tolist())
            assert rep.outlier_row_indices == tuple(flagged)
            assert rep.q1 == pytest.approx(q1, abs=1e-9)
            assert rep.q3 == pytest.approx(q3, abs=1e-9)
            assert rep.lower_fence == pytest.approx(lower, abs=1e-9)
            assert rep.upper_fence == pytest.approx(upper, abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(min_value=-50, max_value=50), min_size=4, max_size=40),
           st.sampled_from([0.0, 0.5, 1.5, 3.0]))
    def test_flag_set_is_exactly_the_fence_violations(self, xs, k):
        rep = iqr_outliers(xs, k=k)
        for i, v in enumerate(xs):
            outside = v < rep.lower_fence or v > rep.upper_fence
            assert (i in rep.outlier_row_indices) == outside

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(min_value=-30, max_value=30), min_size=4, max_size=30),
           st.integers(min_value=1, max_value=4),
           st.integers(min_value=-10, max_value=10))
    def test_affine_invariance(self, xs, a, b):
        base = iqr_outliers(xs)
        moved = iqr_outliers([a * v + b for v in xs])
        assert base.outlier_row_indices == moved.outlier_row_indices


class TestRemoveOutliers:
    def recs(self, likes, comments=None):
        comments = comments if comments is not None else [1] * len(likes)
        return [SimpleNamespace(likes=float(l), comment_count=float(c))
                for l, c in zip(likes, comments)]

    def test_drops_flagged_rows(self):
        kept, reports = remove_outliers(self.recs([1, 2, 3, 4, 100]), ["likes"])
        assert len(kept) == 4
        assert all(r.likes != 100 for r in kept)
        assert reports[0].column == "likes"

    def test_union_across_columns(self):
        recs = self.recs([1, 2, 3, 4, 100, 2], [5, 4, 900, 5, 4, 5])
        kept, reports = remove_outliers(recs, ["likes", "comment_count"])
        assert len(kept) == 4
        assert {r.column for r in reports} == {"likes", "comment_count"}

    def test_single_pass_semantics(self):
        # after dropping 100 the value 10 would be flagged; one pass keeps it
        kept, _ = remove_outliers(self.recs([0, 0, 0, 0, 10, 100]), ["likes"])
        assert [r.likes for r in kept] == [0, 0, 0, 0, 10]

    def test_no_outliers_is_identity(self):
        recs = self.recs([1, 2, 3, 4, 5])
        kept, _ = remove_outliers(recs, ["likes"])
        assert kept == recs


def test_quantiles_match_reference_convention():
    rng = np.random.default_rng(5)
    for _ in range(25):
        xs = rng.integers(-100, 100, size=int(rng.integers(4, 50))).astype(float)
        for q in (0.25, 0.5, 0.75):
            assert float(np.quantile(xs, q)) == pytest.approx(
                oracles.quantile_type7(xs.tolist(), q), abs=1e-9)
