import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tubepulse.errors import EmptyDatasetError, ParameterError, ShapeError
from tubepulse.trees import (
    SplitRule,
    TreeParams,
    best_split,
    fit_tree,
    predict_tree,
    predict_tree_batch,
    tree_size,
)

from oracles import brute_split, sse


def _rng(seed):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def rule_sse(X, y, rule: SplitRule) -> float:
    """Realized child SSE of a rule, computed the oracle's way."""
    left = [y[i] for i in range(len(y)) if X[i][rule.feature] <= rule.threshold]
    right = [y[i] for i in range(len(y)) if X[i][rule.feature] > rule.threshold]
    return sse(left) + sse(right)


class TestTreeParams:
    def test_defaults(self):
        p = TreeParams()
        assert p.max_depth == 8 and p.min_samples_leaf == 5 and p.min_gain == 0.0

    @pytest.mark.parametrize("kwargs", [
        {"max_depth": 0}, {"min_samples_leaf": 0}, {"min_gain": -0.1},
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ParameterError):
            TreeParams(**kwargs)

    def test_dict_round_trip(self):
        p = TreeParams(max_depth=3, min_samples_leaf=2, min_gain=0.5)
        assert TreeParams.from_dict(p.to_dict()) == p


class TestBestSplit:
    PARAMS = TreeParams(max_depth=32, min_samples_leaf=1)

    def test_two_point_split(self):
        rule = best_split([[0.0], [1.0]], [0.0, 10.0], [0], self.PARAMS)
        assert rule == SplitRule(feature=0, threshold=0.5)
        assert rule_sse([[0.0], [1.0]], [0.0, 10.0], rule) == 0.0

    def test_constant_target_gives_none(self):
        X = [[float(i)] for i in range(10)]
        assert best_split(X, [4.0] * 10, [0], self.PARAMS) is None

    def test_zero_gain_never_taken_even_with_zero_min_gain(self):
        X = [[0.0], [1.0], [2.0], [3.0]]
        assert best_split(X, [7.0, 7.0, 7.0, 7.0], [0],
                          TreeParams(min_gain=0.0, min_samples_leaf=1)) is None

    def test_empty_candidates_rejected(self):
        with pytest.raises(ParameterError):
            best_split([[0.0], [1.0]], [0.0, 1.0], [], self.PARAMS)

    def test_min_samples_leaf_blocks_splits(self):
        X = [[0.0], [1.0], [2.0]]
        y = [0.0, 5.0, 10.0]
        assert best_split(X, y, [0], TreeParams(min_samples_leaf=2)) is None

    def test_threshold_is_midpoint_between_distinct_values(self):
        X = [[1.0], [1.0], [3.0], [3.0]]
        y = [0.0, 0.0, 8.0, 8.0]
        rule = best_split(X, y, [0], self.PARAMS)
        assert rule == SplitRule(feature=0, threshold=2.0)

    def test_tie_broken_by_lowest_feature_index(self):
        # both features separate the targets perfectly
        X = [[0.0, 0.0], [1.0, 1.0]]
        rule = best_split(X, [0.0, 10.0], [0, 1], self.PARAMS)
        assert rule.feature == 0

    def test_candidate_subset_restricts_features(self):
        X = [[0.0, 5.0], [1.0, 6.0]]
        rule = best_split(X, [0.0, 10.0], [1], self.PARAMS)
        assert rule.feature == 1 and rule.threshold == 5.5

    def test_matches_oracle_on_random_50x4(self):
        rng = _rng(123)
        X = rng.integers(0, 10, size=(50, 4)).astype(float)
        y = rng.integers(0, 40, size=50).astype(float)
        rule = best_split(X, y, range(4), self.PARAMS)
        want = brute_split(X.tolist(), y.tolist(), 1, 0.0)
        assert (rule.feature, rule.threshold) == (want[0], want[1])
        assert abs(rule_sse(X.tolist(), y.tolist(), rule) - want[2]) < 1e-9

    def test_matches_oracle_with_leaf_bound(self):
        rng = _rng(99)
        X = rng.integers(0, 6, size=(30, 3)).astype(float)
        y = rng.integers(0, 20, size=30).astype(float)
        params = TreeParams(min_samples_leaf=4)
        rule = best_split(X, y, range(3), params)
        want = brute_split(X.tolist(), y.tolist(), 4, 0.0)
        if want is None:
            assert rule is None
        else:
            assert (rule.feature, rule.threshold) == (want[0], want[1])

    def test_continuous_data_realized_sse_matches_oracle(self):
        rng = _rng(7)
        for _ in range(20):
            X = rng.uniform(size=(40, 5))
            y = rng.uniform(size=40) * 100
            rule = best_split(X, y, range(5), self.PARAMS)
            want = brute_split(X.tolist(), y.tolist(), 1, 0.0)
            assert abs(rule_sse(X.tolist(), y.tolist(), rule) - want[2]) < 1e-9


class TestFitPredict:
    def test_constant_target_single_leaf(self):
        tree = fit_tree([[0.0], [1.0], [2.0]], [5.0, 5.0, 5.0],
                        TreeParams(min_samples_leaf=1))
        assert tree.is_leaf and tree.value == 5.0
        assert predict_tree(tree, [99.0]) == 5.0

    def test_depth_one_stump(self):
        X = [[float(i) / 10] for i in range(10)]
        y = [0.0] * 6 + [10.0] * 4
        tree = fit_tree(X, y, TreeParams(max_depth=1, min_samples_leaf=1))
        assert tree_size(tree) <= 3
        assert not tree.is_leaf
        assert abs(tree.rule.threshold - 0.55) < 1e-12

    def test_unique_rows_fit_exactly(self):
        rng = _rng(5)
        X = rng.permutation(40).reshape(-1, 1).astype(float)
        y = rng.uniform(size=40) * 50
        tree = fit_tree(X, y, TreeParams(max_depth=64, min_samples_leaf=1))
        got = predict_tree_batch(tree, X)
        assert np.allclose(got, y, atol=1e-12)

    def test_predictions_bounded_by_target_range(self):
        rng = _rng(11)
        X = rng.uniform(size=(60, 3))
        y = rng.uniform(size=60) * 1000
        tree = fit_tree(X, y, TreeParams())
        probe = rng.uniform(-5, 5, size=(200, 3))
        preds = predict_tree_batch(tree, probe)
        assert preds.min() >= y.min() - 1e-9 and preds.max() <= y.max() + 1e-9

    def test_every_leaf_respects_min_samples(self):
        rng = _rng(21)
        X = rng.uniform(size=(80, 2))
        y = rng.uniform(size=80)
        min_leaf = 7
        tree = fit_tree(X, y, TreeParams(max_depth=10, min_samples_leaf=min_leaf))

        def leaves(node):
            if node.is_leaf:
                yield node
            else:
                yield from leaves(node.left)
                yield from leaves(node.right)

        assert all(leaf.n >= min_leaf for leaf in leaves(tree))

    def test_children_partition_parent_counts(self):
        rng = _rng(31)
        X = rng.uniform(size=(50, 2))
        y = rng.uniform(size=50)
        tree = fit_tree(X, y, TreeParams(max_depth=6, min_samples_leaf=2))

        def check(node):
            if not node.is_leaf:
                assert node.left.n + node.right.n == node.n
                check(node.left)
                check(node.right)

        check(tree)

    def test_empty_data_rejected(self):
        with pytest.raises(EmptyDatasetError):
            fit_tree(np.empty((0, 2)), [], TreeParams())

    def test_row_width_mismatch_rejected(self):
        tree = fit_tree([[0.0], [1.0]], [0.0, 1.0], TreeParams(min_samples_leaf=1))
        with pytest.raises(ShapeError):
            predict_tree(tree, [0.0, 1.0])
        with pytest.raises(ShapeError):
            predict_tree_batch(tree, [[0.0, 1.0]])

    def test_batch_matches_scalar_prediction(self):
        rng = _rng(41)
        X = rng.uniform(size=(60, 4))
        y = rng.uniform(size=60)
        tree = fit_tree(X, y, TreeParams(max_depth=6, min_samples_leaf=2))
        probe = rng.uniform(size=(30, 4))
        batch = predict_tree_batch(tree, probe)
        single = [predict_tree(tree, row) for row in probe]
        assert np.array_equal(batch, np.array(single))

    def test_duplicating_rows_preserves_structure(self):
        rng = _rng(51)
        X = rng.integers(0, 8, size=(25, 3)).astype(float)
        y = rng.integers(0, 30, size=25).astype(float)
        params = TreeParams(max_depth=5, min_samples_leaf=1)
        t1 = fit_tree(X, y, params)
        t2 = fit_tree(np.vstack([X, X]), np.concatenate([y, y]), params)
        probe = rng.uniform(-1, 9, size=(50, 3))
        assert np.array_equal(predict_tree_batch(t1, probe),
                              predict_tree_batch(t2, probe))

    def test_monotone_relabeling_leaves_predictions_unchanged(self):
        # splits depend only on feature order, so squashing a column
        # through any increasing map must not change predictions
        rng = _rng(61)
        X = rng.integers(0, 10, size=(40, 2)).astype(float)
        y = rng.uniform(size=40) * 10
        params = TreeParams(max_depth=5, min_samples_leaf=2)
        relabel = {v: v * v + 3 for v in range(10)}
        X2 = X.copy()
        X2[:, 0] = [relabel[v] for v in X[:, 0]]
        t1 = fit_tree(X, y, params)
        t2 = fit_tree(X2, y, params)
        probe = rng.integers(0, 10, size=(60, 2)).astype(float)
        probe2 = probe.copy()
        probe2[:, 0] = [relabel[v] for v in probe[:, 0]]
        assert np.allclose(predict_tree_batch(t1, probe),
                           predict_tree_batch(t2, probe2), atol=1e-12)

    def test_node_dict_round_trip(self):
        from tubepulse.trees import TreeNode
        rng = _rng(71)
        X = rng.uniform(size=(30, 2))
        y = rng.uniform(size=30)
        tree = fit_tree(X, y, TreeParams(max_depth=4, min_samples_leaf=2))
        clone = TreeNode.from_dict(tree.to_dict(), n_features=2)
        probe = rng.uniform(size=(20, 2))
        assert np.array_equal(predict_tree_batch(tree, probe),
                              predict_tree_batch(clone, probe))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_best_split_agrees_with_oracle_property(data):
    n = data.draw(st.integers(min_value=2, max_value=25), label="rows")
    p = data.draw(st.integers(min_value=1, max_value=3), label="features")
    X = data.draw(st.lists(
        st.lists(st.integers(min_value=0, max_value=8).map(float),
                 min_size=p, max_size=p),
        min_size=n, max_size=n), label="X")
    y = data.draw(st.lists(st.integers(min_value=0, max_value=20).map(float),
                           min_size=n, max_size=n), label="y")
    min_leaf = data.draw(st.integers(min_value=1, max_value=3), label="min_leaf")
    params = TreeParams(min_samples_leaf=min_leaf)
    rule = best_split(X, y, range(p), params)
    want = brute_split(X, y, min_leaf, 0.0)
    if want is None:
        assert rule is None
    else:
        assert rule is not None
        assert (rule.feature, rule.threshold) == (want[0], want[1])
        assert abs(rule_sse(X, y, rule) - want[2]) < 1e-9
