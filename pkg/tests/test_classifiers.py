import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import banded_dtw_reference, brute_force_dtw, loocv_reference
from tscsim.classifiers import (
    DEFAULT_WINDOW_GRID,
    DTWCrossValidated,
    IntervalForest,
    band_width,
    dtw_distance,
    fit_predict_1nn,
    interval_features,
    interval_forest,
    loocv_accuracy,
    make_classifier,
    pairwise_dtw,
    select_dtw_window,
    squared_euclidean,
    znormalize,
)
from tscsim.errors import ConfigurationError, UnsupportedInputError

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def pair_strategy(max_len=6):
    return st.integers(1, max_len).flatmap(
        lambda n: st.tuples(arrays(float, n, elements=finite), arrays(float, n, elements=finite))
    )


# ---------------------------------------------------------------------------
# distances


def test_dtw_examples():
    x = np.array([0.3, -1.2, 2.0, 0.7])
    assert dtw_distance(x, x) == 0.0
    assert dtw_distance([0, 0, 1], [0, 1, 1], 1.0) == 0.0
    a, b = np.array([1.0, 2.0, 0.0, 4.0]), np.array([0.0, 1.0, 3.0, 1.0])
    assert dtw_distance(a, b, 0.0) == pytest.approx(np.sum((a - b) ** 2))


def test_band_width_rule():
    assert band_width(0.0, 100) == 0
    assert band_width(0.001, 100) == 1
    assert band_width(0.05, 100) == 5
    assert band_width(0.025, 100) == 3  # 2.5 rounds half up
    assert band_width(1.0, 7) == 7
    with pytest.raises(ConfigurationError):
        band_width(1.5, 10)


def test_dtw_unequal_lengths():
    with pytest.raises(UnsupportedInputError):
        dtw_distance([1.0, 2.0], [1.0, 2.0, 3.0])


@settings(max_examples=300, deadline=None)
@given(pair_strategy())
def test_dtw_matches_path_enumeration(pair):
    a, b = pair
    assert dtw_distance(a, b, 1.0) == pytest.approx(brute_force_dtw(a, b), rel=1e-9, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(pair_strategy(8), st.sampled_from(DEFAULT_WINDOW_GRID))
def test_banded_dtw_matches_path_enumeration(pair, frac):
    a, b = pair
    w = band_width(frac, len(a))
    expected = brute_force_dtw(a, b, w)
    assert dtw_distance(a, b, frac) == pytest.approx(expected, rel=1e-9, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(pair_strategy(30))
def test_dtw_symmetric_and_monotone_in_window(pair):
    a, b = pair
    prev = np.inf
    for frac in DEFAULT_WINDOW_GRID:
        d = dtw_distance(a, b, frac)
        assert d == pytest.approx(dtw_distance(b, a, frac), rel=1e-12, abs=1e-12)
        assert d <= prev + 1e-9
        prev = d
    assert dtw_distance(a, b, 1.0) <= dtw_distance(a, b, 0.0) + 1e-12


def test_pairwise_matches_single_pairs():
    rng = np.random.default_rng(0)
    X, Y = rng.normal(size=(37, 25)), rng.normal(size=(5, 25))
    for frac in (0.0, 0.1, 1.0):
        D = pairwise_dtw(X, Y, frac)
        w = band_width(frac, 25)
        for i in (0, 17, 36):
            for j in range(5):
                assert D[i, j] == pytest.approx(banded_dtw_reference(X[i], Y[j], w), rel=1e-10)
        S = pairwise_dtw(X, window_frac=frac)
        np.testing.assert_allclose(S, S.T)
        assert np.all(np.diag(S) == 0)
        assert S[3, 30] == pytest.approx(banded_dtw_reference(X[3], X[30], w), rel=1e-10)


def test_squared_euclidean():
    X = np.array([[0.0, 0.0], [1.0, 2.0]])
    np.testing.assert_allclose(squared_euclidean(X, X), [[0, 5], [5, 0]])


# ---------------------------------------------------------------------------
# nearest neighbour


def test_1nn_examples():
    X_train = np.array([[0.0, 0.0], [9.0, 9.0]])
    y_train = np.array([0, 1])
    pred, _ = fit_predict_1nn(X_train, y_train, [[0.1, 0.0]])
    assert pred.tolist() == [0]
    pred, acc = fit_predict_1nn(X_train, y_train, X_train, y_train, distance="dtw")
    assert pred.tolist() == [0, 1] and acc == 1.0


def test_1nn_tie_goes_to_earlier_train_case():
    X_train = np.array([[0.0, 2.0], [2.0, 0.0]])
    for labels in ([0, 1], [1, 0]):
        pred, _ = fit_predict_1nn(X_train, np.array(labels), [[1.0, 1.0]])
        assert pred[0] == labels[0]


def test_1nn_empty_train():
    with pytest.raises(ConfigurationError):
        fit_predict_1nn(np.empty((0, 3)), np.empty(0), np.zeros((1, 3)))


def test_euclidean_equals_zero_window_dtw():
    rng = np.random.default_rng(2)
    X, y, Q = rng.normal(size=(30, 40)), rng.integers(0, 2, 30), rng.normal(size=(50, 40))
    a, _ = fit_predict_1nn(X, y, Q, distance="euclidean")
    b, _ = fit_predict_1nn(X, y, Q, distance="dtw", window_frac=0.0)
    np.testing.assert_array_equal(a, b)


def test_loocv_matches_reference():
    rng = np.random.default_rng(3)
    X, y = rng.normal(size=(15, 12)), rng.integers(0, 2, 15)
    for frac in (0.0, 0.2, 1.0):
        w = band_width(frac, 12)
        expected = loocv_reference(X, y, lambda a, b: banded_dtw_reference(a, b, w))
        assert loocv_accuracy(X, y, frac) == pytest.approx(expected)


def test_window_selection_separable_returns_smallest():
    X = np.vstack([np.zeros((5, 10)), np.full((5, 10), 5.0)]) + np.linspace(0, 0.01, 10)
    y = np.repeat([0, 1], 5)
    w, _ = select_dtw_window(X, y, [0.3, 0.1, 0.5])
    assert w == 0.1


def test_window_selection_singleton_grid():
    rng = np.random.default_rng(0)
    w, scores = select_dtw_window(rng.normal(size=(6, 8)), np.repeat([0, 1], 3), [0.0])
    assert w == 0.0 and list(scores) == [0.0]


@pytest.mark.parametrize("seed", range(5))
def test_window_selection_is_loocv_argmax(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(16, 20))
    y = rng.integers(0, 2, 16)
    X[y == 1] += np.sin(np.linspace(0, 3, 20))
    grid = (0.0, 0.1, 0.2, 0.5, 1.0)
    chosen, _ = select_dtw_window(X, y, grid)
    accs = {g: loocv_reference(X, y, lambda a, b, w=band_width(g, 20): banded_dtw_reference(a, b, w)) for g in grid}
    assert accs[chosen] == max(accs.values())
    assert chosen == min(g for g in grid if accs[g] == max(accs.values()))


def test_window_selection_needs_two_cases():
    with pytest.raises(ConfigurationError):
        select_dtw_window(np.zeros((1, 5)), [0])


def test_dtw_cv_estimator():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(12, 30))
    y = np.repeat([0, 1], 6)
    clf = DTWCrossValidated((0.0, 0.1)).fit(X, y)
    assert clf.window_frac in (0.0, 0.1)
    assert clf.summary() == {"window_frac": clf.window_frac}
    assert clf.predict(X).tolist() == y.tolist()


def test_znormalize():
    Z = znormalize([[1.0, 2.0, 3.0], [4.0, 4.0, 4.0]])
    np.testing.assert_allclose(Z[0], [-1.224744871, 0, 1.224744871], rtol=1e-9)
    np.testing.assert_array_equal(Z[1], [0, 0, 0])


# ---------------------------------------------------------------------------
# interval forest


def test_interval_features_against_direct_formulas():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(4, 50))
    starts, lengths = np.array([0, 10, 47]), np.array([50, 7, 3])
    F = interval_features(X, starts, lengths)
    for r in range(4):
        for k, (s, L) in enumerate(zip(starts, lengths)):
            seg = X[r, s:s + L]
            slope = np.polyfit(np.arange(L), seg, 1)[0]
            np.testing.assert_allclose(F[r, 3 * k:3 * k + 3], [seg.mean(), seg.std(), slope], rtol=1e-8, atol=1e-10)


def test_forest_constant_classes():
    X = np.vstack([np.zeros((10, 20)), np.ones((10, 20))])
    y = np.repeat([0, 1], 10)
    pred, acc = interval_forest(X, y, X[::-1], y[::-1], num_trees=5, rng=0)
    assert acc == 1.0


def test_forest_single_tree_deterministic():
    rng = np.random.default_rng(0)
    X, y, Q = rng.normal(size=(20, 30)), rng.integers(0, 2, 20), rng.normal(size=(40, 30))
    a, _ = interval_forest(X, y, Q, num_trees=1, rng=7)
    b, _ = interval_forest(X, y, Q, num_trees=1, rng=7)
    np.testing.assert_array_equal(a, b)


def test_forest_trees_fit_train_to_purity():
    rng = np.random.default_rng(1)
    X, y = rng.normal(size=(25, 40)), rng.integers(0, 2, 25)
    forest = IntervalForest(n_trees=3, seed=0).fit(X, y)
    assert forest.predict(X).tolist() == y.tolist()


def test_forest_vote_tie_goes_to_lower_class():
    X = np.vstack([np.zeros((2, 10)), np.ones((2, 10))])
    forest = IntervalForest(n_trees=2, seed=0).fit(X, np.repeat([0, 1], 2))
    # one tree says 1 for everything, the other 0: a 1-1 tie
    forest.trees_ = [(s, L, ("leaf", c)) for (s, L, _), c in zip(forest.trees_, (1, 0))]
    assert forest.predict(X).tolist() == [0, 0, 0, 0]


def test_forest_short_series():
    with pytest.raises(UnsupportedInputError):
        IntervalForest(n_trees=1).fit(np.zeros((4, 2)), [0, 0, 1, 1])


def test_forest_samples_intervals_of_length_at_least_three():
    X = np.random.default_rng(0).normal(size=(6, 9))
    forest = IntervalForest(n_trees=50, seed=3).fit(X, np.repeat([0, 1], 3))
    for starts, lengths, _ in forest.trees_:
        assert len(starts) == 3  # floor(sqrt(9))
        assert np.all(lengths >= 3) and np.all(starts + lengths <= 9)


def test_make_classifier():
    assert make_classifier("ed1nn").window_frac == 0.0
    assert make_classifier("dtw1nn_full").window_frac == 1.0
    assert make_classifier("dtw1nn_cv", grid=(0.0, 0.5)).grid == (0.0, 0.5)
    assert make_classifier("ivf", seed=4, n_trees=7).n_trees == 7
    with pytest.raises(ConfigurationError):
        make_classifier("rotf")
