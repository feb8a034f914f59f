"""Baseline classifiers: 1-NN with Euclidean or DTW distance, and a small interval forest.

DTW uses squared pointwise cost inside a Sakoe-Chiba band of half-width
``w = max(1, round(window_frac * n))`` (``w = 0`` when ``window_frac == 0``,
which reduces DTW to squared Euclidean distance).

The bulk distance routines evaluate 32 independent DTW problems side by side
so the inner loop vectorises across problems; the recurrence along a row is
otherwise strictly sequential.
"""

import math

import numba
import numpy as np

from tscsim.errors import ConfigurationError, UnsupportedInputError

__all__ = [
    "DEFAULT_WINDOW_GRID",
    "CLASSIFIER_NAMES",
    "band_width",
    "dtw_distance",
    "squared_euclidean",
    "pairwise_dtw",
    "fit_predict_1nn",
    "select_dtw_window",
    "loocv_accuracy",
    "interval_features",
    "interval_forest",
    "znormalize",
    "NearestNeighbor",
    "DTWCrossValidated",
    "IntervalForest",
    "make_classifier",
]

DEFAULT_WINDOW_GRID = tuple(round(0.05 * i, 2) for i in range(21))
CLASSIFIER_NAMES = ("ed1nn", "dtw1nn_full", "dtw1nn_cv", "ivf")

_LANES = 32
_CHUNK = 64


def band_width(window_frac, n):
    """Half-width of the warping band for series of length ``n``."""
    if not 0.0 <= window_frac <= 1.0:
        raise ConfigurationError(f"window_frac must lie in [0, 1], got {window_frac}")
    if window_frac == 0.0:
        return 0
    return max(1, math.floor(window_frac * n + 0.5))


@numba.njit(cache=True)
def _dtw_lanes(A, B, w):
    # column k of A and B is one DTW problem; returns the k costs
    n, m = A.shape
    inf = np.inf
    prev = np.full((n + 1, m), inf)
    cur = np.full((n + 1, m), inf)
    prev[0, :] = 0.0
    for i in range(1, n + 1):
        lo = max(1, i - w)
        hi = min(n, i + w)
        ai = A[i - 1]
        cur[lo - 1, :] = inf
        for j in range(lo, hi + 1):
            bj = B[j - 1]
            p_diag = prev[j - 1]
            p_up = prev[j]
            p_left = cur[j - 1]
            c = cur[j]
            for k in range(m):
                d = ai[k] - bj[k]
                c[k] = d * d + min(min(p_diag[k], p_up[k]), p_left[k])
        if hi < n:
            cur[hi + 1, :] = inf
        prev, cur = cur, prev
    return prev[n].copy()


def _check_pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or b.ndim != 1:
        raise UnsupportedInputError("dtw_distance expects two 1-d series")
    if a.shape[0] != b.shape[0]:
        raise UnsupportedInputError(
            f"series lengths differ ({a.shape[0]} vs {b.shape[0]}); only equal lengths are supported"
        )
    if a.shape[0] < 1:
        raise UnsupportedInputError("series must be non-empty")
    return a, b


def dtw_distance(a, b, window_frac=1.0):
    """DTW cost between two equal-length series.

    Parameters
    ----------
    a, b : array_like
        1-d series of the same length.
    window_frac : float
        Band half-width as a fraction of the series length.

    Returns
    -------
    float
        Minimal cumulative squared difference over monotone warping paths
        that stay within the band.
    """
    a, b = _check_pair(a, b)
    w = band_width(window_frac, a.shape[0])
    return float(_dtw_lanes(a[:, None].copy(), b[:, None].copy(), w)[0])


def squared_euclidean(X, Y):
    """Matrix of squared Euclidean distances between rows of ``X`` and ``Y``."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    out = np.empty((X.shape[0], Y.shape[0]))
    for lo in range(0, X.shape[0], _CHUNK):
        diff = X[lo:lo + _CHUNK, None, :] - Y[None, :, :]
        out[lo:lo + _CHUNK] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def _dtw_pair_list(X, Y, rows, cols, w):
    out = np.empty(rows.shape[0])
    for lo in range(0, rows.shape[0], _LANES):
        r = rows[lo:lo + _LANES]
        c = cols[lo:lo + _LANES]
        A = np.ascontiguousarray(X[r].T)
        B = np.ascontiguousarray(Y[c].T)
        out[lo:lo + _LANES] = _dtw_lanes(A, B, w)
    return out


def pairwise_dtw(X, Y=None, window_frac=1.0):
    """DTW distance matrix between rows of ``X`` and rows of ``Y``.

    With ``Y`` omitted the matrix is square over ``X``; only the upper
    triangle is computed and the diagonal is zero.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[1]
    w = band_width(window_frac, n)
    if Y is None:
        if w == 0:
            return squared_euclidean(X, X)
        rows, cols = np.triu_indices(X.shape[0], k=1)
        D = np.zeros((X.shape[0], X.shape[0]))
        vals = _dtw_pair_list(X, X, rows, cols, w)
        D[rows, cols] = vals
        D[cols, rows] = vals
        return D
    Y = np.asarray(Y, dtype=float)
    if Y.shape[1] != n:
        raise UnsupportedInputError("all series must have the same length")
    if w == 0:
        return squared_euclidean(X, Y)
    rows, cols = np.indices((X.shape[0], Y.shape[0]))
    vals = _dtw_pair_list(X, Y, rows.ravel(), cols.ravel(), w)
    return vals.reshape(X.shape[0], Y.shape[0])


def _distance_matrix(X_query, X_ref, distance, window_frac):
    if distance == "euclidean":
        return squared_euclidean(X_query, X_ref)
    if distance == "dtw":
        return pairwise_dtw(X_query, X_ref, window_frac)
    raise ConfigurationError(f"unknown distance {distance!r}")


def fit_predict_1nn(X_train, y_train, X_test, y_test=None, distance="euclidean", window_frac=1.0):
    """Label each test series with the class of its nearest train series.

    Ties go to the lowest train index.

    Returns
    -------
    predictions : numpy.ndarray
    accuracy : float or None
        Fraction of correct predictions when ``y_test`` is given.
    """
    X_train = np.asarray(X_train, dtype=float)
    y_train = np.asarray(y_train)
    X_test = np.asarray(X_test, dtype=float)
    if X_train.shape[0] == 0:
        raise ConfigurationError("1-NN needs at least one train series")
    if X_test.ndim != 2 or X_test.shape[1] != X_train.shape[1]:
        raise UnsupportedInputError("all series must have the same length")
    D = _distance_matrix(X_test, X_train, distance, window_frac)
    pred = y_train[np.argmin(D, axis=1)]
    acc = None if y_test is None else float(np.mean(pred == np.asarray(y_test)))
    return pred, acc


def loocv_accuracy(X, y, window_frac):
    """Leave-one-out 1-NN DTW accuracy on a train set."""
    D = pairwise_dtw(np.asarray(X, dtype=float), window_frac=window_frac)
    np.fill_diagonal(D, np.inf)
    return float(np.mean(np.asarray(y)[np.argmin(D, axis=1)] == y))


def select_dtw_window(X, y, grid=DEFAULT_WINDOW_GRID):
    """Pick the DTW window by leave-one-out 1-NN accuracy on the train set.

    The grid is scanned from the smallest window up and the first window
    with the best accuracy wins. The scan stops early once a window scores
    100%, since no later window can beat it under the tie rule.

    Returns
    -------
    window_frac : float
    scores : dict
        LOOCV accuracy for every window that was evaluated.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.shape[0] < 2:
        raise ConfigurationError("window selection needs at least two train series")
    if len(grid) == 0:
        raise ConfigurationError("window grid is empty")
    scores = {}
    best_w, best_acc = None, -1.0
    for w in sorted(set(float(g) for g in grid)):
        acc = loocv_accuracy(X, y, w)
        scores[w] = acc
        if acc > best_acc:
            best_w, best_acc = w, acc
        if acc == 1.0:
            break
    return best_w, scores


def znormalize(X):
    """Scale each row to zero mean and unit variance; constant rows become zeros."""
    X = np.asarray(X, dtype=float)
    mu = X.mean(axis=1, keepdims=True)
    sd = X.std(axis=1, keepdims=True)
    sd[sd == 0] = 1.0
    return (X - mu) / sd


# ---------------------------------------------------------------------------
# interval forest


def _cumulative(X):
    X = np.asarray(X, dtype=float)
    t = np.arange(X.shape[1], dtype=float)
    zero = np.zeros((X.shape[0], 1))
    return tuple(np.hstack([zero, np.cumsum(v, axis=1)]) for v in (X, X * X, X * t))


def _features(cumulative, starts, lengths):
    S, S2, ST = cumulative
    starts = np.asarray(starts)
    ends = starts + np.asarray(lengths)
    L = (ends - starts).astype(float)
    sx = S[:, ends] - S[:, starts]
    sxx = S2[:, ends] - S2[:, starts]
    stx = ST[:, ends] - ST[:, starts]
    mean = sx / L
    std = np.sqrt(np.maximum(sxx / L - mean * mean, 0.0))
    t_mean = (starts + ends - 1) / 2.0
    slope = (stx - t_mean * sx) / (L * (L * L - 1.0) / 12.0)
    return np.stack([mean, std, slope], axis=2).reshape(S.shape[0], -1)


def interval_features(X, starts, lengths):
    """Mean, standard deviation and least-squares slope over each interval.

    Intervals are ``[starts[i], starts[i] + lengths[i])`` and need length >= 2.
    Returns an array of shape ``(n_series, 3 * n_intervals)`` ordered
    ``[mean_0, std_0, slope_0, mean_1, ...]``.
    """
    return _features(_cumulative(X), starts, lengths)


def _entropy(counts, totals):
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / totals
        h = -p * np.log2(p)
    return np.nansum(h, axis=-1)


def _majority(y, n_classes):
    return int(np.argmax(np.bincount(y, minlength=n_classes)))


def _grow_tree(F, y, n_classes):
    counts = np.bincount(y, minlength=n_classes)
    if np.count_nonzero(counts) <= 1:
        return ("leaf", _majority(y, n_classes))
    m = F.shape[0]
    order = np.argsort(F, axis=0, kind="stable")
    Fs = np.take_along_axis(F, order, axis=0)
    onehot = np.eye(n_classes)[y[order]]              # (m, p, c)
    left = np.cumsum(onehot, axis=0)[:-1]              # (m-1, p, c)
    right = counts[None, None, :] - left
    n_left = np.arange(1, m, dtype=float)[:, None]
    n_right = m - n_left
    child = (n_left * _entropy(left, n_left[..., None]) + n_right * _entropy(right, n_right[..., None])) / m
    gain = _entropy(counts[None, :], float(m))[0] - child
    valid = Fs[:-1] < Fs[1:]
    if not valid.any():
        return ("leaf", _majority(y, n_classes))
    gain = np.where(valid, gain, -np.inf)
    pos, feat = np.unravel_index(np.argmax(gain), gain.shape)
    lo, hi = Fs[pos, feat], Fs[pos + 1, feat]
    threshold = (lo + hi) / 2.0
    if not lo <= threshold < hi:
        threshold = lo
    go_left = F[:, feat] <= threshold
    return (
        "split",
        int(feat),
        float(threshold),
        _grow_tree(F[go_left], y[go_left], n_classes),
        _grow_tree(F[~go_left], y[~go_left], n_classes),
    )


def _predict_tree(node, F, idx, out):
    if node[0] == "leaf":
        out[idx] = node[1]
        return
    _, feat, threshold, left, right = node
    go_left = F[idx, feat] <= threshold
    _predict_tree(left, F, idx[go_left], out)
    _predict_tree(right, F, idx[~go_left], out)


class IntervalForest:
    """Simplified time series forest.

    Each tree sees ``intervals_per_tree`` random intervals (start uniform in
    ``[0, n - 3]``, then length uniform in ``[3, n - start]``), summarised
    by mean, standard deviation and slope, and is grown to purity with
    entropy-gain threshold splits. Trees vote; ties go to the lower class.
    """

    def __init__(self, n_trees=200, intervals_per_tree=None, seed=None):
        self.n_trees = n_trees
        self.intervals_per_tree = intervals_per_tree
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        n = X.shape[1]
        if n < 3:
            raise UnsupportedInputError("interval forest needs series of length >= 3")
        k = self.intervals_per_tree or max(1, math.isqrt(n))
        rng = np.random.default_rng(self.seed)
        self.n_classes_ = int(y.max()) + 1 if y.size else 1
        self.trees_ = []
        cumulative = _cumulative(X)
        for _ in range(self.n_trees):
            starts = rng.integers(0, n - 2, size=k)
            lengths = rng.integers(3, n - starts + 1)
            F = _features(cumulative, starts, lengths)
            self.trees_.append((starts, lengths, _grow_tree(F, y, self.n_classes_)))
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        votes = np.zeros((X.shape[0], self.n_classes_), dtype=int)
        rows = np.arange(X.shape[0])
        pred = np.empty(X.shape[0], dtype=int)
        cumulative = _cumulative(X)
        for starts, lengths, tree in self.trees_:
            _predict_tree(tree, _features(cumulative, starts, lengths), rows, pred)
            votes[rows, pred] += 1
        return np.argmax(votes, axis=1)


def interval_forest(X_train, y_train, X_test, y_test=None, num_trees=200, intervals_per_tree=None, rng=None):
    """Fit an :class:`IntervalForest` and score it on the test set.

    ``rng`` may be an integer seed or a ``numpy.random.Generator``.
    """
    seed = rng if not isinstance(rng, np.random.Generator) else int(rng.integers(2**32))
    forest = IntervalForest(num_trees, intervals_per_tree, seed).fit(X_train, y_train)
    pred = forest.predict(X_test)
    acc = None if y_test is None else float(np.mean(pred == np.asarray(y_test)))
    return pred, acc


# ---------------------------------------------------------------------------
# estimator wrappers


class NearestNeighbor:
    """1-NN with a fixed distance: ``window_frac=0`` is Euclidean, otherwise DTW."""

    def __init__(self, window_frac=0.0):
        self.window_frac = window_frac

    def fit(self, X, y):
        self.X_ = np.asarray(X, dtype=float)
        self.y_ = np.asarray(y)
        if self.X_.shape[0] == 0:
            raise ConfigurationError("1-NN needs at least one train series")
        return self

    def predict(self, X):
        distance = "euclidean" if self.window_frac == 0 else "dtw"
        pred, _ = fit_predict_1nn(self.X_, self.y_, X, distance=distance, window_frac=self.window_frac)
        return pred

    def summary(self):
        return {"window_frac": self.window_frac}


class DTWCrossValidated(NearestNeighbor):
    """1-NN DTW with the window chosen by leave-one-out on the train set."""

    def __init__(self, grid=DEFAULT_WINDOW_GRID):
        super().__init__(window_frac=None)
        self.grid = tuple(grid)

    def fit(self, X, y):
        super().fit(X, y)
        self.window_frac, self.cv_scores_ = select_dtw_window(self.X_, self.y_, self.grid)
        return self

    def summary(self):
        return {"window_frac": self.window_frac}


def make_classifier(name, seed=None, **hyper):
    """Build a classifier by its short name.

    ``ed1nn``, ``dtw1nn_full`` (unconstrained window), ``dtw1nn_cv``
    (window grid via ``grid=``) or ``ivf`` (``n_trees=``,
    ``intervals_per_tree=``).
    """
    if name == "ed1nn":
        return NearestNeighbor(0.0)
    if name == "dtw1nn_full":
        return NearestNeighbor(1.0)
    if name == "dtw1nn_cv":
        return DTWCrossValidated(hyper.get("grid", DEFAULT_WINDOW_GRID))
    if name == "ivf":
        return IntervalForest(hyper.get("n_trees", 200), hyper.get("intervals_per_tree"), seed)
    raise ConfigurationError(f"unknown classifier {name!r}; choose from {', '.join(CLASSIFIER_NAMES)}")
