"""Slow, obviously-correct reference implementations used as test oracles.

None of these share code with the package.
"""

import itertools
import math
from fractions import Fraction


def warping_paths(n, m, w=None):
    """Yield every monotone warping path from (0, 0) to (n-1, m-1).

    With ``w`` given, cells with ``|i - j| > w`` are forbidden.
    """
    def walk(i, j, path):
        if w is not None and abs(i - j) > w:
            return
        path.append((i, j))
        if (i, j) == (n - 1, m - 1):
            yield list(path)
        else:
            if i + 1 < n:
                yield from walk(i + 1, j, path)
            if j + 1 < m:
                yield from walk(i, j + 1, path)
            if i + 1 < n and j + 1 < m:
                yield from walk(i + 1, j + 1, path)
        path.pop()

    yield from walk(0, 0, [])


def brute_force_dtw(a, b, w=None):
    """Minimum squared-difference cost over all enumerated warping paths."""
    return min(sum((a[i] - b[j]) ** 2 for i, j in p) for p in warping_paths(len(a), len(b), w))


def average_ranks(values):
    """1-based ranks, ties sharing the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    pos = 0
    while pos < len(order):
        end = pos
        while end + 1 < len(order) and values[order[end + 1]] == values[order[pos]]:
            end += 1
        for q in range(pos, end + 1):
            ranks[order[q]] = (pos + end) / 2 + 1
        pos = end + 1
    return ranks


def wilcoxon_enumeration(x, y):
    """Exact two-sided signed-rank p by visiting all 2^n sign patterns.

    Zero differences are dropped first. The p-value is the share of sign
    patterns whose ``min(W+, W-)`` is no larger than the observed one;
    rank sums are kept as exact fractions so ties compare exactly.
    """
    d = [round(a - b, 12) for a, b in zip(x, y)]
    d = [v for v in d if v != 0]
    n = len(d)
    if n == 0:
        return 1.0
    ranks = [Fraction(r).limit_denominator(4) for r in average_ranks([abs(v) for v in d])]
    total = sum(ranks)
    w_plus = sum(r for r, v in zip(ranks, d) if v > 0)
    observed = min(w_plus, total - w_plus)
    hits = 0
    for signs in itertools.product((0, 1), repeat=n):
        s = sum(r for r, sg in zip(ranks, signs) if sg)
        if min(s, total - s) <= observed:
            hits += 1
    return hits / 2**n


def friedman_statistic(matrix):
    """Friedman chi-square from row ranks where rank 1 is the largest value."""
    N, k = len(matrix), len(matrix[0])
    mean_rank = [0.0] * k
    for row in matrix:
        for j, r in enumerate(average_ranks([-v for v in row])):
            mean_rank[j] += r / N
    return 12 * N / (k * (k + 1)) * sum((r - (k + 1) / 2) ** 2 for r in mean_rank)


def holm_reference(pvalues, alpha):
    m = len(pvalues)
    reject = [False] * m
    for step, idx in enumerate(sorted(range(m), key=lambda i: pvalues[i])):
        if pvalues[idx] > alpha / (m - step):
            break
        reject[idx] = True
    return reject


def linear_quantile(values, q):
    """Quantile by interpolating between order statistics at position q (n - 1)."""
    s = sorted(values)
    pos = q * (len(s) - 1)
    lo = math.floor(pos)
    hi = min(lo + 1, len(s) - 1)
    return s[lo] + (s[hi] - s[lo]) * (pos - lo)


def loocv_reference(X, y, dist):
    """Leave-one-out 1-NN accuracy with lowest-index tie-breaking."""
    n = len(X)
    correct = 0
    for i in range(n):
        best, label = math.inf, None
        for j in range(n):
            if j == i:
                continue
            d = dist(X[i], X[j])
            if d < best:
                best, label = d, y[j]
        correct += label == y[i]
    return correct / n


def banded_dtw_reference(a, b, w):
    """Plain O(n m) DTW recurrence in pure Python, band half-width ``w``."""
    n, m = len(a), len(b)
    D = [[math.inf] * (m + 1) for _ in range(n + 1)]
    D[0][0] = 0.0
    for i in range(1, n + 1):
        for j in range(max(1, i - w), min(m, i + w) + 1):
            cost = (a[i - 1] - b[j - 1]) ** 2
            D[i][j] = cost + min(D[i - 1][j], D[i][j - 1], D[i - 1][j - 1])
    return D[n][m]
