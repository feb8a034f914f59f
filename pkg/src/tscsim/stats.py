"""Comparing classifiers over many resamples.

The protocol: tabulate mean accuracy, standard error and mean rank; run a
Friedman test across all classifiers; compare every pair with a Wilcoxon
signed-rank test; control the family-wise error with Holm's step-down
procedure; and group classifiers into cliques that contain no significant
difference.

Accuracy matrices are ``(n_resamples, n_classifiers)`` arrays. Rank 1 is
the most accurate classifier in a row and tied accuracies share the
average rank.
"""

import csv
import io
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as st

from tscsim.errors import CliqueAnomalyWarning, UnsupportedInputError, ValidationError

__all__ = [
    "RankSummary",
    "FriedmanResult",
    "WilcoxonResult",
    "PairwiseResult",
    "CliqueSet",
    "validate_matrix",
    "row_ranks",
    "summarize",
    "friedman_test",
    "wilcoxon_signed_rank",
    "holm_correct",
    "pairwise_wilcoxon",
    "rejection_matrix",
    "form_cliques",
    "five_number_summary",
    "boxplot_summary",
    "EXACT_WILCOXON_MAX_N",
]

EXACT_WILCOXON_MAX_N = 20
# accuracy differences are rounded before ranking so that float noise does
# not split genuine ties
_DIFF_DECIMALS = 12


def validate_matrix(matrix, min_columns=2):
    """Check shape and range of an accuracy matrix; NaN marks a missing cell."""
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < min_columns:
        raise ValidationError(
            f"accuracy matrix must be 2-d with >= 1 row and >= {min_columns} columns, got shape {M.shape}"
        )
    bad = ~np.isnan(M) & ((M < 0) | (M > 1))
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise ValidationError(f"accuracy {M[r, c]} at row {r}, column {c} is outside [0, 1]")
    return M


def _names(names, k):
    if names is None:
        return [f"c{j}" for j in range(k)]
    names = [str(n) for n in names]
    if len(names) != k or len(set(names)) != k:
        raise ValidationError("classifier names must be unique and match the matrix columns")
    return names


def row_ranks(matrix):
    """Per-row ranks, 1 = most accurate, ties averaged."""
    M = np.asarray(matrix, dtype=float)
    return st.rankdata(-M, method="average", axis=1)


@dataclass
class RankSummary:
    names: list
    mean_accuracy: np.ndarray
    std_error: np.ndarray
    mean_rank: np.ndarray
    n_rows: int
    excluded_rows: int = 0

    def order(self):
        """Column indices sorted best mean rank first (ties keep column order)."""
        return list(np.argsort(self.mean_rank, kind="stable"))


def summarize(matrix, names=None):
    """Mean accuracy, standard error and mean rank per classifier.

    Rows with a missing (NaN) cell are dropped first and counted in
    ``excluded_rows``. The standard error uses the ``N - 1`` sample
    standard deviation; with a single row it is NaN.
    """
    M = validate_matrix(matrix)
    names = _names(names, M.shape[1])
    complete = ~np.isnan(M).any(axis=1)
    M_ok = M[complete]
    n = M_ok.shape[0]
    if n == 0:
        raise ValidationError("no resample has results for every classifier")
    if n > 1:
        se = M_ok.std(axis=0, ddof=1) / math.sqrt(n)
    else:
        se = np.full(M.shape[1], np.nan)
    return RankSummary(
        names=names,
        mean_accuracy=M_ok.mean(axis=0),
        std_error=se,
        mean_rank=row_ranks(M_ok).mean(axis=0),
        n_rows=n,
        excluded_rows=int((~complete).sum()),
    )


@dataclass
class FriedmanResult:
    statistic: float
    pvalue: float
    df: int


def friedman_test(matrix):
    """Friedman chi-square test over the per-row ranks.

    ``12 N / (k (k + 1)) * sum_j (R_j - (k + 1) / 2) ** 2`` referred to a
    chi-square distribution with ``k - 1`` degrees of freedom, where ``R_j``
    is the mean rank of column ``j``.
    """
    M = validate_matrix(matrix)
    M = M[~np.isnan(M).any(axis=1)]
    n, k = M.shape
    if k < 3:
        raise UnsupportedInputError("the Friedman test needs at least three classifiers")
    if n < 2:
        raise UnsupportedInputError("the Friedman test needs at least two resamples")
    mean_rank = row_ranks(M).mean(axis=0)
    stat = 12.0 * n / (k * (k + 1)) * float(np.sum((mean_rank - (k + 1) / 2.0) ** 2))
    return FriedmanResult(stat, float(st.chi2.sf(stat, k - 1)), k - 1)


@dataclass
class WilcoxonResult:
    statistic: float
    pvalue: float
    n_effective: int
    w_plus: float
    w_minus: float
    method: str


def _exact_two_sided(ranks, observed_min):
    # counts of W+ over all sign patterns, on doubled ranks so .5 ties stay integral
    doubled = np.rint(2 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts = counts + shifted
    s = np.arange(total + 1)
    extreme = np.minimum(s, total - s) <= int(round(2 * observed_min))
    return int(counts[extreme].sum()) / float(2 ** len(ranks))


def wilcoxon_signed_rank(x, y, exact_max_n=EXACT_WILCOXON_MAX_N):
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped. The statistic is ``min(W+, W-)``. With at
    most ``exact_max_n`` non-zero differences the p-value is the exact share
    of the ``2 ** n`` sign patterns whose statistic is at least as extreme;
    otherwise a normal approximation with continuity and tie corrections is
    used. All-zero differences give p = 1 with ``method == "degenerate"``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 1:
        raise UnsupportedInputError("wilcoxon needs two 1-d samples of equal, non-zero length")
    d = np.round(x - y, _DIFF_DECIMALS)
    d = d[d != 0]
    n = d.size
    if n == 0:
        return WilcoxonResult(0.0, 1.0, 0, 0.0, 0.0, "degenerate")
    ranks = st.rankdata(np.abs(d), method="average")
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    stat = min(w_plus, w_minus)
    if n <= exact_max_n:
        return WilcoxonResult(stat, _exact_two_sided(ranks, stat), n, w_plus, w_minus, "exact")
    mean = n * (n + 1) / 4.0
    _, tie_sizes = np.unique(np.abs(d), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(tie_sizes**3 - tie_sizes)) / 48.0
    z = max(abs(stat - mean) - 0.5, 0.0) / math.sqrt(var)
    p = min(1.0, 2.0 * float(st.norm.sf(z)))
    return WilcoxonResult(stat, p, n, w_plus, w_minus, "normal")


def holm_correct(pvalues, alpha=0.05):
    """Holm step-down rejections, returned in input order.

    Sorted ascending, ``p_(i)`` is rejected while ``p_(i) <= alpha / (m - i + 1)``;
    the first failure stops the procedure.
    """
    p = np.asarray(pvalues, dtype=float)
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise ValidationError("p-values must lie in [0, 1]")
    if not 0 < alpha < 1:
        raise ValidationError("alpha must lie in (0, 1)")
    m = p.size
    reject = np.zeros(m, dtype=bool)
    for i, idx in enumerate(np.argsort(p, kind="stable")):
        if p[idx] > alpha / (m - i):
            break
        reject[idx] = True
    return reject


@dataclass
class PairwiseResult:
    a: str
    b: str
    statistic: float
    pvalue: float
    reject: bool
    method: str


def pairwise_wilcoxon(matrix, names=None, alpha=0.05):
    """Wilcoxon test for every pair of columns, Holm-corrected at ``alpha``."""
    M = validate_matrix(matrix)
    M = M[~np.isnan(M).any(axis=1)]
    names = _names(names, M.shape[1])
    pairs = list(itertools.combinations(range(M.shape[1]), 2))
    tests = [wilcoxon_signed_rank(M[:, i], M[:, j]) for i, j in pairs]
    reject = holm_correct([t.pvalue for t in tests], alpha)
    return [
        PairwiseResult(names[i], names[j], t.statistic, t.pvalue, bool(r), t.method)
        for (i, j), t, r in zip(pairs, tests, reject)
    ]


def rejection_matrix(pairwise, names):
    """Symmetric boolean matrix of rejected pairs, indexed like ``names``."""
    index = {n: i for i, n in enumerate(names)}
    R = np.zeros((len(names), len(names)), dtype=bool)
    for res in pairwise:
        i, j = index[res.a], index[res.b]
        R[i, j] = R[j, i] = res.reject
    return R


@dataclass
class CliqueSet:
    """Cliques as tuples of column indices, best mean rank first.

    ``anomalies`` lists non-rejected pairs whose members ended up in
    different cliques.
    """

    cliques: list
    anomalies: list = field(default_factory=list)

    def named(self, names):
        return [tuple(names[i] for i in c) for c in self.cliques]


def form_cliques(summary, rejections):
    """Partition classifiers into cliques of contiguous mean-rank order.

    Walking from the best mean rank to the worst, a classifier joins the
    current clique unless it is significantly different from one of its
    members, in which case it starts a new clique. Every classifier lands in
    exactly one clique. If two classifiers are not significantly different
    but sit in different cliques, a :class:`CliqueAnomalyWarning` names them.

    Parameters
    ----------
    summary : RankSummary
    rejections : array_like of bool, shape (k, k)
        ``rejections[i, j]`` is True when the pair differs significantly.
    """
    R = np.asarray(rejections, dtype=bool)
    k = len(summary.names)
    if R.shape != (k, k):
        raise ValidationError(f"rejection matrix must be {k}x{k}")
    cliques, current = [], []
    for idx in summary.order():
        if current and any(R[idx, j] for j in current):
            cliques.append(tuple(current))
            current = []
        current.append(int(idx))
    cliques.append(tuple(current))

    where = {i: c for c, members in enumerate(cliques) for i in members}
    anomalies = [
        (summary.names[i], summary.names[j])
        for i, j in itertools.combinations(range(k), 2)
        if not R[i, j] and where[i] != where[j]
    ]
    if anomalies:
        listed = ", ".join(f"{a}-{b}" for a, b in anomalies)
        warnings.warn(
            CliqueAnomalyWarning(f"non-significant pairs split across cliques: {listed}", anomalies),
            stacklevel=2,
        )
    return CliqueSet(cliques, anomalies)


def five_number_summary(matrix):
    """``(k, 5)`` array of min, Q1, median, Q3, max per column.

    Quartiles use linear interpolation between order statistics (numpy's
    ``"linear"`` percentile method). Missing cells are ignored.
    """
    M = validate_matrix(matrix, min_columns=1)
    out = np.empty((M.shape[1], 5))
    for j in range(M.shape[1]):
        col = M[:, j][~np.isnan(M[:, j])]
        out[j] = np.percentile(col, [0, 25, 50, 75, 100], method="linear")
    return out


def boxplot_summary(matrix, names=None, destination=None):
    """CSV of :func:`five_number_summary`, one row per classifier.

    Returns the CSV text and also writes it to ``destination`` when given.
    """
    M = validate_matrix(matrix, min_columns=1)
    names = _names(names, M.shape[1])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["classifier", "min", "q1", "median", "q3", "max"])
    for name, row in zip(names, five_number_summary(M)):
        writer.writerow([name] + [f"{v:.6g}" for v in row])
    text = buf.getvalue()
    if destination is not None:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
