"""Comparing classifiers: ranks, Friedman, Holm-corrected Wilcoxon, cliques.

Uses a made-up accuracy matrix with three tiers of classifiers.

Run: python demos/05_statistics.py [output.svg]
"""

import sys
import warnings

import numpy as np

from tscsim.cdplot import render_cd_diagram
from tscsim.stats import form_cliques, friedman_test, pairwise_wilcoxon, rejection_matrix, summarize

rng = np.random.default_rng(5)
names = ["A", "B", "C", "D", "E"]
base = rng.uniform(0.5, 0.7, 25)[:, None]
M = np.clip(base + np.array([0.2, 0.19, 0.1, 0.0, -0.01]) + rng.normal(0, 0.02, (25, 5)), 0, 1)

summary = summarize(M, names)
for j in summary.order():
    print(f"{names[j]}: accuracy {M[:, j].mean():.3f}, mean rank {summary.mean_rank[j]:.2f}")

fr = friedman_test(M)
print(f"\nFriedman chi-square {fr.statistic:.2f} on {fr.df} df, p = {fr.pvalue:.2g}")

pairs = pairwise_wilcoxon(M, names)
for res in pairs:
    print(f"{res.a} vs {res.b}: p = {res.pvalue:.3g} {'*' if res.reject else ''}")

with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    cliques = form_cliques(summary, rejection_matrix(pairs, names))
print("\ncliques:", cliques.named(names))
for w in caught:
    print("warning:", w.message)

svg = render_cd_diagram(summary, cliques, sys.argv[1] if len(sys.argv) > 1 else None)
print(f"critical difference diagram: {len(svg)} bytes of SVG")
