"""Baseline classifiers on one elastic and one interval problem.

Elastic problems stretch a shape, which DTW absorbs and Euclidean distance
does not. Interval problems put the signal at fixed positions, which suits
interval summary features.

Run: python demos/04_classifiers.py
"""

from tscsim.classifiers import dtw_distance, make_classifier
from tscsim.simulators import default_params, simulate

print("DTW([0,0,1], [0,1,1]) =", dtw_distance([0, 0, 1], [0, 1, 1]))

for kind, params in [
    ("elastic", default_params("elastic")),
    ("interval", default_params("interval", cases_per_class=(60, 60), amplitude=1.0)),
]:
    ds = simulate(kind, params, seed=11)
    for name in ("ed1nn", "dtw1nn_cv", "ivf"):
        clf = make_classifier(name, seed=0).fit(ds.X_train, ds.y_train)
        acc = (clf.predict(ds.X_test) == ds.y_test).mean()
        extra = f", window {clf.window_frac}" if name == "dtw1nn_cv" else ""
        print(f"{kind:>8} {name:>10}: {100 * acc:.1f}%{extra}")
