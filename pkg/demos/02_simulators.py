"""One random problem from each simulator family.

Each call draws a fresh model (which shapes, where the intervals sit, which
AR coefficients) and then a stratified train/test split.

Run: python demos/02_simulators.py
"""

from tscsim.simulators import SimulatorKind, child_seed, default_params, simulate

for kind in SimulatorKind:
    params = default_params(kind)
    ds = simulate(kind, params, seed=child_seed(7, kind, 0), resample=0)
    print(f"{kind.value:>10}: train {ds.X_train.shape}, test {ds.X_test.shape}, model {ds.model}")

# Interval problems share their shape positions across every series.
ds = simulate("interval", default_params("interval", cases_per_class=(5, 5)), seed=1)
print("\ninterval starts per series:", {tuple(p.start for p in w) for w in ds.train_placements})

# Dictionary problems differ only in how often each of two shapes occurs.
ds = simulate("dictionary", default_params("dictionary", cases_per_class=(5, 5)), seed=1)
first = ds.train_placements[0]
kinds = [p.shape.value for p in first]
print("dictionary series 0 (class", ds.y_train[0], "):", {k: kinds.count(k) for k in set(kinds)})
