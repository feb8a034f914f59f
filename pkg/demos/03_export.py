"""Writing a simulated problem to ARFF and CSV and reading it back.

Run: python demos/03_export.py [output-dir]
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

from tscsim.dataset_io import read_dataset_pair, write_dataset
from tscsim.simulators import simulate

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
ds = simulate("shapelet", seed=3)
for fmt in ("arff", "csv"):
    train, test = write_dataset(ds, fmt, out / "shapelet")
    back = read_dataset_pair(out / "shapelet", fmt)
    err = np.max(np.abs(back.X_test - ds.X_test) / np.maximum(np.abs(ds.X_test), 1e-12))
    print(f"{fmt}: {train.name}, {test.name}; worst relative round-trip error {err:.1e}")

print("\nfirst lines of the ARFF train file:")
print("\n".join((out / "shapelet_TRAIN.arff").read_text().splitlines()[:4]))
