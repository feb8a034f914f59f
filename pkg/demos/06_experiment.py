"""A small end-to-end experiment with pooled reporting.

The same run is available from the shell:

    tscsim experiment --simulator elastic,arma --resamples 5 --out results/

Run: python demos/06_experiment.py [output-dir]
"""

import sys
import tempfile
from pathlib import Path

from tscsim.experiment import ExperimentConfig, run_experiment

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
config = ExperimentConfig(
    simulators=["elastic", "arma"],
    resamples=5,
    master_seed=1,
    classifiers=("ed1nn", "dtw1nn_cv", "ivf"),
    out_dir=out,
)
doc, paths = run_experiment(config)
for name, path in paths.items():
    print(f"{name:>18}: {path}")
print()
print(paths["report"].read_text())
