"""Simulated time series classification problems and classifier comparison.

Five generators each plant a different kind of discriminatory feature in
white noise. Baseline classifiers are run over many resamples, and the
results are compared with rank statistics.
"""

from tscsim.classifiers import (
    DTWCrossValidated,
    IntervalForest,
    NearestNeighbor,
    dtw_distance,
    fit_predict_1nn,
    interval_forest,
    make_classifier,
    pairwise_dtw,
    select_dtw_window,
)
from tscsim.dataset_io import read_dataset, read_results, write_dataset, write_results
from tscsim.errors import (
    CliqueAnomalyWarning,
    ConfigurationError,
    DegenerateConfigurationWarning,
    InvalidShapeError,
    ParseError,
    PlacementError,
    SchemaVersionError,
    UnsupportedInputError,
    ValidationError,
)
from tscsim.experiment import ExperimentConfig, report, run_experiment
from tscsim.shapes import ShapeKind, ShapeSpec, insert_shape, render_shape
from tscsim.simulators import (
    DatasetPair,
    SimulatorKind,
    child_seed,
    default_params,
    simulate,
)
from tscsim.stats import (
    form_cliques,
    friedman_test,
    holm_correct,
    pairwise_wilcoxon,
    summarize,
    wilcoxon_signed_rank,
)
from tscsim.cdplot import render_cd_diagram

__version__ = "0.1.0"
