"""End-to-end experiments: simulate, fit, score, compare.

Every ``(simulator, resample)`` pair gets its own seed from
:func:`~tscsim.simulators.child_seed`, and every classifier run on it is an
independent cell. Cells can run in a process pool; results are merged by
their index so the output does not depend on completion order.
"""

import functools
import logging
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from tscsim import dataset_io
from tscsim.cdplot import render_cd_diagram
from tscsim.classifiers import CLASSIFIER_NAMES, DEFAULT_WINDOW_GRID, make_classifier, znormalize
from tscsim.errors import ConfigurationError
from tscsim.simulators import SimulatorKind, child_seed, default_params, simulate
from tscsim.stats import (
    boxplot_summary,
    form_cliques,
    friedman_test,
    pairwise_wilcoxon,
    rejection_matrix,
    summarize,
)

__all__ = [
    "DEFAULT_RESAMPLES",
    "ExperimentConfig",
    "build_params",
    "run_cell",
    "run_experiment",
    "accuracy_matrices",
    "report",
    "markdown_table",
]

log = logging.getLogger(__name__)

DEFAULT_RESAMPLES = 25
POOLED = "pooled"


@dataclass
class ExperimentConfig:
    """Settings for :func:`run_experiment`.

    ``simulators`` is a list of simulator names or ``"all"``. When more than
    one simulator runs, a pooled comparison over all their resamples is
    reported as well. ``overrides`` maps a simulator name to extra parameter
    fields, e.g. ``{"dictionary": {"cases_per_class": (20, 20)}}``.
    """

    simulators: object = "all"
    resamples: int = DEFAULT_RESAMPLES
    master_seed: int = 0
    classifiers: tuple = ("ed1nn", "dtw1nn_cv", "ivf")
    out_dir: object = None
    noise_sigma: float = None
    amplitude: float = None
    train_prop: float = None
    normalize: bool = False
    jobs: int = 1
    alpha: float = 0.05
    window_grid: tuple = DEFAULT_WINDOW_GRID
    n_trees: int = 200
    overrides: dict = field(default_factory=dict)

    def simulator_kinds(self):
        if self.simulators == "all":
            return list(SimulatorKind)
        names = [self.simulators] if isinstance(self.simulators, (str, SimulatorKind)) else self.simulators
        kinds = []
        for name in names:
            try:
                kind = SimulatorKind(name)
            except ValueError:
                raise ConfigurationError(f"unknown simulator {name!r}") from None
            if kind not in kinds:
                kinds.append(kind)
        if not kinds:
            raise ConfigurationError("no simulator selected")
        return kinds

    def echo(self):
        """The settings that determine results (no paths, no worker count)."""
        return {
            "simulators": [k.value for k in self.simulator_kinds()],
            "resamples": self.resamples,
            "master_seed": self.master_seed,
            "classifiers": list(self.classifiers),
            "noise_sigma": self.noise_sigma,
            "amplitude": self.amplitude,
            "train_prop": self.train_prop,
            "normalize": self.normalize,
            "alpha": self.alpha,
            "window_grid": list(self.window_grid),
            "n_trees": self.n_trees,
            "overrides": {k: {f: _plain(v) for f, v in o.items()} for k, o in sorted(self.overrides.items())},
            "params": {k.value: _plain(vars(build_params(self, k))) for k in self.simulator_kinds()},
        }


def _plain(value):
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


def _frozen(value):
    # parameters are cache keys, so nested lists become tuples
    if isinstance(value, (tuple, list)):
        return tuple(_frozen(v) for v in value)
    return value


def build_params(config, kind):
    overrides = {k: _frozen(v) for k, v in config.overrides.get(kind.value, {}).items()}
    for name in ("noise_sigma", "amplitude", "train_prop"):
        value = getattr(config, name)
        if value is not None:
            overrides.setdefault(name, value)
    try:
        params = default_params(kind, **overrides)
    except TypeError as exc:
        raise ConfigurationError(f"bad override for {kind.value}: {exc}") from None
    params.validate()
    return params


def _validate(config):
    if int(config.resamples) != config.resamples or config.resamples < 1:
        raise ConfigurationError("resamples must be a positive integer")
    if config.jobs < 1:
        raise ConfigurationError("jobs must be >= 1")
    if len(config.classifiers) < 2:
        raise ConfigurationError("a comparison needs at least two classifiers")
    if len(set(config.classifiers)) != len(config.classifiers):
        raise ConfigurationError("classifier names must be unique")
    for name in config.classifiers:
        if name not in CLASSIFIER_NAMES:
            raise ConfigurationError(f"unknown classifier {name!r}; choose from {', '.join(CLASSIFIER_NAMES)}")
    if not 0 < config.alpha < 1:
        raise ConfigurationError("alpha must lie in (0, 1)")
    unknown = set(config.overrides) - {k.value for k in SimulatorKind}
    if unknown:
        raise ConfigurationError(f"overrides name unknown simulators: {sorted(unknown)}")
    for kind in config.simulator_kinds():
        build_params(config, kind)


def classifier_seed(seed, name):
    return int(np.random.SeedSequence([seed, CLASSIFIER_NAMES.index(name)]).generate_state(1)[0])


@functools.lru_cache(maxsize=2)
def _dataset(kind, params, seed, resample, normalize):
    ds = simulate(kind, params, seed=seed, resample=resample)
    if normalize:
        ds.X_train = znormalize(ds.X_train)
        ds.X_test = znormalize(ds.X_test)
    return ds


def run_cell(config, kind, resample, name):
    """Fit one classifier on one resample and score it once on the test split."""
    params = build_params(config, kind)
    seed = child_seed(config.master_seed, kind, resample)
    entry = {"accuracy": None, "error": None, "summary": {}, "fit_seconds": 0.0, "predict_seconds": 0.0}
    try:
        ds = _dataset(kind, params, seed, resample, config.normalize)
        clf = make_classifier(
            name, seed=classifier_seed(seed, name), grid=config.window_grid, n_trees=config.n_trees
        )
        t0 = time.perf_counter()
        clf.fit(ds.X_train, ds.y_train)
        t1 = time.perf_counter()
        pred = clf.predict(ds.X_test)
        t2 = time.perf_counter()
        entry["accuracy"] = float(np.mean(pred == ds.y_test))
        entry["summary"] = clf.summary() if hasattr(clf, "summary") else {}
        entry["fit_seconds"] = t1 - t0
        entry["predict_seconds"] = t2 - t1
    except Exception as exc:  # a failed cell must not abort the run
        log.warning("%s resample %d %s failed: %s", kind.value, resample, name, exc)
        entry["error"] = f"{type(exc).__name__}: {exc}"
    return entry


def _run_cell_task(args):
    return run_cell(*args)


def run_experiment(config):
    """Run every (simulator, resample, classifier) cell and write the reports.

    Returns
    -------
    doc : dict
        The results document (see :mod:`tscsim.dataset_io`).
    paths : dict
        Files written, keyed by artifact name; empty without ``out_dir``.

    Raises
    ------
    ConfigurationError
        Before any generation, if the configuration is invalid.
    """
    _validate(config)
    kinds = config.simulator_kinds()
    tasks = [
        (config, kind, r, name)
        for kind in kinds
        for r in range(config.resamples)
        for name in config.classifiers
    ]
    if config.jobs == 1:
        entries = [_run_cell_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            entries = list(pool.map(_run_cell_task, tasks, chunksize=1))

    cells = []
    it = iter(entries)
    for kind in kinds:
        for r in range(config.resamples):
            results = {name: next(it) for name in config.classifiers}
            cells.append({
                "simulator": kind.value,
                "resample": r,
                "child_seed": child_seed(config.master_seed, kind, r),
                "results": results,
            })
    doc = {
        "schema": dataset_io.SCHEMA_NAME,
        "schema_version": dataset_io.SCHEMA_VERSION,
        "config": config.echo(),
        "simulators": [k.value for k in kinds],
        "classifiers": list(config.classifiers),
        "cells": cells,
    }
    dataset_io.validate_results(doc)
    paths = {}
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths["results"] = dataset_io.write_results(doc, out / "results.json")
        paths.update(report(doc, out, alpha=config.alpha))
    return doc, paths


def accuracy_matrices(doc):
    """Accuracy matrix per simulator, plus ``"pooled"`` when several ran.

    Failed cells are NaN.
    """
    names = doc["classifiers"]
    by_sim = {}
    for cell in doc["cells"]:
        row = [cell["results"][n]["accuracy"] for n in names]
        by_sim.setdefault(cell["simulator"], []).append([np.nan if a is None else a for a in row])
    out = {sim: np.asarray(rows, dtype=float) for sim, rows in by_sim.items()}
    if len(out) > 1:
        out[POOLED] = np.vstack(list(out.values()))
    return out


def markdown_table(summary):
    lines = [
        "| classifier | mean accuracy | std error | mean rank |",
        "|---|---|---|---|",
    ]
    for j in summary.order():
        se = summary.std_error[j]
        se_text = "n/a" if math.isnan(se) else f"{100 * se:.2f}%"
        lines.append(
            f"| {summary.names[j]} | {100 * summary.mean_accuracy[j]:.2f}% | {se_text} | "
            f"{summary.mean_rank[j]:.2f} |"
        )
    return "\n".join(lines)


def _group_report(name, M, classifiers, out, alpha):
    paths = {}
    lines = [f"## {name}", ""]
    if not (~np.isnan(M).any(axis=1)).any():
        lines.append(f"No resample has results for every classifier ({M.shape[0]} excluded); ranking skipped.")
        lines.append("")
        return "\n".join(lines), paths
    summary = summarize(M, classifiers)
    lines.append(markdown_table(summary))
    lines.append("")
    if summary.excluded_rows:
        lines.append(f"{summary.excluded_rows} resample(s) with failed cells excluded from ranking.")
        lines.append("")
    if len(classifiers) < 2:
        return "\n".join(lines), paths
    try:
        fr = friedman_test(M)
        lines.append(f"Friedman chi-square = {fr.statistic:.4f}, df = {fr.df}, p = {fr.pvalue:.4g}")
    except Exception as exc:
        lines.append(f"Friedman test not applicable: {exc}")
    lines.append("")
    pairwise = pairwise_wilcoxon(M, classifiers, alpha)
    lines.append(f"| pair | W | p | significant (Holm, alpha={alpha}) |")
    lines.append("|---|---|---|---|")
    for res in pairwise:
        lines.append(f"| {res.a} vs {res.b} | {res.statistic:g} | {res.pvalue:.4g} | {'yes' if res.reject else 'no'} |")
    lines.append("")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cliques = form_cliques(summary, rejection_matrix(pairwise, summary.names))
    lines.append("Cliques: " + "; ".join("{" + ", ".join(c) + "}" for c in cliques.named(summary.names)))
    if cliques.anomalies:
        lines.append(
            "Warning: non-significant pairs split across cliques: "
            + ", ".join(f"{a}-{b}" for a, b in cliques.anomalies)
        )
    lines.append("")
    cd_path = out / f"cd_{name}.svg"
    render_cd_diagram(summary, cliques, cd_path, title=f"{name}: mean rank")
    box_path = out / f"boxplot_{name}.csv"
    boxplot_summary(M, classifiers, box_path)
    paths[f"cd_{name}"] = cd_path
    paths[f"boxplot_{name}"] = box_path
    lines.append(f"![critical difference diagram]({cd_path.name})")
    lines.append("")
    return "\n".join(lines), paths


def report(results, out_dir, alpha=None):
    """Regenerate every report artifact from stored accuracies.

    Parameters
    ----------
    results : dict or path
        A results document or the path of one.
    out_dir : path
        Receives ``report.md``, ``cd_<group>.svg`` and ``boxplot_<group>.csv``.
    alpha : float, optional
        Family-wise level; defaults to the one recorded in the document.
    """
    doc = results if isinstance(results, dict) else dataset_io.read_results(results)
    dataset_io.validate_results(doc)
    alpha = alpha if alpha is not None else doc.get("config", {}).get("alpha", 0.05)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    classifiers = doc["classifiers"]
    sections = ["# Classifier comparison", ""]
    paths = {}
    for name, M in accuracy_matrices(doc).items():
        text, written = _group_report(name, M, classifiers, out, alpha)
        sections.append(text)
        paths.update(written)
    md = out / "report.md"
    md.write_text("\n".join(sections).rstrip() + "\n", encoding="utf-8")
    paths["report"] = md
    return paths
