import json

import numpy as np
import pytest

from tscsim import dataset_io
from tscsim.cli import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, main
from tscsim.errors import ConfigurationError, SchemaVersionError, ValidationError
from tscsim.experiment import ExperimentConfig, accuracy_matrices, report, run_experiment

SMALL = {
    "elastic": {"series_length": 40, "cases_per_class": (10, 10), "train_prop": 0.3},
    "interval": {"series_length": 120, "cases_per_class": (10, 10), "train_prop": 0.3},
    "shapelet": {"series_length": 60, "cases_per_class": (10, 10), "train_prop": 0.3, "shapelet_length": 11},
    "dictionary": {"series_length": 150, "cases_per_class": (10, 10), "train_prop": 0.3,
                   "shapelets_per_class": (1, 3), "shape_length": 11},
    "arma": {"series_length": 40, "cases_per_class": (10, 10), "train_prop": 0.3},
}


def small_config(**kw):
    base = dict(resamples=2, classifiers=("ed1nn", "dtw1nn_cv"), window_grid=(0.0, 0.1), n_trees=5, overrides=SMALL)
    base.update(kw)
    return ExperimentConfig(**base)


def test_elastic_five_resamples(tmp_path):
    doc, paths = run_experiment(small_config(simulators=["elastic"], resamples=5, out_dir=tmp_path))
    mats = accuracy_matrices(doc)
    assert list(mats) == ["elastic"]
    assert mats["elastic"].shape == (5, 2)
    assert sorted(p.name for p in tmp_path.glob("*.svg")) == ["cd_elastic.svg"]
    assert set(paths) >= {"results", "report", "cd_elastic", "boxplot_elastic"}


def test_pooled_over_all_simulators(tmp_path):
    doc, _ = run_experiment(small_config(simulators="all", out_dir=tmp_path,
                                         classifiers=("ed1nn", "dtw1nn_full", "ivf")))
    mats = accuracy_matrices(doc)
    assert mats["pooled"].shape == (10, 3)
    np.testing.assert_array_equal(mats["pooled"][:2], mats["elastic"])
    text = (tmp_path / "report.md").read_text()
    assert "## pooled" in text and "Friedman chi-square" in text


def test_repeat_runs_identical_modulo_timing():
    a, _ = run_experiment(small_config(simulators=["shapelet", "arma"]))
    b, _ = run_experiment(small_config(simulators=["shapelet", "arma"]))
    assert dataset_io.dumps_results(dataset_io.strip_timing(a)) == dataset_io.dumps_results(dataset_io.strip_timing(b))


def test_parallel_matches_serial():
    cfg = dict(simulators=["elastic", "interval"], classifiers=("ed1nn", "ivf"))
    a, _ = run_experiment(small_config(**cfg))
    b, _ = run_experiment(small_config(jobs=3, **cfg))
    assert dataset_io.strip_timing(a) == dataset_io.strip_timing(b)


def test_config_echo_excludes_paths_and_workers(tmp_path):
    doc, _ = run_experiment(small_config(simulators=["arma"], out_dir=tmp_path, jobs=2))
    assert "out_dir" not in doc["config"] and "jobs" not in doc["config"]
    assert doc["config"]["params"]["arma"]["series_length"] == 40
    assert all(isinstance(c["child_seed"], int) for c in doc["cells"])


@pytest.mark.parametrize("kw", [
    {"resamples": 0},
    {"classifiers": ("ed1nn",)},
    {"classifiers": ("ed1nn", "ed1nn")},
    {"classifiers": ("ed1nn", "boss")},
    {"simulators": ["nope"]},
    {"jobs": 0},
    {"amplitude": -1.0},
    {"overrides": {"elastic": {"series_length": 5}}},
    {"overrides": {"elastic": {"colour": 1}}},
    {"overrides": {"spectral": {}}},
])
def test_configuration_errors_fail_fast(kw, tmp_path):
    kw = {"simulators": ["elastic"], **kw}
    with pytest.raises(ConfigurationError):
        run_experiment(small_config(out_dir=tmp_path / "out", **kw))
    assert not (tmp_path / "out").exists()


def test_classifier_failure_is_recorded(monkeypatch, tmp_path):
    import tscsim.experiment as experiment

    real = experiment.make_classifier

    def flaky(name, **kw):
        if name == "dtw1nn_cv":
            raise RuntimeError("boom")
        return real(name, **kw)

    monkeypatch.setattr(experiment, "make_classifier", flaky)
    doc, _ = run_experiment(small_config(simulators=["elastic"], classifiers=("ed1nn", "dtw1nn_cv", "ivf"),
                                         out_dir=tmp_path))
    entries = [c["results"]["dtw1nn_cv"] for c in doc["cells"]]
    assert all(e["accuracy"] is None and "boom" in e["error"] for e in entries)
    assert all(c["results"]["ed1nn"]["accuracy"] is not None for c in doc["cells"])
    assert "ranking skipped" in (tmp_path / "report.md").read_text()


def test_report_two_classifiers_two_rows(tmp_path):
    run_experiment(small_config(simulators=["elastic"], out_dir=tmp_path))
    text = (tmp_path / "report.md").read_text()
    table = [line for line in text.splitlines() if line.startswith("| ") and "%" in line]
    assert len(table) == 2
    assert "Friedman test not applicable" in text


def test_report_regenerates_identically(tmp_path):
    run_experiment(small_config(simulators=["elastic", "arma"], out_dir=tmp_path / "a",
                                classifiers=("ed1nn", "dtw1nn_full", "ivf")))
    report(tmp_path / "a" / "results.json", tmp_path / "b")
    report(tmp_path / "a" / "results.json", tmp_path / "c")
    for name in ("report.md", "cd_pooled.svg", "boxplot_arma.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        assert (tmp_path / "b" / name).read_bytes() == (tmp_path / "c" / name).read_bytes()


def test_report_tampered_accuracy(tmp_path):
    run_experiment(small_config(simulators=["elastic"], out_dir=tmp_path))
    doc = json.loads((tmp_path / "results.json").read_text())
    doc["cells"][1]["results"]["ed1nn"]["accuracy"] = 1.5
    (tmp_path / "results.json").write_text(json.dumps(doc))
    with pytest.raises(ValidationError, match="simulator=elastic resample=1 classifier=ed1nn"):
        report(tmp_path / "results.json", tmp_path)


def test_report_schema_version(tmp_path):
    run_experiment(small_config(simulators=["elastic"], out_dir=tmp_path))
    doc = json.loads((tmp_path / "results.json").read_text())
    doc["schema_version"] = 2
    with pytest.raises(SchemaVersionError):
        report(doc, tmp_path)


# ---------------------------------------------------------------------------
# command line


def test_cli_generate(tmp_path, capsys):
    rc = main(["generate", "--simulator", "shapelet,arma", "--resamples", "2", "--seed", "3",
               "--format", "csv", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [f"{s}_{r:03d}_{h}.csv" for s in ("arma", "shapelet") for r in (0, 1) for h in ("TEST", "TRAIN")]
    X, y = dataset_io.read_dataset(tmp_path / "shapelet_000_TRAIN.csv")
    assert X.shape == (10, 300)


def test_cli_experiment_and_report(tmp_path, capsys):
    rc = main(["experiment", "--simulator", "arma", "--resamples", "3", "--seed", "1",
               "--classifiers", "ed1nn,ivf", "--noise-sigma", "0.5", "--train-prop", "0.2",
               "--normalize", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    doc = dataset_io.read_results(tmp_path / "results.json")
    assert doc["config"]["noise_sigma"] == 0.5 and doc["config"]["normalize"] is True
    assert doc["config"]["params"]["arma"]["train_prop"] == 0.2
    first = (tmp_path / "report.md").read_bytes()
    assert main(["report", str(tmp_path / "results.json")]) == EXIT_OK
    assert (tmp_path / "report.md").read_bytes() == first


@pytest.mark.parametrize("argv", [
    ["experiment", "--simulator", "bogus", "--out", "x"],
    ["experiment", "--simulator", "arma", "--classifiers", "ed1nn", "--out", "x"],
    ["experiment", "--simulator", "arma", "--resamples", "0", "--out", "x"],
    ["generate", "--simulator", "elastic", "--train-prop", "0.001", "--out", "x"],
])
def test_cli_configuration_error_exit_code(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_cli_runtime_error_exit_code(tmp_path, capsys):
    assert main(["report", str(tmp_path / "missing.json")]) == EXIT_RUNTIME
    (tmp_path / "bad.json").write_text("{}")
    assert main(["report", str(tmp_path / "bad.json")]) == EXIT_RUNTIME
