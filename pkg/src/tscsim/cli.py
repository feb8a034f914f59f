"""Command line entry point: ``tscsim generate | experiment | report``.

Exit status is 0 on success, 1 on a configuration error and 2 on any other
failure.
"""

import argparse
import logging
import sys
from pathlib import Path

from tscsim import dataset_io
from tscsim.classifiers import CLASSIFIER_NAMES
from tscsim.errors import ConfigurationError
from tscsim.experiment import DEFAULT_RESAMPLES, ExperimentConfig, build_params, report, run_experiment
from tscsim.simulators import SimulatorKind, child_seed, simulate

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

SIMULATOR_CHOICES = [k.value for k in SimulatorKind] + ["all"]


def _csv_list(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_data_flags(p):
    p.add_argument("--simulator", default="all", type=_csv_list,
                   help="comma-separated simulator names or 'all' (default: all)")
    p.add_argument("--resamples", type=int, default=DEFAULT_RESAMPLES)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--noise-sigma", type=float, default=None)
    p.add_argument("--amplitude", type=float, default=None)
    p.add_argument("--train-prop", type=float, default=None)
    p.add_argument("--out", required=True, type=Path, help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(prog="tscsim", description="Simulated time series classification benchmarks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    gen = sub.add_parser("generate", help="write simulated datasets as ARFF or CSV")
    _add_data_flags(gen)
    gen.add_argument("--format", choices=["arff", "csv"], default="arff")

    exp = sub.add_parser("experiment", help="simulate, classify and report")
    _add_data_flags(exp)
    exp.add_argument("--classifiers", type=_csv_list, default=["ed1nn", "dtw1nn_cv", "ivf"],
                     help=f"comma-separated subset of {', '.join(CLASSIFIER_NAMES)}")
    exp.add_argument("--jobs", type=int, default=1)
    exp.add_argument("--normalize", action="store_true", help="z-normalise every series first")
    exp.add_argument("--alpha", type=float, default=0.05)

    rep = sub.add_parser("report", help="rebuild reports from a results.json")
    rep.add_argument("results", type=Path)
    rep.add_argument("--out", type=Path, default=None, help="defaults to the results file's directory")
    return parser


def _config(args, **extra):
    sims = "all" if args.simulator == ["all"] or not args.simulator else args.simulator
    return ExperimentConfig(
        simulators=sims,
        resamples=args.resamples,
        master_seed=args.seed,
        out_dir=args.out,
        noise_sigma=args.noise_sigma,
        amplitude=args.amplitude,
        train_prop=args.train_prop,
        **extra,
    )


def cmd_generate(args):
    config = _config(args)
    if config.resamples < 1:
        raise ConfigurationError("resamples must be a positive integer")
    kinds = config.simulator_kinds()
    params = {kind: build_params(config, kind) for kind in kinds}
    args.out.mkdir(parents=True, exist_ok=True)
    for kind in kinds:
        for r in range(config.resamples):
            ds = simulate(kind, params[kind], seed=child_seed(config.master_seed, kind, r), resample=r)
            train, test = dataset_io.write_dataset(ds, args.format, args.out / f"{kind.value}_{r:03d}")
            print(f"{train}\n{test}")
    return EXIT_OK


def cmd_experiment(args):
    config = _config(
        args, classifiers=tuple(args.classifiers), jobs=args.jobs, normalize=args.normalize, alpha=args.alpha
    )
    doc, paths = run_experiment(config)
    failed = sum(
        1 for cell in doc["cells"] for entry in cell["results"].values() if entry["accuracy"] is None
    )
    for name, path in paths.items():
        print(f"{name}: {path}")
    if failed:
        print(f"{failed} cell(s) failed; see results.json", file=sys.stderr)
    return EXIT_OK


def cmd_report(args):
    out = args.out or args.results.parent
    for name, path in report(args.results, out).items():
        print(f"{name}: {path}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"generate": cmd_generate, "experiment": cmd_experiment, "report": cmd_report}[args.verb]
    try:
        return handler(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
