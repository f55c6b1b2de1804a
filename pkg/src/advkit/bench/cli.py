"""The ``bench`` command line interface.

Subcommands: ``run`` (execute a benchmark config and write the report),
``compare`` (check two report files for comparability), ``train`` (fit and
save a model), ``version``.  Exit codes: 0 success, 2 usage or
configuration error, 3 version-comparability refusal.
"""

import argparse
import sys

import advkit
from advkit.bench.report import compare_reports, load_report
from advkit.bench.runner import run_benchmark, train_model
from advkit.errors import (
    ArgumentError,
    ConfigError,
    FormatError,
    VersionMismatchError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERSION = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Adversarial robustness benchmarks with versioned, "
                    "reproducible reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a benchmark config")
    run.add_argument("config", help="path to the benchmark config file")
    run.add_argument("--seed", type=int, default=None,
                     help="override the [report] seed")
    run.add_argument("--out", default=None,
                     help="override the report output path")

    compare = sub.add_parser("compare", help="compare two report files")
    compare.add_argument("report_a")
    compare.add_argument("report_b")

    train = sub.add_parser("train", help="train a model from a config")
    train.add_argument("config", help="path to the config file")

    sub.add_parser("version", help="print the toolkit version")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "version":
            print(advkit.__version__)
            return EXIT_OK
        if args.command == "run":
            report, out_path = run_benchmark(args.config, args.seed, args.out)
            print(f"report written to {out_path}")
            print(f"clean accuracy        {report.clean_accuracy:.4f}")
            print(f"adversarial accuracy  {report.adversarial_accuracy:.4f}")
            print(f"attack success rate   {report.attack_success_rate:.4f}")
            print(f"wall time             {report.wall_time_s:.3f}s")
            print(report.citation_line)
            return EXIT_OK
        if args.command == "train":
            path = train_model(args.config)
            print(f"weights written to {path}")
            return EXIT_OK
        # compare
        verdict = compare_reports(load_report(args.report_a),
                                  load_report(args.report_b))
        print(verdict.describe())
        return EXIT_OK if verdict.comparable else EXIT_VERSION
    except VersionMismatchError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_VERSION
    except (ConfigError, FormatError, ArgumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
