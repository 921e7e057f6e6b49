"""
Command-line front end: ``python -m faabe <command>``.

    run       one dataset, ABE vs FAABE for one or more seeds
    suite     every dataset in a run-config file
    describe  project/feature counts and effort statistics
    selftest  built-in checks with hand-computed answers
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

import pandas as pd

from faabe import __version__, config
from faabe.abe_core import SimilarityKind, SolutionKind
from faabe.datasets import check_expected, dataset_available, describe, format_summaries, load_dataset, load_manifest, resolve_dataset
from faabe.errors import EXIT_CONFIG, EXIT_DATA, EXIT_INTERNAL, EXIT_OK, ConfigError, DataError, FaabeError
from faabe.experiment import build_run_configs, resolve_options, run_suite, similarity_kinds
from faabe.log import setup_logger
from faabe.report import render_csv, render_json, render_table
from faabe.selftest import run_selftest

logger = logging.getLogger(__name__)

FORMATS = ("text", "json", "csv")


class CliArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the config-error code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _bounded(kind, name, minimum=None, maximum=None):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if minimum is not None and value < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}")
        if maximum is not None and value > maximum:
            raise argparse.ArgumentTypeError(f"{name} must be <= {maximum}")
        return value

    return parse


SIMILARITY_CHOICES = ", ".join(k.value for k in SimilarityKind)


def _similarity_list(text):
    try:
        return [kind.value for kind in similarity_kinds(text)]
    except ConfigError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


# (flag, run-config key, argparse keywords, help)
TUNING_FLAGS = (
    ("--similarity", "similarity", {"type": _similarity_list}, f"similarity function(s), comma separated: {SIMILARITY_CHOICES} (default: {config.SIMILARITY})"),
    ("--solution", "solution", {"choices": [k.value for k in SolutionKind]}, f"solution function (default: {config.SOLUTION})"),
    ("--k", "k", {"type": _bounded(int, "k", 1)}, f"number of analogies (default: {config.K_ANALOGIES})"),
    ("--corr-threshold", "corr_threshold", {"type": _bounded(float, "corr-threshold", 0.0, 1.0)}, f"minimum |r| with effort to keep a feature (default: {config.CORR_THRESHOLD})"),
    ("--pop", "pop", {"type": _bounded(int, "pop", 1)}, f"number of fireflies (default: {config.POPULATION})"),
    ("--iters", "iters", {"type": _bounded(int, "iters", 0)}, f"firefly iterations (default: {config.MAX_ITERATIONS})"),
    ("--gamma", "gamma", {"type": _bounded(float, "gamma", 0.0)}, f"light absorption coefficient (default: {config.GAMMA})"),
    ("--alpha", "alpha", {"type": _bounded(float, "alpha", 0.0)}, f"random step scale (default: {config.ALPHA})"),
    ("--alpha-decay", "alpha_decay", {"type": _bounded(float, "alpha-decay", 0.0, 1.0)}, f"alpha multiplier per iteration (default: {config.ALPHA_DECAY})"),
    ("--beta0", "beta0", {"type": _bounded(float, "beta0", 0.0)}, f"attractiveness at distance 0 (default: {config.BETA0})"),
    ("--seed", "seed", {"type": _bounded(int, "seed", 0)}, f"first seed (default: {config.BASE_SEED})"),
    ("--test-fraction", "test_fraction", {"type": _bounded(float, "test-fraction", 0.0, 1.0)}, f"share of projects held out (default: {config.TEST_FRACTION})"),
    ("--basic-fraction", "basic_fraction", {"type": _bounded(float, "basic-fraction", 0.0, 1.0)}, f"share of the rest used as case base (default: {config.BASIC_FRACTION})"),
    ("--strict-basic", "strict_basic", {"action": "store_true"}, f"estimate test projects from the basic subset only (default: {config.STRICT_BASIC})"),
    ("--no-seed-all-ones", "seed_all_ones", {"action": "store_false"}, "do not put the all-ones weights into the initial population"),
    ("--jobs", "jobs", {"type": _bounded(int, "jobs", 1)}, f"worker processes (default: {config.JOBS})"),
    ("--output-dir", "output_dir", {}, f"results root (default: {config.RESULTS_DIR})"),
)

SUBCOMMAND_FLAGS = {
    "run": ("--dataset", "--repeats", "--config", "--format", "--plot", "--quiet") + tuple(f[0] for f in TUNING_FLAGS),
    "suite": ("--config", "--repeats", "--format", "--plot", "--quiet") + tuple(f[0] for f in TUNING_FLAGS),
    "describe": ("--dataset", "--check", "--format", "--quiet"),
    "selftest": ("--quiet",),
}


@dataclass(frozen=True)
class CliCommand:
    name: str                                 # run | suite | describe | selftest
    dataset: str = None
    config_path: str = None
    overrides: dict = field(default_factory=dict)
    output_format: str = "text"
    quiet: bool = False
    plot: bool = None
    check: bool = False


def _add_output_flags(parser, plot=True):
    parser.add_argument("--format", dest="output_format", choices=FORMATS, default="text", help="stdout rendering (default: text)")
    parser.add_argument("--quiet", action="store_true", help="only warnings and errors, no text table (default: off)")
    if plot:
        parser.add_argument("--plot", action="store_true", default=None, help=f"also write summary.png (default: {config.WRITE_PLOT})")


def _add_tuning_flags(parser):
    for flag, key, kwargs, help_text in TUNING_FLAGS:
        parser.add_argument(flag, dest=key, default=None, help=help_text, **kwargs)


def build_parser():
    parser = CliArgumentParser(prog="faabe", description="Analogy-based effort estimation with firefly-optimized feature weights.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    run = sub.add_parser("run", help="compare ABE and FAABE on one dataset")
    run.add_argument("--dataset", required=True, help="registry name or path to a .csv with a sibling .manifest")
    run.add_argument("--repeats", type=_bounded(int, "repeats", 1), default=1, help="number of consecutive seeds (default: 1)")
    run.add_argument("--config", dest="config_path", help="run-config file with defaults for this run (default: none)")
    _add_tuning_flags(run)
    _add_output_flags(run)

    suite = sub.add_parser("suite", help="run every dataset of a config file")
    suite.add_argument("--config", dest="config_path", help="run-config file (default: built-in settings, all datasets)")
    suite.add_argument("--repeats", type=_bounded(int, "repeats", 1), default=None, help=f"seeds per dataset (default: {config.REPEATS})")
    _add_tuning_flags(suite)
    _add_output_flags(suite)

    desc = sub.add_parser("describe", help="descriptive statistics of datasets")
    desc.add_argument("--dataset", default="all", help="registry name, .csv path or 'all' (default: all)")
    desc.add_argument("--check", action="store_true", help="fail when statistics differ from the manifest (default: off)")
    _add_output_flags(desc, plot=False)

    selftest = sub.add_parser("selftest", help="run the built-in checks")
    selftest.add_argument("--quiet", action="store_true", help="only report failures (default: off)")
    return parser


def parse_args(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.command in ("run", "suite"):
        overrides = {key: getattr(args, key) for _, key, _, _ in TUNING_FLAGS}
        overrides["repeats"] = args.repeats
        overrides = {k: v for k, v in overrides.items() if v is not None}
    return CliCommand(
        name=args.command,
        dataset=getattr(args, "dataset", None),
        config_path=getattr(args, "config_path", None),
        overrides=overrides,
        output_format=getattr(args, "output_format", "text"),
        quiet=args.quiet,
        plot=getattr(args, "plot", None),
        check=getattr(args, "check", False),
    )


# ---------- commands ----------
def _emit_rows(rows, command, **extra):
    if command.output_format == "json":
        print(render_json(rows, **extra), end="")
    elif command.output_format == "csv":
        print(render_csv(rows), end="")
    elif not command.quiet:
        print(render_table(rows), end="")


def _run(command):
    options = resolve_options(command.config_path, {**command.overrides, "datasets": [command.dataset]})
    options["seeds"] = None                   # run counts seeds from --seed and --repeats
    cfgs = build_run_configs(options)
    result = run_suite(cfgs, plot=command.plot, raise_errors=True)
    rows = result.rows if len(cfgs[0].seeds) == 1 else result.summary
    _emit_rows(rows, command)
    return EXIT_OK


def _suite(command):
    options = resolve_options(command.config_path, command.overrides, suite=True)
    if "seed" in command.overrides or "repeats" in command.overrides:
        options["seeds"] = None
    cfgs = build_run_configs(options)
    result = run_suite(cfgs, plot=command.plot)
    _emit_rows(result.summary, command, failures=result.failures)
    if result.failures:
        logger.warning(f"⚠️ {len(result.failures)} run(s) failed; see summary.json")
        return EXIT_DATA
    return EXIT_OK


def _describe(command):
    if command.dataset.lower() == "all":
        names = [name for name in config.DATASETS if dataset_available(name)]
        if not names:
            raise DataError(f"no benchmark datasets found in {config.DATA_DIR}")
        absent = [name for name in config.DATASETS if name not in names]
        if absent:
            logger.warning(f"⚠️ Not in {config.DATA_DIR}: {', '.join(absent)}")
    else:
        names = [command.dataset]

    summaries, problems = [], []
    for name in names:
        summary = describe(load_dataset(name))
        summaries.append(summary)
        if command.check:
            manifest = load_manifest(resolve_dataset(name)[1])
            problems.extend(f"{summary.name}: {p}" for p in check_expected(summary, manifest))

    if command.output_format == "json":
        print(json.dumps({s.name: s.to_dict() for s in summaries}, indent=2))
    elif command.output_format == "csv":
        frame = pd.DataFrame([{"dataset": s.name, **s.to_dict()} for s in summaries])
        print(frame.to_csv(index=False, lineterminator="\n"), end="")
    elif not command.quiet:
        print(format_summaries(summaries))

    if problems:
        for problem in problems:
            logger.error(f"❌ {problem}")
        raise DataError(f"{len(problems)} statistic(s) differ from the manifests")
    return EXIT_OK


def _selftest(command):
    failed = run_selftest()
    return EXIT_OK if not failed else EXIT_INTERNAL


COMMANDS = {"run": _run, "suite": _suite, "describe": _describe, "selftest": _selftest}


def main(argv=None):
    try:
        command = parse_args(argv)
    except SystemExit as e:
        return e.code
    setup_logger(quiet=command.quiet)
    try:
        return COMMANDS[command.name](command)
    except FaabeError as e:
        logger.error(f"❌ {e}")
        return e.exit_code
    except KeyboardInterrupt:
        logger.warning("⏸️ Interrupted by user")
        return EXIT_INTERNAL
    except Exception:
        logger.exception("❌ Unexpected error")
        return EXIT_INTERNAL
