"""
Paired ABE / FAABE runs and the multi-dataset suite.

For one (dataset, seed) both methods share a single preparation: the split,
min-max statistics and selected features all come from the non-test rows.
They differ only in the weight vector used to estimate the test projects.

Results layout:

    <output_dir>/<dataset>/<similarity>/<seed>/metrics.json
    <output_dir>/<dataset>/<similarity>/<seed>/weights.json
    <output_dir>/<dataset>/<similarity>/<seed>/trace.csv
    <output_dir>/<dataset>/<similarity>/<seed>/predictions.csv
    <output_dir>/<dataset>/<similarity>/<seed>/config.resolved
    <output_dir>/summary.{txt,json,csv}
    <output_dir>/timings.csv
"""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import pandas as pd

from faabe import config
from faabe.abe_core import AbeConfig, CaseBase, SimilarityKind
from faabe.datasets import MinMaxNormalizer, load_dataset
from faabe.errors import ConfigError
from faabe.evaluation import METRIC_NAMES, MetricsReport, compute_metrics, make_split
from faabe.feature_select import select_features
from faabe.fileio import format_key_values, parse_key_values, split_list, write_text_atomic
from faabe.firefly import FaConfig, FitnessObjective, fitness, optimize
from faabe.report import render_csv, render_table, rows_to_records

logger = logging.getLogger(__name__)

METHODS = ("ABE", "FAABE")

# Run-config keys and the type of their values
OPTION_TYPES = {
    "datasets": "list",
    "similarity": "list",
    "solution": str,
    "k": int,
    "corr_threshold": float,
    "pop": int,
    "iters": int,
    "gamma": float,
    "alpha": float,
    "alpha_decay": float,
    "beta0": float,
    "seed": int,
    "repeats": int,
    "seeds": "seeds",
    "test_fraction": float,
    "basic_fraction": float,
    "strict_basic": bool,
    "seed_all_ones": bool,
    "jobs": int,
    "output_dir": str,
}

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


# ---------- run configuration ----------
def default_options(suite=False):
    """Built-in settings; a suite reports every kind in ``config.SUITE_SIMILARITIES``."""
    similarity = getattr(config, "SUITE_SIMILARITIES", [config.SIMILARITY]) if suite else [config.SIMILARITY]
    return {
        "datasets": list(config.DATASETS),
        "similarity": list(similarity),
        "solution": config.SOLUTION,
        "k": config.K_ANALOGIES,
        "corr_threshold": config.CORR_THRESHOLD,
        "pop": config.POPULATION,
        "iters": config.MAX_ITERATIONS,
        "gamma": config.GAMMA,
        "alpha": config.ALPHA,
        "alpha_decay": config.ALPHA_DECAY,
        "beta0": config.BETA0,
        "seed": config.BASE_SEED,
        "repeats": config.REPEATS,
        "seeds": None,
        "test_fraction": config.TEST_FRACTION,
        "basic_fraction": config.BASIC_FRACTION,
        "strict_basic": config.STRICT_BASIC,
        "seed_all_ones": config.SEED_ALL_ONES,
        "jobs": config.JOBS,
        "output_dir": str(config.RESULTS_DIR),
    }


def _parse_bool(value):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ValueError(value)


def coerce_option(key, value):
    """Convert a config-file or CLI value to the type of ``key``."""
    if key not in OPTION_TYPES:
        raise ConfigError(f"unknown config key '{key}'")
    kind = OPTION_TYPES[key]
    try:
        if kind == "list":
            return split_list(value) if isinstance(value, str) else list(value)
        if kind == "seeds":
            items = split_list(value) if isinstance(value, str) else list(value)
            return [int(s) for s in items]
        if kind is bool:
            return _parse_bool(value)
        if kind is int and isinstance(value, float) and not value.is_integer():
            raise ValueError(value)
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for '{key}': {value!r}") from None


def parse_run_config(text, source="<config>"):
    entries = parse_key_values(text, source, ConfigError)
    return {key: coerce_option(key, value) for key, value in entries.items()}


def resolve_options(path=None, overrides=None, suite=False):
    """Defaults, then the config file at ``path``, then non-None ``overrides``."""
    options = default_options(suite)
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        options.update(parse_run_config(path.read_text(encoding="utf-8"), str(path)))
    for key, value in (overrides or {}).items():
        if value is not None:
            options[key] = coerce_option(key, value)
    return options


def similarity_kinds(value):
    """Similarity kinds from a name or list of names, duplicates dropped, order kept."""
    names = split_list(value) if isinstance(value, str) else list(value)
    if not names:
        raise ConfigError("no similarity kinds given")
    kinds = []
    for name in names:
        try:
            kind = SimilarityKind(str(name).strip().lower())
        except ValueError:
            choices = ", ".join(k.value for k in SimilarityKind)
            raise ConfigError(f"unknown similarity '{name}' (choose from {choices})") from None
        if kind not in kinds:
            kinds.append(kind)
    return kinds


def build_run_configs(options):
    """One RunConfig per (dataset, similarity kind), datasets outermost.

    An explicit ``seeds`` list overrides seed/repeats.
    """
    if options.get("seeds"):
        seeds = tuple(options["seeds"])
    else:
        if options["repeats"] < 1:
            raise ConfigError(f"repeats must be >= 1, got {options['repeats']}")
        seeds = tuple(range(options["seed"], options["seed"] + options["repeats"]))
    if not options["datasets"]:
        raise ConfigError("no datasets to run")

    abes = [AbeConfig(kind, options["solution"], options["k"]) for kind in similarity_kinds(options["similarity"])]
    fa = FaConfig(
        population=options["pop"],
        max_iterations=options["iters"],
        gamma=options["gamma"],
        alpha=options["alpha"],
        beta0=options["beta0"],
        alpha_decay=options["alpha_decay"],
    )
    return [
        RunConfig(
            dataset=name,
            abe=abe,
            fa=fa,
            corr_threshold=options["corr_threshold"],
            repeats=len(seeds),
            seeds=seeds,
            test_fraction=options["test_fraction"],
            basic_fraction=options["basic_fraction"],
            strict_basic=options["strict_basic"],
            seed_all_ones=options["seed_all_ones"],
            jobs=options["jobs"],
            output_dir=options["output_dir"],
        )
        for name in options["datasets"]
        for abe in abes
    ]


def load_run_config(path, overrides=None):
    return build_run_configs(resolve_options(path, overrides))


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    dataset: str
    abe: AbeConfig = field(default_factory=AbeConfig)
    fa: FaConfig = field(default_factory=FaConfig)
    corr_threshold: float = 0.5
    repeats: int = 1
    seeds: tuple = (0,)
    test_fraction: float = 0.33
    basic_fraction: float = 0.5
    strict_basic: bool = False
    seed_all_ones: bool = True
    jobs: int = 1
    output_dir: str = None

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(self.seeds))
        if self.repeats < 1:
            raise ConfigError(f"repeats must be >= 1, got {self.repeats}")
        if len(self.seeds) != self.repeats:
            raise ConfigError(f"{len(self.seeds)} seeds given for {self.repeats} repeats")
        if any(isinstance(s, bool) or not isinstance(s, int) or s < 0 for s in self.seeds):
            raise ConfigError(f"seeds must be non-negative integers, got {list(self.seeds)}")
        if not 0.0 <= self.corr_threshold <= 1.0:
            raise ConfigError(f"corr_threshold must be in [0, 1], got {self.corr_threshold}")
        for name in ("test_fraction", "basic_fraction"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ConfigError(f"{name} must lie strictly between 0 and 1")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")

    def resolved(self, seed=None):
        """Every setting that affects results, as config-file entries."""
        entries = {"dataset": self.dataset}
        entries.update(self.abe.to_dict())
        entries["corr_threshold"] = self.corr_threshold
        entries.update(self.fa.to_dict())
        if seed is None:
            entries["seeds"] = self.seeds
            entries["repeats"] = self.repeats
        else:
            entries["seed"] = seed
        entries["test_fraction"] = self.test_fraction
        entries["basic_fraction"] = self.basic_fraction
        entries["strict_basic"] = self.strict_basic
        entries["seed_all_ones"] = self.seed_all_ones
        return {key: _format_value(value) for key, value in entries.items()}

    def resolved_text(self, seed=None):
        return format_key_values(self.resolved(seed))


# ---------- rows ----------
@dataclass(frozen=True)
class ComparisonRow:
    dataset: str
    method: str
    metrics: MetricsReport
    seed: int = None
    wall_time: float = field(default=0.0, compare=False)
    brightness: float = None                  # FAABE only: training brightness at w*
    baseline_brightness: float = None         # FAABE only: training brightness of all-ones
    similarity: str = SimilarityKind.EUCLIDEAN.value

    def to_dict(self):
        record = {"dataset": self.dataset, "similarity": self.similarity, "method": self.method, "seed": self.seed}
        record.update(self.metrics.to_dict())
        if self.brightness is not None:
            record["brightness"] = self.brightness
            record["baseline_brightness"] = self.baseline_brightness
        return record


# ---------- preparation ----------
@dataclass(frozen=True)
class PreparedRun:
    dataset: object                           # normalized Dataset restricted to selected features
    split: object
    selection: object

    def projects(self, indices):
        return tuple(self.dataset.projects[i] for i in indices)

    @property
    def basic(self):
        return self.projects(self.split.basic)

    @property
    def train(self):
        return self.projects(self.split.train)

    @property
    def test(self):
        return self.projects(self.split.test)

    def case_base(self, strict_basic=False):
        """Projects the test set is estimated from: basic only, or basic + train in dataset order."""
        return self.basic if strict_basic else self.projects(self.split.non_test)

    @property
    def actual(self):
        return np.array([p.effort for p in self.test], dtype=float)


def prepare_run(d, cfg, seed):
    split = make_split(d, seed, cfg.test_fraction, cfg.basic_fraction)
    normalized = d if d.normalized else MinMaxNormalizer().fit(d, rows=split.non_test).transform(d)
    selection = select_features(normalized, cfg.corr_threshold, rows=split.non_test)
    logger.debug(f"{d.name} seed {seed}: kept {list(selection.kept)}, dropped {[n for n, _ in selection.dropped]}")
    return PreparedRun(normalized.select(selection.kept), split, selection)


def _estimate_test(prepared, w, cfg):
    case_base = CaseBase(prepared.test, prepared.case_base(cfg.strict_basic), prepared.dataset.schema)
    return case_base.estimate_all(w, cfg.abe)


def _baseline(prepared, cfg, seed):
    start = time.perf_counter()
    predicted = _estimate_test(prepared, np.ones(prepared.dataset.schema.k), cfg)
    metrics = compute_metrics(prepared.actual, predicted)
    row = ComparisonRow(
        prepared.dataset.name, "ABE", metrics, seed, time.perf_counter() - start, similarity=cfg.abe.similarity.value
    )
    return row, predicted


def _faabe(prepared, cfg, seed, fitness_jobs=1):
    start = time.perf_counter()
    objective = FitnessObjective(prepared.basic, prepared.train, cfg.abe, prepared.dataset.schema)
    ones = np.ones(prepared.dataset.schema.k)
    result = optimize(
        objective,
        replace(cfg.fa, seed=seed),
        initial_positions=[ones] if cfg.seed_all_ones else None,
        jobs=fitness_jobs,
    )
    predicted = _estimate_test(prepared, result.best_weights, cfg)
    metrics = compute_metrics(prepared.actual, predicted)
    row = ComparisonRow(
        prepared.dataset.name,
        "FAABE",
        metrics,
        seed,
        time.perf_counter() - start,
        brightness=result.best_brightness,
        baseline_brightness=float(fitness(ones, objective)),
        similarity=cfg.abe.similarity.value,
    )
    return row, predicted, result


def run_baseline_abe(d, cfg, seed):
    """Unweighted ABE on the test projects of ``seed``'s split."""
    return _baseline(prepare_run(d, cfg, seed), cfg, seed)[0]


def run_faabe(d, cfg, seed):
    """ABE with firefly-optimized weights on the same preparation as ``run_baseline_abe``."""
    return _faabe(prepare_run(d, cfg, seed), cfg, seed)[0]


@dataclass(frozen=True)
class PairResult:
    prepared: PreparedRun
    baseline: ComparisonRow
    faabe: ComparisonRow
    optimization: object
    predictions: dict                         # method -> predicted efforts of the test projects

    @property
    def dataset(self):
        return self.baseline.dataset

    @property
    def seed(self):
        return self.baseline.seed

    @property
    def similarity(self):
        return self.baseline.similarity

    @property
    def weights(self):
        names = self.prepared.dataset.schema.names
        return {name: float(w) for name, w in zip(names, self.optimization.best_weights)}


def run_pair(d, cfg, seed, fitness_jobs=1):
    prepared = prepare_run(d, cfg, seed)
    baseline, abe_predicted = _baseline(prepared, cfg, seed)
    faabe, faabe_predicted, result = _faabe(prepared, cfg, seed, fitness_jobs)
    logger.info(
        f"✅ {baseline.dataset} ({baseline.similarity}) seed {seed}: MMRE {baseline.metrics.mmre:.4g} (ABE) -> {faabe.metrics.mmre:.4g} (FAABE)"
    )
    return PairResult(prepared, baseline, faabe, result, {"ABE": abe_predicted, "FAABE": faabe_predicted})


# ---------- artifacts ----------
def _dump_json(payload):
    return json.dumps(payload, indent=2) + "\n"


def _predictions_csv(pair):
    actual = pair.prepared.actual
    frames = []
    for method in METHODS:
        predicted = pair.predictions[method]
        frames.append(
            pd.DataFrame(
                {
                    "index": list(pair.prepared.split.test),
                    "method": method,
                    "actual": actual,
                    "predicted": predicted,
                    "mre": np.abs(actual - predicted) / actual,
                }
            )
        )
    return pd.concat(frames, ignore_index=True).to_csv(index=False, lineterminator="\n")


def write_pair_artifacts(pair, cfg, root):
    run_dir = Path(root) / pair.dataset / pair.similarity / str(pair.seed)
    metrics = {
        "dataset": pair.dataset,
        "similarity": pair.similarity,
        "seed": pair.seed,
        "split": pair.prepared.split.to_dict(),
        "selection": pair.prepared.selection.to_dict(),
        "methods": {row.method: row.metrics.to_dict() for row in (pair.baseline, pair.faabe)},
        "training_brightness": {"faabe": pair.faabe.brightness, "all_ones": pair.faabe.baseline_brightness},
        "evaluations": pair.optimization.evaluations,
    }
    write_text_atomic(run_dir / "metrics.json", _dump_json(metrics))
    write_text_atomic(run_dir / "weights.json", _dump_json({"features": list(pair.weights), "weights": pair.weights}))
    write_text_atomic(run_dir / "trace.csv", pair.optimization.trace_csv())
    write_text_atomic(run_dir / "predictions.csv", _predictions_csv(pair))
    write_text_atomic(run_dir / "config.resolved", cfg.resolved_text(pair.seed))
    return run_dir


# ---------- suite ----------
def summarize(rows):
    """Median of each metric over seeds, per (dataset, similarity, method), in first-seen order."""
    groups = {}
    for row in rows:
        groups.setdefault((row.dataset, row.similarity, row.method), []).append(row)
    summary = []
    for (dataset, kind, method), group in groups.items():
        medians = [float(np.median([getattr(r.metrics, name) for r in group])) for name in METRIC_NAMES]
        metrics = MetricsReport(*medians, n=group[0].metrics.n)
        summary.append(
            ComparisonRow(dataset, method, metrics, None, sum(r.wall_time for r in group), similarity=kind)
        )
    return summary


def improvement(summary):
    """Relative MMRE reduction of FAABE over ABE, as {dataset: {similarity: value}}."""
    by_key = {(r.dataset, r.similarity, r.method): r.metrics.mmre for r in summary}
    result = {}
    for dataset, kind, method in by_key:
        if method != "ABE" or (dataset, kind, "FAABE") not in by_key:
            continue
        before = by_key[(dataset, kind, "ABE")]
        after = by_key[(dataset, kind, "FAABE")]
        result.setdefault(dataset, {})[kind] = (before - after) / before if before > 0 else None
    return result


@dataclass
class SuiteResult:
    rows: list
    summary: list
    failures: list
    pairs: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {
            "rows": rows_to_records(self.rows),
            "summary": rows_to_records(self.summary),
            "improvement": improvement(self.summary),
            "failures": self.failures,
        }


def _pair_task(task):
    d, cfg, seed, fitness_jobs = task
    return run_pair(d, cfg, seed, fitness_jobs)


def _run_tasks(tasks, jobs, raise_errors):
    """Run (dataset, cfg, seed) tasks; outcomes come back in submission order."""
    if jobs <= 1 or len(tasks) <= 1:
        outcomes = []
        for d, cfg, seed in tasks:
            try:
                outcomes.append(_pair_task((d, cfg, seed, jobs)))
            except Exception as e:
                if raise_errors:
                    raise
                logger.exception(f"❌ {d.name} ({cfg.abe.similarity.value}) seed {seed} failed")
                outcomes.append(e)
        return outcomes

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_pair_task, (d, cfg, seed, 1)) for d, cfg, seed in tasks]
        outcomes = []
        for (d, cfg, seed), future in zip(tasks, futures):
            error = future.exception()
            if error is None:
                outcomes.append(future.result())
                continue
            if raise_errors:
                raise error
            logger.error(f"❌ {d.name} ({cfg.abe.similarity.value}) seed {seed} failed: {error}")
            outcomes.append(error)
        return outcomes


def run_suite(cfgs, output_dir=None, plot=None, raise_errors=False):
    """Run every configured dataset for all of its seeds and write the results tree.

    A dataset that fails to load or run is recorded under ``failures`` and the
    remaining datasets still run, unless ``raise_errors`` is set.
    """
    if not cfgs:
        raise ConfigError("no runs configured")
    if plot is None:
        plot = getattr(config, "WRITE_PLOT", False)
    root = Path(output_dir or cfgs[0].output_dir or config.RESULTS_DIR)

    tasks, failures = [], []
    loaded = {}
    for cfg in cfgs:
        kind = cfg.abe.similarity.value
        try:
            if cfg.dataset not in loaded:
                loaded[cfg.dataset] = load_dataset(cfg.dataset)
            d = loaded[cfg.dataset]
        except Exception as e:
            if raise_errors:
                raise
            logger.error(f"❌ Could not load {cfg.dataset}: {e}")
            failures.append({"dataset": cfg.dataset, "similarity": kind, "seed": None, "error": str(e)})
            continue
        logger.info(f"🔄 {d.name} ({kind}): {len(d)} projects, {d.schema.k} features, seeds {list(cfg.seeds)}")
        tasks.extend((d, cfg, seed) for seed in cfg.seeds)

    jobs = max(cfg.jobs for cfg in cfgs)
    outcomes = _run_tasks(tasks, jobs, raise_errors)

    rows, pairs = [], []
    for (d, cfg, seed), outcome in zip(tasks, outcomes):
        if isinstance(outcome, Exception):
            kind = cfg.abe.similarity.value
            failures.append({"dataset": d.name, "similarity": kind, "seed": seed, "error": str(outcome)})
            continue
        rows.extend([outcome.baseline, outcome.faabe])
        pairs.append(outcome)
        write_pair_artifacts(outcome, cfg, root)

    result = SuiteResult(rows, summarize(rows), failures, pairs)
    write_suite_outputs(result, root, plot)
    return result


def write_suite_outputs(result, root, plot=False):
    root = Path(root)
    text = render_table(result.summary)
    if result.failures:
        text += "\nFailures:\n"
        for f in result.failures:
            text += f"  {f['dataset']} ({f['similarity']}, seed {f['seed']}): {f['error']}\n"
    write_text_atomic(root / "summary.txt", text)
    write_text_atomic(root / "summary.json", _dump_json(result.to_dict()))
    write_text_atomic(root / "summary.csv", render_csv(result.summary))

    timings = pd.DataFrame(
        [
            {"dataset": r.dataset, "similarity": r.similarity, "method": r.method, "seed": r.seed, "wall_time": r.wall_time}
            for r in result.rows
        ],
        columns=["dataset", "similarity", "method", "seed", "wall_time"],
    )
    write_text_atomic(root / "timings.csv", timings.to_csv(index=False, lineterminator="\n"))

    if plot and result.summary:
        from faabe.plots import plot_summary

        plot_summary(result.summary, root / "summary.png")
    logger.info(f"✅ Results written to {root}")
    return root
