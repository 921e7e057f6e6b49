"""Built-in sanity checks with hand-computed answers, run by ``faabe selftest``."""

import logging
import math

import numpy as np

from faabe.abe_core import AbeConfig, estimate, feature_distance, similarity, solve
from faabe.datasets import Dataset, Feature, FeatureKind, FeatureSchema, Project, normalize
from faabe.evaluation import compute_metrics, make_split
from faabe.experiment import RunConfig, run_baseline_abe, run_faabe
from faabe.feature_select import pearson
from faabe.firefly import FaConfig, firefly_distance, move, random_walk

logger = logging.getLogger(__name__)

CHECKS = []


def check(func):
    CHECKS.append(func)
    return func


def _close(a, b, rel=1e-12):
    assert math.isclose(a, b, rel_tol=rel, abs_tol=1e-12), f"{a!r} != {b!r}"


def _one_feature(*values, kind=FeatureKind.NUMERIC, efforts=None):
    schema = FeatureSchema((Feature("f1", kind),), "effort")
    efforts = efforts or [1.0] * len(values)
    return schema, [Project((v,), e) for v, e in zip(values, efforts)]


@check
def feature_distances():
    _close(feature_distance(0.7, 0.2), 0.5)
    assert feature_distance("org", "org") == 0.0
    assert feature_distance("org", "semi") == 1.0


@check
def similarity_floor():
    _, (p, q) = _one_feature(0.4, 0.4)
    _close(similarity(p, q, [1.0], "euclidean"), 100.0)
    _close(similarity(p, q, [1.0], "manhattan"), 10000.0)
    _, (a, b) = _one_feature(3.0, 1.0)
    _close(similarity(a, b, [1.0], "euclidean"), 1 / math.sqrt(2.0001))


@check
def solution_functions():
    _, (p,) = _one_feature(0.0, efforts=[42.0])
    for kind in ("closest", "mean", "median", "iwm"):
        _close(solve([(p, 1.0)], kind), 42.0)
    _, (a, b) = _one_feature(0.0, 1.0, efforts=[100.0, 200.0])
    _close(solve([(a, 3.0), (b, 1.0)], "iwm"), 125.0)
    _close(solve([(a, 2.0), (b, 2.0)], "iwm"), 150.0)


@check
def duplicate_analogy():
    _, (p, twin, other) = _one_feature(0.3, 0.3, 0.9, efforts=[5.0, 17.0, 80.0])
    _close(estimate(p, [twin, other], [1.0], AbeConfig("euclidean", "closest", 1)), 17.0)


@check
def correlations():
    _close(pearson([1, 2, 3], [1, 2, 3]), 1.0)
    _close(pearson([1, 2, 3], [3, 2, 1]), -1.0)
    _close(pearson([1, 2, 3, 4], [2, 4, 5, 4]), 3.5 / math.sqrt(5.0 * 4.75))
    assert pearson([5, 5, 5], [1, 2, 3]) is None


@check
def min_max_normalization():
    schema, projects = _one_feature(2.0, 4.0, 6.0)
    d = normalize(Dataset("selftest", schema, projects))
    assert [p.values[0] for p in d.projects] == [0.0, 0.5, 1.0]
    schema, projects = _one_feature(5.0, 5.0, 5.0)
    assert [p.values[0] for p in normalize(Dataset("selftest", schema, projects)).projects] == [0.0] * 3


@check
def metrics():
    report = compute_metrics([100.0], [150.0])
    _close(report.mmre, 0.5)
    _close(report.rmse, 50.0)
    report = compute_metrics([10.0, 20.0], [20.0, 10.0])
    _close(report.mmre, 0.75)
    _close(report.mse, 100.0)


@check
def split_sizes():
    split = make_split(15, seed=0)
    assert (len(split.test), len(split.basic), len(split.train)) == (5, 5, 5)
    assert len(make_split(499, seed=1).test) == 165
    assert make_split(15, seed=3) == make_split(15, seed=3)


@check
def firefly_moves():
    _close(firefly_distance([0.2, 0.5, 0.9], [0.7, 0.1, 0.3]), math.sqrt(0.77))
    rng = np.random.default_rng(0)
    xi, xj = np.array([0.1, 0.8]), np.array([0.6, 0.2])
    assert np.array_equal(move(xi, xj, FaConfig(alpha=0.0, gamma=1e12), rng), xi)
    assert np.allclose(move(xi, xj, FaConfig(alpha=0.0, gamma=0.0, beta0=1.0), rng), xj)
    assert np.array_equal(random_walk(xi, FaConfig(alpha=0.0), rng), xi)


@check
def degenerate_optimizer_matches_baseline():
    schema = FeatureSchema((Feature("size", FeatureKind.NUMERIC), Feature("noise", FeatureKind.NUMERIC)), "effort")
    rng = np.random.default_rng(11)
    sizes = rng.uniform(1.0, 10.0, 12)
    projects = [Project((float(s), float(n)), float(10.0 * s)) for s, n in zip(sizes, rng.uniform(0, 1, 12))]
    d = Dataset("selftest", schema, projects)
    cfg = RunConfig("selftest", AbeConfig(), FaConfig(population=1, max_iterations=0), corr_threshold=0.0)
    assert run_faabe(d, cfg, 0).metrics == run_baseline_abe(d, cfg, 0).metrics


def run_selftest():
    """Run every check; return the names of those that failed."""
    failed = []
    for func in CHECKS:
        try:
            func()
        except Exception as e:
            failed.append(func.__name__)
            logger.error(f"❌ {func.__name__}: {e}")
        else:
            logger.info(f"✅ {func.__name__}")
    logger.info(f"{len(CHECKS) - len(failed)}/{len(CHECKS)} checks passed")
    return failed
