"""
Analogy-based estimation: weighted similarity, analogy retrieval and solution functions.

Similarity between projects p and p' with weights w over the selected features:

    euclidean: 1 / sqrt(sum_i w_i * Dis(a_i, a_i') + DELTA)
    manhattan: 1 / (sum_i w_i * Dis(a_i, a_i') + DELTA)

Dis is |a - a'| for numeric/ordinal values and 0/1 (equal/unequal) for nominal
values. The euclidean form weights Dis itself, not its square.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from faabe import config
from faabe.errors import ConfigError, EstimationError, SchemaMismatchError, WeightError

DELTA = getattr(config, "DELTA", 0.0001)


class SimilarityKind(str, Enum):
    EUCLIDEAN = "euclidean"
    MANHATTAN = "manhattan"


class SolutionKind(str, Enum):
    CLOSEST = "closest"
    MEAN = "mean"
    MEDIAN = "median"
    IWM = "iwm"


@dataclass(frozen=True)
class AbeConfig:
    similarity: SimilarityKind = SimilarityKind.EUCLIDEAN
    solution: SolutionKind = SolutionKind.IWM
    k_analogies: int = 3

    def __post_init__(self):
        try:
            object.__setattr__(self, "similarity", SimilarityKind(self.similarity))
            object.__setattr__(self, "solution", SolutionKind(self.solution))
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if isinstance(self.k_analogies, bool) or int(self.k_analogies) != self.k_analogies or self.k_analogies < 1:
            raise ConfigError(f"k must be >= 1, got {self.k_analogies}")
        object.__setattr__(self, "k_analogies", int(self.k_analogies))

    def to_dict(self):
        return {"similarity": self.similarity.value, "solution": self.solution.value, "k": self.k_analogies}


def check_weights(w, dimension=None):
    """Return ``w`` as a float array after checking it is a valid weight vector."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise WeightError(f"weights must be a flat vector, got shape {w.shape}")
    if dimension is not None and len(w) != dimension:
        raise WeightError(f"{len(w)} weights for {dimension} features")
    if not np.all(np.isfinite(w)) or np.any(w < 0.0) or np.any(w > 1.0):
        raise WeightError(f"weights must lie in [0, 1], got {w.tolist()}")
    return w


def feature_distance(a, b):
    a_nominal = isinstance(a, str)
    if a_nominal != isinstance(b, str):
        raise SchemaMismatchError(f"cannot compare nominal and numeric values: {a!r}, {b!r}")
    if a_nominal:
        return 0.0 if a == b else 1.0
    return abs(float(a) - float(b))


def _similarity_from_total(total, kind):
    if SimilarityKind(kind) is SimilarityKind.EUCLIDEAN:
        return 1.0 / np.sqrt(total + DELTA)
    return 1.0 / (total + DELTA)


def similarity(p, q, w, kind=SimilarityKind.EUCLIDEAN):
    if len(p.values) != len(q.values):
        raise SchemaMismatchError(f"projects have {len(p.values)} and {len(q.values)} features")
    w = check_weights(w, len(p.values))
    total = 0.0
    for weight, a, b in zip(w, p.values, q.values):
        total += weight * feature_distance(a, b)
    return float(_similarity_from_total(total, kind))


def retrieve_analogies(p, case_base, w, cfg):
    """The ``cfg.k_analogies`` most similar projects, most similar first.

    Ties keep case-base order. ``p`` itself is never returned.
    """
    candidates = [c for c in case_base if c is not p]
    if not candidates:
        raise EstimationError("case base is empty")
    if cfg.k_analogies > len(candidates):
        raise EstimationError(f"k = {cfg.k_analogies} exceeds the case base size {len(candidates)}")
    scored = [(c, similarity(p, c, w, cfg.similarity)) for c in candidates]
    order = sorted(range(len(scored)), key=lambda i: (-scored[i][1], i))
    return [scored[i] for i in order[: cfg.k_analogies]]


def _solve_rows(sims, efforts, kind):
    # one row per estimate; columns are that estimate's analogies
    kind = SolutionKind(kind)
    if kind is SolutionKind.CLOSEST:
        return efforts[np.arange(len(efforts)), np.argmax(sims, axis=1)]
    if kind is SolutionKind.MEAN:
        return efforts.mean(axis=1)
    if kind is SolutionKind.MEDIAN:
        return np.median(efforts, axis=1)
    shares = sims / sims.sum(axis=1, keepdims=True)
    return (shares * efforts).sum(axis=1)


def solve(neighbors, kind):
    if not neighbors:
        raise EstimationError("no analogies to solve from")
    sims = np.array([[s for _, s in neighbors]], dtype=float)
    efforts = np.array([[p.effort for p, _ in neighbors]], dtype=float)
    if np.any(sims <= 0.0):
        raise EstimationError("similarities must be positive")
    return float(_solve_rows(sims, efforts, kind)[0])


def estimate(p, case_base, w, cfg):
    return solve(retrieve_analogies(p, case_base, w, cfg), cfg.solution)


class CaseBase:
    """Per-feature distances between query projects and a case base, computed once.

    Re-estimating the same queries under many weight vectors then costs one
    tensor-vector product, which is what the firefly fitness loop needs.
    """

    def __init__(self, queries, case_base, schema):
        self.queries = tuple(queries)
        self.cases = tuple(case_base)
        if not self.queries:
            raise EstimationError("no projects to estimate")
        if not self.cases:
            raise EstimationError("case base is empty")
        for project in self.queries + self.cases:
            if len(project.values) != schema.k:
                raise SchemaMismatchError(f"project has {len(project.values)} values for {schema.k} features")

        self.k = schema.k
        self.efforts = np.array([c.effort for c in self.cases], dtype=float)
        self.actual = np.array([q.effort for q in self.queries], dtype=float)
        self.distances = np.empty((len(self.queries), len(self.cases), schema.k), dtype=float)
        for i, feature in enumerate(schema.features):
            if feature.kind.is_numeric:
                q = np.array([p.values[i] for p in self.queries], dtype=float)
                c = np.array([p.values[i] for p in self.cases], dtype=float)
                self.distances[:, :, i] = np.abs(q[:, None] - c[None, :])
            else:
                q = np.array([p.values[i] for p in self.queries], dtype=str)
                c = np.array([p.values[i] for p in self.cases], dtype=str)
                self.distances[:, :, i] = q[:, None] != c[None, :]

        self.excluded = np.array([[q is c for c in self.cases] for q in self.queries], dtype=bool)
        self.available = len(self.cases) - self.excluded.sum(axis=1)

    def similarities(self, w, kind):
        totals = self.distances @ check_weights(w, self.k)
        return _similarity_from_total(totals, kind)

    def estimate_all(self, w, cfg):
        """Estimates for every query, in query order."""
        if np.any(self.available < cfg.k_analogies):
            raise EstimationError(f"k = {cfg.k_analogies} exceeds the case base size {int(self.available.min())}")
        sims = self.similarities(w, cfg.similarity)
        if self.excluded.any():
            sims = np.where(self.excluded, -np.inf, sims)
        order = np.argsort(-sims, axis=1, kind="stable")[:, : cfg.k_analogies]
        return _solve_rows(np.take_along_axis(sims, order, axis=1), self.efforts[order], cfg.solution)
