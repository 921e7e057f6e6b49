"""
Firefly Algorithm over the [0, 1]^d feature-weight space.

Brightness of a weight vector is 1 / (MMRE + eps) of estimating the train
projects from the basic projects. Each pass of an iteration moves firefly i
toward every strictly brighter firefly j:

    x_i <- clip(x_i + beta0 * exp(-gamma * r_ij^2) * (x_j - x_i) + alpha * (rand - 1/2))

A firefly with no brighter neighbour in that pass takes a random step instead.
Every firefly draws from its own random stream spawned from the master seed.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from faabe import config
from faabe.abe_core import CaseBase, check_weights
from faabe.errors import ConfigError, DataError, SchemaMismatchError
from faabe.evaluation import mmre

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FaConfig:
    population: int = 20
    max_iterations: int = 50
    gamma: float = 1.0
    alpha: float = 0.2
    beta0: float = 1.0
    alpha_decay: float = 0.97
    seed: int = 0

    def __post_init__(self):
        for name in ("population", "max_iterations", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        if self.population < 1:
            raise ConfigError(f"population must be >= 1, got {self.population}")
        if self.max_iterations < 0:
            raise ConfigError(f"max_iterations must be >= 0, got {self.max_iterations}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        for name in ("gamma", "alpha", "beta0", "alpha_decay"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.alpha < 0:
            raise ConfigError(f"alpha must be >= 0, got {self.alpha}")
        if self.beta0 <= 0:
            raise ConfigError(f"beta0 must be > 0, got {self.beta0}")
        if not 0 < self.alpha_decay <= 1:
            raise ConfigError(f"alpha_decay must be in (0, 1], got {self.alpha_decay}")

    def to_dict(self):
        return {
            "pop": self.population,
            "iters": self.max_iterations,
            "gamma": self.gamma,
            "alpha": self.alpha,
            "alpha_decay": self.alpha_decay,
            "beta0": self.beta0,
        }


@dataclass
class Firefly:
    position: np.ndarray
    brightness: float = -math.inf


class FitnessObjective:
    """Train projects estimated from basic projects under a candidate weight vector."""

    def __init__(self, basic_set, train_set, abe, schema):
        self.basic_set = tuple(basic_set)
        self.train_set = tuple(train_set)
        self.abe = abe
        self.schema = schema
        if not self.basic_set or not self.train_set:
            raise DataError("basic and train sets must both be non-empty")
        basic_ids = {id(p) for p in self.basic_set}
        if any(id(p) in basic_ids for p in self.train_set):
            raise DataError("basic and train sets overlap")
        self.case_base = CaseBase(self.train_set, self.basic_set, schema)

    @property
    def dimension(self):
        return self.schema.k


def fitness(w, obj):
    predicted = obj.case_base.estimate_all(w, obj.abe)
    error = mmre(obj.case_base.actual, predicted)
    return 1.0 / (error + getattr(config, "FITNESS_EPSILON", 1e-9))


def _position(firefly):
    if isinstance(firefly, Firefly):
        return firefly.position
    return np.asarray(firefly, dtype=float)


def firefly_distance(i, j):
    xi, xj = _position(i), _position(j)
    if xi.shape != xj.shape:
        raise SchemaMismatchError(f"positions differ in dimension: {xi.shape} vs {xj.shape}")
    return float(np.sqrt(np.sum((xi - xj) ** 2)))


def move(i, j, cfg, rng, alpha=None):
    """New position of firefly i after being attracted by firefly j."""
    xi, xj = _position(i), _position(j)
    r = firefly_distance(xi, xj)
    alpha = cfg.alpha if alpha is None else alpha
    beta = cfg.beta0 * math.exp(-cfg.gamma * r * r)
    step = alpha * (rng.random(len(xi)) - 0.5)
    return np.clip(xi + beta * (xj - xi) + step, 0.0, 1.0)


def random_walk(i, cfg, rng, alpha=None):
    xi = _position(i)
    alpha = cfg.alpha if alpha is None else alpha
    return np.clip(xi + alpha * (rng.random(len(xi)) - 0.5), 0.0, 1.0)


@dataclass(frozen=True)
class OptimizationResult:
    best_weights: np.ndarray
    best_brightness: float
    trace: tuple                          # best brightness after iteration 0..T
    evaluations: int

    def trace_csv(self):
        lines = ["iteration,best_brightness"]
        lines += [f"{t},{b!r}" for t, b in enumerate(self.trace)]
        return "\n".join(lines) + "\n"


def optimize(obj, cfg, initial_positions=None, jobs=1):
    """Search for the brightest weight vector.

    ``initial_positions`` replace the first fireflies' random starting points.
    ``jobs`` > 1 evaluates the initial population on a thread pool; the result
    does not depend on it.
    """
    d = obj.dimension
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(cfg.population)]
    positions = [rng.random(d) for rng in streams]
    forced = list(initial_positions or [])
    if len(forced) > cfg.population:
        raise ConfigError(f"{len(forced)} initial positions for a population of {cfg.population}")
    for i, position in enumerate(forced):
        positions[i] = check_weights(position, d).copy()

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            brightness = list(pool.map(lambda p: fitness(p, obj), positions))
    else:
        brightness = [fitness(p, obj) for p in positions]
    swarm = [Firefly(p, b) for p, b in zip(positions, brightness)]
    evaluations = len(swarm)

    best_at = int(np.argmax(brightness))
    best_position = swarm[best_at].position.copy()
    best_brightness = swarm[best_at].brightness
    trace = [best_brightness]

    alpha = cfg.alpha
    for t in range(1, cfg.max_iterations + 1):
        for i, fly in enumerate(swarm):
            moved = False
            for other in swarm:
                if other.brightness > fly.brightness:
                    new_position = move(fly, other, cfg, streams[i], alpha)
                    moved = True
                else:
                    continue
                if not np.array_equal(new_position, fly.position):
                    fly.position = new_position
                    fly.brightness = fitness(new_position, obj)
                    evaluations += 1
            if not moved:
                new_position = random_walk(fly, cfg, streams[i], alpha)
                if not np.array_equal(new_position, fly.position):
                    fly.position = new_position
                    fly.brightness = fitness(new_position, obj)
                    evaluations += 1
            if fly.brightness > best_brightness:
                best_brightness = fly.brightness
                best_position = fly.position.copy()
        alpha *= cfg.alpha_decay
        trace.append(best_brightness)
        logger.debug(f"🔄 Iteration {t}/{cfg.max_iterations}: best brightness {best_brightness:.6g}")

    return OptimizationResult(best_position, float(best_brightness), tuple(float(b) for b in trace), evaluations)
