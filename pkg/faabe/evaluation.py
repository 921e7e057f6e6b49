"""Error metrics and the basic/train/test holdout split."""

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np
from sklearn.metrics import mean_absolute_error, mean_absolute_percentage_error, mean_squared_error

from faabe import config
from faabe.errors import MetricsError, SplitError

METRIC_NAMES = ("mmre", "mae", "mse", "rmse")


@dataclass(frozen=True)
class MetricsReport:
    mmre: float
    mae: float
    mse: float
    rmse: float
    n: int

    def to_dict(self):
        return {"mmre": self.mmre, "mae": self.mae, "mse": self.mse, "rmse": self.rmse, "n": self.n}

    def values(self):
        """Metric values in table order: MMRE, MAE, MSE, RMSE."""
        return tuple(getattr(self, name) for name in METRIC_NAMES)


def _check_series(actual, predicted):
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if actual.ndim != 1 or actual.shape != predicted.shape:
        raise MetricsError(f"actual and predicted differ in length: {actual.shape} vs {predicted.shape}")
    if len(actual) == 0:
        raise MetricsError("no instances to score")
    if np.any(actual <= 0.0) or not np.all(np.isfinite(actual)):
        raise MetricsError("actual efforts must be finite and > 0")
    if not np.all(np.isfinite(predicted)):
        raise MetricsError("predicted efforts must be finite")
    return actual, predicted


def mmre(actual, predicted):
    """Mean magnitude of relative error, without the full report."""
    actual, predicted = _check_series(actual, predicted)
    return float(np.mean(np.abs(actual - predicted) / actual))


def compute_metrics(actual, predicted):
    actual, predicted = _check_series(actual, predicted)
    mse = float(mean_squared_error(actual, predicted))
    return MetricsReport(
        mmre=float(mean_absolute_percentage_error(actual, predicted)),
        mae=float(mean_absolute_error(actual, predicted)),
        mse=mse,
        rmse=math.sqrt(mse),
        n=len(actual),
    )


def round_half_up(value):
    return int(Decimal(str(value)).quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class Split:
    basic: tuple
    train: tuple
    test: tuple
    seed: int

    @property
    def non_test(self):
        return tuple(sorted(self.basic + self.train))

    def to_dict(self):
        return {"seed": self.seed, "basic": list(self.basic), "train": list(self.train), "test": list(self.test)}


def make_split(d, seed, test_fraction=None, basic_fraction_of_remainder=None):
    """Shuffle project indices by ``seed`` and cut them into test, basic and train.

    The test share is ``round_half_up(test_fraction * n)``; basic gets the
    extra project when the remainder is odd. Index lists are returned sorted.
    """
    if test_fraction is None:
        test_fraction = getattr(config, "TEST_FRACTION", 0.33)
    if basic_fraction_of_remainder is None:
        basic_fraction_of_remainder = getattr(config, "BASIC_FRACTION", 0.5)
    if not 0.0 < test_fraction < 1.0 or not 0.0 < basic_fraction_of_remainder < 1.0:
        raise SplitError("split fractions must lie strictly between 0 and 1")

    n = d if isinstance(d, int) else len(d)
    if n < 3:
        raise SplitError(f"need at least 3 projects for basic/train/test, got {n}")

    n_test = round_half_up(Decimal(str(test_fraction)) * n)
    remainder = n - n_test
    n_basic = round_half_up(Decimal(str(basic_fraction_of_remainder)) * remainder)
    n_train = remainder - n_basic
    if min(n_test, n_basic, n_train) < 1:
        raise SplitError(f"{n} projects cannot fill three non-empty subsets (test {n_test}, basic {n_basic}, train {n_train})")

    order = np.random.default_rng(seed).permutation(n)
    test = tuple(sorted(int(i) for i in order[:n_test]))
    basic = tuple(sorted(int(i) for i in order[n_test : n_test + n_basic]))
    train = tuple(sorted(int(i) for i in order[n_test + n_basic :]))
    return Split(basic=basic, train=train, test=test, seed=seed)
