"""
Tests for faabe/evaluation.py
"""

import math

import numpy as np
import pytest

from faabe.errors import MetricsError, SplitError
from faabe.evaluation import compute_metrics, make_split, mmre, round_half_up


def brute_metrics(actual, predicted):
    n = len(actual)
    errors = [a - p for a, p in zip(actual, predicted)]
    mse = sum(e * e for e in errors) / n
    return {
        "mmre": sum(abs(e) / a for e, a in zip(errors, actual)) / n,
        "mae": sum(abs(e) for e in errors) / n,
        "mse": mse,
        "rmse": math.sqrt(mse),
    }


class TestComputeMetrics:
    """Test compute_metrics() hand values and the brute-force oracle."""

    def test_perfect_prediction(self):
        report = compute_metrics([10.0, 20.0], [10.0, 20.0])
        assert report.values() == (0.0, 0.0, 0.0, 0.0)
        assert report.n == 2

    def test_single_term(self):
        report = compute_metrics([100.0], [150.0])
        assert report.mmre == pytest.approx(0.5)
        assert report.mae == pytest.approx(50.0)
        assert report.mse == pytest.approx(2500.0)
        assert report.rmse == pytest.approx(50.0)

    def test_swapped_pair(self):
        report = compute_metrics([10.0, 20.0], [20.0, 10.0])
        assert report.mmre == pytest.approx(0.75)
        assert report.mae == pytest.approx(10.0)
        assert report.mse == pytest.approx(100.0)
        assert report.rmse == pytest.approx(10.0)

    def test_oracle_on_random_pairs(self):
        """Test: 1,000 random series; relative error <= 1e-12, RMSE = sqrt(MSE), MAE <= RMSE."""
        rng = np.random.default_rng(99)
        for _ in range(1000):
            n = int(rng.integers(1, 30))
            actual = rng.uniform(0.5, 5000.0, n).tolist()
            predicted = rng.uniform(0.0, 6000.0, n).tolist()
            report = compute_metrics(actual, predicted)
            expected = brute_metrics(actual, predicted)

            for name, value in expected.items():
                assert getattr(report, name) == pytest.approx(value, rel=1e-12)
            assert report.rmse == math.sqrt(report.mse)
            assert report.mae <= report.rmse * (1 + 1e-12)

    def test_mmre_agrees_with_report(self):
        rng = np.random.default_rng(4)
        actual, predicted = rng.uniform(1, 100, 20), rng.uniform(1, 100, 20)
        assert mmre(actual, predicted) == pytest.approx(compute_metrics(actual, predicted).mmre, rel=1e-12)

    @pytest.mark.parametrize(
        "actual, predicted",
        [
            ([], []),
            ([1.0, 2.0], [1.0]),
            ([0.0], [1.0]),
            ([-1.0], [1.0]),
            ([1.0], [float("nan")]),
        ],
    )
    def test_invalid_input(self, actual, predicted):
        with pytest.raises(MetricsError):
            compute_metrics(actual, predicted)


class TestRoundHalfUp:
    @pytest.mark.parametrize("value, expected", [(4.5, 5), (4.95, 5), (5.445, 5), (2.5, 3), (164.67, 165)])
    def test_values(self, value, expected):
        assert round_half_up(value) == expected


class TestMakeSplit:
    """Test make_split() sizes, determinism and disjointness."""

    def test_fifteen_projects(self):
        split = make_split(15, seed=0)
        assert (len(split.test), len(split.basic), len(split.train)) == (5, 5, 5)

    def test_same_seed_same_split(self):
        assert make_split(64, seed=7) == make_split(64, seed=7)

    def test_china_sized_seeds(self):
        """Test: 0.33 * 499 rounds to 165; memberships depend on the seed."""
        a, b = make_split(499, seed=1), make_split(499, seed=2)
        assert len(a.test) == len(b.test) == 165
        assert a.test != b.test

    def test_odd_remainder_goes_to_basic(self):
        split = make_split(24, seed=0)
        assert (len(split.test), len(split.basic), len(split.train)) == (8, 8, 8)
        split = make_split(12, seed=0)
        assert (len(split.test), len(split.basic), len(split.train)) == (4, 4, 4)
        split = make_split(62, seed=0)
        assert (len(split.test), len(split.basic), len(split.train)) == (20, 21, 21)
        split = make_split(81, seed=0)
        assert (len(split.test), len(split.basic), len(split.train)) == (27, 27, 27)
        split = make_split(10, seed=0)
        assert (len(split.test), len(split.basic), len(split.train)) == (3, 4, 3)

    def test_partition(self):
        split = make_split(40, seed=3)
        every = split.basic + split.train + split.test
        assert sorted(every) == list(range(40))
        assert list(split.test) == sorted(split.test)
        assert split.non_test == tuple(sorted(split.basic + split.train))

    def test_too_few_projects(self):
        with pytest.raises(SplitError):
            make_split(2, seed=0)

    def test_fraction_bounds(self):
        with pytest.raises(SplitError):
            make_split(20, seed=0, test_fraction=1.0)

    def test_accepts_dataset(self, linear_dataset):
        assert len(make_split(linear_dataset, seed=0).test) == 10


class TestMetricProperties:
    """Randomized permutation and scaling checks of compute_metrics()."""

    def test_instance_order_does_not_matter(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            n = int(rng.integers(1, 30))
            actual = rng.uniform(1.0, 1000.0, n)
            predicted = rng.uniform(0.0, 1500.0, n)
            order = rng.permutation(n)

            base = compute_metrics(actual, predicted)
            shuffled = compute_metrics(actual[order], predicted[order])
            for name in ("mmre", "mae", "mse", "rmse"):
                assert getattr(shuffled, name) == pytest.approx(getattr(base, name), rel=1e-12)
            assert shuffled.n == base.n

    @pytest.mark.parametrize("c", [0.001, 0.5, 3.0, 1000.0])
    def test_common_scale(self, c):
        """Test: scaling both series by c keeps MMRE, scales MAE and RMSE by c and MSE by c^2."""
        rng = np.random.default_rng(42)
        for _ in range(50):
            n = int(rng.integers(1, 30))
            actual = rng.uniform(1.0, 1000.0, n)
            predicted = rng.uniform(0.0, 1500.0, n)

            base = compute_metrics(actual, predicted)
            scaled = compute_metrics(c * actual, c * predicted)
            assert scaled.mmre == pytest.approx(base.mmre, rel=1e-9)
            assert scaled.mae == pytest.approx(c * base.mae, rel=1e-9)
            assert scaled.mse == pytest.approx(c * c * base.mse, rel=1e-9)
            assert scaled.rmse == pytest.approx(c * base.rmse, rel=1e-9)
