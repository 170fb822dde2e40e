import numpy as np
import pytest

from tirlearn import ConfigError, centered_poisson, noisy_as_clean_augment


class TestNoise:
    def test_same_seed_identical(self, rng):
        arr = rng.integers(5000, 60000, size=(64, 64), dtype=np.uint16)
        a = noisy_as_clean_augment(arr, 100.0, seed=3)
        b = noisy_as_clean_augment(arr, 100.0, seed=3)
        c = noisy_as_clean_augment(arr, 100.0, seed=4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_zero_mean_variance_lambda(self):
        arr = np.full((1000, 1000), 30000, dtype=np.uint16)
        out = centered_poisson(arr, 100.0, np.random.default_rng(7))
        delta = out.astype(np.int64) - 30000
        assert abs(float(delta.mean())) <= 0.1
        assert abs(float(delta.var()) - 100.0) <= 5.0

    def test_vanishing_lambda_is_identity_within_one(self, rng):
        arr = rng.integers(1000, 60000, size=(128, 128), dtype=np.uint16)
        out = noisy_as_clean_augment(arr, 1e-6, seed=0)
        assert int(np.abs(out.astype(np.int64) - arr.astype(np.int64)).max()) <= 1

    def test_clamped_to_16_bit_range(self):
        lo = centered_poisson(np.zeros((64, 64), dtype=np.uint16), 100.0,
                              np.random.default_rng(0))
        hi = centered_poisson(np.full((64, 64), 65535, dtype=np.uint16), 100.0,
                              np.random.default_rng(0))
        assert lo.min() == 0 and lo.dtype == np.uint16
        assert hi.max() == 65535

    def test_bad_lambda(self):
        with pytest.raises(ConfigError):
            centered_poisson(np.zeros((4, 4), dtype=np.uint16), -1.0,
                             np.random.default_rng(0))
