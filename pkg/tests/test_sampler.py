import math

import numpy as np
import pytest

from lpmax.errors import DomainError
from lpmax.sampler import (
    KN,
    MASK64,
    derive_rng,
    sample_count,
    sample_pgauss,
    sample_rademacher,
)
from lpmax.validation import INF, lp_norm


def test_derive_rng_deterministic_and_stream_separated():
    a = derive_rng(7, 1, 2).standard_normal(5)
    b = derive_rng(7, 1, 2).standard_normal(5)
    c = derive_rng(7, 1, 3).standard_normal(5)
    d = derive_rng(8, 1, 2).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_derive_rng_masks_to_64_bits():
    a = derive_rng(1 << 70).standard_normal(3)
    b = derive_rng((1 << 70) & MASK64).standard_normal(3)
    assert np.array_equal(a, b)


def test_sample_rademacher_signs():
    v = sample_rademacher(64, derive_rng(0, 0x51))
    assert v.shape == (64,)
    assert set(np.unique(v)) <= {-1.0, 1.0}
    with pytest.raises(DomainError):
        sample_rademacher(0, derive_rng(0))


@pytest.mark.parametrize("p", [2.5, 3.0, 4.0])
def test_sample_pgauss_normalization(p):
    xi, unit = sample_pgauss(12, p, derive_rng(3, 0x52))
    assert xi.shape == unit.shape == (12,)
    assert abs(lp_norm(unit, p) - 1.0) <= 1e-12
    assert np.allclose(unit * lp_norm(xi, p), xi)


def test_sample_pgauss_rejects_inf():
    with pytest.raises(DomainError):
        sample_pgauss(4, INF, derive_rng(0))


@pytest.mark.parametrize("p", [2.5, 3.0, 4.0])
def test_pgauss_pth_moment(p):
    # E|xi|^p = 1/p for the target density
    n = 10**5
    xi, _ = sample_pgauss(n, p, derive_rng(42, int(p * 4)))
    powered = np.abs(xi) ** p
    se = float(np.std(powered)) / math.sqrt(n)
    assert abs(float(np.mean(powered)) - 1.0 / p) <= 3.0 * se


def test_pgauss_sign_symmetry():
    n = 10**5
    xi, _ = sample_pgauss(n, 3.0, derive_rng(11, 0x52))
    se = float(np.std(xi)) / math.sqrt(n)
    assert abs(float(np.mean(xi))) <= 3.0 * se


def test_sample_count_frozen_values():
    # ceil(2 ln2 * 144 * 16^{1/40}) and friends, computed from the constants
    assert sample_count(16, 4.0, amplified=True, max_samples=None) == 214
    assert sample_count(16, 4.0, amplified=False, max_samples=None) == 107
    assert sample_count(1, INF, amplified=False, max_samples=None) == 50
    assert sample_count(4, INF, amplified=True, max_samples=None) == 103
    assert sample_count(8, INF, amplified=True, max_samples=None) == 105


def test_sample_count_matches_formula():
    for n in (1, 3, 16, 100):
        want = math.ceil(2.0 * math.log(2.0) * n**KN.c2 / KN.c1)
        assert sample_count(n, 3.0, amplified=True, max_samples=None) == want
        want = math.ceil(math.log(2.0) * n**KN.delta0 / KN.c0)
        assert sample_count(n, INF, amplified=False, max_samples=None) == want


def test_sample_count_monotone_in_n():
    for p in (3.0, INF):
        counts = [sample_count(n, p, max_samples=None) for n in range(1, 40)]
        assert counts == sorted(counts)


def test_sample_count_cap():
    assert sample_count(16, 4.0, amplified=True, max_samples=100) == 100
    assert sample_count(16, 4.0, amplified=True, max_samples=10**6) == 214
    with pytest.raises(DomainError):
        sample_count(0, 4.0)


def test_success_probability_floor_linf():
    # weak form of the sampling lemma: a Rademacher draw aligns with a fixed
    # direction w at least c0 / n^{delta0} of the time at the stated margin
    n = 50
    w = np.zeros(n)
    w[0] = 1.0
    rng = derive_rng(123, 0x51)
    draws = rng.integers(0, 2, size=(10**5, n)).astype(np.float64) * 2.0 - 1.0
    margin = math.sqrt(KN.delta0 * math.log(n) / n) * lp_norm(w, 1.0)
    frac = float(np.mean(draws @ w >= margin))
    floor = KN.c0 / n**KN.delta0
    se = math.sqrt(frac * (1.0 - frac) / 10**5)
    assert frac + 3.0 * se >= floor
