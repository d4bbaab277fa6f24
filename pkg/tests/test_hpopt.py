import math

import numpy as np
import pytest

from lpmax.config import SolverConfig
from lpmax.errors import DegenerateInputError, DomainError, ResourceLimitError, ShapeError
from lpmax.hpopt import HpCertificate, HpInstance, polarize_even, polarize_odd, solve_hp
from lpmax.tensor import Tensor, eval_multilinear, eval_poly
from lpmax.validation import INF, lp_norm

from conftest import random_supersym


def small_cfg(seed=0, **kw):
    kw.setdefault("trials", 24)
    kw.setdefault("max_samples", 6)
    return SolverConfig(seed=seed, **kw)


def test_instance_validation(rng):
    with pytest.raises(DomainError):
        HpInstance(rng.standard_normal((3, 3, 3)), INF)
    with pytest.raises(DegenerateInputError):
        HpInstance(np.zeros((2, 2)), INF)
    with pytest.raises(ShapeError):
        HpInstance(np.ones(2), INF)
    inst = HpInstance(random_supersym(rng, 2, 3), INF)
    assert inst.tensor.supersymmetric  # revalidated and flagged


def test_polarization_identity(rng):
    # the full signed average over all 2^d patterns recovers d! * F_A exactly
    for d in (3, 4, 5):
        A = random_supersym(rng, 2, d)
        xs = [rng.standard_normal(2) for _ in range(d)]
        total = 0.0
        import itertools

        for beta in itertools.product((1.0, -1.0), repeat=d):
            y = sum(b * x for b, x in zip(beta, xs))
            total += float(np.prod(beta)) * eval_poly(A, y)
        avg = total / 2**d
        want = math.factorial(d) * eval_multilinear(A, xs)
        assert abs(avg - want) <= 1e-10 * (1.0 + abs(want))


def test_polarize_odd_floor_and_feasibility(rng):
    d = 3
    A = random_supersym(rng, 3, d)
    xs = [rng.standard_normal(3) for _ in range(d)]
    xs = [x / lp_norm(x, INF) for x in xs]
    x_hat, value = polarize_odd(A, xs, INF)
    assert lp_norm(x_hat, INF) <= 1.0 + 1e-12
    # best sign pattern beats the average, which is the polarization identity
    want = math.factorial(d) * d ** (-d) * eval_multilinear(A, xs)
    assert value >= want - 1e-10
    assert value == pytest.approx(eval_poly(A, x_hat), rel=1e-10)


def test_polarize_odd_rejects_even_degree(rng):
    A = random_supersym(rng, 2, 4)
    with pytest.raises(DomainError):
        polarize_odd(A, [np.ones(2)] * 4, INF)


def test_polarize_odd_degenerate_inputs():
    A = np.zeros((2, 2, 2))
    A[0, 0, 0] = 1.0
    A = Tensor(A, supersymmetric=True)
    # cancelling xs still produce a unit-norm certificate via sign enumeration
    xs = [np.array([1.0, 0.0]), np.array([-1.0, 0.0]), np.array([0.0, 0.0])]
    x_hat, value = polarize_odd(A, xs, INF)
    assert value == pytest.approx(1.0)
    assert lp_norm(x_hat, INF) <= 1.0 + 1e-12
    # all-zero xs are the only true collapse; the certificate is the origin
    x_hat, value = polarize_odd(A, [np.zeros(2)] * 3, INF)
    assert value == 0.0
    assert np.array_equal(x_hat, np.zeros(2))


def test_polarize_even_never_negative(rng):
    d = 4
    A = random_supersym(rng, 2, d)
    xs = [rng.standard_normal(2) for _ in range(d)]
    xs = [x / lp_norm(x, 3.0) for x in xs]
    x_hat, value = polarize_even(A, xs, 3.0)
    assert value >= 0.0
    assert lp_norm(x_hat, 3.0) <= 1.0 + 1e-12
    if value > 0.0:
        assert lp_norm(x_hat, 3.0) == pytest.approx(1.0, abs=1e-9)
        assert value == pytest.approx(eval_poly(A, x_hat), rel=1e-10)


def test_polarize_even_negative_form_returns_origin():
    # f(x) = -(x1^2 + x2^2)^... : a negative-definite quartic has optimum 0
    v = np.array([1.0, 0.5])
    A = -np.einsum("i,j,k,l->ijkl", v, v, v, v)
    x_hat, value = polarize_even(A, [v / lp_norm(v, INF)] * 4, INF)
    assert value == 0.0
    assert np.array_equal(x_hat, np.zeros(2))


def test_polarize_degree_gate(rng):
    d = 21
    with pytest.raises(ResourceLimitError):
        polarize_odd(np.zeros((1,) * d) + 1.0, [np.ones(1)] * d, INF)


@pytest.mark.parametrize("p", [3.0, INF])
def test_solve_hp_odd_recovery(rng, p):
    d = 3
    A = random_supersym(rng, 3, d)
    cert = solve_hp(HpInstance(A, p, small_cfg(seed=1)))
    assert isinstance(cert, HpCertificate)
    assert cert.parity == "odd"
    floor = math.factorial(d) * d ** (-d) * cert.ml_value - 1e-9
    assert cert.value >= floor
    assert lp_norm(cert.x_hat, p) <= 1.0 + 1e-9
    assert cert.value == pytest.approx(eval_poly(A, cert.x_hat), rel=1e-9)


def test_solve_hp_even(rng):
    A = random_supersym(rng, 2, 4)
    cert = solve_hp(HpInstance(A, INF, small_cfg(seed=2)))
    assert cert.parity == "even"
    assert cert.value >= 0.0
    assert lp_norm(cert.x_hat, INF) <= 1.0 + 1e-9


def test_solve_hp_deterministic(rng):
    A = random_supersym(rng, 2, 3)
    a = solve_hp(HpInstance(A, INF, small_cfg(seed=9)))
    b = solve_hp(HpInstance(A, INF, small_cfg(seed=9)))
    assert a.value == b.value
    assert np.array_equal(a.x_hat, b.x_hat)
    assert a.seed == b.seed


def test_solve_hp_known_optimum():
    # f(x) = 3 x1^2 x2 over the sup-ball: optimum 3 at (1, 1) (or (-1, 1))
    A = np.zeros((2, 2, 2))
    A[0, 0, 1] = A[0, 1, 0] = A[1, 0, 0] = 1.0
    cert = solve_hp(HpInstance(A, INF, SolverConfig(seed=0, trials=50, max_samples=8)))
    assert cert.value <= 3.0 + 1e-9
    assert cert.value >= 3.0 * math.factorial(3) * 3 ** (-3) - 1e-9
