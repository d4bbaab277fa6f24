"""Homogeneous polynomial maximization over an L_p ball.

Pipeline: decouple f_A into its multilinear relaxation, solve that with the
randomized recursion, then pull the d decoupled vectors back to a single
feasible point by polarization.  For odd d the polarization average

    2^-d * sum_beta (prod_i beta_i) f_A(sum_j beta_j x^j) = d! * F_A(x^1..x^d)

guarantees the best sign pattern recovers at least d! / d^d of the multilinear
value; for even d the best admissible (prod beta = 1) combination is returned
without a relative-gap claim.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import SolverConfig
from .errors import DegenerateInputError, DomainError, ResourceLimitError, ShapeError
from .mlopt import relax_to_ml, solve_ml
from .tensor import Tensor, as_tensor, is_supersymmetric
from .validation import as_vector, check_p, lp_norm

_BETA_GATE = 20  # 2^d sign patterns are enumerated exhaustively


@dataclass(frozen=True)
class HpInstance:
    """A polynomial maximization problem; the tensor must be super-symmetric."""

    tensor: Tensor
    p: float
    cfg: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        t = as_tensor(self.tensor)
        if t.order < 2:
            raise ShapeError("polynomial instances need degree >= 2")
        if not t.data.any():
            raise DegenerateInputError("instance tensor is zero")
        if not t.supersymmetric:
            if not is_supersymmetric(t, 1e-9):
                raise DomainError("polynomial instances need a super-symmetric tensor")
            t = Tensor(t.data, supersymmetric=True)
        object.__setattr__(self, "tensor", t)
        object.__setattr__(self, "p", check_p(self.p))


@dataclass(frozen=True)
class HpCertificate:
    x_hat: np.ndarray
    value: float
    ml_value: float
    parity: str
    seed: int


def _f(arr: np.ndarray, x: np.ndarray) -> float:
    out = arr
    for _ in range(arr.ndim):
        out = np.tensordot(out, x, axes=(0, 0))
    return float(out)


def _check_xs(A: Tensor, xs):
    if len(xs) != A.order:
        raise ShapeError(f"need {A.order} vectors, got {len(xs)}")
    return [as_vector(x, n, name=f"xs[{i}]") for i, (x, n) in enumerate(zip(xs, A.dims))]


def polarize_odd(A, xs, p):
    """Best odd-degree sign combination, normalized onto the L_p sphere.

    Enumerates all 2^d sign vectors beta; for each, evaluates f_A at
    sum_j (prod_{i != j} beta_i) x^j and keeps the maximizer.  When every
    combination collapses to zero, falls back to the best single +-x^j so the
    certificate is never vacuous.
    """
    A = as_tensor(A)
    d = A.order
    if d % 2 == 0 or d < 3:
        raise DomainError("polarize_odd needs odd degree >= 3")
    if d > _BETA_GATE:
        raise ResourceLimitError(f"degree {d} exceeds the sign-enumeration gate {_BETA_GATE}")
    pf = check_p(p)
    xs = _check_xs(A, xs)
    arr = A.data
    best_y, best_val = None, -math.inf
    for beta in itertools.product((1.0, -1.0), repeat=d):
        # prod_{i != j} beta_i = (prod beta) * beta_j since beta_j^2 = 1
        sign = float(np.prod(beta))
        y = sign * sum(b * x for b, x in zip(beta, xs))
        val = _f(arr, y)
        if val > best_val:
            best_y, best_val = y, val
    nrm = lp_norm(best_y, pf)
    if nrm == 0.0:
        best_x, best_val = None, -math.inf
        for x in xs:
            n = lp_norm(x, pf)
            if n == 0.0:
                continue
            v = _f(arr, x / n)
            if abs(v) > best_val:
                best_x, best_val = np.sign(v) * x / n if v != 0 else x / n, abs(v)
        if best_x is None:
            return np.zeros(A.dims[0]), 0.0
        return best_x, _f(arr, best_x)
    x_hat = best_y / nrm
    return x_hat, _f(arr, x_hat)


def polarize_even(A, xs, p):
    """Best even-degree combination (1/d) * sum_j beta_j x^j over prod beta = 1.

    The average is feasible without renormalization because each x^j sits in
    the unit ball and the coefficients are 1/d in magnitude.  A positive
    combination is pushed out to the L_p sphere (which can only increase an
    even-degree homogeneous value); if every combination is nonpositive the
    origin is returned, since f(0) = 0 dominates.
    """
    A = as_tensor(A)
    d = A.order
    if d % 2 == 1 or d < 2:
        raise DomainError("polarize_even needs even degree >= 2")
    if d > _BETA_GATE:
        raise ResourceLimitError(f"degree {d} exceeds the sign-enumeration gate {_BETA_GATE}")
    pf = check_p(p)
    xs = _check_xs(A, xs)
    arr = A.data
    best_x, best_val = None, -math.inf
    for beta in itertools.product((1.0, -1.0), repeat=d):
        if np.prod(beta) != 1.0:
            continue
        x = sum(b * xj for b, xj in zip(beta, xs)) / d
        val = _f(arr, x)
        if val > best_val:
            best_x, best_val = x, val
    # the decoupled vectors themselves are feasible candidates too, and can
    # win when every admissible combination lands in a negative region
    for x in xs:
        val = _f(arr, x)
        if val > best_val:
            best_x, best_val = x, val
    nrm = lp_norm(best_x, pf)
    if best_val <= 0.0 or nrm == 0.0:
        return np.zeros(A.dims[0]), 0.0
    x_hat = best_x / nrm
    return x_hat, _f(arr, x_hat)


def solve_hp(inst: HpInstance, rng=None) -> HpCertificate:
    """relax -> solve_ml -> polarize; odd degrees assert the recovery bound."""
    cert = solve_ml(relax_to_ml(inst), rng=rng)
    d = inst.tensor.order
    if d % 2 == 1:
        x_hat, value = polarize_odd(inst.tensor, cert.xs, inst.p)
        floor = math.factorial(d) * d ** (-d) * cert.value - 1e-9
        assert value >= floor, (
            f"odd-degree recovery bound violated: {value} < {floor}"
        )
        parity = "odd"
    else:
        x_hat, value = polarize_even(inst.tensor, cert.xs, inst.p)
        parity = "even"
    return HpCertificate(x_hat=x_hat, value=float(value), ml_value=cert.value,
                         parity=parity, seed=cert.seed)
