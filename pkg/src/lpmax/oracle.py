"""Brute-force and closed-form baselines, independent of the solvers.

Nothing here calls the randomized pipeline: values come from exhaustive
vertex enumeration (p = inf), dense grid scans over cube surfaces radially
mapped onto L_p spheres, or closed forms.  The last multilinear slot is never
gridded -- for fixed partial contraction w the best remaining vector is the
Holder dual, worth exactly ||w||_q -- which removes one exponential factor.

Grids are nested: the axis for `steps` is linspace(-1, 1, steps), so
refining steps -> 2*steps - 1 keeps every old point and the scan maximum is
exactly monotone.  An optional `refine` stage polishes the best grid points
(coordinate ascent for multilinear scans, shrinking local windows for
polynomial scans); it only ever increases the reported lower bound.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceLimitError, ShapeError
from .pqnorm import holder_dual
from .symmetry import symmetrize
from .tensor import as_tensor, eval_multilinear, is_supersymmetric
from .validation import INF, check_p, conjugate_exponent

GRID_BUDGET = 10 ** 8
_SIGN_GATE = 24  # vertex enumeration allowed while sum(dims) <= 24
_CHUNK = 1 << 16


class OracleMethod(str, enum.Enum):
    VERTEX_ENUM = "vertex_enum"
    GRID = "grid"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class OracleResult:
    value: float
    argmax: tuple
    method: OracleMethod
    resolution: float


# ---------------------------------------------------------------------------
# exact enumeration at p = inf
# ---------------------------------------------------------------------------

def _sign_rows(n, pin_first=False):
    """All +-1 vectors of length n; pin_first fixes coordinate 0 to +1."""
    free = n - 1 if pin_first else n
    rows = np.array(list(itertools.product((1.0, -1.0), repeat=free)))
    rows = rows.reshape(-1, free)
    if pin_first:
        rows = np.hstack([np.ones((rows.shape[0], 1)), rows])
    return rows


def exact_ml_linf(A) -> OracleResult:
    """Exact multilinear optimum over L_inf balls by sign enumeration.

    Slots 1..d-1 are enumerated over the +-1 vertices (the optimum of a
    multilinear form over a product of boxes is attained at vertices); the
    last slot is resolved in closed form as the l1 norm of the remaining
    contraction.  Flipping every sign in slot 1 negates that contraction and
    leaves its l1 norm unchanged, so slot 1's first coordinate is pinned.
    """
    A = as_tensor(A)
    if sum(A.dims) > _SIGN_GATE:
        raise ResourceLimitError(
            f"vertex enumeration gate exceeded: sum(dims)={sum(A.dims)} > {_SIGN_GATE}"
        )
    arr = A.data
    d = A.order
    if d == 2:
        X = _sign_rows(A.dims[0], pin_first=True)
        W = X @ arr
        vals = np.abs(W).sum(axis=1)
        k = int(np.argmax(vals))
        y = np.where(W[k] >= 0.0, 1.0, -1.0)
        xs = (X[k].copy(), y)
    else:
        grids = [_sign_rows(A.dims[0], pin_first=True)]
        grids += [_sign_rows(n) for n in A.dims[1:-1]]
        best_val, best = -math.inf, None
        for combo in itertools.product(*(list(g) for g in grids)):
            out = arr
            for v in combo:
                out = np.tensordot(out, v, axes=(0, 0))
            val = float(np.abs(out).sum())
            if val > best_val:
                best_val, best = val, (combo, out)
        combo, out = best
        y = np.where(out >= 0.0, 1.0, -1.0)
        xs = tuple(v.copy() for v in combo) + (y,)
    value = eval_multilinear(A, list(xs))
    return OracleResult(value=float(value), argmax=xs,
                        method=OracleMethod.VERTEX_ENUM, resolution=0.0)


# ---------------------------------------------------------------------------
# grids on L_p spheres
# ---------------------------------------------------------------------------

def _mesh_rows(axes, chunk=_CHUNK):
    """Yield the cartesian product of 1-D axes as (rows, len(axes)) blocks."""
    sizes = [a.size for a in axes]
    split, tail = len(axes), 1
    while split > 0 and tail * sizes[split - 1] <= chunk:
        split -= 1
        tail *= sizes[split]
    tail_axes = axes[split:]
    if tail_axes:
        mesh = np.meshgrid(*tail_axes, indexing="ij")
        tail_block = np.stack([m.ravel() for m in mesh], axis=1)
    else:
        tail_block = np.zeros((1, 0))
    if tail_block.shape[0] == 0:  # an empty axis means an empty product
        return
    for head in itertools.product(*(list(a) for a in axes[:split])):
        block = np.empty((tail_block.shape[0], len(axes)))
        if head:
            block[:, :split] = head
        block[:, split:] = tail_block
        yield block


def _surface_count(n, steps):
    return steps ** n - max(steps - 2, 0) ** n


def _sphere_chunks(n, steps, p):
    """Blocks of unit-L_p-norm rows covering the radial image of the cube
    surface; each surface point is generated exactly once (indexed by the
    first coordinate attaining magnitude 1)."""
    full = np.linspace(-1.0, 1.0, steps)
    inner = full[1:-1]
    for k in range(n):
        for sgn in (1.0, -1.0):
            axes = [inner] * k + [np.array([sgn])] + [full] * (n - 1 - k)
            for block in _mesh_rows(axes):
                if p != INF:
                    nrm = np.sum(np.abs(block) ** p, axis=1) ** (1.0 / p)
                    block = block / nrm[:, None]
                yield block


def _check_grid_args(p, steps):
    p = check_p(p, allow_low=True)
    if int(steps) != steps or steps < 2:
        raise DomainError(f"steps must be an integer >= 2, got {steps}")
    return p, int(steps)


class _TopK:
    """Keeps the k best (value, payload) pairs seen so far."""

    def __init__(self, k):
        self.k = max(1, int(k))
        self.items = []

    def offer(self, value, payload):
        if len(self.items) < self.k:
            self.items.append((value, payload))
            self.items.sort(key=lambda t: -t[0])
        elif value > self.items[-1][0]:
            self.items[-1] = (value, payload)
            self.items.sort(key=lambda t: -t[0])

    def offer_block(self, values, rows):
        take = min(self.k, values.size)
        idx = np.argpartition(values, -take)[-take:]
        for i in idx:
            self.offer(float(values[i]), rows[i].copy())

    @property
    def best(self):
        return self.items[0]


def _dual_norm_rows(W, q):
    if q == 1.0:
        return np.abs(W).sum(axis=1)
    return np.sum(np.abs(W) ** q, axis=1) ** (1.0 / q)


def _dual_vec(w, q):
    """Feasible maximizer of <w, x> over the L_p ball, total on q in [1, 2].

    Zero contractions (zero tensors, zero slices) get a basis vector so the
    oracle argmax stays feasible with value 0.
    """
    w = np.asarray(w, dtype=float)
    if not w.any():
        out = np.zeros(w.size)
        out[0] = 1.0
        return out
    if q == 2.0:
        return w / math.sqrt(float(w @ w))
    return holder_dual(w, q)


def _scan_ml(arr, dims, p, q, steps, top, prefix):
    """Grid slots left-to-right; the 2-D tail is vectorized per chunk."""
    if arr.ndim == 2:
        for block in _sphere_chunks(arr.shape[0], steps, p):
            vals = _dual_norm_rows(block @ arr, q)
            k = int(np.argmax(vals))
            top.offer(float(vals[k]), prefix + (block[k].copy(),))
        return
    for block in _sphere_chunks(arr.shape[0], steps, p):
        for row in block:
            sub = np.tensordot(arr, row, axes=(0, 0))
            _scan_ml(sub, dims[1:], p, q, steps, top, prefix + (row.copy(),))


def _ml_ascent(arr, xs, p, q, sweeps=300, rtol=1e-13):
    """Exact per-slot maximization: fixing all but one slot reduces the
    multilinear problem to a Holder pairing, solved by the dual vector."""
    d = arr.ndim
    xs = [np.array(x, dtype=float) for x in xs]
    val = -math.inf
    for _ in range(sweeps):
        for i in range(d):
            # contract every slot except i, highest axis first so that the
            # remaining axis indices stay valid as the tensor shrinks
            w = arr
            for j in range(d - 1, -1, -1):
                if j == i:
                    continue
                w = np.tensordot(w, xs[j], axes=(j, 0))
            xs[i] = _dual_vec(w, q)
        new = float(np.abs(_contract_all(arr, xs)))
        if new <= val * (1.0 + rtol) + 1e-300:
            val = max(val, new)
            break
        val = new
    return xs, val


def _contract_all(arr, xs):
    out = arr
    for x in xs:
        out = np.tensordot(out, x, axes=(0, 0))
    return float(out)


def grid_ml(A, p, steps, refine=0) -> OracleResult:
    """Grid-scan lower bound for the multilinear optimum over L_p balls.

    Slots 1..d-1 run over the radial grid; the last slot is the Holder dual
    of the remaining contraction.  refine > 0 polishes that many of the best
    grid candidates by cyclic exact per-slot updates.
    """
    A = as_tensor(A)
    p, steps = _check_grid_args(p, steps)
    if A.order < 2:
        raise ShapeError("grid_ml needs a tensor of order >= 2")
    total = 1
    for n in A.dims[:-1]:
        total *= _surface_count(n, steps)
    if total > GRID_BUDGET:
        raise ResourceLimitError(f"grid budget exceeded: {total} > {GRID_BUDGET}")
    q = conjugate_exponent(p)
    top = _TopK(max(1, refine))
    _scan_ml(A.data, A.dims, p, q, steps, top, ())
    best_val, best_prefix = top.best
    candidates = [(best_val, best_prefix)]
    if refine > 0:
        polished = []
        for val, prefix in top.items:
            w = A.data
            for x in prefix:
                w = np.tensordot(w, x, axes=(0, 0))
            xs0 = list(prefix) + [_dual_vec(w, q)]
            xs, new_val = _ml_ascent(A.data, xs0, p, q)
            polished.append((new_val, tuple(xs)))
        candidates.extend(polished)
        best_val, best_prefix = max(candidates, key=lambda t: t[0])
    if len(best_prefix) == A.order - 1:
        w = A.data
        for x in best_prefix:
            w = np.tensordot(w, x, axes=(0, 0))
        xs = tuple(best_prefix) + (_dual_vec(w, q),)
    else:
        xs = tuple(best_prefix)
    value = eval_multilinear(A, list(xs))
    if value < 0.0:
        xs = (-xs[0],) + xs[1:]
        value = -value
    return OracleResult(value=float(value), argmax=xs, method=OracleMethod.GRID,
                        resolution=2.0 / (steps - 1))


def _poly_rows(arr, X):
    d = arr.ndim
    letters = "abcdefghijkl"[:d]
    sub = letters + "," + ",".join("t" + c for c in letters) + "->t"
    return np.einsum(sub, arr, *([X] * d), optimize=True)


def grid_hp(A, p, steps, refine=0) -> OracleResult:
    """Grid-scan lower bound for a super-symmetric polynomial over the L_p ball.

    Scans the radial grid on the sphere; since f is d-homogeneous the ball
    optimum is max(0, sphere optimum), with the zero vector as witness when
    every sphere value is negative.  refine > 0 runs that many shrinking
    local-window rounds around the best point.
    """
    A = as_tensor(A)
    p, steps = _check_grid_args(p, steps)
    if A.order < 2:
        raise ShapeError("grid_hp needs a tensor of order >= 2")
    if not A.supersymmetric and not is_supersymmetric(A, 1e-9):
        raise DomainError("grid_hp needs a super-symmetric tensor")
    n = A.dims[0]
    if _surface_count(n, steps) > GRID_BUDGET:
        raise ResourceLimitError("grid budget exceeded")
    arr = A.data
    best_val, best_x = -math.inf, None
    for block in _sphere_chunks(n, steps, p):
        vals = _poly_rows(arr, block)
        k = int(np.argmax(vals))
        if float(vals[k]) > best_val:
            best_val, best_x = float(vals[k]), block[k].copy()
    step = 2.0 / (steps - 1)
    if refine > 0:
        offsets = np.array(list(itertools.product((-1.0, -0.5, 0.0, 0.5, 1.0), repeat=n)))
        h = step
        for _ in range(int(refine)):
            pts = best_x[None, :] + h * offsets
            if p == INF:
                scale = np.max(np.abs(pts), axis=1)
            else:
                scale = np.sum(np.abs(pts) ** p, axis=1) ** (1.0 / p)
            keep = scale > 0.0
            pts = pts[keep] / scale[keep][:, None]
            vals = _poly_rows(arr, pts)
            k = int(np.argmax(vals))
            if float(vals[k]) > best_val:
                best_val, best_x = float(vals[k]), pts[k].copy()
            h *= 0.35
    if best_val < 0.0:
        return OracleResult(value=0.0, argmax=(np.zeros(n),),
                            method=OracleMethod.GRID, resolution=step)
    value = _contract_all(arr, [best_x] * A.order)
    return OracleResult(value=float(value), argmax=(best_x,),
                        method=OracleMethod.GRID, resolution=step)


# ---------------------------------------------------------------------------
# closed-form auxiliary bound and the symmetrization equivalence
# ---------------------------------------------------------------------------

def fn_check(n, d, p, steps):
    """Grid-max of the block-rebalancing auxiliary function vs its closed form.

    f(x) = sum_i x_i^{1/p} * prod_{j != i} (d - x_j)^{1/p} on [0, d]^n is
    maximized at the balanced point x = (d/n, .., d/n), giving
    d^{n/p} * n^{1 - 1/p} * (1 - 1/n)^{(n-1)/p}.  Returns (grid_max, formula);
    the contract is grid_max <= formula + tol(steps).
    """
    if int(n) != n or int(d) != d or not 2 <= n <= d:
        raise DomainError(f"need integers 2 <= n <= d, got n={n}, d={d}")
    p = check_p(p, allow_low=True)
    if int(steps) != steps or steps < 2:
        raise DomainError(f"steps must be an integer >= 2, got {steps}")
    n, d, steps = int(n), int(d), int(steps)
    ipow = 0.0 if p == INF else 1.0 / p
    axis = np.linspace(0.0, float(d), steps)
    grid_max = -math.inf
    for X in _mesh_rows([axis] * n):
        G = (float(d) - X) ** ipow
        vals = np.zeros(X.shape[0])
        for i in range(n):
            others = np.ones(X.shape[0])
            for j in range(n):
                if j != i:
                    others = others * G[:, j]
            vals += X[:, i] ** ipow * others
        grid_max = max(grid_max, float(vals.max()))
    formula = float(d) ** (n * ipow) * float(n) ** (1.0 - ipow) \
        * (1.0 - 1.0 / n) ** ((n - 1) * ipow)
    return float(grid_max), float(formula)


def sym_equivalence_check(A, p, steps) -> bool:
    """Numerically verify d! * opt_ML(A) == d^{d/p} * opt_ML(sym(A)).

    The left side optimizes the multilinear form of A over unit L_p balls; the
    right side does the same for the symmetrized embedding over balls of
    radius d^{1/p}, which by d-homogeneity is the d^{d/p} factor.  Both sides
    are evaluated with the independent oracles (exact enumeration when p = inf
    and the size gate allows, refined grid scan otherwise).
    """
    A = as_tensor(A)
    p, steps = _check_grid_args(p, steps)
    S = symmetrize(A)
    d = A.order

    def ml_opt(T):
        if p == INF and sum(T.dims) <= _SIGN_GATE:
            return exact_ml_linf(T).value
        return grid_ml(T, p, steps, refine=4).value

    ipow = 0.0 if p == INF else 1.0 / p
    lhs = math.factorial(d) * ml_opt(A)
    rhs = float(d) ** (d * ipow) * ml_opt(S)
    scale = max(1.0, abs(lhs), abs(rhs))
    tol = max(1e-6, 0.5 / (steps - 1))
    return bool(abs(lhs - rhs) <= tol * scale)
