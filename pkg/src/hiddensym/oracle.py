"""Finite-difference evaluation of operator trees on sample spinors.

This module never calls the symbolic reducer.  An expression tree is
applied, node by node, to a fixed family of smooth test spinors sampled
around each test point.  Momenta are central finite differences,
``l_i = eps_ijk x_j (-i d_k)``, ``rhat_i = x_i/|x|``, and matrices act on the
component index.

Grids
-----
With ``q = fd_order / 2`` a derivative along an axis needs ``q`` neighbours
on either side.  A field that still has ``L`` derivatives to go is stored
on the lattice offsets::

    S_L = { o in Z^3 : sum_i ceil(|o_i| / q) <= L }

and a derivative maps ``S_L`` onto ``S_(L-1)``.  This octahedral set is
roughly ten times smaller than the enclosing cube.

Precision
---------
By default arithmetic is done in ``numpy.longdouble`` (80-bit extended
precision on x86): six nested differences amplify rounding by about
``(width/step)^6``, which in double precision is already at the
tolerance.  ``precision="double"`` switches to float64.

Test spinor family ``gauss-poly-v1`` (component ``c``)::

    psi_c(x) = (u_c + v_c . x + x . W_c x) * exp(-|x - s_c|^2 / (2 w_c^2))

with complex ``u_c, v_c, W_c``, shifts ``s_c`` and widths ``w_c`` drawn
once from ``numpy.random.default_rng(7919 + c)``.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .coeff import ScalarCoeff
from .opalg import expr as E

log = logging.getLogger(__name__)

TEST_FUNCTION_ID = "gauss-poly-v1"

_CENTRAL_WEIGHTS = {
    2: (Fraction(1, 2),),
    4: (Fraction(2, 3), Fraction(-1, 12)),
    6: (Fraction(3, 4), Fraction(-3, 20), Fraction(1, 60)),
    8: (Fraction(4, 5), Fraction(-1, 5), Fraction(4, 105), Fraction(-1, 280)),
    10: (Fraction(5, 6), Fraction(-5, 21), Fraction(5, 84), Fraction(-5, 504), Fraction(1, 1260)),
}

_DTYPES = {"extended": (np.longdouble, np.clongdouble), "double": (np.float64, np.complex128)}

MIN_STENCIL_RADIUS = 0.1


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class TestConfig:
    """Sample points and finite-difference parameters.

    ``a`` and ``m`` are the numerical values substituted for the symbols.
    """

    points: Tuple[Tuple[float, float, float], ...]
    fd_step: float = 1e-2
    fd_order: int = 8
    seed: int = 0
    test_function_id: str = TEST_FUNCTION_ID
    a: float = 0.4
    m: float = 1.3
    tolerance: float = 1e-6
    nonzero_floor: float = 1e-2
    chunk: int = 10
    precision: str = "extended"

    __test__ = False  # not a pytest class

    @classmethod
    def sample(cls, n_points: int = 100, seed: int = 0, r_min: float = 0.55, r_max: float = 2.0,
               **kwargs) -> "TestConfig":
        """Points with uniformly random direction and radius in ``[r_min, r_max]``."""
        rng = np.random.default_rng(seed)
        d = rng.normal(size=(n_points, 3))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        r = rng.uniform(r_min, r_max, size=n_points)
        pts = tuple(tuple(float(v) for v in row) for row in d * r[:, None])
        return cls(points=pts, seed=seed, **kwargs)

    def with_step(self, fd_step: float) -> "TestConfig":
        return replace(self, fd_step=fd_step)

    def validate(self, depth: int) -> None:
        if self.fd_order not in _CENTRAL_WEIGHTS:
            raise OracleError(f"unsupported fd_order {self.fd_order}")
        if self.fd_step <= 0:
            raise OracleError("fd_step must be positive")
        if self.precision not in _DTYPES:
            raise OracleError(f"unknown precision {self.precision!r}")
        if self.test_function_id != TEST_FUNCTION_ID:
            raise OracleError(f"unknown test function family {self.test_function_id!r}")
        # the farthest stencil point lies along an axis: q * depth steps away
        reach = self.fd_step * (self.fd_order // 2) * depth
        radii = np.linalg.norm(np.asarray(self.points, dtype=float).reshape(-1, 3), axis=1)
        if radii.size and radii.min() - reach <= MIN_STENCIL_RADIUS:
            raise OracleError(
                f"stencil reaches radius {radii.min() - reach:.3f} <= {MIN_STENCIL_RADIUS} (too close to r = 0)")


# ---------------------------------------------------------------------------
# test spinors
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _family_params(component: int):
    rng = np.random.default_rng(7919 + component)
    u = complex(*rng.uniform(-1, 1, 2))
    v = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
    w = rng.uniform(-0.5, 0.5, (3, 3)) + 1j * rng.uniform(-0.5, 0.5, (3, 3))
    s = rng.uniform(-0.6, 0.6, 3)
    width = rng.uniform(0.9, 1.3)
    return u, v, w, s, width


def test_spinor(x: np.ndarray, dim: int) -> np.ndarray:
    """Evaluate the test family at points ``x[..., 3]``; returns ``[..., dim]`` in the dtype of ``x``."""
    cdtype = np.result_type(x.dtype, np.complex64)
    out = np.empty(x.shape[:-1] + (dim,), dtype=cdtype)
    for c in range(dim):
        u, v, w, s, width = _family_params(c)
        poly = np.full(x.shape[:-1], u, dtype=cdtype)
        for i in range(3):
            poly = poly + x[..., i] * v[i]
            for j in range(3):
                poly = poly + x[..., i] * x[..., j] * w[i, j]
        d2 = sum((x[..., i] - s[i]) ** 2 for i in range(3))
        out[..., c] = poly * np.exp(-d2 / (2 * width * width))
    return out


test_spinor.__test__ = False  # type: ignore[attr-defined]


# ---------------------------------------------------------------------------
# lattice offset sets
# ---------------------------------------------------------------------------

def _cost(o: int, q: int) -> int:
    return -(-abs(o) // q)


@lru_cache(maxsize=None)
def _offsets(level: int, q: int) -> Tuple[np.ndarray, Dict[Tuple[int, int, int], int]]:
    """Offsets in ``S_level`` (lexicographic order) and their positions."""
    span = range(-q * level, q * level + 1)
    pts = [o for o in product(span, span, span) if sum(_cost(c, q) for c in o) <= level]
    return np.array(pts, dtype=np.int64).reshape(-1, 3), {o: n for n, o in enumerate(pts)}


@lru_cache(maxsize=None)
def _shift_index(level: int, q: int, axis: int, step: int) -> np.ndarray:
    """Positions in ``S_level`` of ``o + step * e_axis`` for each ``o`` in ``S_(level-1)``."""
    small, _ = _offsets(level - 1, q)
    _, where = _offsets(level, q)
    out = np.empty(len(small), dtype=np.int64)
    for n, o in enumerate(small):
        t = list(o)
        t[axis] += step
        out[n] = where[tuple(t)]
    return out


@lru_cache(maxsize=None)
def _subset_index(level_from: int, level_to: int, q: int) -> np.ndarray:
    small, _ = _offsets(level_to, q)
    _, where = _offsets(level_from, q)
    return np.array([where[tuple(o)] for o in small], dtype=np.int64)


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class _Field:
    """Spinor values at the offsets ``S_level`` around each point: ``data[P, n, D]``."""

    __slots__ = ("data", "level", "ctx")

    def __init__(self, data: np.ndarray, level: int, ctx: "_Context"):
        self.data = data
        self.level = level
        self.ctx = ctx

    def crop(self, level: int) -> "_Field":
        if level == self.level:
            return self
        return _Field(self.data[:, _subset_index(self.level, level, self.ctx.q)], level, self.ctx)

    def coords(self) -> np.ndarray:
        return self.ctx.coords(self.level)


class _Context:
    def __init__(self, centers: np.ndarray, cfg: TestConfig):
        self.cfg = cfg
        self.real, self.complex = _DTYPES[cfg.precision]
        self.centers = centers.astype(self.real)
        self.q = cfg.fd_order // 2
        self.h = self.real(cfg.fd_step)
        self.weights = [self.real(w.numerator) / self.real(w.denominator) / self.h
                        for w in _CENTRAL_WEIGHTS[cfg.fd_order]]
        self._coords: Dict[int, np.ndarray] = {}
        self._radial: Dict[Tuple[int, int], np.ndarray] = {}
        self._rhat: Dict[Tuple[int, int], np.ndarray] = {}
        self._scalars: Dict[ScalarCoeff, object] = {}

    def coords(self, level: int) -> np.ndarray:
        hit = self._coords.get(level)
        if hit is None:
            offs, _ = _offsets(level, self.q)
            hit = self.centers[:, None, :] + offs.astype(self.real)[None] * self.h
            self._coords[level] = hit
        return hit

    def _radius(self, level: int) -> np.ndarray:
        x = self.coords(level)
        return np.sqrt(np.sum(x * x, axis=-1))

    def rpow(self, level: int, n: int) -> np.ndarray:
        hit = self._radial.get((level, n))
        if hit is None:
            hit = (self._radius(level) ** n)[..., None]
            self._radial[(level, n)] = hit
        return hit

    def rhat(self, level: int, j: int) -> np.ndarray:
        hit = self._rhat.get((level, j))
        if hit is None:
            hit = (self.coords(level)[..., j] / self._radius(level))[..., None]
            self._rhat[(level, j)] = hit
        return hit

    def scalar(self, c: ScalarCoeff):
        """Value of ``c`` at the configured ``a``, ``m``, computed in the working precision."""
        hit = self._scalars.get(c)
        if hit is None:
            a, m = self.real(self.cfg.a), self.real(self.cfg.m)
            hit = self.complex(0)
            for (pa, pm), v in c.items():
                re = self.real(int(v.re.numerator)) / self.real(int(v.re.denominator))
                im = self.real(int(v.im.numerator)) / self.real(int(v.im.denominator))
                hit = hit + (re + 1j * im) * a ** pa * m ** pm
            hit = self.complex(hit)
            self._scalars[c] = hit
        return hit


@lru_cache(maxsize=None)
def _sparse_matrix(node: E.Mat):
    """``(columns, values)`` when every row has one nonzero entry, else ``(matrix, None)``."""
    mat = node.matrix.to_complex()
    cols, vals = [], []
    for row in mat:
        nz = np.flatnonzero(row)
        if len(nz) != 1:
            return mat, None
        cols.append(int(nz[0]))
        vals.append(row[nz[0]])
    return np.array(cols), np.array(vals)


def _derivative(f: _Field, axis: int) -> _Field:
    if f.level < 1:
        raise OracleError("grid exhausted: derivative depth underestimated")
    ctx = f.ctx
    out = None
    for k, w in enumerate(ctx.weights, start=1):
        plus = f.data[:, _shift_index(f.level, ctx.q, axis, k)]
        minus = f.data[:, _shift_index(f.level, ctx.q, axis, -k)]
        term = w * (plus - minus)
        out = term if out is None else out + term
    return _Field(out, f.level - 1, ctx)


def _combine(fields: Sequence[_Field], signs: Sequence[int]) -> _Field:
    level = min(f.level for f in fields)
    total = None
    for f, s in zip(fields, signs):
        d = f.crop(level).data
        d = d if s == 1 else s * d
        total = d if total is None else total + d
    return _Field(total, level, fields[0].ctx)


def _apply(node: E.Expr, f: _Field) -> _Field:
    ctx = f.ctx
    if isinstance(node, E.Scalar):
        return _Field(f.data * ctx.scalar(node.coeff), f.level, ctx)
    if isinstance(node, E.RPow):
        return _Field(f.data * ctx.rpow(f.level, node.n), f.level, ctx)
    if isinstance(node, E.Mat):
        if node.dim != f.data.shape[-1]:
            raise OracleError("matrix dimension does not match the spinor")
        cols, vals = _sparse_matrix(node)
        if vals is None:
            return _Field(f.data @ cols.T.astype(ctx.complex), f.level, ctx)
        return _Field(f.data[..., cols] * vals.astype(ctx.complex), f.level, ctx)
    if isinstance(node, E.Gen):
        j = node.index - 1
        if node.kind == "rhat":
            return _Field(f.data * ctx.rhat(f.level, j), f.level, ctx)
        if node.kind == "p":
            d = _derivative(f, j)
            return _Field(-1j * d.data, d.level, ctx)
        # l_i = eps_ijk x_j p_k
        pieces = []
        for jj in range(3):
            for kk in range(3):
                e = E.levi_civita(node.index, jj + 1, kk + 1)
                if e:
                    d = _derivative(f, kk)
                    x = d.coords()[..., jj]
                    pieces.append(_Field((-1j * e) * d.data * x[..., None], d.level, ctx))
        return _combine(pieces, [1] * len(pieces))
    if isinstance(node, E.Sum):
        return _combine([_apply(t, f) for t in node.terms], [1] * len(node.terms))
    if isinstance(node, E.Prod):
        for factor in reversed(node.factors):
            f = _apply(factor, f)
        return f
    if isinstance(node, E.Comm):
        xy = _apply(node.x, _apply(node.y, f))
        yx = _apply(node.y, _apply(node.x, f))
        return _combine([xy, yx], [1, 1 if node.anti else -1])
    if isinstance(node, E.Pow):
        for _ in range(node.exp):
            f = _apply(node.base, f)
        return f
    raise OracleError(f"non-catalog node {node!r}")


def _as_tree(x) -> E.Expr:
    if isinstance(x, E.Expr):
        return x
    to_expr = getattr(x, "to_expr", None)
    if to_expr is None:
        raise OracleError(f"cannot evaluate {type(x).__name__}")
    return to_expr()


def apply_operator(x, cfg: TestConfig, dim: int | None = None) -> np.ndarray:
    """Values of ``x psi`` at every test point, shape ``[P, D]`` (working precision)."""
    tree = _as_tree(x)
    try:
        depth = E.derivative_depth(tree)
    except TypeError as exc:
        raise OracleError(f"non-catalog node: {exc}") from None
    cfg.validate(depth)
    if dim is None:
        dim = E.matrix_dim(tree) or 4
    pts = np.asarray(cfg.points, dtype=float).reshape(-1, 3)
    out = np.empty((len(pts), dim), dtype=_DTYPES[cfg.precision][1])

    def run(start: int) -> None:
        ctx = _Context(pts[start:start + cfg.chunk], cfg)
        psi = _Field(test_spinor(ctx.coords(depth), dim), depth, ctx)
        res = _apply(tree, psi).crop(0)
        out[start:start + len(ctx.centers)] = res.data[:, 0, :]

    starts = range(0, len(pts), cfg.chunk)
    if len(starts) == 1:
        run(0)
    else:
        # chunks write disjoint rows, so the result does not depend on scheduling
        list(_pool().map(run, starts))
    return out


_POOL = None


def _pool():
    global _POOL
    if _POOL is None:
        from concurrent.futures import ThreadPoolExecutor

        _POOL = ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1))
    return _POOL


def _norms(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(v) ** 2, axis=1))


@dataclass
class OracleOutcome:
    """Pointwise comparison of a residual against the size of its summands."""

    max_relative: float
    aggregate_relative: float
    n_points: int
    fd_step: float
    fd_order: int
    expect_zero: bool
    passed: bool
    verdict: str = field(init=False)

    def __post_init__(self):
        self.verdict = "ORACLE_PASS" if self.passed else "ORACLE_FAIL"

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "max_relative_residual": float(f"{self.max_relative:.3e}"),
            "aggregate_relative_residual": float(f"{self.aggregate_relative:.3e}"),
            "n_points": self.n_points,
            "fd_step": self.fd_step,
            "fd_order": self.fd_order,
        }


def _residual_arrays(x, cfg: TestConfig, dim: int | None):
    tree = _as_tree(x)
    if dim is None:
        dim = E.matrix_dim(tree) or 4
    total = None
    scale = np.zeros(len(cfg.points))
    for part in E.summands(tree):
        v = apply_operator(part, cfg, dim)
        total = v if total is None else total + v
        scale = np.maximum(scale, _norms(v).astype(float))
    return total, scale


def residual(x, cfg: TestConfig, dim: int | None = None) -> Tuple[float, float]:
    """``(max pointwise, aggregate)`` relative residual of an identity ``x = 0``.

    The reference size at each point is the largest of the top-level
    summands of ``x`` (commutators count as their two products); the
    residual itself is their sum.
    """
    total, scale = _residual_arrays(x, cfg, dim)
    res = _norms(total).astype(float)
    floor = np.finfo(float).tiny
    pointwise = res / np.maximum(scale, floor)
    aggregate = float(np.sqrt(np.sum(res ** 2)) / max(np.sqrt(np.sum(scale ** 2)), floor))
    return float(pointwise.max()), aggregate


def residual_norm(x, cfg: TestConfig, dim: int | None = None) -> float:
    """Absolute l2 norm of ``x psi`` over all points (summed in point order)."""
    total, _ = _residual_arrays(x, cfg, dim)
    return float(np.sqrt(np.sum(np.abs(total) ** 2)))


def check_identity(x, cfg: TestConfig, expect_zero: bool = True, dim: int | None = None) -> OracleOutcome:
    """Zero identities pass when every point is within ``cfg.tolerance``; nonzero ones
    pass when the aggregate residual is at least ``cfg.nonzero_floor``."""
    mx, agg = residual(x, cfg, dim)
    ok = mx <= cfg.tolerance if expect_zero else agg >= cfg.nonzero_floor
    return OracleOutcome(mx, agg, len(cfg.points), cfg.fd_step, cfg.fd_order, expect_zero, ok)


@dataclass
class CrossCheck:
    max_relative: float
    passed: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "max_relative_deviation": float(f"{self.max_relative:.3e}")}


def cross_check(x, y, cfg: TestConfig) -> CrossCheck:
    """Compare ``x psi`` against ``y psi`` pointwise, relative to the larger of the two."""
    tx, ty = _as_tree(x), _as_tree(y)
    dims = {d for d in (E.matrix_dim(tx), E.matrix_dim(ty)) if d}
    if len(dims) > 1:
        raise OracleError("operands act on spinors of different size")
    dim = dims.pop() if dims else 4
    vx = apply_operator(tx, cfg, dim)
    vy = apply_operator(ty, cfg, dim)
    scale = np.maximum(_norms(vx), _norms(vy)).astype(float)
    dev = _norms(vx - vy).astype(float) / np.maximum(scale, np.finfo(float).tiny)
    mx = float(dev.max())
    return CrossCheck(mx, mx <= cfg.tolerance)


def step_robust(x, cfg: TestConfig, expect_zero: bool = True) -> List[OracleOutcome]:
    """The same check at ``fd_step`` and ``fd_step / 2``."""
    return [check_identity(x, cfg, expect_zero), check_identity(x, cfg.with_step(cfg.fd_step / 2), expect_zero)]
