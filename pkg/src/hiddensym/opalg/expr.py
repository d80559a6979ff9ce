"""Unevaluated operator expressions.

Catalog builders, the text parser and the identity checks all produce
trees of these nodes.  Two independent consumers walk them:
:func:`hiddensym.opalg.canonical.reduce` (exact normal form) and
:mod:`hiddensym.oracle` (finite differences on sample spinors).

Generators
----------
``Gen("rhat", i)``  unit radial vector component
``Gen("p", i)``     momentum ``-i d/dx_i``
``Gen("l", i)``     orbital angular momentum
``RPow(n)``         the multiplication operator ``r**n``
``Mat(name, i)``    constant matrix: ``beta``, ``gamma5``, ``Sigma``,
                    ``alpha``, ``sigma`` (Pauli), ``id``, ``pauli_id``
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from ..clifford import DiracMatrix, make_generator
from ..coeff import GaussianRational, ScalarCoeff

_SCALAR_TYPES = (int, Fraction, GaussianRational, ScalarCoeff)


class Expr:
    """Base class; supports ``+ - *`` and integer ``**``."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, mul(Scalar(ScalarCoeff.const(-1)), as_expr(other)))

    def __rsub__(self, other):
        return as_expr(other) - self

    def __neg__(self):
        return mul(Scalar(ScalarCoeff.const(-1)), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers of operators")
        return Pow(self, k)


@dataclass(frozen=True)
class Scalar(Expr):
    coeff: ScalarCoeff


@dataclass(frozen=True)
class Gen(Expr):
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("rhat", "p", "l"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.index not in (1, 2, 3):
            raise ValueError(f"index out of 1..3: {self.index}")


@dataclass(frozen=True)
class RPow(Expr):
    n: int


_MAT_NAMES = {
    "beta": ("beta", False, 4),
    "gamma5": ("gamma5", False, 4),
    "id": ("id", False, 4),
    "pauli_id": ("pauli_id", False, 2),
    "Sigma": ("sigma_big_i", True, 4),
    "alpha": ("alpha_i", True, 4),
    "sigma": ("pauli_sigma_i", True, 2),
}


@dataclass(frozen=True)
class Mat(Expr):
    name: str
    index: int | None = None

    def __post_init__(self):
        if self.name not in _MAT_NAMES:
            raise ValueError(f"unknown matrix {self.name!r}")
        vector = _MAT_NAMES[self.name][1]
        if vector != (self.index is not None):
            raise ValueError(f"bad index {self.index!r} for matrix {self.name!r}")

    @property
    def dim(self) -> int:
        return _MAT_NAMES[self.name][2]

    @property
    def matrix(self) -> DiracMatrix:
        return make_generator(_MAT_NAMES[self.name][0], self.index)


@dataclass(frozen=True)
class Sum(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class Prod(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Comm(Expr):
    """``[x, y]`` or, with ``anti=True``, ``{x, y}``."""

    x: Expr
    y: Expr
    anti: bool = False


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int


ZERO = Scalar(ScalarCoeff())
ONE = Scalar(ScalarCoeff.const(1))


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, _SCALAR_TYPES):
        return Scalar(ScalarCoeff.coerce(x))
    raise TypeError(f"cannot use {type(x).__name__} as an operator")


def add(*terms: Expr) -> Expr:
    flat = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        elif isinstance(t, Scalar) and t.coeff.is_zero():
            continue
        else:
            flat.append(t)
    if not flat:
        return ZERO
    if len(flat) > 1 and all(isinstance(t, Scalar) for t in flat):
        total = ScalarCoeff()
        for t in flat:
            total = total + t.coeff
        return Scalar(total)
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def mul(*factors: Expr) -> Expr:
    """Product with nested products flattened and all scalars merged in front."""
    scalar = ScalarCoeff.const(1)
    rest = []
    for f in factors:
        parts = f.factors if isinstance(f, Prod) else (f,)
        for p in parts:
            if isinstance(p, Scalar):
                scalar = scalar * p.coeff
            else:
                rest.append(p)
    if scalar.is_zero():
        return ZERO
    if not rest:
        return Scalar(scalar)
    if scalar == 1:
        return rest[0] if len(rest) == 1 else Prod(tuple(rest))
    return Prod((Scalar(scalar),) + tuple(rest))


def commutator(x, y) -> Comm:
    return Comm(as_expr(x), as_expr(y), False)


def anticommutator(x, y) -> Comm:
    return Comm(as_expr(x), as_expr(y), True)


def scalar(value=1, pow_a: int = 0, pow_m: int = 0) -> Scalar:
    return Scalar(ScalarCoeff.monomial(value, pow_a, pow_m))


# ---- vectors: plain 3-tuples of expressions -------------------------------

Vector = Tuple[Expr, Expr, Expr]


def vec(kind: str) -> Vector:
    if kind in ("rhat", "p", "l"):
        return tuple(Gen(kind, i) for i in (1, 2, 3))
    return tuple(Mat(kind, i) for i in (1, 2, 3))


def dot(u: Sequence[Expr], v: Sequence[Expr]) -> Expr:
    return add(*(mul(u[i], v[i]) for i in range(3)))


def levi_civita(i: int, j: int, k: int) -> int:
    """Sign of the permutation (i, j, k) of (1, 2, 3); 0 on a repeated index."""
    return (i - j) * (j - k) * (k - i) // 2


def cross(u: Sequence[Expr], v: Sequence[Expr]) -> Vector:
    out = []
    for i in (1, 2, 3):
        terms = []
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                e = levi_civita(i, j, k)
                if e:
                    terms.append(mul(Scalar(ScalarCoeff.const(e)), u[j - 1], v[k - 1]))
        out.append(add(*terms))
    return tuple(out)


def vadd(u: Sequence[Expr], v: Sequence[Expr]) -> Vector:
    return tuple(add(u[i], v[i]) for i in range(3))


def vscale(c, u: Sequence[Expr]) -> Vector:
    c = as_expr(c)
    return tuple(mul(c, u[i]) for i in range(3))


def matrix_dim(e: Expr) -> int | None:
    """Dimension of the matrix factor used anywhere in ``e`` (None if purely scalar)."""
    dims = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, Mat):
            dims.add(n.dim)
        elif isinstance(n, Sum):
            stack.extend(n.terms)
        elif isinstance(n, Prod):
            stack.extend(n.factors)
        elif isinstance(n, Comm):
            stack.extend((n.x, n.y))
        elif isinstance(n, Pow):
            stack.append(n.base)
    if len(dims) > 1:
        from ..clifford import DimensionError

        raise DimensionError("expression mixes Pauli (2x2) and Dirac (4x4) matrix factors")
    return dims.pop() if dims else None


def derivative_depth(e: Expr) -> int:
    """Maximum number of derivatives that can act in sequence (``p`` and ``l`` count one each)."""
    if isinstance(e, Gen):
        return 0 if e.kind == "rhat" else 1
    if isinstance(e, (Scalar, RPow, Mat)):
        return 0
    if isinstance(e, Sum):
        return max(derivative_depth(t) for t in e.terms)
    if isinstance(e, Prod):
        return sum(derivative_depth(f) for f in e.factors)
    if isinstance(e, Comm):
        return derivative_depth(e.x) + derivative_depth(e.y)
    if isinstance(e, Pow):
        return e.exp * derivative_depth(e.base)
    raise TypeError(f"unknown node {e!r}")


def summands(e: Expr) -> Tuple[Expr, ...]:
    """Top-level pieces whose sum is ``e`` (commutators split into their two products)."""
    if isinstance(e, Sum):
        out = []
        for t in e.terms:
            out.extend(summands(t))
        return tuple(out)
    if isinstance(e, Comm):
        sign = ONE if e.anti else Scalar(ScalarCoeff.const(-1))
        return (mul(e.x, e.y), mul(sign, e.y, e.x))
    if isinstance(e, Prod) and isinstance(e.factors[0], Scalar) and len(e.factors) == 2:
        inner = summands(e.factors[1])
        if len(inner) > 1:
            return tuple(mul(e.factors[0], t) for t in inner)
    return (e,)
