"""Canonical form of operator expressions.

An operator is stored as a finite sum of monomials::

    coeff * r^n * rhat_1^e1 rhat_2^e2 rhat_3^e3 * p_1^q1 p_2^q2 p_3^q3 * B

with ``B`` one of the product-basis matrices of :mod:`hiddensym.clifford`
and ``coeff`` a :class:`~hiddensym.coeff.ScalarCoeff`.  Functions of
position sit to the left of all momenta, so every differential operator
has exactly one such expansion.  Two further rules make it unique:

* ``rhat_3^2`` is rewritten as ``1 - rhat_1^2 - rhat_2^2`` (so ``e3`` is
  0 or 1), which is the normal form of polynomials on the unit sphere;
* ``l_i`` is expanded as ``r * eps_ijk rhat_j p_k`` when it enters a
  product; it never appears in canonical monomials.

Moving a momentum past a function uses the Leibniz rule with the exact
derivative::

    d_j (r^n rhat^e) = r^(n-1) [ (n - |e|) rhat^(e + 1_j) + e_j rhat^(e - 1_j) ]

The canonical form is therefore zero exactly when the operator annihilates
every smooth spinor away from the origin.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Iterator, List, Tuple

from ..clifford import DimensionError, DiracMatrix, basis, basis_names, basis_product_table, decompose
from ..coeff import GaussianRational, ScalarCoeff, format_coeff, is_atomic_text
from . import expr as E

# spatial key: (n, e1, e2, e3, q1, q2, q3)
Spatial = Tuple[int, int, int, int, int, int, int]
# inner key: (basis index, power of a, power of m)
Inner = Tuple[int, int, int]
Func = Tuple[int, int, int, int]

# ---------------------------------------------------------------------------
# functions r^n rhat^e
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _reduce_func(f: Func) -> Tuple[Tuple[Func, int], ...]:
    n, e1, e2, e3 = f
    if e3 < 2:
        return ((f, 1),)
    out: Dict[Func, int] = {}
    for g, c in (((n, e1, e2, e3 - 2), 1), ((n, e1 + 2, e2, e3 - 2), -1), ((n, e1, e2 + 2, e3 - 2), -1)):
        for h, d in _reduce_func(g):
            out[h] = out.get(h, 0) + c * d
    return tuple((k, v) for k, v in sorted(out.items()) if v)


def _func_mul(f: Func, g: Func) -> Tuple[Tuple[Func, int], ...]:
    return _reduce_func((f[0] + g[0], f[1] + g[1], f[2] + g[2], f[3] + g[3]))


@lru_cache(maxsize=None)
def _deriv(f: Func, j: int) -> Tuple[Tuple[Func, int], ...]:
    """Exact partial derivative along axis ``j`` (0-based) of ``r^n rhat^e``."""
    n, *e = f
    deg = sum(e)
    out: Dict[Func, int] = {}
    up = list(e)
    up[j] += 1
    if n - deg:
        for h, d in _reduce_func((n - 1, *up)):
            out[h] = out.get(h, 0) + (n - deg) * d
    if e[j]:
        down = list(e)
        down[j] -= 1
        for h, d in _reduce_func((n - 1, *down)):
            out[h] = out.get(h, 0) + e[j] * d
    return tuple((k, v) for k, v in sorted(out.items()) if v)


@lru_cache(maxsize=None)
def _deriv_multi(f: Func, beta: Tuple[int, int, int]) -> Tuple[Tuple[Func, int], ...]:
    if not any(beta):
        return ((f, 1),)
    j = next(i for i in range(3) if beta[i])
    lower = list(beta)
    lower[j] -= 1
    out: Dict[Func, int] = {}
    for g, c in _deriv_multi(f, tuple(lower)):
        for h, d in _deriv(g, j):
            out[h] = out.get(h, 0) + c * d
    return tuple((k, v) for k, v in sorted(out.items()) if v)


@lru_cache(maxsize=None)
def spatial_product(s1: Spatial, s2: Spatial) -> Tuple[Tuple[Spatial, GaussianRational], ...]:
    """``(F1 p^a1)(F2 p^a2) = sum_b C(a1, b) (-i)^|b| F1 (d^b F2) p^(a1 - b + a2)``."""
    f1, a1 = s1[:4], s1[4:]
    f2, a2 = s2[:4], s2[4:]
    out: Dict[Spatial, int] = {}
    for b1 in range(a1[0] + 1):
        for b2 in range(a1[1] + 1):
            for b3 in range(a1[2] + 1):
                weight = comb(a1[0], b1) * comb(a1[1], b2) * comb(a1[2], b3)
                phase = (b1 + b2 + b3) % 4
                mom = (a1[0] - b1 + a2[0], a1[1] - b2 + a2[1], a1[2] - b3 + a2[2])
                for g, c in _deriv_multi(f2, (b1, b2, b3)):
                    for h, d in _func_mul(f1, g):
                        key = h + mom
                        # store weight * (-i)^phase as a (real, imag) pair of ints
                        val = weight * c * d
                        re, im = _rotate(val, phase)
                        prev = out.get(key, (0, 0))
                        out[key] = (prev[0] + re, prev[1] + im)
    return tuple((k, GaussianRational(*v)) for k, v in sorted(out.items()) if v != (0, 0))


def _rotate(val: int, phase: int) -> Tuple[int, int]:
    # val * (-i)^phase
    return ((val, 0), (0, -val), (-val, 0), (0, val))[phase]


# ---------------------------------------------------------------------------
# canonical operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Monomial:
    """One canonical term; ``rhat`` and ``p`` are exponent triples."""

    r_power: int
    rhat: Tuple[int, int, int]
    p: Tuple[int, int, int]
    matrix_index: int
    dim: int | None
    coeff: ScalarCoeff

    @property
    def matrix(self) -> DiracMatrix:
        return basis(self.dim or 4)[self.matrix_index] if self.dim else DiracMatrix.identity(4)

    def key(self):
        return (self.r_power, self.rhat, self.p, self.matrix_index)


class OperatorExpr:
    """Canonical operator: immutable map ``spatial -> {(basis, pow_a, pow_m): coefficient}``."""

    __slots__ = ("dim", "_terms")

    def __init__(self, terms: Dict[Spatial, Dict[Inner, GaussianRational]] | None = None,
                 dim: int | None = None):
        self.dim = dim
        self._terms = terms or {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, dim: int | None = None) -> "OperatorExpr":
        return cls({}, dim)

    @classmethod
    def from_scalar(cls, c: ScalarCoeff, dim: int | None = None) -> "OperatorExpr":
        inner = {(0, pa, pm): v for (pa, pm), v in c.items()}
        return cls({(0, 0, 0, 0, 0, 0, 0): inner} if inner else {}, dim)

    @classmethod
    def from_matrix(cls, mat: DiracMatrix) -> "OperatorExpr":
        inner = {(k, 0, 0): c for k, c in decompose(mat)}
        return cls({(0, 0, 0, 0, 0, 0, 0): inner} if inner else {}, mat.dim)

    @classmethod
    def spatial(cls, key: Spatial, coeff: GaussianRational | int = 1) -> "OperatorExpr":
        return cls({key: {(0, 0, 0): GaussianRational.coerce(coeff)}}, None)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return sum(len(v) for v in self._terms.values())

    def monomials(self) -> List[Monomial]:
        """Monomials in the stable printing order (see :func:`term_order`)."""
        out = []
        for s in sorted(self._terms, key=term_order):
            by_mat: Dict[int, Dict[Tuple[int, int], GaussianRational]] = {}
            for (b, pa, pm), c in self._terms[s].items():
                by_mat.setdefault(b, {})[(pa, pm)] = c
            for b in sorted(by_mat):
                out.append(Monomial(s[0], s[1:4], s[4:7], b, self.dim, ScalarCoeff(by_mat[b])))
        return out

    def spatial_keys(self) -> List[Spatial]:
        return sorted(self._terms, key=term_order)

    def coefficient(self, spatial: Spatial, basis_index: int = 0) -> ScalarCoeff:
        inner = self._terms.get(spatial, {})
        return ScalarCoeff({(pa, pm): c for (b, pa, pm), c in inner.items() if b == basis_index})

    def __eq__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        # a dimensionless operator only has identity-matrix terms, which mean the same in any dimension
        same_space = self.dim == other.dim or None in (self.dim, other.dim) or not self._terms
        return self._terms == other._terms and same_space

    def __hash__(self):
        return hash(frozenset((s, frozenset(v.items())) for s, v in self._terms.items()))

    # -- arithmetic ---------------------------------------------------------

    def _merged_dim(self, other: "OperatorExpr") -> int | None:
        if self.dim and other.dim and self.dim != other.dim:
            raise DimensionError(f"cannot combine {self.dim}x{self.dim} and {other.dim}x{other.dim} factors")
        return self.dim or other.dim

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        dim = self._merged_dim(other)
        out = {s: dict(v) for s, v in self._terms.items()}
        for s, inner in other._terms.items():
            tgt = out.setdefault(s, {})
            for k, c in inner.items():
                prev = tgt.get(k)
                tot = c if prev is None else prev + c
                if tot:
                    tgt[k] = tot
                else:
                    del tgt[k]
            if not tgt:
                del out[s]
        return OperatorExpr(out, dim)

    def __neg__(self) -> "OperatorExpr":
        return self.scale(GaussianRational(-1))

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + (-other)

    def scale(self, c) -> "OperatorExpr":
        if isinstance(c, ScalarCoeff):
            return self * OperatorExpr.from_scalar(c)
        c = GaussianRational.coerce(c)
        if not c:
            return OperatorExpr.zero(self.dim)
        return OperatorExpr({s: {k: v * c for k, v in inner.items()} for s, inner in self._terms.items()},
                            self.dim)

    def __mul__(self, other: "OperatorExpr") -> "OperatorExpr":
        if not isinstance(other, OperatorExpr):
            return self.scale(other)
        return multiply(self, other)

    # -- structure ----------------------------------------------------------

    def filter_matrix(self, keep) -> "OperatorExpr":
        out = {}
        for s, inner in self._terms.items():
            sub = {k: c for k, c in inner.items() if keep(k[0])}
            if sub:
                out[s] = sub
        return OperatorExpr(out, self.dim)

    def block_parts(self) -> Tuple["OperatorExpr", "OperatorExpr"]:
        """Split a Dirac operator into block-diagonal and block-antidiagonal parts."""
        if self.dim == 2:
            return self, OperatorExpr.zero(2)
        diag = self.filter_matrix(lambda b: b < 8)
        anti = self.filter_matrix(lambda b: b >= 8)
        return diag, anti

    def a_degree_range(self) -> Tuple[int, int] | None:
        pows = [k[1] for inner in self._terms.values() for k in inner]
        return (min(pows), max(pows)) if pows else None

    def to_expr(self) -> E.Expr:
        """Rebuild a tree (used to feed canonical forms to the numerical oracle)."""
        terms = []
        for mono in self.monomials():
            terms.append(_monomial_expr(mono))
        return E.add(*terms)

    def __str__(self):
        return format_operator(self)

    def __repr__(self):
        return f"OperatorExpr({format_operator(self)!r})"


def term_order(s: Spatial):
    """Stable order: total momentum degree, momentum exponents, r power, rhat exponents."""
    return (s[4] + s[5] + s[6], s[4:7], s[0], s[1:4])


def multiply(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    """Product ``x * y`` in canonical form."""
    dim = x._merged_dim(y)
    table = basis_product_table(dim or 2)
    out: Dict[Spatial, Dict[Inner, GaussianRational]] = {}
    for s1, in1 in x._terms.items():
        for s2, in2 in y._terms.items():
            inner: Dict[Inner, GaussianRational] = {}
            for (b1, a1, m1), c1 in in1.items():
                row = table[b1]
                for (b2, a2, m2), c2 in in2.items():
                    k, ph = row[b2]
                    key = (k, a1 + a2, m1 + m2)
                    v = c1 * c2 * ph
                    prev = inner.get(key)
                    inner[key] = v if prev is None else prev + v
            inner = {k: v for k, v in inner.items() if v}
            if not inner:
                continue
            for s, g in spatial_product(s1, s2):
                tgt = out.setdefault(s, {})
                for k, v in inner.items():
                    w = v * g
                    prev = tgt.get(k)
                    tgt[k] = w if prev is None else prev + w
    clean = {}
    for s, inner in out.items():
        inner = {k: v for k, v in inner.items() if v}
        if inner:
            clean[s] = inner
    return OperatorExpr(clean, dim)


def commutator(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    return multiply(x, y) - multiply(y, x)


def anticommutator(x: OperatorExpr, y: OperatorExpr) -> OperatorExpr:
    return multiply(x, y) + multiply(y, x)


# ---------------------------------------------------------------------------
# generators and reduction of trees
# ---------------------------------------------------------------------------

def _unit(j: int) -> Tuple[int, int, int]:
    return tuple(1 if i == j else 0 for i in (1, 2, 3))


@lru_cache(maxsize=None)
def generator(kind: str, index: int) -> OperatorExpr:
    if kind == "rhat":
        return OperatorExpr.spatial((0, *_unit(index), 0, 0, 0))
    if kind == "p":
        return OperatorExpr.spatial((0, 0, 0, 0, *_unit(index)))
    if kind == "l":
        out = OperatorExpr.zero()
        for j in (1, 2, 3):
            for k in (1, 2, 3):
                e = E.levi_civita(index, j, k)
                if e:
                    out = out + OperatorExpr.spatial((1, *_unit(j), *_unit(k)), e)
        return out
    raise ValueError(f"unknown generator {kind!r}")


@lru_cache(maxsize=None)
def _matrix_op(m: E.Mat) -> OperatorExpr:
    return OperatorExpr.from_matrix(m.matrix)


def reduce(x) -> OperatorExpr:
    """Canonical form of a tree (or of an already-canonical operator, returned as is)."""
    if isinstance(x, OperatorExpr):
        return x
    dim = E.matrix_dim(x)
    memo: Dict[int, Tuple[E.Expr, OperatorExpr]] = {}
    out = _reduce(x, memo)
    if dim and not out.dim:
        out = OperatorExpr(out._terms, dim)
    return out


def _reduce(x: E.Expr, memo) -> OperatorExpr:
    # memo holds the node itself too, so ids stay unique for the whole walk
    hit = memo.get(id(x))
    if hit is not None:
        return hit[1]
    if isinstance(x, E.Scalar):
        out = OperatorExpr.from_scalar(x.coeff)
    elif isinstance(x, E.Gen):
        out = generator(x.kind, x.index)
    elif isinstance(x, E.RPow):
        out = OperatorExpr.spatial((x.n, 0, 0, 0, 0, 0, 0))
    elif isinstance(x, E.Mat):
        out = _matrix_op(x)
    elif isinstance(x, E.Sum):
        out = OperatorExpr.zero()
        for t in x.terms:
            out = out + _reduce(t, memo)
    elif isinstance(x, E.Prod):
        out = _reduce(x.factors[0], memo)
        for f in x.factors[1:]:
            out = multiply(out, _reduce(f, memo))
    elif isinstance(x, E.Comm):
        a = _reduce(x.x, memo)
        b = _reduce(x.y, memo)
        out = anticommutator(a, b) if x.anti else commutator(a, b)
    elif isinstance(x, E.Pow):
        base = _reduce(x.base, memo)
        out = OperatorExpr.from_scalar(ScalarCoeff.const(1), base.dim)
        for _ in range(x.exp):
            out = multiply(out, base)
    else:
        raise TypeError(f"unknown expression node {x!r}")
    memo[id(x)] = (x, out)
    return out


def is_zero(x) -> bool:
    return reduce(x).is_zero()


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _power(name: str, k: int) -> str:
    return name if k == 1 else f"{name}^{k}"


def _spatial_factors(r_power: int, rhat, p) -> List[str]:
    parts = []
    if r_power:
        parts.append(f"r^{r_power}")
    for i, k in enumerate(rhat, 1):
        if k:
            parts.append(_power(f"rhat_{i}", k))
    for i, k in enumerate(p, 1):
        if k:
            parts.append(_power(f"p_{i}", k))
    return parts


def _matrix_factors(dim, index) -> List[str]:
    if not dim:
        return []
    return list(basis_names(dim, index))


def _monomial_expr(mono: Monomial) -> E.Expr:
    factors: List[E.Expr] = [E.Scalar(mono.coeff)]
    if mono.r_power:
        factors.append(E.RPow(mono.r_power))
    for kind, exps in (("rhat", mono.rhat), ("p", mono.p)):
        for i, k in enumerate(exps, 1):
            if k:
                g = E.Gen(kind, i)
                factors.append(g if k == 1 else E.Pow(g, k))
    for name in _matrix_factors(mono.dim, mono.matrix_index):
        base, _, idx = name.partition("_")
        factors.append(E.Mat(base, int(idx)) if idx else E.Mat(base))
    return E.mul(*factors)


def format_monomial(mono: Monomial) -> Tuple[str, str]:
    """``(sign, text)`` for one monomial."""
    body = _spatial_factors(mono.r_power, mono.rhat, mono.p) + _matrix_factors(mono.dim, mono.matrix_index)
    c = mono.coeff
    sign = "+"
    text = format_coeff(c)
    if is_atomic_text(-c) and text.startswith("-"):
        sign, c = "-", -c
        text = format_coeff(c)
    if not body:
        return sign, text
    if c == 1:
        return sign, "*".join(body)
    if not is_atomic_text(c):
        text = f"({text})"
    return sign, "*".join([text] + body)


def format_operator(x: OperatorExpr) -> str:
    """Canonical text; ``0`` for the zero operator.  Order is :func:`term_order`, then basis index."""
    monos = x.monomials()
    if not monos:
        return "0"
    pieces = []
    for mono in monos:
        sign, text = format_monomial(mono)
        if not pieces:
            pieces.append(text if sign == "+" else f"-{text}")
        else:
            pieces.append(f" {sign} {text}")
    return "".join(pieces)


def iter_terms(x: OperatorExpr) -> Iterator[Tuple[Spatial, int, ScalarCoeff]]:
    for mono in x.monomials():
        yield (mono.r_power, *mono.rhat, *mono.p), mono.matrix_index, mono.coeff
