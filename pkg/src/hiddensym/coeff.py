"""Exact scalar coefficients.

Two layers:

* :class:`GaussianRational` -- ``re + i*im`` with rational parts.
* :class:`ScalarCoeff` -- a Laurent polynomial in the commuting symbols
  ``a`` (Coulomb coupling) and ``m`` (mass) with Gaussian-rational
  coefficients, stored as a sparse ``{(pow_a, pow_m): GaussianRational}``
  map with no zero entries.

Text form (used by the printer and parser)::

    (2/3)*i*a^-1*m^2
    a^2 + m^2
    (1/2 + 3/2*i)*m
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple, Union

from gmpy2 import mpq

Rational = Union[int, Fraction, "mpq"]
Exponent = Tuple[int, int]

_MPQ_TYPE = type(mpq(0))


def _q(x) -> "mpq":
    if isinstance(x, _MPQ_TYPE):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    raise TypeError(f"not an exact rational: {x!r}")


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        return cls(x)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction, _MPQ_TYPE)):
                o = _q(other)
                return GaussianRational(self.re * o, self.im * o)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational(a * c, 0)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, _MPQ_TYPE)):
            return not self.im and self.re == _q(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({_fmt_q(self.re)}, {_fmt_q(self.im)})"

    def __str__(self):
        return format_gaussian(self)


I = GaussianRational(0, 1)
ONE = GaussianRational(1)
ZERO = GaussianRational(0)


def _fmt_q(x) -> str:
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def format_gaussian(z: GaussianRational) -> str:
    """Standalone text for a Gaussian rational: ``2``, ``-1/2``, ``(2/3)*i``, ``(1 - i)``."""
    if not z.im:
        return _fmt_q(z.re)
    if not z.re:
        if z.im == 1:
            return "i"
        if z.im == -1:
            return "-i"
        s = _fmt_q(z.im)
        if z.im.denominator != 1:
            s = f"({s})" if z.im > 0 else f"-({_fmt_q(-z.im)})"
        return f"{s}*i"
    im = _fmt_q(abs(z.im))
    sign = "+" if z.im > 0 else "-"
    im_part = "i" if abs(z.im) == 1 else f"{im}*i"
    return f"({_fmt_q(z.re)} {sign} {im_part})"


class ScalarCoeff:
    """Laurent polynomial in ``a`` and ``m`` over the Gaussian rationals.

    Immutable; the term map never holds zero coefficients, so
    ``ScalarCoeff() == 0`` and equality is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        clean: Dict[Exponent, GaussianRational] = {}
        if terms:
            for k, v in terms.items():
                v = GaussianRational.coerce(v)
                if v:
                    clean[(int(k[0]), int(k[1]))] = v
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, GaussianRational]) -> "ScalarCoeff":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, value) -> "ScalarCoeff":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, value=1, pow_a: int = 0, pow_m: int = 0) -> "ScalarCoeff":
        return cls({(pow_a, pow_m): value})

    @classmethod
    def coerce(cls, x) -> "ScalarCoeff":
        if isinstance(x, ScalarCoeff):
            return x
        return cls.const(x)

    @property
    def terms(self) -> Dict[Exponent, GaussianRational]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, GaussianRational]]:
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __add__(self, other):
        other = ScalarCoeff.coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ScalarCoeff._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarCoeff._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-ScalarCoeff.coerce(other))

    def __rsub__(self, other):
        return ScalarCoeff.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            other = GaussianRational.coerce(other)
            if not other:
                return ScalarCoeff._raw({})
            return ScalarCoeff._raw({k: v * other for k, v in self._terms.items()})
        if not isinstance(other, ScalarCoeff):
            return NotImplemented
        out: Dict[Exponent, GaussianRational] = {}
        for (a1, m1), v1 in self._terms.items():
            for (a2, m2), v2 in other._terms.items():
                k = (a1 + a2, m1 + m2)
                s = out.get(k)
                s = v1 * v2 if s is None else s + v1 * v2
                out[k] = s
        return ScalarCoeff._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def inverse(self) -> "ScalarCoeff":
        """Inverse of a single-term coefficient (the only invertible elements)."""
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self} is not an invertible monomial")
        ((pa, pm), v), = self._terms.items()
        return ScalarCoeff._raw({(-pa, -pm): v.inverse()})

    def __truediv__(self, other):
        return self * ScalarCoeff.coerce(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ScalarCoeff.const(1)
        for _ in range(k):
            out = out * self
        return out

    def substitute(self, a=None, m=None) -> "ScalarCoeff":
        """Replace ``a`` and/or ``m`` by other coefficients (invertible when a negative power occurs)."""
        out = ScalarCoeff()
        sa = ScalarCoeff.monomial(1, 1, 0) if a is None else ScalarCoeff.coerce(a)
        sm = ScalarCoeff.monomial(1, 0, 1) if m is None else ScalarCoeff.coerce(m)
        for (pa, pm), v in self._terms.items():
            out = out + (sa ** pa) * (sm ** pm) * v
        return out

    def evaluate(self, a: float, m: float) -> complex:
        total = 0j
        for (pa, pm), v in sorted(self._terms.items()):
            total += complex(v) * (a ** pa) * (m ** pm)
        return total

    def degree_range(self, symbol: str) -> Tuple[int, int]:
        idx = {"a": 0, "m": 1}[symbol]
        powers = [k[idx] for k in self._terms]
        if not powers:
            return (0, 0)
        return (min(powers), max(powers))

    def __eq__(self, other):
        if isinstance(other, ScalarCoeff):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == ScalarCoeff.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"ScalarCoeff({str(self)!r})"

    def __str__(self):
        return format_coeff(self)


A = ScalarCoeff.monomial(1, 1, 0)
M = ScalarCoeff.monomial(1, 0, 1)


def _format_symbols(pa: int, pm: int) -> str:
    parts = []
    for name, p in (("a", pa), ("m", pm)):
        if p == 1:
            parts.append(name)
        elif p:
            parts.append(f"{name}^{p}")
    return "*".join(parts)


def _term_with_sign(v: GaussianRational, pa: int, pm: int) -> Tuple[str, str]:
    """Return (sign, body) for one term so that sums print as ``x - y``."""
    sym = _format_symbols(pa, pm)
    neg = (not v.im and v.re < 0) or (not v.re and v.im < 0)
    if neg:
        v = -v
    if not sym:
        return ("-" if neg else "+", format_gaussian(v))
    if v == 1:
        return ("-" if neg else "+", sym)
    num = format_gaussian(v)
    if not v.im and v.re.denominator != 1:
        num = f"({num})"
    return ("-" if neg else "+", f"{num}*{sym}")


def format_coeff(c: ScalarCoeff) -> str:
    if not c._terms:
        return "0"
    out = []
    for (pa, pm), v in sorted(c._terms.items()):
        sign, body = _term_with_sign(v, pa, pm)
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def is_atomic_text(c: ScalarCoeff) -> bool:
    """True when the printed coefficient can appear as a product factor without parentheses."""
    if len(c._terms) != 1:
        return False
    ((pa, pm), v), = c._terms.items()
    if v.re and v.im:
        return False
    text = format_coeff(c)
    return not text.startswith("-") and " " not in text


# --------------------------------------------------------------------------
# parser for the coefficient text form
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([aim])\b|(\^)|([-+*/()]))")


class CoeffSyntaxError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise CoeffSyntaxError(f"unexpected character at column {pos + 1}: {text[pos:]!r}")
        num, sym, caret, op = mt.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif sym is not None:
            toks.append(("sym", sym))
        elif caret:
            toks.append(("op", "^"))
        else:
            toks.append(("op", op))
        pos = mt.end()
    return toks


class _CoeffParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise CoeffSyntaxError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self) -> ScalarCoeff:
        out = self.expr()
        if self.i != len(self.toks):
            raise CoeffSyntaxError(f"trailing input at token {self.i}")
        return out

    def expr(self) -> ScalarCoeff:
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> ScalarCoeff:
        neg = False
        while self.peek() in (("op", "-"), ("op", "+")):
            neg ^= self.take()[1] == "-"
        out = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.power()
            out = out * rhs if op == "*" else out / rhs
        return -out if neg else out

    def power(self) -> ScalarCoeff:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            exp = self.take("num")[1] * sign
            base = base ** exp
        return base

    def atom(self) -> ScalarCoeff:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return ScalarCoeff.const(val)
        if kind == "sym":
            self.take()
            return {"a": A, "m": M, "i": ScalarCoeff.const(I)}[val]
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise CoeffSyntaxError(f"unexpected token {val!r}")


def parse_coeff(text: str) -> ScalarCoeff:
    """Parse the coefficient text form produced by :func:`format_coeff`."""
    return _CoeffParser(text).parse()


def add(x: ScalarCoeff, y: ScalarCoeff) -> ScalarCoeff:
    return x + y


def mul(x: ScalarCoeff, y: ScalarCoeff) -> ScalarCoeff:
    return x * y


def is_zero(x: ScalarCoeff) -> bool:
    return x.is_zero()
