"""Text form of operator expressions.

Grammar::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := dotted ['^' ['-'] INT]
    dotted := atom ['.' atom]
    atom   := INT | NAME | '(' expr ')' | '[' expr ',' expr ']' | '{' expr ',' expr '}'

Names:

* scalars ``i``, ``a``, ``m``;
* generators ``rhat_k``, ``p_k``, ``l_k`` and ``r`` (``r^n`` for any signed n);
* matrices ``beta``, ``gamma5``, ``id``, ``Sigma_k``, ``alpha_k``, and the Pauli
  ``sigma_k`` and ``pauli_id``;
* operators from the catalog (``H``, ``K``, ``A2``, ...);
* the bare vectors ``rhat``, ``p``, ``l``, ``Sigma``, ``alpha``, ``sigma`` and
  ``A`` (the LRL vector), usable only inside a contraction ``U . V``.

Division is allowed only by an invertible scalar (a single monomial in
``a`` and ``m``).  Negative powers are allowed for scalars and ``r``.
:func:`format_expr` prints a tree back in this grammar with
``parse_tree(format_expr(e)) == e`` for every tree the parser can produce
(the parser folds powers of scalars, so ``Pow(Scalar, k)`` never occurs).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List

from .coeff import A, I, M, ScalarCoeff, format_coeff, is_atomic_text
from .opalg import catalog as C
from .opalg import expr as E
from .opalg.canonical import OperatorExpr, reduce


class ExprSyntaxError(SyntaxError):
    """Parse failure with 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int, column: int, source: str = ""):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
        self.source = source


class UnknownSymbolError(ExprSyntaxError):
    pass


_SCALARS = {"i": ScalarCoeff.const(I), "a": A, "m": M}
_INDEXED = {
    "rhat": lambda k: E.Gen("rhat", k),
    "p": lambda k: E.Gen("p", k),
    "l": lambda k: E.Gen("l", k),
    "Sigma": lambda k: E.Mat("Sigma", k),
    "alpha": lambda k: E.Mat("alpha", k),
    "sigma": lambda k: E.Mat("sigma", k),
}
_MATRICES = ("beta", "gamma5", "id", "pauli_id")
_VECTORS = {
    "rhat": lambda: C.RHAT,
    "p": lambda: C.P,
    "l": lambda: C.L,
    "Sigma": lambda: C.SIGMA,
    "alpha": lambda: C.ALPHA,
    "sigma": lambda: C.PAULI,
    "A": lambda: C.lrl_vector(),
}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    column: int


_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")


def _tokenize(src: str) -> List[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        ch = src[pos]
        if ch == "\n":
            pos += 1
            line, line_start = line + 1, pos
            continue
        if ch.isspace():
            pos += 1
            continue
        col = pos - line_start + 1
        for kind, pat in (("int", _INT), ("name", _NAME)):
            mt = pat.match(src, pos)
            if mt:
                toks.append(_Tok(kind, mt.group(), line, col))
                pos = mt.end()
                break
        else:
            if ch not in "+-*/^.()[]{},":
                raise ExprSyntaxError(f"unexpected character {ch!r}", line, col, src)
            toks.append(_Tok("op", ch, line, col))
            pos += 1
    toks.append(_Tok("end", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None, cls=ExprSyntaxError):
        t = tok or self.tok
        return cls(msg, t.line, t.column, self.src)

    def eat(self, text: str) -> _Tok:
        t = self.tok
        if t.kind != "op" or t.text != text:
            got = "end of input" if t.kind == "end" else repr(t.text)
            raise self.error(f"expected {text!r}, got {got}")
        self.i += 1
        return t

    def peek_op(self, *texts: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    def parse(self) -> E.Expr:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        out = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return out

    def expr(self) -> E.Expr:
        neg = False
        if self.peek_op("-"):
            self.i += 1
            neg = True
        first = self.term()
        terms = [E.mul(E.Scalar(ScalarCoeff.const(-1)), first) if neg else first]
        while self.peek_op("+", "-"):
            op = self.tok.text
            self.i += 1
            t = self.term()
            terms.append(t if op == "+" else E.mul(E.Scalar(ScalarCoeff.const(-1)), t))
        return E.add(*terms)

    def term(self) -> E.Expr:
        factors = [self.factor()]
        while self.peek_op("*", "/"):
            op = self.tok
            self.i += 1
            f = self.factor()
            if op.text == "/":
                if not isinstance(f, E.Scalar) or not f.coeff.is_monomial():
                    raise self.error("can only divide by a nonzero single-term scalar", op)
                f = E.Scalar(f.coeff.inverse())
            factors.append(f)
        return E.mul(*factors)

    def factor(self) -> E.Expr:
        start = self.tok
        base = self.dotted()
        if not self.peek_op("^"):
            if isinstance(base, tuple):
                raise self.error("vector used without a contraction 'U . V'", start)
            return base
        caret = self.eat("^")
        sign = 1
        if self.peek_op("-"):
            self.i += 1
            sign = -1
        if self.tok.kind != "int":
            raise self.error("expected an integer exponent")
        k = sign * int(self.tok.text)
        self.i += 1
        if isinstance(base, tuple):
            raise self.error("cannot raise a vector to a power", start)
        if isinstance(base, E.Scalar):
            if k < 0 and not base.coeff.is_monomial():
                raise self.error("negative power of a non-invertible scalar", caret)
            return E.Scalar(base.coeff ** k)
        if isinstance(base, E.RPow) and start.kind == "name" and start.text == "r":
            return E.RPow(base.n * k)
        if k < 0:
            raise self.error("negative powers only for scalars and r", caret)
        return E.Pow(base, k)

    def dotted(self):
        # an atom may be a bare vector (3-tuple) that only a contraction can consume
        left_tok = self.tok
        left = self.atom()
        if not self.peek_op("."):
            return left
        self.eat(".")
        right_tok = self.tok
        right = self.atom()
        if not isinstance(left, tuple):
            raise self.error("left side of '.' is not a vector", left_tok)
        if not isinstance(right, tuple):
            raise self.error("right side of '.' is not a vector", right_tok)
        return E.dot(left, right)

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return E.Scalar(ScalarCoeff.const(int(t.text)))
        if t.kind == "name":
            self.i += 1
            return self.name(t)
        if self.peek_op("("):
            self.i += 1
            e = self.expr()
            self.eat(")")
            return e
        if self.peek_op("[", "{"):
            anti = t.text == "{"
            self.i += 1
            x = self.expr()
            self.eat(",")
            y = self.expr()
            self.eat("}" if anti else "]")
            return E.Comm(x, y, anti)
        if t.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {t.text!r}")

    def name(self, t: _Tok):
        text = t.text
        if text in _SCALARS:
            return E.Scalar(_SCALARS[text])
        if text == "r":
            return E.RPow(1)
        if text in _MATRICES:
            return E.Mat(text)
        if self.peek_op(".") and text in _VECTORS:
            return _VECTORS[text]()
        if text in C.CATALOG:
            return C.CATALOG[text]()
        if text in _VECTORS:
            return _VECTORS[text]()
        head, sep, idx = text.rpartition("_")
        if sep and head in _INDEXED and idx.isdigit():
            k = int(idx)
            if not 1 <= k <= 3:
                raise self.error(f"index out of 1..3 in {text!r}", t)
            return _INDEXED[head](k)
        raise self.error(f"unknown symbol {text!r}", t, UnknownSymbolError)


def parse_tree(src: str) -> E.Expr:
    """Parse ``src`` into an unevaluated expression tree."""
    return _Parser(src).parse()


def parse_expr(src: str) -> OperatorExpr:
    """Parse and reduce to canonical form."""
    return reduce(parse_tree(src))


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------

def _scalar_text(c: ScalarCoeff) -> str:
    text = format_coeff(c)
    return text if is_atomic_text(c) else f"({text})"


def _is_atomic(e: E.Expr) -> bool:
    # a scalar such as i*m^-1 prints as a product, so it is never a bare power base
    return isinstance(e, (E.Gen, E.Mat, E.Comm))


def format_expr(e: E.Expr) -> str:
    """Grammar text for a tree; parsing it back gives the same tree."""
    if isinstance(e, E.Scalar):
        return _scalar_text(e.coeff)
    if isinstance(e, E.Gen):
        return f"{e.kind}_{e.index}"
    if isinstance(e, E.RPow):
        return f"r^{e.n}"
    if isinstance(e, E.Mat):
        return e.name if e.index is None else f"{e.name}_{e.index}"
    if isinstance(e, E.Sum):
        return " + ".join(format_expr(t) for t in e.terms)
    if isinstance(e, E.Prod):
        parts = []
        for f in e.factors:
            text = format_expr(f)
            parts.append(f"({text})" if isinstance(f, E.Sum) else text)
        return "*".join(parts)
    if isinstance(e, E.Comm):
        inner = f"{format_expr(e.x)}, {format_expr(e.y)}"
        return "{" + inner + "}" if e.anti else "[" + inner + "]"
    if isinstance(e, E.Pow):
        text = format_expr(e.base)
        if not _is_atomic(e.base):
            text = f"({text})"
        return f"{text}^{e.exp}"
    raise TypeError(f"unknown node {e!r}")
