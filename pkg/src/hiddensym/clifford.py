"""Exact Dirac (4x4) and Pauli (2x2) matrices over the Gaussian rationals.

Everything is in the standard (Dirac) representation::

    beta   = diag(1, 1, -1, -1)
    alpha_i = [[0, sigma_i], [sigma_i, 0]]
    gamma5 = [[0, 1], [1, 0]]
    Sigma_i = gamma5 * alpha_i = diag(sigma_i, sigma_i)

The 16 products ``U * Sigma_v`` with ``U`` in ``{1, beta, gamma5,
beta*gamma5}`` and ``Sigma_0 = 1`` form a basis of all 4x4 matrices; the
operator algebra stores its matrix factor in that basis (see
:func:`basis`).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from .coeff import GaussianRational, I, ONE, ZERO

Entries = Tuple[Tuple[GaussianRational, ...], ...]


class DimensionError(ValueError):
    pass


class DiracMatrix:
    """Immutable square matrix of dimension 2 or 4."""

    __slots__ = ("dim", "entries", "_hash")

    def __init__(self, entries: Iterable[Iterable[object]]):
        rows = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in entries)
        dim = len(rows)
        if dim not in (2, 4) or any(len(r) != dim for r in rows):
            raise DimensionError(f"expected a 2x2 or 4x4 matrix, got {dim} rows")
        self.dim = dim
        self.entries: Entries = rows
        self._hash = None

    @classmethod
    def identity(cls, dim: int) -> "DiracMatrix":
        return cls([[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)])

    @classmethod
    def zero(cls, dim: int) -> "DiracMatrix":
        return cls([[ZERO] * dim for _ in range(dim)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def _check(self, other: "DiracMatrix"):
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __matmul__(self, other: "DiracMatrix") -> "DiracMatrix":
        self._check(other)
        n = self.dim
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                s = ZERO
                for k in range(n):
                    x = self.entries[i][k]
                    if x:
                        y = other.entries[k][j]
                        if y:
                            s = s + x * y
                row.append(s)
            out.append(row)
        return DiracMatrix(out)

    def __mul__(self, other):
        if isinstance(other, DiracMatrix):
            return self @ other
        c = GaussianRational.coerce(other)
        return DiracMatrix([[x * c for x in row] for row in self.entries])

    __rmul__ = __mul__

    def __add__(self, other: "DiracMatrix") -> "DiracMatrix":
        self._check(other)
        return DiracMatrix([[x + y for x, y in zip(r1, r2)]
                            for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "DiracMatrix") -> "DiracMatrix":
        return self + other * (-1)

    def __neg__(self):
        return self * (-1)

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def trace(self) -> GaussianRational:
        s = ZERO
        for i in range(self.dim):
            s = s + self.entries[i][i]
        return s

    def dagger(self) -> "DiracMatrix":
        n = self.dim
        return DiracMatrix([[self.entries[j][i].conjugate() for j in range(n)] for i in range(n)])

    def is_block_diagonal(self) -> bool:
        """Only meaningful for 4x4: upper-right and lower-left 2x2 blocks vanish."""
        if self.dim != 4:
            return True
        return not any(self.entries[i][j] for i in range(4) for j in range(4) if (i < 2) != (j < 2))

    def is_block_antidiagonal(self) -> bool:
        if self.dim != 4:
            return False
        return not any(self.entries[i][j] for i in range(4) for j in range(4) if (i < 2) == (j < 2))

    def to_complex(self):
        import numpy as np

        return np.array([[complex(x) for x in row] for row in self.entries], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, DiracMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)
        return f"DiracMatrix([{rows}])"


def _pauli() -> List[DiracMatrix]:
    return [
        DiracMatrix([[0, 1], [1, 0]]),
        DiracMatrix([[0, -I], [I, 0]]),
        DiracMatrix([[1, 0], [0, -1]]),
    ]


def _blocks(a: DiracMatrix, b: DiracMatrix, c: DiracMatrix, d: DiracMatrix) -> DiracMatrix:
    top = [list(a.entries[i]) + list(b.entries[i]) for i in range(2)]
    bot = [list(c.entries[i]) + list(d.entries[i]) for i in range(2)]
    return DiracMatrix(top + bot)


_VECTOR_GENERATORS = ("alpha_i", "sigma_big_i", "pauli_sigma_i")
_SCALAR_GENERATORS = ("beta", "gamma5", "id", "pauli_id")


@lru_cache(maxsize=None)
def make_generator(name: str, index: int | None = None) -> DiracMatrix:
    """Return a named generator; vector generators need ``index`` in 1..3."""
    if name in _VECTOR_GENERATORS:
        if index not in (1, 2, 3):
            raise ValueError(f"generator {name!r} needs an index in 1..3, got {index!r}")
    elif name in _SCALAR_GENERATORS:
        if index is not None:
            raise ValueError(f"generator {name!r} takes no index")
    else:
        raise ValueError(f"unknown generator {name!r}")

    one2 = DiracMatrix.identity(2)
    zero2 = DiracMatrix.zero(2)
    if name == "id":
        return DiracMatrix.identity(4)
    if name == "pauli_id":
        return one2
    if name == "beta":
        return _blocks(one2, zero2, zero2, -one2)
    if name == "gamma5":
        return _blocks(zero2, one2, one2, zero2)
    s = _pauli()[index - 1]
    if name == "pauli_sigma_i":
        return s
    if name == "alpha_i":
        return _blocks(zero2, s, s, zero2)
    return _blocks(s, zero2, zero2, s)  # sigma_big_i


def mat_mul(x: DiracMatrix, y: DiracMatrix) -> DiracMatrix:
    return x @ y


def commutator(x: DiracMatrix, y: DiracMatrix) -> DiracMatrix:
    return x @ y - y @ x


def anticommutator(x: DiracMatrix, y: DiracMatrix) -> DiracMatrix:
    return x @ y + y @ x


# --------------------------------------------------------------------------
# product basis used by the operator algebra
# --------------------------------------------------------------------------

# basis label = (even part, spin part); even part indexes {1, beta, gamma5, beta*gamma5}
_EVEN_NAMES = ((), ("beta",), ("gamma5",), ("beta", "gamma5"))


def basis_size(dim: int) -> int:
    return 16 if dim == 4 else 4


@lru_cache(maxsize=None)
def basis(dim: int) -> Tuple[DiracMatrix, ...]:
    """Basis matrices; index ``4*u + v`` for 4x4, ``v`` for 2x2 (``v = 0`` is the identity)."""
    if dim == 2:
        return (DiracMatrix.identity(2),) + tuple(make_generator("pauli_sigma_i", k) for k in (1, 2, 3))
    spins = (DiracMatrix.identity(4),) + tuple(make_generator("sigma_big_i", k) for k in (1, 2, 3))
    evens = []
    for names in _EVEN_NAMES:
        e = DiracMatrix.identity(4)
        for n in names:
            e = e @ make_generator(n)
        evens.append(e)
    return tuple(e @ s for e in evens for s in spins)


def basis_names(dim: int, index: int) -> Tuple[str, ...]:
    """Generator names whose left-to-right product is basis element ``index``."""
    if dim == 2:
        return () if index == 0 else (f"sigma_{index}",)
    u, v = divmod(index, 4)
    return _EVEN_NAMES[u] + ((f"Sigma_{v}",) if v else ())


@lru_cache(maxsize=None)
def basis_product_table(dim: int) -> Tuple[Tuple[Tuple[int, GaussianRational], ...], ...]:
    """``table[i][j] = (k, phase)`` with ``B_i B_j = phase * B_k``."""
    bs = basis(dim)
    n = len(bs)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = bs[i] @ bs[j]
            for k in range(n):
                ph = _phase(prod, bs[k])
                if ph is not None:
                    row.append((k, ph))
                    break
            else:  # pragma: no cover - the basis is closed up to phases
                raise AssertionError("basis not closed under multiplication")
        table.append(tuple(row))
    return tuple(table)


def _phase(x: DiracMatrix, b: DiracMatrix):
    ph = None
    for rx, rb in zip(x.entries, b.entries):
        for ex, eb in zip(rx, rb):
            if not eb:
                if ex:
                    return None
                continue
            q = ex / eb
            if ph is None:
                ph = q
            elif q != ph:
                return None
    return ph


def decompose(x: DiracMatrix) -> List[Tuple[int, GaussianRational]]:
    """Expand ``x`` in the product basis: ``x = sum c_k B_k`` (uses trace orthogonality)."""
    out = []
    for k, b in enumerate(basis(x.dim)):
        c = (b.dagger() @ x).trace() / x.dim
        if c:
            out.append((k, c))
    return out


def compose(dim: int, coeffs: Sequence[Tuple[int, GaussianRational]]) -> DiracMatrix:
    out = DiracMatrix.zero(dim)
    bs = basis(dim)
    for k, c in coeffs:
        out = out + bs[k] * c
    return out
