"""Named operators of the Dirac-Coulomb hidden-symmetry construction.

All builders return unevaluated trees (:mod:`.expr`).  Every numeric
coefficient is a keyword argument so that tests can inject single
coefficient mutations; the defaults give the conserved operator::

    H   = alpha.p + beta*m - a/r
    K   = beta (Sigma.l + 1)
    A2  = Sigma.rhat - (i/(m a)) K (Sigma.p) + (i/m) K gamma5 r^-1
    JL  = gamma5 alpha.rhat - (i/(m a)) K gamma5 (H - beta m)

The Laplace-Runge-Lenz vector is the Hermitian combination
``A = rhat - (p x l - l x p) / (2 m a)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

from ..coeff import A, I, M, ScalarCoeff
from . import expr as E
from .expr import Expr, Mat, RPow, Scalar, add, dot, mul, vec

INV_MA = ScalarCoeff.monomial(1, -1, -1)
INV_M = ScalarCoeff.monomial(1, 0, -1)


def _s(c) -> Scalar:
    return Scalar(ScalarCoeff.coerce(c))


BETA = Mat("beta")
GAMMA5 = Mat("gamma5")
RHAT = vec("rhat")
P = vec("p")
L = vec("l")
SIGMA = vec("Sigma")
ALPHA = vec("alpha")
PAULI = vec("sigma")


def sigma_dot(v, sigma=SIGMA) -> Expr:
    return dot(sigma, v)


def dirac_K(beta: Expr = BETA) -> Expr:
    return mul(beta, add(sigma_dot(L), E.ONE))


def hamiltonian(coupling=A, mass=M, kinetic=1, mass_coeff=1, perturbation: Expr | None = None) -> Expr:
    """``kinetic*alpha.p + mass_coeff*beta*mass - coupling/r (+ perturbation)``."""
    h = add(
        mul(_s(kinetic), dot(ALPHA, P)),
        mul(_s(ScalarCoeff.coerce(mass) * ScalarCoeff.coerce(mass_coeff)), BETA),
        mul(_s(-ScalarCoeff.coerce(coupling)), RPow(-1)),
    )
    if perturbation is not None:
        h = add(h, perturbation)
    return h


def lrl_vector(coupling=A, mass=M, drop_second: bool = False) -> E.Vector:
    """Components of ``rhat - (p x l - l x p)/(2 m a)``."""
    if drop_second:
        return RHAT
    c = _s(ScalarCoeff.const(-1) / (ScalarCoeff.const(2) * ScalarCoeff.coerce(mass) * ScalarCoeff.coerce(coupling)))
    pl = E.cross(P, L)
    lp = E.cross(L, P)
    return tuple(add(RHAT[i], mul(c, add(pl[i], mul(_s(-1), lp[i])))) for i in range(3))


def a1_operator(x1=1, x2=None, coupling=A, mass=M) -> Expr:
    """First trial operator ``x1 Sigma.rhat + i x2 K (Sigma.p)``; ``x2`` defaults to ``-1/(m a)``."""
    if x2 is None:
        x2 = -(ScalarCoeff.coerce(mass) * ScalarCoeff.coerce(coupling)).inverse()
    return add(mul(_s(x1), sigma_dot(RHAT)),
               mul(_s(ScalarCoeff.coerce(x2) * I), dirac_K(), sigma_dot(P)))


def a2_operator(x1=1, x2=None, x3=None, r_power: int = -1, coupling=A, mass=M, extra_x3_constant=None) -> Expr:
    """``x1 Sigma.rhat + i x2 K (Sigma.p) + i x3 K gamma5 r^s``.

    Defaults are the conserved values ``x2 = -1/(m a)``, ``x3 = 1/m``, ``s = -1``.
    ``extra_x3_constant`` adds ``i c0 K gamma5`` (an integration constant in f).
    """
    if x2 is None:
        x2 = -(ScalarCoeff.coerce(mass) * ScalarCoeff.coerce(coupling)).inverse()
    if x3 is None:
        x3 = ScalarCoeff.coerce(mass).inverse()
    terms = [
        mul(_s(x1), sigma_dot(RHAT)),
        mul(_s(ScalarCoeff.coerce(x2) * I), dirac_K(), sigma_dot(P)),
        mul(_s(ScalarCoeff.coerce(x3) * I), dirac_K(), GAMMA5, RPow(r_power)),
    ]
    if extra_x3_constant is not None:
        terms.append(mul(_s(ScalarCoeff.coerce(extra_x3_constant) * I), dirac_K(), GAMMA5))
    return add(*terms)


def a2_rewritten(beta: Expr = BETA, gamma5: Expr = GAMMA5, coupling=A, mass=M) -> Expr:
    """``Sigma.(rhat - beta (p x l - l x p)/(2 m a)) + (i/(m r)) K gamma5`` with substitutable beta, gamma5."""
    c = _s(ScalarCoeff.const(-1) / (ScalarCoeff.const(2) * ScalarCoeff.coerce(mass) * ScalarCoeff.coerce(coupling)))
    pl = E.cross(P, L)
    lp = E.cross(L, P)
    vecpart = tuple(add(RHAT[i], mul(c, beta, add(pl[i], mul(_s(-1), lp[i])))) for i in range(3))
    third = mul(_s(ScalarCoeff.coerce(mass).inverse() * I), dirac_K(beta), gamma5, RPow(-1))
    return add(sigma_dot(vecpart), third)


def jl_form(coupling=A, mass=M, hamiltonian_expr: Expr | None = None) -> Expr:
    """``gamma5 alpha.rhat - (i/(m a)) K gamma5 (H - beta m)``."""
    h = hamiltonian(coupling, mass) if hamiltonian_expr is None else hamiltonian_expr
    c = _s(-(ScalarCoeff.coerce(mass) * ScalarCoeff.coerce(coupling)).inverse() * I)
    return add(mul(GAMMA5, dot(ALPHA, RHAT)),
               mul(c, dirac_K(), GAMMA5, add(h, mul(_s(-ScalarCoeff.coerce(mass)), BETA))))


def jl_literal_braces(coupling=A, mass=M) -> Expr:
    """The reading ``gamma5 {alpha.rhat - (i/(m a)) K gamma5 (H - beta m)}`` (differs from A2)."""
    h = hamiltonian(coupling, mass)
    c = _s(-(ScalarCoeff.coerce(mass) * ScalarCoeff.coerce(coupling)).inverse() * I)
    inner = add(dot(ALPHA, RHAT), mul(c, dirac_K(), GAMMA5, add(h, mul(_s(-ScalarCoeff.coerce(mass)), BETA))))
    return mul(GAMMA5, inner)


def pauli_K() -> Expr:
    """``-(2 s.l + 1)`` with spin ``s = sigma/2``, i.e. ``-(sigma.l + 1)`` on two components."""
    return mul(_s(-1), add(sigma_dot(L, PAULI), Mat("pauli_id")))


def pauli_hamiltonian(coupling=A, mass=M) -> Expr:
    return mul(add(mul(_s(ScalarCoeff.const(1) / (ScalarCoeff.const(2) * ScalarCoeff.coerce(mass))), dot(P, P)),
                   mul(_s(-ScalarCoeff.coerce(coupling)), RPow(-1))),
               Mat("pauli_id"))


def total_j(i: int) -> Expr:
    return add(L[i - 1], mul(_s(ScalarCoeff.const(1) / 2), SIGMA[i - 1]))


@dataclass(frozen=True)
class NamedOperator:
    name: str
    expr: Expr


def _catalog() -> Dict[str, Callable[[], Expr]]:
    table: Dict[str, Callable[[], Expr]] = {
        "H": hamiltonian,
        "K": dirac_K,
        "Sigma_dot_rhat": lambda: sigma_dot(RHAT),
        "Sigma_dot_p": lambda: sigma_dot(P),
        "Sigma_dot_l": lambda: sigma_dot(L),
        "K_Sigma_dot_p": lambda: mul(dirac_K(), sigma_dot(P)),
        "Sigma_dot_A": lambda: sigma_dot(lrl_vector()),
        "A1": a1_operator,
        "A2": a2_operator,
        "JL_form": jl_form,
        "K_p": pauli_K,
        "H_p": pauli_hamiltonian,
        "Q1": a2_operator,
        "AK": lambda: mul(a2_operator(), dirac_K()),
    }
    for i in (1, 2, 3):
        table[f"J_{i}"] = lambda i=i: total_j(i)
        table[f"A_LRL_{i}"] = lambda i=i: lrl_vector()[i - 1]
    return table


CATALOG = _catalog()


def catalog_names() -> Tuple[str, ...]:
    return tuple(sorted(CATALOG))


def build_named(name: str) -> NamedOperator:
    try:
        builder = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog operator {name!r}") from None
    return NamedOperator(name, builder())


# single-coefficient mutations of A2 or H, used to show the checks are not vacuous
MUTATIONS: Dict[str, Tuple[str, dict]] = {
    "A2_third_term_2_over_m": ("A2", {"x3": ScalarCoeff.monomial(2, 0, -1)}),
    "A2_second_term_sign": ("A2", {"x2": INV_MA}),
    "A2_first_term_double": ("A2", {"x1": 2}),
    "A2_radial_power_minus2": ("A2", {"r_power": -2}),
    "H_coupling_double": ("H", {"coupling": ScalarCoeff.monomial(2, 1, 0)}),
    "H_mass_double": ("H", {"mass_coeff": 2}),
    "H_kinetic_double": ("H", {"kinetic": 2}),
}


def mutated_pair(mutation: str | None) -> Tuple[Expr, Expr]:
    """``(A2, H)`` with the named mutation applied (``None`` for the unmutated pair)."""
    if mutation is None:
        return a2_operator(), hamiltonian()
    target, kwargs = MUTATIONS[mutation]
    if target == "A2":
        return a2_operator(**kwargs), hamiltonian()
    return a2_operator(), hamiltonian(**kwargs)
