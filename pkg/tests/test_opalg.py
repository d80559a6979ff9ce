import itertools

import pytest
from hypothesis import given, strategies as st

from hiddensym.coeff import I, ScalarCoeff
from hiddensym.opalg import catalog as C
from hiddensym.opalg import expr as E
from hiddensym.opalg.canonical import (OperatorExpr, anticommutator, commutator, format_operator, generator,
                                       multiply, reduce)
from hiddensym.parser import parse_expr

EPS = E.levi_civita


def g(kind, i):
    return generator(kind, i)


def rpow(n):
    return reduce(E.RPow(n))


def sc(c):
    return OperatorExpr.from_scalar(ScalarCoeff.coerce(c))


IDX = (1, 2, 3)


@pytest.mark.parametrize("i,j", list(itertools.product(IDX, IDX)))
def test_commuting_pairs(i, j):
    assert commutator(g("rhat", i), g("rhat", j)).is_zero()
    assert commutator(g("p", i), g("p", j)).is_zero()


@pytest.mark.parametrize("kind", ["l", "rhat", "p"])
@pytest.mark.parametrize("i,j", list(itertools.product(IDX, IDX)))
def test_vector_operator_rules(kind, i, j):
    expected = OperatorExpr.zero()
    for k in IDX:
        if EPS(i, j, k):
            expected = expected + g(kind, k).scale(ScalarCoeff.const(I * EPS(i, j, k)))
    assert commutator(g("l", i), g(kind, j)) == expected


@pytest.mark.parametrize("n", [-3, -2, -1, 1, 2])
@pytest.mark.parametrize("i", IDX)
def test_radial_rules(n, i):
    assert commutator(g("l", i), rpow(n)).is_zero()
    expected = multiply(rpow(n - 1), g("rhat", i)).scale(ScalarCoeff.const(-I * n))
    assert commutator(g("p", i), rpow(n)) == expected


@pytest.mark.parametrize("i,j", list(itertools.product(IDX, IDX)))
def test_momentum_unit_vector_rule(i, j):
    delta = sc(1 if i == j else 0)
    expected = multiply(rpow(-1), delta - multiply(g("rhat", i), g("rhat", j))).scale(ScalarCoeff.const(-I))
    assert commutator(g("p", i), g("rhat", j)) == expected


def test_contractions():
    one = sc(1)
    assert reduce(E.dot(C.RHAT, C.RHAT)) == one
    for u, v in ((C.L, C.RHAT), (C.RHAT, C.L), (C.L, C.P), (C.P, C.L)):
        assert reduce(E.dot(u, v)).is_zero()


def test_reduce_examples():
    assert reduce(E.add(*(E.mul(C.RHAT[i], C.RHAT[i]) for i in range(3)))) == sc(1)
    assert parse_expr("l_1*l_2 - l_2*l_1 - i*l_3").is_zero()
    assert parse_expr("p_1*rhat_2 - rhat_2*p_1 - i*r^-1*rhat_1*rhat_2").is_zero()


def test_multiply_examples():
    sr = reduce(C.sigma_dot(C.RHAT))
    assert multiply(sr, sr) == sc(1)
    sl1 = reduce(E.add(C.sigma_dot(C.L), E.ONE))
    i_sigma_rxl = reduce(E.mul(E.scalar(I), C.sigma_dot(E.cross(C.RHAT, C.L))))
    assert (multiply(sl1, sr) + sr + i_sigma_rxl).is_zero()
    assert parse_expr("p_1*r^-1 - r^-1*p_1") == multiply(rpow(-2), g("rhat", 1)).scale(ScalarCoeff.const(I))


def test_commutator_examples():
    K = reduce(C.dirac_K())
    assert commutator(K, K).is_zero()
    assert anticommutator(reduce(E.add(C.sigma_dot(C.L), E.ONE)), reduce(C.sigma_dot(C.RHAT))).is_zero()


def test_build_named_hamiltonian():
    h = C.build_named("H")
    assert h.name == "H"
    assert reduce(h.expr) == parse_expr("alpha . p + m*beta - a*r^-1")


def test_build_named_A2():
    expected = parse_expr("Sigma . rhat - (i/(m*a))*K*(Sigma . p) + (i/m)*K*gamma5*r^-1")
    assert reduce(C.build_named("A2").expr) == expected


def test_build_named_K_p():
    assert reduce(C.build_named("K_p").expr) == parse_expr("-(sigma . l) - pauli_id")
    assert reduce(C.build_named("K_p").expr).dim == 2


def test_build_named_unknown():
    with pytest.raises(KeyError):
        C.build_named("Q2")


def test_catalog_complete():
    wanted = {"H", "K", "J_1", "J_2", "J_3", "Sigma_dot_rhat", "K_Sigma_dot_p", "A_LRL_1", "A_LRL_2", "A_LRL_3",
              "Sigma_dot_A", "A2", "JL_form", "K_p", "H_p", "Q1", "AK"}
    assert wanted <= set(C.catalog_names())


def test_mixed_dimensions_rejected():
    with pytest.raises(ValueError):
        reduce(E.mul(C.BETA, E.Mat("sigma", 1)))


def test_printer_term_order_is_stable():
    x = parse_expr("[A1, H]")
    assert format_operator(x) == format_operator(reduce(parse_expr("[A1, H]").to_expr()))


# -- randomized properties on catalog operators ------------------------------------------

DIRAC_NAMES = [n for n in C.catalog_names() if n not in ("K_p", "H_p")]
CHEAP = ["H", "K", "Sigma_dot_rhat", "Sigma_dot_p", "J_1", "J_3", "A_LRL_2", "A1"]
_cache = {}


def op(name):
    if name not in _cache:
        _cache[name] = reduce(C.build_named(name).expr)
    return _cache[name]


names = st.sampled_from(DIRAC_NAMES)
cheap = st.sampled_from(CHEAP)


@given(names)
def test_reduce_idempotent(n):
    x = op(n)
    assert reduce(x.to_expr()) == x
    assert reduce(x) is x


@given(names, names)
def test_reduce_linear(a, b):
    tree = E.add(C.build_named(a).expr, C.build_named(b).expr)
    assert reduce(tree) == reduce(E.add(op(a).to_expr(), op(b).to_expr()))


@given(cheap, cheap, cheap)
def test_multiply_associative(a, b, c):
    x, y, z = op(a), op(b), op(c)
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


def test_canonical_form_is_deterministic():
    a = format_operator(parse_expr("[A2, H + beta*r^-2]"))
    b = format_operator(parse_expr("[A2, H + beta*r^-2]"))
    assert a == b
