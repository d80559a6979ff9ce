from fractions import Fraction

import pytest
from hypothesis import given

from hiddensym.coeff import (A, I, M, CoeffSyntaxError, GaussianRational, ScalarCoeff, add, format_coeff,
                             is_zero, mul, parse_coeff)

from conftest import gaussians, nonzero_monomials, scalars

INV_MA = ScalarCoeff.monomial(1, -1, -1)


def test_gaussian_lowest_terms():
    z = GaussianRational(Fraction(2, 4), Fraction(-6, -9))
    assert (z.re.numerator, z.re.denominator) == (1, 2)
    assert (z.im.numerator, z.im.denominator) == (2, 3)
    w = z * GaussianRational(4, 0)
    assert w == GaussianRational(2, Fraction(8, 3))


def test_gaussian_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational(0.5)
    with pytest.raises(TypeError):
        GaussianRational.coerce(1j)


def test_imaginary_unit_squares_to_minus_one():
    assert I * I == GaussianRational(-1)
    assert mul(ScalarCoeff.const(I), ScalarCoeff.const(I)) == ScalarCoeff.const(-1)


def test_add_examples():
    assert is_zero(add(INV_MA, -INV_MA))
    s = add(A * A, M * M)
    assert len(s.terms) == 2 and format_coeff(s) == "m^2 + a^2"
    ia = ScalarCoeff.monomial(I, 1, 0)
    assert add(ia, ia) == ScalarCoeff.monomial(GaussianRational(0, 2), 1, 0)


def test_mul_examples():
    assert mul(INV_MA, M * A) == ScalarCoeff.const(1)
    a_over_m = ScalarCoeff.monomial(1, 1, -1)
    assert mul(a_over_m, a_over_m) == ScalarCoeff.monomial(1, 2, -2)


def test_is_zero_examples():
    assert is_zero(ScalarCoeff())
    assert is_zero(A - A)
    assert not is_zero(A - M)


def test_no_stored_zeros():
    c = ScalarCoeff({(1, 0): GaussianRational(0), (0, 1): GaussianRational(2)})
    assert list(c.terms) == [(0, 1)]


def test_format_examples():
    c = ScalarCoeff.monomial(GaussianRational(0, Fraction(2, 3)), -1, 2)
    assert format_coeff(c) == "(2/3)*i*a^-1*m^2"
    assert parse_coeff("(2/3)*i*a^-1*m^2") == c
    assert format_coeff(ScalarCoeff()) == "0"


def test_parse_errors():
    for bad in ("a^", "2**a", "x", "(a"):
        with pytest.raises(CoeffSyntaxError):
            parse_coeff(bad)


def test_inverse_of_polynomial_rejected():
    with pytest.raises((ValueError, ZeroDivisionError)):
        (A + M).inverse()


@given(scalars, scalars, scalars)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


@given(scalars)
def test_print_parse_round_trip(x):
    assert parse_coeff(format_coeff(x)) == x


@given(nonzero_monomials)
def test_monomial_inverse(x):
    assert x * x.inverse() == ScalarCoeff.const(1)


@given(gaussians, gaussians)
def test_gaussian_field(z, w):
    if not w.is_zero():
        assert (z / w) * w == z
    assert z * w == w * z


@given(scalars)
def test_values_stay_exact(x):
    for v in x.terms.values():
        assert isinstance(v, GaussianRational)
    assert not any(isinstance(v, float) for v in (x * x).terms.values())
