import pytest
from hypothesis import given, strategies as st

from hiddensym.coeff import ScalarCoeff
from hiddensym.opalg import catalog as C
from hiddensym.opalg import expr as E
from hiddensym.opalg.canonical import reduce
from hiddensym.parser import ExprSyntaxError, UnknownSymbolError, format_expr, parse_expr, parse_tree

from conftest import scalars


def test_catalog_lookup_equivalence():
    assert parse_expr("Sigma . rhat") == reduce(C.build_named("Sigma_dot_rhat").expr)
    assert parse_expr("Sigma_dot_rhat") == parse_expr("Sigma . rhat")


def test_spec_examples():
    assert not parse_expr("[K, Sigma . p]").is_zero()
    assert parse_expr("{K, Sigma . rhat}").is_zero()
    assert parse_expr("(Sigma . rhat)^2") == parse_expr("1")
    assert parse_expr("[A2, H]").is_zero()


@pytest.mark.parametrize("src,line,col", [
    ("[K, Sigma . p", 1, 14),
    ("p_1 +", 1, 6),
    ("p_1 * $", 1, 7),
    ("p_1\n  + * r", 2, 5),
])
def test_syntax_errors_have_positions(src, line, col):
    with pytest.raises(ExprSyntaxError) as exc:
        parse_tree(src)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_unknown_symbol():
    with pytest.raises(UnknownSymbolError) as exc:
        parse_tree("p_1 + foo")
    assert exc.value.column == 7


@pytest.mark.parametrize("src", ["p_4", "Sigma_0", "l_9"])
def test_index_out_of_range(src):
    with pytest.raises(ExprSyntaxError, match="index"):
        parse_tree(src)


@pytest.mark.parametrize("src", ["p", "Sigma", "rhat . K", "K . p", "p_1 / p_2", "p_1^-1", "(a + m)^-1", "p^2"])
def test_rejected_forms(src):
    with pytest.raises(ExprSyntaxError):
        parse_tree(src)


@pytest.mark.parametrize("name", C.catalog_names())
def test_catalog_round_trip(name):
    tree = C.build_named(name).expr
    assert parse_tree(format_expr(tree)) == tree


# -- random trees --------------------------------------------------------------

leaves = st.one_of(
    st.builds(E.Gen, st.sampled_from(["rhat", "p", "l"]), st.integers(1, 3)),
    st.builds(E.RPow, st.integers(-3, 3).filter(bool)),
    st.builds(E.Mat, st.sampled_from(["beta", "gamma5", "id"])),
    st.builds(E.Mat, st.sampled_from(["Sigma", "alpha"]), st.integers(1, 3)),
    scalars.filter(lambda c: not c.is_zero()).map(E.Scalar),
)


def _extend(children):
    return st.one_of(
        st.lists(children, min_size=2, max_size=3).map(lambda xs: E.add(*xs)),
        st.lists(children, min_size=2, max_size=3).map(lambda xs: E.mul(*xs)),
        st.builds(E.Comm, children, children, st.booleans()),
        # the parser folds powers of scalars, so those trees are not in its image
        st.builds(E.Pow, children.filter(lambda c: not isinstance(c, E.Scalar)), st.integers(2, 3)),
    )


trees = st.recursive(leaves, _extend, max_leaves=6)


@given(trees)
def test_random_round_trip(tree):
    assert parse_tree(format_expr(tree)) == tree


@given(scalars)
def test_scalar_round_trip(c):
    tree = E.Scalar(c)
    assert parse_tree(format_expr(tree)) == tree
