import sys
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from hiddensym.coeff import GaussianRational, ScalarCoeff
from hiddensym.oracle import TestConfig

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=7)
gaussians = st.builds(GaussianRational, small_q, small_q)
exponents = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
scalars = st.dictionaries(exponents, gaussians, max_size=4).map(ScalarCoeff)
nonzero_monomials = st.builds(
    lambda v, e: ScalarCoeff({e: v}),
    st.builds(GaussianRational, small_q, small_q).filter(lambda z: not z.is_zero()),
    exponents,
)


@pytest.fixture(scope="session")
def small_cfg() -> TestConfig:
    """A cheap oracle configuration for unit tests (the acceptance suite uses 100 points)."""
    return TestConfig.sample(12, seed=3)


def frac(n, d=1):
    return Fraction(n, d)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
