import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hiddensym import radial as R

ALPHA_Z10 = 0.0729735


@pytest.fixture(scope="module")
def z10():
    res = [R.solve_sector(R.RadialProblem(ALPHA_Z10, k), 3) for k in (-1, 1)]
    R.pair_partners(res)
    return res


def test_sommerfeld_examples():
    assert R.sommerfeld_energy(0.0, 2, -3) == 1.0
    assert R.sommerfeld_energy(0.08, 0, -1) == pytest.approx(math.sqrt(0.9936), rel=1e-15)
    assert R.sommerfeld_energy(0.3, 2, 2) == R.sommerfeld_energy(0.3, 2, -2)


@pytest.mark.parametrize("a,k", [(1.0, 1), (1.5, -1), (2.5, 2)])
def test_supercritical(a, k):
    with pytest.raises(R.SupercriticalError):
        R.sommerfeld_energy(a, 0, k)
    with pytest.raises(R.SupercriticalError):
        R.ground_state_from_A2(a, k)
    with pytest.raises(R.SupercriticalError):
        R.solve_sector(R.RadialProblem(a, k))


def test_bad_arguments():
    with pytest.raises(ValueError):
        R.sommerfeld_energy(0.1, -1, 1)
    with pytest.raises(ValueError):
        R.sommerfeld_energy(0.1, 0, 0)
    with pytest.raises(ValueError):
        R.solve_sector(R.RadialProblem(0.1, -1), 0)


def test_ground_state_examples():
    assert R.ground_state_from_A2(0.0, 1) == 1.0
    assert R.ground_state_from_A2(0.5, -1) == pytest.approx(0.8660254, abs=1e-7)


@given(st.floats(0.0, 0.99), st.integers(1, 4), st.booleans())
def test_ground_state_matches_sommerfeld(frac, absk, neg):
    k = -absk if neg else absk
    a = frac * absk
    assert R.ground_state_from_A2(a, k) == pytest.approx(R.sommerfeld_energy(a, 0, k), rel=4e-16)


def test_no_coupling_no_bound_states():
    with pytest.raises(R.NoBoundStateError):
        R.solve_sector(R.RadialProblem(0.0, -1))


def test_z10_levels(z10):
    for r in z10:
        assert [lv.n_r for lv in r.levels] == ([0, 1, 2] if r.k < 0 else [1, 2, 3])
        for lv in r.levels:
            assert 0 < lv.energy < 1
            assert lv.delta <= 1e-6
            # the Richardson estimate bounds the true error
            assert abs(lv.energy - lv.sommerfeld) <= max(lv.error_estimate, 1e-15)
        assert not r.spurious


def test_z10_partners(z10):
    pairs = [lv for r in z10 for lv in r.levels if lv.partner_energy is not None]
    assert len(pairs) == 4
    table = {(lv.k, lv.n_r): lv for r in z10 for lv in r.levels}
    for lv in pairs:
        twin = table[(-lv.k, lv.n_r)]
        assert abs(lv.energy - twin.energy) <= 2 * max(lv.error_estimate, twin.error_estimate)
        assert abs(lv.alpha_A2 - twin.alpha_A2) <= 1e-6


def test_refinement_moves_toward_sommerfeld(z10):
    for r in z10:
        for lv in r.levels:
            assert abs(lv.fine - lv.sommerfeld) < abs(lv.coarse - lv.sommerfeld)


def test_nonrelativistic_limit():
    a = 1e-4
    lv = R.solve_sector(R.RadialProblem(a, -1), 1).levels[0]
    assert (1 - lv.energy) == pytest.approx(a * a / 2, rel=1e-2)


def test_A2_relation_numeric(z10):
    rep = R.check_A2_relation_numeric(R.RadialProblem(ALPHA_Z10, -1), results=z10)
    assert rep.passed
    assert abs(rep.ground_alpha) <= 1e-6
    assert all(row["alpha_A2"] > 1e-3 for row in rep.alpha if row["n_r"] > 0)


def test_no_midgap_pollution():
    prob = R.RadialProblem(0.3, 2, nodes=800)
    bound, unresolved, spurious = R.eigen_levels(prob, prob.nodes, 3)
    assert not spurious
    assert all(tail <= R.TAIL_THRESHOLD for _, tail in bound)
    assert all(0 < e < 1 for e in unresolved)


def test_coarse_grid_fails_convergence():
    with pytest.raises(R.ConvergenceError):
        R.solve_sector(R.RadialProblem(0.3, -1, nodes=40, tolerance=1e-9), 1)


def test_span_doubling_is_harmless():
    base = R.solve_sector(R.RadialProblem(0.3, -1), 2)
    wide = R.solve_sector(R.RadialProblem(0.3, -1, r_min=R.DEFAULT_R_MIN / 2, r_max=2 * R.DEFAULT_R_MAX,
                                          nodes=2 * R.DEFAULT_NODES), 2)
    for x, y in zip(base.levels, wide.levels):
        assert abs(x.energy - y.energy) / x.energy <= 1e-5


def test_as_dict_rounding(z10):
    d = z10[0].as_dict()
    assert set(d) == {"a", "k", "levels", "spurious", "unresolved"}
    assert isinstance(d["levels"][0]["energy"], float)
    assert np.isfinite(d["levels"][0]["error_estimate"])
