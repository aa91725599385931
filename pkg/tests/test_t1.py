import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from t2fde import checks
from t2fde import t1 as T1
from t2fde.errors import GridMismatch, NoHukuharaDifference
from t2fde.interval import Interval

GRID = T1.AlphaGrid(21)


@st.composite
def fuzzy(draw, grid=GRID):
    seed = draw(st.integers(0, 2**32 - 1))
    return checks.random_t1(np.random.default_rng(seed), grid)


def test_grid_levels_and_lookup():
    g = T1.AlphaGrid(11)
    assert g.levels[0] == 0.0 and g.levels[-1] == 1.0
    assert g.index_of(0.3) == 3
    with pytest.raises(KeyError):
        g.index_of(0.33)
    with pytest.raises(ValueError):
        g.levels[0] = 5.0


def test_triangular_cuts():
    u = T1.from_triangular(T1.TriangularT1(1, 2, 4), T1.AlphaGrid(5))
    assert u.cut(0.0) == Interval(1, 4)
    assert u.cut(0.5) == Interval(1.5, 3)
    assert u.cut(1.0) == Interval(2, 2)


def test_cut_interpolates_between_levels():
    u = T1.from_triangular(T1.TriangularT1(0, 1, 2), T1.AlphaGrid(3))
    assert u.cut(0.25).lo == pytest.approx(0.25)


def test_membership_of_triangle():
    u = T1.from_triangular(T1.TriangularT1(0, 1, 3), T1.AlphaGrid(101))
    x = np.array([-1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(u.membership(x), [0, 0, 0.5, 1, 0.5, 0, 0], atol=1e-12)


def test_values_are_read_only():
    u = T1.T1Fuzzy.crisp(1.0, GRID)
    with pytest.raises(ValueError):
        u.data[0, 0] = 3.0


def test_validate_reports_level():
    data = np.tile([0.0, 1.0], (GRID.count, 1))
    data[7, 0] = -0.5
    err = T1.validate(T1.T1Fuzzy(GRID, data))
    assert err is not None and err.level == pytest.approx(GRID.levels[7])
    assert "decreases" in err.reason


def test_grid_mismatch():
    with pytest.raises(GridMismatch):
        T1.T1Fuzzy.crisp(0.0, T1.AlphaGrid(5)) + T1.T1Fuzzy.crisp(0.0, T1.AlphaGrid(6))


def test_negative_scale_swaps_ends():
    c = T1.from_triangular(T1.TriangularT1(1, 2, 3), GRID)
    m = -1 * c
    expected = T1.from_triangular(T1.TriangularT1(-3, -2, -1), GRID)
    assert T1.d_hausdorff(m, expected) == 0.0


def test_mul_of_triangles_is_valid():
    a = T1.from_triangular(T1.TriangularT1(-1, 0, 2), GRID)
    b = T1.from_triangular(T1.TriangularT1(1, 2, 3), GRID)
    p = a * b
    assert T1.validate(p) is None
    assert p.cut(1.0) == Interval(0.0, 0.0)
    assert p.cut(0.0) == Interval(-3.0, 6.0)


@given(fuzzy(), fuzzy())
def test_round_trip(v, w):
    u = v + w
    assert T1.d_hausdorff(v + (u - v), u) <= 1e-9


@given(fuzzy(), fuzzy(), fuzzy(), fuzzy(), fuzzy(), fuzzy())
def test_distributive_lemma(u2, v2, w1, w2, _a, _b):
    u1, v1 = u2 + w1, v2 + w2
    lhs = (u1 + v1) - (u2 + v2)
    rhs = (u1 - u2) + (v1 - v2)
    assert T1.d_hausdorff(lhs, rhs) <= 1e-9


@given(fuzzy())
def test_zero_minus_noncrisp_rejected(u):
    assert not u.is_crisp()
    with pytest.raises(NoHukuharaDifference):
        T1.neg(u)


def test_zero_minus_crisp_exists():
    assert T1.neg(T1.T1Fuzzy.crisp(2.5, GRID)).data[0, 0] == -2.5


@given(fuzzy(), fuzzy())
def test_negated_sum_differs_from_hukuhara(v, w):
    u = v + w
    assert T1.d_hausdorff(u + (-1) * v, u - v) > 0


@settings(max_examples=50)
@given(fuzzy(), fuzzy(), fuzzy())
def test_hausdorff_metric(a, b, c):
    d = T1.d_hausdorff
    assert d(a, a) == 0.0
    assert d(a, b) == d(b, a)
    assert d(a, c) <= d(a, b) + d(b, c) + 1e-12


@given(fuzzy(), fuzzy(), st.floats(-5, 5))
def test_operations_preserve_validity(a, b, k):
    assert T1.validate(a + b) is None
    assert T1.validate(k * a) is None


def test_suite_runs_clean():
    assert all(r.passed for r in checks.run_suite("t1", seed=3, count=1000))
