import numpy as np
import pytest

from conftest import FIVE, ONE
from t2fde import ivp
from t2fde.errors import IntegrationFailure, UnsupportedSpectrum
from t2fde.t1 import AlphaGrid
from t2fde.t2 import BetaGrid, TriangularQT2, from_triangular_qt2

X = np.linspace(0, 1, 11)


def test_term_modes():
    assert np.array_equal(ivp.PlusScaled(-2).endpoint_coeffs(), [[0, -2], [-2, 0]])
    assert np.array_equal(ivp.HukuharaMinusScaled(2).endpoint_coeffs(), [[-2, 0], [0, -2]])
    with pytest.raises(ValueError):
        ivp.HukuharaMinusScaled(-1)
    with pytest.raises(ValueError):
        ivp.TermMode("times", 1.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        ivp.problem1(x_end=0.0)
    with pytest.raises(ValueError):
        ivp.problem1(dx=-1e-3)
    with pytest.raises(ValueError):
        ivp.problem1(form=(3, 1))
    assert ivp.problem1(form="12").form == (1, 2)


def test_cut_system_problem1_decouples():
    M = ivp.build_cut_system(ivp.problem1(), (1, 1)).M
    assert np.array_equal(M[2], [0, 0, -3, 0]) and np.array_equal(M[3], [0, 0, 0, -3])


def test_cut_system_problem2():
    M = ivp.build_cut_system(ivp.problem2(), (1, 1)).M
    assert np.array_equal(M[2], [1, 0, 0, 0]) and np.array_equal(M[3], [0, 1, 0, 0])


def test_cut_system_problem3_pair12():
    M = ivp.build_cut_system(ivp.problem3(), (1, 2)).M
    # y''_+ - y_+ = 0 and y''_- - y_- = 0
    assert np.array_equal(M[2], [1, 0, 0, 0]) and np.array_equal(M[3], [0, 1, 0, 0])


def test_second_form_swaps_initial_derivative():
    sys = ivp.build_cut_system(ivp.problem1(), (2, 1))
    raw = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.array_equal(sys.init @ raw, [1, 2, 4, 3])


def test_problem1_crisp_and_exact_cut():
    tr = ivp.solve(ivp.problem1(form=(1, 1)))
    e = np.exp(-3 * X)
    assert np.max(np.abs(tr.at(1, 1) - (-e / 3 + 16 / 3)[:, None])) <= 1e-6
    exact = np.stack([-e / 6 + 14 / 3, -e / 2 + 6, -e / 18 + 38 / 9, -11 * e / 18 + 58 / 9], axis=1)
    assert np.max(np.abs(tr.at(1 / 3, 1 / 2) - exact)) <= 1e-6


def test_problem1_general_lower_left_cut():
    spec = ivp.problem1(form=(1, 1))
    tr = ivp.solve(spec)
    a = spec.agrid.levels[None, None, :]
    b = spec.bgrid.levels[None, :, None]
    e = np.exp(-3 * X)[:, None, None]
    formula = (-a / 6 - a * b / 6 + b / 6 - 1 / 6) * e + (2 * a / 3 + 2 * a * b / 3 - 2 * b / 3 + 14 / 3)
    assert np.max(np.abs(tr.values[:, 0, :, :, 0] - formula)) <= 1e-6


def test_problem2_general_cuts():
    spec = ivp.problem2(form=(1, 1))
    tr = ivp.solve(spec)
    a = spec.agrid.levels[None, None, :]
    b = spec.bgrid.levels[None, :, None]
    em, ep = np.exp(-X)[:, None, None], np.exp(X)[:, None, None]
    expect = [
        2 * em + 0.5 * (a + a * b - b + 5) * ep,
        2 * em + 0.5 * (-a - a * b + b + 7) * ep,
        2 * em + 0.5 * (3 * a - a * b + b + 3) * ep,
        2 * em + 0.5 * (-3 * a + a * b - b + 9) * ep,
    ]
    got = [tr.values[:, 0, ..., 0], tr.values[:, 0, ..., 1], tr.values[:, 1, ..., 0], tr.values[:, 1, ..., 1]]
    for g, e in zip(got, expect):
        assert np.max(np.abs(g - e)) <= 1e-6


def test_zero_coefficients_integrate_to_affine():
    spec = ivp.ProblemSpec(ivp.PlusScaled(0), ivp.PlusScaled(0), FIVE, ONE, form=(1, 1),
                           agrid=AlphaGrid(11), bgrid=BetaGrid(5))
    tr = ivp.solve(spec)
    u = from_triangular_qt2(FIVE, spec.agrid, spec.bgrid).data
    v = from_triangular_qt2(ONE, spec.agrid, spec.bgrid).data
    expect = u[None] + spec.x_samples[:, None, None, None, None] * v[None]
    assert np.max(np.abs(tr.values - expect)) <= 1e-12


def test_problem3_matches_problem2_pairwise():
    p2 = dict(ivp.solve(ivp.problem2()))
    p3 = dict(ivp.solve(ivp.problem3()))
    assert np.max(np.abs(p3[(1, 2)].values - p2[(1, 1)].values)) <= 1e-9
    assert np.max(np.abs(p3[(2, 1)].values - p2[(2, 2)].values)) <= 1e-9


def test_admissible_sets_problems_2_and_3():
    assert ivp.admissible_forms(ivp.problem2()) == {(1, 1), (2, 2)}
    assert ivp.admissible_forms(ivp.problem3()) == {(1, 2), (2, 1)}


def test_problem1_pair22_width_collapses_where_predicted():
    # lower plane at alpha = beta = 0: width w = 1 - (exp(3x) - 1) / 3
    spec = ivp.problem1(form=(2, 2), samples=1001)
    tr = ivp.solve(spec)
    w = tr.values[:, 0, 0, 0, 1] - tr.values[:, 0, 0, 0, 0]
    x = spec.x_samples
    assert np.max(np.abs(w - (1 - (np.exp(3 * x) - 1) / 3))) <= 1e-9
    assert not tr.valid
    assert tr.failure.x == pytest.approx(np.log(4) / 3, abs=2e-3)
    assert "left end exceeds right end" in tr.failure.reason


def test_pair_symmetry_with_crisp_derivative_and_no_damping():
    spec = ivp.ProblemSpec(ivp.PlusScaled(0), ivp.HukuharaMinusScaled(1), FIVE, TriangularQT2.crisp(1.0),
                           agrid=AlphaGrid(11), bgrid=BetaGrid(5))
    out = dict(ivp.solve(spec))
    assert np.max(np.abs(out[(1, 1)].values - out[(2, 2)].values)) <= 1e-9
    assert np.max(np.abs(out[(1, 2)].values - out[(2, 1)].values)) <= 1e-9


def test_pair_symmetry_breaks_with_fuzzy_initial_derivative():
    out = dict(ivp.solve(ivp.problem2()))
    assert np.max(np.abs(out[(1, 1)].values - out[(2, 2)].values)) > 0.1


@pytest.mark.parametrize("make", [ivp.problem1, ivp.problem2, ivp.problem3])
def test_initial_conditions(make):
    spec = make(samples=1001)
    for form, tr in ivp.solve(spec):
        u = from_triangular_qt2(spec.U, spec.agrid, spec.bgrid).data
        assert np.array_equal(tr.values[0], u)
        h = spec.x_samples[1]
        fd = (-3 * tr.values[0] + 4 * tr.values[1] - tr.values[2]) / (2 * h)
        if form[0] == 2:
            fd = fd[..., ::-1]
        v = from_triangular_qt2(spec.V, spec.agrid, spec.bgrid).data
        assert np.max(np.abs(fd - v)) <= 1e-4


@pytest.mark.parametrize("make", [ivp.problem1, ivp.problem2, ivp.problem3])
def test_crisp_collapse(make):
    for form, tr in ivp.solve(make()):
        top = tr.values[:, :, -1, -1, :].reshape(len(tr.x), 4)
        assert np.max(np.ptp(top, axis=1)) <= 1e-8


@pytest.mark.parametrize("make", [ivp.problem1, ivp.problem2, ivp.problem3])
def test_backends_agree_where_spectrum_is_real(make):
    spec = make()
    compared = 0
    for form in ivp.FORMS:
        try:
            closed = ivp.closed_form_solve(spec, form)
        except UnsupportedSpectrum:
            continue
        compared += 1
        rk = ivp.rk4_solve(spec, form)
        assert np.max(np.abs(closed.values - rk.values)) <= 1e-7
        assert closed.valid == rk.valid
    assert compared >= 2


def test_complex_spectrum_falls_back_to_rk4():
    spec = ivp.problem2(form=(1, 2), backend="closed_form")
    with pytest.raises(UnsupportedSpectrum):
        ivp.closed_form_solve(spec, (1, 2))
    assert ivp.solve(spec).backend == "rk4"


def test_valid_trajectories_pass_type2_checks():
    from t2fde.t2 import violation

    for form, tr in ivp.solve(ivp.problem2()):
        if tr.valid:
            assert all(violation(tr.value(k), ivp.ADMISSIBLE_TOL) is None for k in range(len(tr.x)))


def test_integration_failure_on_overflow():
    # rk4 is unstable once h * 2000 = 20
    spec = ivp.ProblemSpec(ivp.PlusScaled(2000), ivp.PlusScaled(0), FIVE, ONE, form=(1, 1),
                           agrid=AlphaGrid(3), bgrid=BetaGrid(2), dx=1e-2)
    with pytest.raises(IntegrationFailure):
        ivp.solve(spec)


def test_thread_count_does_not_change_results(monkeypatch):
    spec = ivp.problem1(agrid=AlphaGrid(101), bgrid=BetaGrid(21), form=(1, 1))
    monkeypatch.setenv("T2FDE_THREADS", "1")
    one = ivp.solve(spec).values
    monkeypatch.setenv("T2FDE_THREADS", "4")
    four = ivp.solve(spec).values
    assert np.array_equal(one, four)


def test_ivp_suite():
    from t2fde import checks

    results = checks.run_suite("ivp", seed=2, count=30)
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]
