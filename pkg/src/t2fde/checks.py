"""Seeded property suites behind ``t2fde check``.

Each suite draws ``count`` random instances per property from a
``numpy.random.Generator`` and reports the worst discrepancy seen. The
same functions back the test-suite, so a failing CLI check and a failing
test point at the same code.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import calculus, ivp
from . import t1 as T1
from . import t2 as T2
from .errors import HypothesisViolated, NoHukuharaDifference, NotDifferentiableInForm, UnsupportedSpectrum

SUITES = ("t1", "t2", "calculus", "ivp")


@dataclass
class PropertyResult:
    name: str
    tol: float
    instances: int = 0
    worst: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.worst <= self.tol

    def add(self, value: float, note: str = ""):
        self.instances += 1
        if not np.isfinite(value) or value > self.tol:
            if len(self.failures) < 5:
                self.failures.append(note or f"discrepancy {value:.3g}")
        if np.isfinite(value):
            self.worst = max(self.worst, float(value))
        else:
            self.worst = float("inf")

    def fail(self, note: str):
        self.instances += 1
        if len(self.failures) < 5:
            self.failures.append(note)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: {self.instances} instances, worst {self.worst:.3g} (tol {self.tol:g})"
        if self.failures:
            text += "; first failure: " + self.failures[0]
        return text


# ---------------------------------------------------------------------------
# generators


def random_triangular_t1(rng: np.random.Generator, spread: float = 5.0, crisp_chance: float = 0.0) -> T1.TriangularT1:
    c = rng.uniform(-spread, spread)
    if rng.random() < crisp_chance:
        return T1.TriangularT1(c, c, c)
    return T1.TriangularT1(c - rng.uniform(0, spread), c, c + rng.uniform(0, spread))


def random_t1(rng: np.random.Generator, grid: T1.AlphaGrid, spread: float = 5.0) -> T1.T1Fuzzy:
    """Random fuzzy number with piecewise-linear, generally non-triangular cuts."""
    n = grid.count
    core = np.sort(rng.uniform(-spread, spread, 2))
    # ends move monotonically toward the core as alpha grows
    left_steps = rng.exponential(1.0, n - 1)
    right_steps = rng.exponential(1.0, n - 1)
    left = core[0] - np.concatenate([np.cumsum(left_steps[::-1])[::-1], [0.0]]) * spread / n
    right = core[1] + np.concatenate([np.cumsum(right_steps[::-1])[::-1], [0.0]]) * spread / n
    return T1.T1Fuzzy(grid, np.stack([left, right], axis=1))


def random_shape(rng: np.random.Generator, spread: float = 5.0, center=None) -> np.ndarray:
    c = rng.uniform(-spread, spread) if center is None else center
    gaps = rng.uniform(0, spread / 3, 6)
    left = c - np.cumsum(gaps[:3])[::-1]
    right = c + np.cumsum(gaps[3:])
    return np.concatenate([left, [c], right])


def random_qt2(rng: np.random.Generator, spread: float = 5.0) -> T2.TriangularQT2:
    return T2.TriangularQT2(*random_shape(rng, spread))


def random_t2(rng, agrid, bgrid, spread: float = 5.0) -> T2.T2Fuzzy:
    return T2.from_triangular_qt2(random_qt2(rng, spread), agrid, bgrid)


#: Crisp profiles phi >= 0 on [0, 1] with the signs of phi' and phi'' making
#: ``A + phi(x) B`` differentiable in the given second-order pair.
def _profile(pair, k: float, c: float):
    e, ne = np.exp, lambda t: np.exp(-k * t)
    if pair == (1, 1):
        return (lambda t: e(k * t), lambda t: k * e(k * t), lambda t: k * k * e(k * t))
    if pair == (1, 2):
        return (lambda t: 1 - ne(t), lambda t: k * ne(t), lambda t: -k * k * ne(t))
    if pair == (2, 1):
        return (lambda t: c - e(k * t), lambda t: -k * e(k * t), lambda t: -k * k * e(k * t))
    return (lambda t: ne(t), lambda t: -k * ne(t), lambda t: k * k * ne(t))


@dataclass
class ShapeFamily:
    """``shape(x) = A + phi(x) B`` with a crisp profile phi >= 0 on the domain."""

    A: np.ndarray
    B: np.ndarray
    phi: tuple
    pair: tuple
    domain: tuple = (0.0, 1.0)

    def shape(self, x):
        return self.A + self.phi[0](x) * self.B

    def dshape(self, x):
        return self.phi[1](x) * self.B

    def d2shape(self, x):
        return self.phi[2](x) * self.B

    def function(self, agrid, bgrid) -> calculus.T2Function:
        return calculus.T2Function.from_shape_functions(
            self.shape, agrid, bgrid, self.domain, dshape=self.dshape, d2shape=self.d2shape
        )

    def phi_max(self) -> float:
        xs = np.linspace(*self.domain, 201)
        return float(np.max(self.phi[0](xs)))


def random_family(rng, pair, A=None, spread: float = 3.0) -> ShapeFamily:
    k = rng.uniform(0.3, 2.0)
    c = np.exp(k * 1.0) + rng.uniform(0.5, 2.0)
    A = random_shape(rng, spread) if A is None else A
    B = random_shape(rng, 1.0, center=rng.uniform(-1, 1))
    return ShapeFamily(A, B, _profile(pair, k, c), pair)


def combined(F: ShapeFamily, G: ShapeFamily, sign: float = 1.0):
    """Shape callables of ``F + sign * G`` (parameterwise)."""
    return (
        lambda x: F.shape(x) + sign * G.shape(x),
        lambda x: F.dshape(x) + sign * G.dshape(x),
        lambda x: F.d2shape(x) + sign * G.d2shape(x),
    )


def sample_points(rng, n: int = 3, domain=(0.0, 1.0)) -> list:
    lo, hi = domain
    pad = 0.05 * (hi - lo)
    return sorted(rng.uniform(lo + pad, hi - pad, n).tolist())


# ---------------------------------------------------------------------------
# suites


def _t1_suite(rng, count) -> Iterator[PropertyResult]:
    grid = T1.AlphaGrid(21)
    trip = PropertyResult("T1 Hukuhara round trip v + (u - v) = u", 1e-9)
    dist = PropertyResult("T1 distributive lemma", 1e-9)
    neg = PropertyResult("T1 0 - u rejected for non-crisp u", 0.0)
    remark = PropertyResult("T1 u + (-1)v differs from u - v", 0.0)
    metric = PropertyResult("T1 d_hausdorff metric axioms", 1e-12)
    closed = PropertyResult("T1 sums and scalings stay valid", 0.0)
    for _ in range(count):
        v, w = random_t1(rng, grid), random_t1(rng, grid)
        u = v + w
        try:
            trip.add(T1.d_hausdorff(v + (u - v), u))
        except NoHukuharaDifference as exc:
            trip.fail(f"difference rejected: {exc}")

        u2, v2 = random_t1(rng, grid), random_t1(rng, grid)
        u1, v1 = u2 + random_t1(rng, grid), v2 + random_t1(rng, grid)
        try:
            dist.add(T1.d_hausdorff((u1 + v1) - (u2 + v2), (u1 - u2) + (v1 - v2)))
        except NoHukuharaDifference as exc:
            dist.fail(f"difference rejected: {exc}")

        try:
            T1.neg(v)
            neg.fail("0 - u accepted for a non-crisp u")
        except NoHukuharaDifference:
            neg.add(0.0)

        gap = T1.d_hausdorff(u + (-1) * v, u - v)
        remark.add(0.0 if gap > 0 else 1.0, "u + (-1)v coincided with u - v")

        a, b, c = (random_t1(rng, grid) for _ in range(3))
        d = T1.d_hausdorff
        bad = max(d(a, a), abs(d(a, b) - d(b, a)), d(a, c) - d(a, b) - d(b, c))
        metric.add(max(bad, 0.0))

        k = rng.uniform(-3, 3)
        errs = [T1.validate(a + b), T1.validate(k * a)]
        closed.add(0.0 if all(e is None for e in errs) else 1.0, "invalid result")
    yield from (trip, dist, neg, remark, metric, closed)


def _t2_suite(rng, count) -> Iterator[PropertyResult]:
    agrid, bgrid = T1.AlphaGrid(11), T2.BetaGrid(6)
    trip = PropertyResult("T2 Hukuhara round trip b + (a - b) = a", 1e-9)
    dist = PropertyResult("T2 distributive lemma", 1e-9)
    neg = PropertyResult("T2 0 - u rejected for non-crisp u", 0.0)
    valid = PropertyResult("T2 triangular numbers satisfy the ordering chain", 0.0)
    collapse = PropertyResult("T2 planes coincide at beta = 1", 1e-12)
    hy = PropertyResult("T2 d_hung_yang pseudometric", 1e-6)
    hy_count = max(1, count // 10)
    for n in range(count):
        b, w = random_t2(rng, agrid, bgrid), random_t2(rng, agrid, bgrid)
        a = b + w
        try:
            trip.add(T2.d_planewise(b + (a - b), a))
        except NoHukuharaDifference as exc:
            trip.fail(f"difference rejected: {exc}")

        u2, v2 = random_t2(rng, agrid, bgrid), random_t2(rng, agrid, bgrid)
        u1 = u2 + random_t2(rng, agrid, bgrid)
        v1 = v2 + random_t2(rng, agrid, bgrid)
        try:
            dist.add(T2.d_planewise((u1 + v1) - (u2 + v2), (u1 - u2) + (v1 - v2)))
        except NoHukuharaDifference as exc:
            dist.fail(f"difference rejected: {exc}")

        if b.is_crisp():
            continue
        try:
            T2.neg(b)
            neg.fail("0 - u accepted for a non-crisp u")
        except NoHukuharaDifference:
            neg.add(0.0)

        problem = T2.violation(b)
        valid.add(0.0 if problem is None else 1.0, problem or "")
        collapse.add(float(np.max(np.abs(b.data[0, -1] - b.data[1, -1]))))

        if n < hy_count:
            c = random_t2(rng, agrid, bgrid)
            d = T2.d_hung_yang
            dab, dba = d(a, b), d(b, a)
            bad = max(d(a, a), abs(dab - dba), d(a, c) - dab - d(b, c))
            hy.add(max(bad, 0.0))
    yield from (trip, dist, neg, valid, collapse, hy)


def _calculus_suite(rng, count) -> Iterator[PropertyResult]:
    agrid, bgrid = T1.AlphaGrid(11), T2.BetaGrid(6)
    tol = calculus.CALC_TOL
    parametric = PropertyResult("parametric form matches central differences", tol)
    cont = PropertyResult("differentiability implies continuity", 0.0)
    swap = PropertyResult("second-order swap law", tol)
    sums = PropertyResult("sum rule", tol)
    hdiff = PropertyResult("Hukuhara difference rule", tol)
    mixed = PropertyResult("mixed-form difference rule", tol)
    product = PropertyResult("crisp-factor product rule (four sign cases)", tol)
    chain = PropertyResult("chain rule", tol)

    def run(result: PropertyResult, check: Callable):
        try:
            report = check()
        except (HypothesisViolated, NotDifferentiableInForm, NoHukuharaDifference) as exc:
            result.fail(f"{type(exc).__name__}: {exc}")
            return
        result.add(report.worst, "; ".join(report.details))

    for n in range(count):
        pair = calculus.FORMS_2[n % 4]
        xs = sample_points(rng)
        fam = random_family(rng, pair)
        F = fam.function(agrid, bgrid)

        worst = 0.0
        for x in xs:
            for order in (1, 2):
                exact = F.endpoint_derivative(x, order)
                approx = F.endpoint_derivative(x, order, numeric=True)
                worst = max(worst, float(np.max(np.abs(exact - approx))))
        parametric.add(worst)

        ok = True
        for x in xs:
            try:
                F.derivative(pair[0], x)
                F.derivative(pair, x)
            except NotDifferentiableInForm:
                ok = False
                break
            if not calculus.is_t2_continuous(F, x):
                ok = False
                break
        cont.add(0.0 if ok else 1.0, f"pair {pair}: accepted sample not continuous or not accepted")

        # swap law: iterate first-order derivatives and compare with the partner pair's formula
        inner = calculus.T2Function(lambda t: F.derivative(pair[0], t), fam.domain)
        partner = (pair[1], pair[0]) if pair[0] != pair[1] else (3 - pair[0], 3 - pair[1])
        worst = 0.0
        for x in xs:
            iterated = inner.derivative(pair[1], x)
            formula = F.derivative(partner, x)
            worst = max(worst, calculus.sup_distance(iterated, formula))
        swap.add(worst)

        sum_form = (1, 1) if pair[0] == 1 else (2, 2)
        G1 = random_family(rng, sum_form)
        G2 = random_family(rng, sum_form)
        run(sums, lambda: calculus.check_sum_rule(G1.function(agrid, bgrid), G2.function(agrid, bgrid), sum_form, xs))

        # F = G + W so that F - G and F' - G' exist
        W = random_family(rng, sum_form)
        shape, dshape, d2shape = combined(G1, W)
        FG = calculus.T2Function.from_shape_functions(shape, agrid, bgrid, G1.domain, dshape, d2shape)
        run(hdiff, lambda: calculus.check_hdiff_rule(FG, G1.function(agrid, bgrid), sum_form, xs))

        # mixed rule: G in the partner pair, F = G-cover + own profile
        gpair = calculus.MIXED_PARTNER[pair]
        Gm = random_family(rng, gpair)
        Fm = random_family(rng, pair, A=Gm.A + random_shape(rng, 1.0, center=0.0) + Gm.phi_max() * Gm.B)
        run(mixed, lambda: calculus.check_mixed_diff_rule(Fm.function(agrid, bgrid), Gm.function(agrid, bgrid), pair, xs))

        case = n % 4 + 1
        gform = {1: (1, 1), 2: (2, 2), 3: (1, 1), 4: (2, 2)}[case]
        Gp = random_family(rng, gform).function(agrid, bgrid)
        c = rng.uniform(0.3, 1.5)
        sgn = 1.0 if rng.random() < 0.5 else -1.0
        # increasing |f| for cases 1 and 3, decreasing for 2 and 4
        r = c if case in (1, 3) else -c
        f = (lambda t: sgn * np.exp(r * t), lambda t: sgn * r * np.exp(r * t), lambda t: sgn * r * r * np.exp(r * t))
        run(product, lambda: calculus.check_crisp_product_rule(f, Gp, case, xs))

        form = 1 if n % 2 == 0 else 2
        Gc = random_family(rng, (form, form))
        Gc.domain = (-np.inf, np.inf)
        p, q = rng.uniform(0.2, 1.0), rng.uniform(0.0, 0.3)
        inner_f = (lambda t: q + p * t + 0.1 * t * t, lambda t: p + 0.2 * t)
        run(chain, lambda: calculus.check_chain_rule(Gc.function(agrid, bgrid), *inner_f, form, xs))
    yield from (parametric, cont, swap, sums, hdiff, mixed, product, chain)


def _five_point(y, h):
    """First and second derivatives at the interior points ``y[2:-2]``."""
    d1 = (-y[4:] + 8 * y[3:-1] - 8 * y[1:-3] + y[:-4]) / (12 * h)
    d2 = (-y[4:] + 16 * y[3:-1] - 30 * y[2:-2] + 16 * y[1:-3] - y[:-4]) / (12 * h * h)
    return d1, d2


def _ivp_suite(rng, count) -> Iterator[PropertyResult]:
    collapse = PropertyResult("endpoints coincide at alpha = beta = 1", 1e-8)
    residual = PropertyResult("crisp ODE residual at alpha = beta = 1", 1e-6)
    backends = PropertyResult("rk4 and closed-form backends agree", 1e-7)
    initial = PropertyResult("initial value reproduced exactly", 0.0)
    valid_ok = PropertyResult("admissible trajectories are type-2 valid", 0.0)
    grids = dict(agrid=T1.AlphaGrid(5), bgrid=T2.BetaGrid(3), samples=1001)
    for _ in range(count):
        a = ivp.PlusScaled(rng.uniform(-2, 2))
        if rng.random() < 0.5:
            b = ivp.HukuharaMinusScaled(rng.uniform(0, 2))
        else:
            b = ivp.PlusScaled(rng.uniform(-2, 2))
        form = calculus.FORMS_2[rng.integers(4)]
        spec = ivp.ProblemSpec(a, b, random_qt2(rng, 2.0), random_qt2(rng, 1.0), form=form, **grids)
        traj = ivp.solve(spec)

        top = traj.values[:, :, -1, -1, :].reshape(len(traj.x), 4)
        collapse.add(float(np.max(np.ptp(top, axis=1))))
        y = top[:, 0]
        d1, d2 = _five_point(y, traj.x[1] - traj.x[0])
        kb = -b.k if b.kind == "hminus" else b.k
        residual.add(float(np.max(np.abs(d2 + a.k * d1 + kb * y[2:-2]))))

        try:
            closed = ivp.closed_form_solve(spec, form)
        except UnsupportedSpectrum:
            closed = None
        if closed is not None:
            backends.add(float(np.max(np.abs(closed.values - traj.values))))

        init = T2.from_triangular_qt2(spec.U, spec.agrid, spec.bgrid).data
        initial.add(float(np.max(np.abs(traj.values[0] - init))))

        if traj.valid:
            bad = [k for k in range(0, len(traj.x), 50) if T2.violation(traj.value(k), ivp.ADMISSIBLE_TOL)]
            valid_ok.add(1.0 if bad else 0.0, f"ok trajectory invalid at x = {traj.x[bad[0]] if bad else 0:g}")
    yield from (collapse, residual, backends, initial, valid_ok)


_SUITES = {"t1": _t1_suite, "t2": _t2_suite, "calculus": _calculus_suite, "ivp": _ivp_suite}


def run_suite(name: str, seed: int = 0, count: int = 100) -> list:
    """Run one suite; returns its PropertyResult list (empty when count is 0)."""
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if count <= 0:
        return []
    rng = np.random.default_rng(seed)
    return list(_SUITES[name](rng, count))


def report(name: str, seed: int = 0, count: int = 100, out=print) -> bool:
    start = time.perf_counter()
    results = run_suite(name, seed, count)
    for r in results:
        out(r.line())
    out(f"suite {name}: {sum(r.passed for r in results)}/{len(results)} properties passed "
        f"in {time.perf_counter() - start:.2f} s")
    return all(r.passed for r in results)
