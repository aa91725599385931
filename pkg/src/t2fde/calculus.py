"""Hukuhara derivatives of fuzzy-valued functions of a crisp variable.

Differentiability in a given form is decided from the parametric
characterisation: the candidate derivative is assembled from the endpoint
derivatives (left and right ends kept in place for form 1, exchanged for
form 2; second-order pairs (1,2) and (2,1) exchange, (1,1) and (2,2) keep)
and accepted only if it is itself a fuzzy number.

The ``check_*`` functions compare both sides of the derivative rules for
sums, Hukuhara differences, crisp factors and compositions on a set of
sample points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _cuts
from .errors import HypothesisViolated, NoHukuharaDifference, NotDifferentiableInForm
from .t1 import AlphaGrid, T1Fuzzy
from .t2 import T2Fuzzy, TriangularQT2

#: Default step of the central first difference.
DIFF_STEP = 1e-5
#: Default step of the five-point second difference.
DIFF2_STEP = 1e-3
#: Acceptance threshold for derivative candidates and rule discrepancies.
CALC_TOL = 1e-6

Form = Union[int, tuple]
FORMS_1 = (1, 2)
FORMS_2 = ((1, 1), (1, 2), (2, 1), (2, 2))


def check_form(form) -> Form:
    if form in FORMS_1:
        return int(form)
    form = tuple(form)
    if form in FORMS_2:
        return form
    raise ValueError(f"unknown derivative form {form!r}")


def order_of(form) -> int:
    return 1 if isinstance(check_form(form), int) else 2


def swaps(form) -> bool:
    """Whether the parametric form exchanges the endpoint derivatives."""
    form = check_form(form)
    if isinstance(form, int):
        return form == 2
    return form[0] != form[1]


def assemble(endpoint_derivs: np.ndarray, form) -> np.ndarray:
    return _cuts.swap(endpoint_derivs) if swaps(form) else np.ascontiguousarray(endpoint_derivs)


class FuzzyFunction:
    """A fuzzy-number-valued function of one crisp variable.

    Parameters
    ----------
    func : callable
        ``x -> T1Fuzzy`` or ``x -> T2Fuzzy``.
    domain : (float, float)
        Closed interval on which ``func`` is defined.
    deriv, deriv2 : callable, optional
        Analytic endpoint derivatives ``x -> ndarray`` shaped like the value's
        endpoint array. Each endpoint is differentiated on its own, before any
        form-dependent exchange. Finite differences are used when omitted.
    """

    value_type: type = object

    def __init__(self, func: Callable, domain=(-np.inf, np.inf), deriv=None, deriv2=None):
        self.func = func
        self.domain = (float(domain[0]), float(domain[1]))
        self.deriv = deriv
        self.deriv2 = deriv2

    def __call__(self, x: float):
        return self.func(x)

    def endpoints(self, x: float) -> np.ndarray:
        return self.func(x).data

    def _wrap(self, like, data):
        raise NotImplementedError

    def _validity(self, value) -> Optional[str]:
        raise NotImplementedError

    def endpoint_derivative(
        self, x: float, order: int = 1, h: Optional[float] = None, numeric: bool = False
    ) -> np.ndarray:
        """Derivative of every endpoint, analytic when available unless ``numeric``."""
        if order == 1 and self.deriv is not None and not numeric:
            return np.asarray(self.deriv(x), dtype=float)
        if order == 2 and self.deriv2 is not None and not numeric:
            return np.asarray(self.deriv2(x), dtype=float)
        lo, hi = self.domain
        if order == 1:
            h = DIFF_STEP if h is None else h
            if not lo <= x - h < x + h <= hi:
                raise ValueError(f"x = {x} is not interior to {self.domain} for step {h}")
            return (self.endpoints(x + h) - self.endpoints(x - h)) / (2 * h)
        if order == 2:
            h = DIFF2_STEP if h is None else h
            if not lo <= x - 2 * h < x + 2 * h <= hi:
                raise ValueError(f"x = {x} is not interior to {self.domain} for step {h}")
            f = self.endpoints
            return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)
        raise ValueError("only first and second derivatives are supported")

    def derivative(self, form, x: float, h: Optional[float] = None, tol: float = CALC_TOL):
        """Derivative of the given form at ``x``.

        ``form`` is 1 or 2 for first order, a pair ``(i, j)`` for second
        order. Raises NotDifferentiableInForm when the assembled candidate is
        not a fuzzy number.
        """
        form = check_form(form)
        order = order_of(form)
        like = self.func(x)
        cand = self._wrap(like, assemble(self.endpoint_derivative(x, order, h), form))
        problem = self._validity(cand, tol)
        if problem is not None:
            raise NotDifferentiableInForm(f"form {form} at x = {x}: {problem}")
        return cand

    def accepts(self, form, x: float, tol: float = CALC_TOL) -> Optional[str]:
        """Reason why the function is not differentiable in ``form`` at ``x``, or None.

        A second-order pair (i, j) also requires the first-order form i.
        """
        form = check_form(form)
        needed = [form] if isinstance(form, int) else [form[0], form]
        for f in needed:
            try:
                self.derivative(f, x, tol=tol)
            except NotDifferentiableInForm as exc:
                return str(exc)
        return None


class T1Function(FuzzyFunction):
    value_type = T1Fuzzy

    def _wrap(self, like, data):
        return T1Fuzzy(like.grid, data)

    def _validity(self, value, tol=CALC_TOL):
        found = _cuts.t1_violation(value.data, tol)
        if found is None:
            return None
        (k,), reason = found
        return f"alpha = {value.grid.levels[k]:g}: {reason}"


class T2Function(FuzzyFunction):
    value_type = T2Fuzzy

    def _wrap(self, like, data):
        return T2Fuzzy(like.agrid, like.bgrid, data)

    def _validity(self, value, tol=CALC_TOL):
        found = _cuts.t2_violation(value.data, tol)
        if found is None:
            return None
        plane, ib, ia, reason = found
        return (
            f"{('lower', 'upper')[plane]} plane, beta = {value.bgrid.levels[ib]:g}, "
            f"alpha = {value.agrid.levels[ia]:g}: {reason}"
        )

    @classmethod
    def from_shape_functions(
        cls,
        shape: Callable,
        agrid: AlphaGrid = AlphaGrid(),
        bgrid=None,
        domain=(-np.inf, np.inf),
        dshape: Optional[Callable] = None,
        d2shape: Optional[Callable] = None,
    ) -> "T2Function":
        """Function whose value at x is the triangular number ``shape(x)``.

        ``dshape`` and ``d2shape`` give the derivatives of the seven shape
        functions; when present they supply exact endpoint derivatives.
        """
        from .t2 import BetaGrid, from_triangular_qt2, shape_cuts

        bgrid = bgrid or BetaGrid()
        lift = lambda g: (lambda x: shape_cuts(g(x), agrid, bgrid)) if g else None  # noqa: E731
        return cls(
            lambda x: from_triangular_qt2(TriangularQT2(*shape(x)), agrid, bgrid),
            domain,
            deriv=lift(dshape),
            deriv2=lift(d2shape),
        )


def t1_derivative(F: T1Function, form, x: float, h: Optional[float] = None) -> T1Fuzzy:
    if order_of(form) != 1:
        raise ValueError("use t1_second_derivative for pairs")
    return F.derivative(form, x, h)


def t1_second_derivative(F: T1Function, pair, x: float, h: Optional[float] = None) -> T1Fuzzy:
    if order_of(pair) != 2:
        raise ValueError("second derivatives take a form pair (i, j)")
    return F.derivative(pair, x, h)


def t2_derivative(F: T2Function, form, x: float, h: Optional[float] = None) -> T2Fuzzy:
    if order_of(form) != 1:
        raise ValueError("use t2_second_derivative for pairs")
    return F.derivative(form, x, h)


def t2_second_derivative(F: T2Function, pair, x: float, h: Optional[float] = None) -> T2Fuzzy:
    if order_of(pair) != 2:
        raise ValueError("second derivatives take a form pair (i, j)")
    return F.derivative(pair, x, h)


def triangular_t2_derivative(shape: Callable, form, dshape: Optional[Callable] = None, h: Optional[float] = None):
    """Derivative of a triangular quasi-type-2 valued function, shape-wise.

    ``shape(x)`` returns the seven shape parameters. The returned callable
    gives the seven parameters of the derivative at x: in the same order for
    forms 1, (1,1), (2,2) and reversed for forms 2, (1,2), (2,1). Evaluating
    it raises NotDifferentiableInForm when the result is not ordered.
    """
    form = check_form(form)
    order = order_of(form)
    reverse = swaps(form)

    def raw(x):
        if dshape is not None:
            return np.asarray(dshape(x), dtype=float)
        f = lambda t: np.asarray(shape(t), dtype=float)  # noqa: E731
        if order == 1:
            step = DIFF_STEP if h is None else h
            return (f(x + step) - f(x - step)) / (2 * step)
        step = DIFF2_STEP if h is None else h
        return (-f(x + 2 * step) + 16 * f(x + step) - 30 * f(x) + 16 * f(x - step) - f(x - 2 * step)) / (
            12 * step * step
        )

    def derivative_at(x):
        d = raw(x)
        if reverse:
            d = d[::-1]
        if np.any(np.diff(d) < -CALC_TOL):
            raise NotDifferentiableInForm(f"form {form} at x = {x}: shape derivatives {d} are not ordered")
        d = np.maximum.accumulate(d)
        return TriangularQT2(*(float(v) for v in d))

    return derivative_at


def sup_distance(u, v) -> float:
    return _cuts.sup_distance(u.data, v.data)


def is_t2_continuous(F: FuzzyFunction, x: float, hs: Sequence[float] = None, tol: float = CALC_TOL) -> bool:
    """Whether F(x +- h) approaches F(x) as h shrinks along ``hs``.

    The planewise sup distance must not grow along the (decreasing) step
    sequence and must end below ``tol``.
    """
    if hs is None:
        hs = [10.0 ** -k for k in range(1, 9)]
    lo, hi = F.domain
    here = F(x).data
    dists = []
    for h in hs:
        pts = [p for p in (x - h, x + h) if lo <= p <= hi]
        dists.append(max(float(np.max(np.abs(F(p).data - here))) for p in pts))
    slack = 1e-12
    monotone = all(b <= a + slack for a, b in zip(dists, dists[1:]))
    return monotone and dists[-1] <= tol


# ---------------------------------------------------------------------------
# rule checks


@dataclass
class RuleReport:
    """Outcome of comparing both sides of a derivative rule on sample points."""

    rule: str
    worst: float = 0.0
    points: int = 0
    tol: float = CALC_TOL
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.worst <= self.tol

    def record(self, x, lhs, rhs, label=""):
        d = sup_distance(lhs, rhs)
        self.points += 1
        if d > self.worst:
            self.worst = d
            self.details = [f"x = {x:g}{' ' + label if label else ''}: discrepancy {d:.3g}"]
        return d


def _require(F: FuzzyFunction, form, xs, name):
    for x in xs:
        problem = F.accepts(form, x)
        if problem is not None:
            raise HypothesisViolated(f"{name} is not differentiable in form {form}: {problem}")


def _combine(F: FuzzyFunction, G: FuzzyFunction, op: Callable) -> FuzzyFunction:
    domain = (max(F.domain[0], G.domain[0]), min(F.domain[1], G.domain[1]))
    return type(F)(lambda x: op(F(x), G(x)), domain)


def _add(u, v):
    return u + v


def _h_diff(u, v):
    return u - v


def _first_forms(form):
    """First-order forms whose rule accompanies a (possibly second-order) form."""
    form = check_form(form)
    return [form] if isinstance(form, int) else [form[0], form]


def check_sum_rule(F: FuzzyFunction, G: FuzzyFunction, form, xs) -> RuleReport:
    """(F + G) derivative equals the sum of derivatives, both in ``form``.

    ``form`` is one of 1, 2, (1, 1), (2, 2); the first-order rule of the
    matching form is checked alongside a second-order one.
    """
    form = check_form(form)
    if form not in (1, 2, (1, 1), (2, 2)):
        raise ValueError("the sum rule covers forms 1, 2, (1,1) and (2,2)")
    _require(F, form, xs, "F")
    _require(G, form, xs, "G")
    S = _combine(F, G, _add)
    report = RuleReport("sum rule " + str(form))
    for f in _first_forms(form):
        for x in xs:
            lhs = S.derivative(f, x)
            rhs = F.derivative(f, x) + G.derivative(f, x)
            report.record(x, lhs, rhs, f"form {f}")
    return report


def check_hdiff_rule(F: FuzzyFunction, G: FuzzyFunction, form, xs) -> RuleReport:
    """(F - G) derivative equals F' - G' (Hukuhara differences) in the same form."""
    form = check_form(form)
    if form not in (1, 2, (1, 1), (2, 2)):
        raise ValueError("the difference rule covers forms 1, 2, (1,1) and (2,2)")
    _require(F, form, xs, "F")
    _require(G, form, xs, "G")
    for x in xs:
        try:
            F(x) - G(x)
        except NoHukuharaDifference as exc:
            raise HypothesisViolated(f"F(x) - G(x) does not exist at x = {x}: {exc}") from exc
    D = _combine(F, G, _h_diff)
    report = RuleReport("difference rule " + str(form))
    for f in _first_forms(form):
        for x in xs:
            try:
                rhs = F.derivative(f, x) - G.derivative(f, x)
            except NoHukuharaDifference as exc:
                raise HypothesisViolated(f"F'(x) - G'(x) does not exist at x = {x}: {exc}") from exc
            report.record(x, D.derivative(f, x), rhs, f"form {f}")
    return report


#: Form of G paired with each form of F in the mixed difference rule.
MIXED_PARTNER = {(1, 1): (2, 1), (1, 2): (2, 2), (2, 1): (1, 1), (2, 2): (1, 2)}


def check_mixed_diff_rule(F: FuzzyFunction, G: FuzzyFunction, form, xs) -> RuleReport:
    """(F - G)^form = F^form + (-1) G^partner for opposite-form operands.

    With F differentiable in pair ``form`` and G in ``MIXED_PARTNER[form]``,
    both the first-order identity (F - G)^(i) = F^(i) + (-1) G^(3-i) and the
    second-order one are compared.
    """
    form = check_form(form)
    if form not in MIXED_PARTNER:
        raise ValueError("the mixed difference rule takes a second-order pair")
    partner = MIXED_PARTNER[form]
    _require(F, form, xs, "F")
    _require(G, partner, xs, "G")
    for x in xs:
        try:
            F(x) - G(x)
        except NoHukuharaDifference as exc:
            raise HypothesisViolated(f"F(x) - G(x) does not exist at x = {x}: {exc}") from exc
    D = _combine(F, G, _h_diff)
    report = RuleReport(f"mixed difference rule F{form} G{partner}")
    for x in xs:
        lhs = D.derivative(form[0], x)
        rhs = F.derivative(form[0], x) + (-1) * G.derivative(partner[0], x)
        report.record(x, lhs, rhs, "first order")
        lhs = D.derivative(form, x)
        rhs = F.derivative(form, x) + (-1) * G.derivative(partner, x)
        report.record(x, lhs, rhs, "second order")
    return report


#: form of G and of f*G, and the sign conditions, for each product case
PRODUCT_CASES = {
    1: dict(form=1, conds=((0, 1, +1),)),
    2: dict(form=2, conds=((0, 1, -1),)),
    3: dict(form=(1, 1), conds=((0, 1, +1), (1, 2, +1))),
    4: dict(form=(2, 2), conds=((0, 1, -1), (1, 2, -1))),
}


def check_crisp_product_rule(f: Sequence[Callable], G: FuzzyFunction, case: int, xs) -> RuleReport:
    """Derivative of ``f(x) G(x)`` for a crisp factor f.

    ``f`` is the triple ``(f, f', f'')`` of callables. Cases 1 and 2 compare
    (fG)^(i) = f'G + fG^(i); cases 3 and 4 compare
    (fG)^(ii) = f''G + 2f'G^(i) + fG^(ii), under the matching sign conditions
    on f f' and f' f''.
    """
    spec = PRODUCT_CASES[case]
    form = spec["form"]
    fs = tuple(f)
    for x in xs:
        vals = [fn(x) for fn in fs]
        for i, j, sign in spec["conds"]:
            if not sign * vals[i] * vals[j] > 0:
                raise HypothesisViolated(f"sign condition on f^({i}) f^({j}) fails at x = {x}")
    _require(G, form, xs, "G")
    P = type(G)(lambda x: fs[0](x) * G(x), G.domain)
    report = RuleReport(f"crisp product rule case {case}")
    first = form if isinstance(form, int) else form[0]
    for x in xs:
        f0, f1, f2 = (fn(x) for fn in fs)
        g = G(x)
        rhs1 = f1 * g + f0 * G.derivative(first, x)
        report.record(x, P.derivative(first, x), rhs1, "first order")
        if not isinstance(form, int):
            rhs2 = f2 * g + (2 * f1) * G.derivative(first, x) + f0 * G.derivative(form, x)
            report.record(x, P.derivative(form, x), rhs2, "second order")
    return report


def check_chain_rule(G: FuzzyFunction, f: Callable, fprime: Callable, form, xs) -> RuleReport:
    """(G o f)^(i)(x) = G^(i)(f(x)) f'(x) for a crisp inner function f."""
    form = check_form(form)
    if form not in FORMS_1:
        raise ValueError("the chain rule is stated for first-order forms")
    C = type(G)(lambda x: G(f(x)))
    for x in xs:
        problem = C.accepts(form, x)
        if problem is not None:
            raise HypothesisViolated(f"composite lacks the Hukuhara differences in form {form}: {problem}")
        problem = G.accepts(form, f(x))
        if problem is not None:
            raise HypothesisViolated(f"G is not differentiable in form {form} at f(x): {problem}")
    report = RuleReport(f"chain rule form {form}")
    for x in xs:
        report.record(x, C.derivative(form, x), fprime(x) * G.derivative(form, f(x)))
    return report


def check_swap_law(F: FuzzyFunction, xs) -> RuleReport:
    """Pairs (1,2)/(2,1) and (1,1)/(2,2) give identical cuts wherever both exist."""
    report = RuleReport("second-order swap law")
    for x in xs:
        for p, q in (((1, 2), (2, 1)), ((1, 1), (2, 2))):
            try:
                a, b = F.derivative(p, x), F.derivative(q, x)
            except NotDifferentiableInForm:
                continue
            report.record(x, a, b, f"{p} vs {q}")
    return report
