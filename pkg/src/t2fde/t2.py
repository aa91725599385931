"""Perfect quasi-type-2 fuzzy numbers as stacks of beta-planes.

A :class:`T2Fuzzy` stores, for every beta level, the alpha-cuts of the
lower and the upper membership function of that beta-plane. The endpoint
array has shape ``(2, n_beta, n_alpha, 2)`` indexed by
``[plane, beta, alpha, endpoint]`` with plane 0 the lower and plane 1 the
upper membership function.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import _cuts
from .errors import DegenerateMismatch, GridMismatch, NoHukuharaDifference, OutOfSupport
from .t1 import VALIDITY_TOL, AlphaGrid, T1Fuzzy, TriangularT1, membership

LOWER, UPPER = 0, 1


@dataclass(frozen=True)
class BetaGrid:
    """Uniform grid of beta levels from 0 to 1 inclusive."""

    count: int = 21

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("a beta grid needs at least the levels 0 and 1")

    @cached_property
    def levels(self) -> np.ndarray:
        levels = np.linspace(0.0, 1.0, self.count)
        levels.setflags(write=False)
        return levels

    def __len__(self):
        return self.count

    def index_of(self, beta: float, tol: float = 1e-9) -> int:
        k = int(round(beta * (self.count - 1)))
        if 0 <= k < self.count and abs(self.levels[k] - beta) <= tol:
            return k
        raise KeyError(f"beta = {beta} is not a grid level")


@dataclass(frozen=True)
class TriangularQT2:
    """Seven shape parameters of a triangular perfect quasi-type-2 number.

    In order: upper-left end, left principle number, lower-left end, core,
    lower-right end, right principle number, upper-right end.
    """

    upper_left: float
    left_principle: float
    lower_left: float
    core: float
    lower_right: float
    right_principle: float
    upper_right: float

    def __post_init__(self):
        vals = self.as_tuple()
        if any(not np.isfinite(v) for v in vals):
            raise ValueError("shape parameters must be finite")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"shape parameters must be nondecreasing, got {vals}")

    @classmethod
    def crisp(cls, r: float) -> "TriangularQT2":
        return cls(*([float(r)] * 7))

    def as_tuple(self) -> tuple:
        return (
            self.upper_left,
            self.left_principle,
            self.lower_left,
            self.core,
            self.lower_right,
            self.right_principle,
            self.upper_right,
        )

    def __iter__(self):
        return iter(self.as_tuple())

    def __str__(self):
        v = [f"{x:g}" for x in self.as_tuple()]
        return f"<<{', '.join(v[:3])}; {v[3]}; {', '.join(v[4:])}>>"


@dataclass(frozen=True)
class SecondaryMF:
    """Secondary membership at a point, summarised by its feet and apex.

    ``foot_low`` and ``foot_high`` are the grades of the point in the lower
    and upper foot-print membership functions; ``apex`` is its grade in the
    principle set.
    """

    foot_low: float
    apex: float
    foot_high: float

    def as_triangular(self) -> TriangularT1:
        return TriangularT1(self.foot_low, self.apex, self.foot_high)


class T2Fuzzy:
    """Type-2 fuzzy number as a family of ``<lower, upper>`` beta-plane pairs."""

    __slots__ = ("agrid", "bgrid", "data")

    def __init__(self, agrid: AlphaGrid, bgrid: BetaGrid, data):
        data = np.array(data, dtype=float)
        shape = (2, bgrid.count, agrid.count, 2)
        if data.shape != shape:
            raise ValueError(f"expected endpoint array of shape {shape}, got {data.shape}")
        data.setflags(write=False)
        self.agrid = agrid
        self.bgrid = bgrid
        self.data = data

    @classmethod
    def crisp(cls, r: float, agrid: AlphaGrid = AlphaGrid(), bgrid: BetaGrid = BetaGrid()):
        return cls(agrid, bgrid, np.full((2, bgrid.count, agrid.count, 2), float(r)))

    @classmethod
    def from_planes(cls, planes, bgrid: BetaGrid) -> "T2Fuzzy":
        """Assemble from a sequence of ``(lower, upper)`` T1Fuzzy pairs, one per beta."""
        planes = list(planes)
        agrid = planes[0][0].grid
        data = np.stack([[lo.data for lo, _ in planes], [up.data for _, up in planes]])
        return cls(agrid, bgrid, data)

    def plane(self, k: int) -> tuple:
        """``(lower, upper)`` type-1 numbers of the k-th beta-plane."""
        return T1Fuzzy(self.agrid, self.data[LOWER, k]), T1Fuzzy(self.agrid, self.data[UPPER, k])

    @property
    def planes(self) -> list:
        return [self.plane(k) for k in range(self.bgrid.count)]

    def cut(self, alpha: float, beta: float) -> tuple:
        """``(lower_left, lower_right, upper_left, upper_right)`` at grid levels."""
        ia, ib = self.agrid.index_of(alpha), self.bgrid.index_of(beta)
        (ll, lr), (ul, ur) = self.data[LOWER, ib, ia], self.data[UPPER, ib, ia]
        return float(ll), float(lr), float(ul), float(ur)

    def is_crisp(self, tol: float = 0.0) -> bool:
        return bool(np.ptp(self.data) <= tol)

    def _check(self, other):
        if self.agrid != other.agrid or self.bgrid != other.bgrid:
            raise GridMismatch("type-2 operands live on different grids")

    def __add__(self, other):
        return add(self, other)

    def __rmul__(self, k):
        return scale(k, self)

    def __mul__(self, k):
        return scale(k, self)

    def __sub__(self, other):
        return h_diff(self, other)

    def __le__(self, other):
        return le(self, other)

    def __repr__(self):
        ll, lr, ul, ur = (float(v) for v in (*self.data[LOWER, 0, 0], *self.data[UPPER, 0, 0]))
        core = float(self.data[LOWER, -1, -1, 0])
        return f"T2Fuzzy(support lower=[{ll:g}, {lr:g}], upper=[{ul:g}, {ur:g}], core~{core:g})"


def from_triangular_qt2(
    t: TriangularQT2, agrid: AlphaGrid = AlphaGrid(), bgrid: BetaGrid = BetaGrid()
) -> T2Fuzzy:
    """Fill every (alpha, beta) cut of a triangular quasi-type-2 number.

    Each foot-print end moves affinely in alpha toward the core, and each
    beta-plane end moves affinely in beta from its foot-print end toward the
    matching principle number.
    """
    return T2Fuzzy(agrid, bgrid, shape_cuts(t.as_tuple(), agrid, bgrid))


def shape_cuts(params, agrid: AlphaGrid, bgrid: BetaGrid) -> np.ndarray:
    """Cut array ``(2, nb, na, 2)`` for seven shape parameters, without validation.

    The map is linear in the parameters, so applying it to the derivatives of
    shape functions yields the endpoint derivatives of the cuts.
    """
    ul, x1, ll, C, lr, y1, ur = (float(v) for v in params)
    a = agrid.levels[None, :]
    b = bgrid.levels[:, None]

    def toward_core(end):
        return C - (1 - a) * (C - end)

    x1, y1 = toward_core(x1), toward_core(y1)

    def plane(l0, r0):
        left = x1 - (1 - b) * (x1 - toward_core(l0))
        right = y1 + (1 - b) * (toward_core(r0) - y1)
        return np.stack(np.broadcast_arrays(left, right), axis=-1)

    return np.stack([plane(ll, lr), plane(ul, ur)])


def footprint(a: T2Fuzzy) -> tuple:
    """Lower and upper membership functions of the foot-print (the beta = 0 plane)."""
    return a.plane(0)


def principle_set(a: T2Fuzzy, tol: float = VALIDITY_TOL) -> T1Fuzzy:
    lower, upper = a.plane(a.bgrid.count - 1)
    gap = _cuts.sup_distance(lower.data, upper.data)
    if gap > tol:
        raise DegenerateMismatch(f"planes at beta = 1 differ by {gap:g}")
    return lower


def add(a: T2Fuzzy, b: T2Fuzzy) -> T2Fuzzy:
    a._check(b)
    return T2Fuzzy(a.agrid, a.bgrid, _cuts.add(a.data, b.data))


def scale(k: float, a: T2Fuzzy) -> T2Fuzzy:
    return T2Fuzzy(a.agrid, a.bgrid, _cuts.scale(float(k), a.data))


def h_diff(a: T2Fuzzy, b: T2Fuzzy) -> T2Fuzzy:
    """Planewise Hukuhara difference; the result must be a valid type-2 number."""
    a._check(b)
    out = T2Fuzzy(a.agrid, a.bgrid, _cuts.h_diff(a.data, b.data))
    found = violation(out)
    if found is not None:
        raise NoHukuharaDifference(f"difference is not a type-2 fuzzy number ({found})")
    return out


def neg(a: T2Fuzzy) -> T2Fuzzy:
    return h_diff(T2Fuzzy.crisp(0.0, a.agrid, a.bgrid), a)


def le(a: T2Fuzzy, b: T2Fuzzy) -> bool:
    a._check(b)
    return bool(np.all(a.data <= b.data))


def is_nonnegative(a: T2Fuzzy) -> bool:
    return bool(np.all(a.data[..., 0] >= 0))


def is_positive(a: T2Fuzzy) -> bool:
    return bool(np.all(a.data[..., 0] > 0))


def d_planewise(a: T2Fuzzy, b: T2Fuzzy) -> float:
    """Largest endpoint gap over all planes, betas and alphas."""
    a._check(b)
    return _cuts.sup_distance(a.data, b.data)


def violation(a: T2Fuzzy, tol: float = VALIDITY_TOL) -> Optional[str]:
    """Describe the first broken type-2 invariant, or return None."""
    found = _cuts.t2_violation(a.data, tol)
    if found is None:
        return None
    plane, ib, ia, reason = found
    return (
        f"{('lower', 'upper')[plane]} plane, beta = {a.bgrid.levels[ib]:g}, "
        f"alpha = {a.agrid.levels[ia]:g}: {reason}"
    )


def is_valid(a: T2Fuzzy, tol: float = VALIDITY_TOL) -> bool:
    return violation(a, tol) is None


def secondary_at(a: T2Fuzzy, x: float, strict: bool = False) -> SecondaryMF:
    """Feet and apex of the secondary membership of ``a`` at ``x``.

    Points outside the upper foot-print support get the zero secondary
    unless ``strict`` is set, in which case OutOfSupport is raised.
    """
    lower0, upper0 = a.data[LOWER, 0], a.data[UPPER, 0]
    lv = a.agrid.levels
    if not upper0[0, 0] <= x <= upper0[0, 1]:
        if strict:
            raise OutOfSupport(f"x = {x} lies outside [{upper0[0, 0]}, {upper0[0, 1]}]")
        return SecondaryMF(0.0, 0.0, 0.0)
    g_low = float(membership(lower0, lv, x))
    g_high = float(membership(upper0, lv, x))
    apex = float(membership(a.data[LOWER, -1], lv, x))
    g_low, g_high = min(g_low, g_high), max(g_low, g_high)
    return SecondaryMF(g_low, min(max(apex, g_low), g_high), g_high)


def secondary_cuts(a: T2Fuzzy, xs) -> np.ndarray:
    """Beta-cuts of the secondary membership at each point of ``xs``.

    The cut at level beta is the grade interval between the lower and the
    upper membership function of the beta-plane. Returns an array of shape
    ``(len(xs), n_beta, 2)``.
    """
    xs = np.asarray(xs, dtype=float)
    lv = a.agrid.levels
    out = np.empty((xs.size, a.bgrid.count, 2))
    for k in range(a.bgrid.count):
        out[:, k, 0] = membership(a.data[LOWER, k], lv, xs)
        out[:, k, 1] = membership(a.data[UPPER, k], lv, xs)
    return out


def support_hull(*values: T2Fuzzy) -> tuple:
    lo = min(float(v.data[UPPER, 0, 0, 0]) for v in values)
    hi = max(float(v.data[UPPER, 0, 0, 1]) for v in values)
    return lo, hi


def d_hung_yang(a: T2Fuzzy, b: T2Fuzzy, xgrid=None, n_x: int = 201) -> float:
    """Hung-Yang distance by composite trapezoid quadrature in x and beta.

    ``xgrid`` defaults to ``n_x`` equispaced nodes over the union of both
    upper foot-print supports. For each x the beta-weighted Hausdorff gap of
    the secondary cuts is integrated over beta and normalised by
    ``int_0^1 beta dbeta``.
    """
    a._check(b)
    if xgrid is None:
        lo, hi = support_hull(a, b)
        xgrid = np.linspace(lo, hi, n_x)
    xgrid = np.asarray(xgrid, dtype=float)
    if xgrid.size < 2 or xgrid[-1] == xgrid[0]:
        return 0.0
    sa, sb = secondary_cuts(a, xgrid), secondary_cuts(b, xgrid)
    gaps = np.abs(sa - sb).max(axis=-1)
    beta = a.bgrid.levels
    weight = np.trapezoid(beta, beta)
    hf = np.trapezoid(beta[None, :] * gaps, beta, axis=1) / weight
    return float(np.trapezoid(hf, xgrid))

