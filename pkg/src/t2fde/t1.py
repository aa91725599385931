"""Type-1 fuzzy numbers stored as alpha-cut families on a uniform grid."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import _cuts
from .errors import FuzzyError, GridMismatch, NoHukuharaDifference
from .interval import Interval

#: Tolerance for monotonicity and ordering checks of cut families.
VALIDITY_TOL = 1e-9


@dataclass(frozen=True)
class AlphaGrid:
    """Uniform grid of alpha levels from 0 to 1 inclusive."""

    count: int = 101

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("an alpha grid needs at least the levels 0 and 1")

    @cached_property
    def levels(self) -> np.ndarray:
        levels = np.linspace(0.0, 1.0, self.count)
        levels.setflags(write=False)
        return levels

    def __len__(self):
        return self.count

    def index_of(self, alpha: float, tol: float = 1e-9) -> int:
        """Index of ``alpha`` on the grid; raises KeyError when absent."""
        k = int(round(alpha * (self.count - 1)))
        if 0 <= k < self.count and abs(self.levels[k] - alpha) <= tol:
            return k
        raise KeyError(f"alpha = {alpha} is not a grid level")


@dataclass(frozen=True)
class TriangularT1:
    left: float
    core: float
    right: float

    def __post_init__(self):
        if not self.left <= self.core <= self.right:
            raise ValueError(f"need left <= core <= right, got {self}")


@dataclass
class ValidityError(FuzzyError):
    """First offending alpha level of a cut family and what went wrong.

    :func:`validate` returns instances of this class; arithmetic that must
    produce a fuzzy number raises it.
    """

    level: float
    reason: str

    def __str__(self):
        return f"alpha = {self.level:g}: {self.reason}"


class T1Fuzzy:
    """A type-1 fuzzy number given by its cuts ``[u_-(alpha), u_+(alpha)]``.

    Parameters
    ----------
    grid : AlphaGrid
    data : array_like, shape (grid.count, 2)
        Column 0 holds the left ends, column 1 the right ends.
    """

    __slots__ = ("grid", "data")

    def __init__(self, grid: AlphaGrid, data):
        data = np.array(data, dtype=float)
        if data.shape != (grid.count, 2):
            raise ValueError(f"expected cut array of shape {(grid.count, 2)}, got {data.shape}")
        data.setflags(write=False)
        self.grid = grid
        self.data = data

    @classmethod
    def crisp(cls, r: float, grid: AlphaGrid = AlphaGrid()) -> "T1Fuzzy":
        return cls(grid, np.full((grid.count, 2), float(r)))

    @classmethod
    def from_cuts(cls, grid: AlphaGrid, cuts) -> "T1Fuzzy":
        return cls(grid, [[c.lo, c.hi] for c in cuts])

    @property
    def lo(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def hi(self) -> np.ndarray:
        return self.data[:, 1]

    @property
    def cuts(self) -> list:
        return [Interval(float(a), float(b)) for a, b in self.data]

    def cut(self, alpha: float) -> Interval:
        """Cut at an arbitrary level, linearly interpolated between grid nodes."""
        lv = self.grid.levels
        return Interval(float(np.interp(alpha, lv, self.lo)), float(np.interp(alpha, lv, self.hi)))

    def is_crisp(self, tol: float = 0.0) -> bool:
        return bool(np.ptp(self.data) <= tol)

    def membership(self, x) -> np.ndarray:
        """Grade of ``x`` (scalar or array), the largest alpha whose cut holds ``x``."""
        return membership(self.data, self.grid.levels, x)

    def __repr__(self):
        if self.grid.count <= 3:
            body = ", ".join(f"[{a:g}, {b:g}]" for a, b in self.data)
        else:
            (a0, b0), (a1, b1) = self.data[0], self.data[-1]
            body = f"[{a0:g}, {b0:g}] ... [{a1:g}, {b1:g}]"
        return f"T1Fuzzy({body})"

    def __add__(self, other):
        return add(self, other)

    def __rmul__(self, k):
        return scale(k, self)

    def __mul__(self, other):
        if isinstance(other, T1Fuzzy):
            return mul(self, other)
        return scale(other, self)

    def __sub__(self, other):
        return h_diff(self, other)

    def __le__(self, other):
        return le(self, other)


def from_triangular(t: TriangularT1, grid: AlphaGrid = AlphaGrid()) -> T1Fuzzy:
    a = grid.levels
    lo = t.core - (1 - a) * (t.core - t.left)
    hi = t.core + (1 - a) * (t.right - t.core)
    return T1Fuzzy(grid, np.stack([lo, hi], axis=1))


def _same_grid(u: T1Fuzzy, v: T1Fuzzy):
    if u.grid != v.grid:
        raise GridMismatch(f"{u.grid} vs {v.grid}")


def add(u: T1Fuzzy, v: T1Fuzzy) -> T1Fuzzy:
    _same_grid(u, v)
    return T1Fuzzy(u.grid, _cuts.add(u.data, v.data))


def scale(k: float, u: T1Fuzzy) -> T1Fuzzy:
    return T1Fuzzy(u.grid, _cuts.scale(float(k), u.data))


def mul(u: T1Fuzzy, v: T1Fuzzy) -> T1Fuzzy:
    _same_grid(u, v)
    out = T1Fuzzy(u.grid, _cuts.mul(u.data, v.data))
    err = validate(out)
    if err is not None:
        raise err
    return out


def h_diff(u: T1Fuzzy, v: T1Fuzzy) -> T1Fuzzy:
    """Hukuhara difference ``w`` with ``v + w == u``.

    The levelwise interval differences must exist and must also stack into
    a valid fuzzy number; otherwise NoHukuharaDifference is raised.
    """
    _same_grid(u, v)
    w = T1Fuzzy(u.grid, _cuts.h_diff(u.data, v.data))
    err = validate(w)
    if err is not None:
        raise NoHukuharaDifference(f"difference is not a fuzzy number ({err})")
    return w


def neg(u: T1Fuzzy) -> T1Fuzzy:
    """``0 - u``; exists only for crisp ``u``. Compare ``scale(-1, u)``."""
    return h_diff(T1Fuzzy.crisp(0.0, u.grid), u)


def le(u: T1Fuzzy, v: T1Fuzzy) -> bool:
    _same_grid(u, v)
    return bool(np.all(u.data <= v.data))


def is_nonnegative(u: T1Fuzzy) -> bool:
    return bool(np.all(u.lo >= 0))


def is_positive(u: T1Fuzzy) -> bool:
    return bool(np.all(u.lo > 0))


def d_hausdorff(u: T1Fuzzy, v: T1Fuzzy) -> float:
    """Sup over the grid of the larger endpoint gap."""
    _same_grid(u, v)
    return _cuts.sup_distance(u.data, v.data)


def validate(u: T1Fuzzy, tol: float = VALIDITY_TOL) -> Optional[ValidityError]:
    """Check ordering and monotonicity of the cut family.

    Returns None when ``u`` is a fuzzy number, otherwise a ValidityError
    naming the first offending level. Nesting of the cuts follows from the
    two monotonicity conditions.
    """
    found = _cuts.t1_violation(u.data, tol)
    if found is None:
        return None
    (k,), reason = found
    return ValidityError(float(u.grid.levels[k]), reason)


def membership(data, levels, x):
    """Membership grades of points ``x`` in the cut family ``data``.

    Between grid levels the endpoints are taken as linear in alpha, matching
    :meth:`T1Fuzzy.cut`.
    """
    x = np.asarray(x, dtype=float)
    lo, hi = data[:, 0], data[:, 1]
    left = _side_grade(lo, levels, x)
    right = _side_grade(-hi, levels, -x)
    return np.minimum(left, right)


def _side_grade(ends, levels, x):
    # ends is nondecreasing in alpha; grade = sup{alpha : ends(alpha) <= x}
    n = len(ends)
    k = np.searchsorted(ends, x, side="right") - 1
    inside = (k >= 0) & (k < n - 1)
    kk = np.clip(k, 0, n - 2)
    e0, e1 = ends[kk], ends[kk + 1]
    denom = np.where(e1 > e0, e1 - e0, 1.0)
    frac = np.clip((x - e0) / denom, 0.0, 1.0)
    interp = levels[kk] + frac * (levels[kk + 1] - levels[kk])
    return np.where(k >= n - 1, 1.0, np.where(inside, interp, 0.0))
