"""Closed real intervals and their endpoint arithmetic.

A crisp real ``r`` is the degenerate interval ``[r, r]``; there is no
separate crisp type.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NoHukuharaDifference

#: Slack allowed before a Hukuhara difference is rejected.
HDIFF_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def crisp(cls, r: float) -> "Interval":
        return cls(r, r)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return add(self, other)

    def __mul__(self, other: "Interval") -> "Interval":
        return mul(self, other)

    def __rmul__(self, k: float) -> "Interval":
        return scale(k, self)

    def __sub__(self, other: "Interval") -> "Interval":
        return h_diff(self, other)

    def __le__(self, other: "Interval") -> bool:
        return le(self, other)


def add(a: Interval, b: Interval) -> Interval:
    return Interval(a.lo + b.lo, a.hi + b.hi)


def scale(k: float, a: Interval) -> Interval:
    if k >= 0:
        return Interval(k * a.lo, k * a.hi)
    return Interval(k * a.hi, k * a.lo)


def mul(a: Interval, b: Interval) -> Interval:
    products = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return Interval(min(products), max(products))


def h_diff(a: Interval, b: Interval) -> Interval:
    """Hukuhara difference ``w`` with ``b + w == a``.

    Raises
    ------
    NoHukuharaDifference
        If ``b`` is wider than ``a``.
    """
    lo = a.lo - b.lo
    hi = a.hi - b.hi
    if lo - hi > HDIFF_TOL:
        raise NoHukuharaDifference(f"{b} is wider than {a}")
    if lo > hi:
        # tie within tolerance: collapse to the midpoint
        lo = hi = 0.5 * (lo + hi)
    return Interval(lo, hi)


def le(a: Interval, b: Interval) -> bool:
    return a.lo <= b.lo and a.hi <= b.hi
