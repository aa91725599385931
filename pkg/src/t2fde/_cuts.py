"""Vectorised endpoint arithmetic on stacked cut arrays.

Every fuzzy value in the package keeps its endpoints in an array whose
last two axes are ``(alpha level, endpoint)`` with endpoint 0 the left end
and endpoint 1 the right end. Type-1 numbers are ``(n_alpha, 2)``; type-2
numbers add leading ``(plane, beta)`` axes.
"""
from __future__ import annotations

import numpy as np

from .errors import NoHukuharaDifference
from .interval import HDIFF_TOL


def add(a, b):
    return a + b


def scale(k, a):
    out = k * a
    if k < 0:
        out = out[..., ::-1]
    return np.ascontiguousarray(out)


def swap(a):
    """Exchange left and right endpoints (used by the second derivative forms)."""
    return np.ascontiguousarray(a[..., ::-1])


def mul(a, b):
    prods = np.stack(
        [a[..., 0] * b[..., 0], a[..., 0] * b[..., 1], a[..., 1] * b[..., 0], a[..., 1] * b[..., 1]]
    )
    return np.stack([prods.min(axis=0), prods.max(axis=0)], axis=-1)


def h_diff(a, b):
    out = a - b
    gap = out[..., 0] - out[..., 1]
    if np.any(gap > HDIFF_TOL):
        idx = np.unravel_index(np.argmax(gap), gap.shape)
        raise NoHukuharaDifference(f"subtrahend cut wider than minuend at index {idx}")
    tie = gap > 0
    if np.any(tie):
        mid = 0.5 * (out[..., 0] + out[..., 1])
        out[..., 0] = np.where(tie, mid, out[..., 0])
        out[..., 1] = np.where(tie, mid, out[..., 1])
    return out


def sup_distance(a, b):
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def t1_violation(data, tol):
    """First violation of the type-1 family conditions, or None.

    Returns ``(index, reason)`` where ``index`` addresses the offending level
    in the leading axes plus the alpha axis.
    """
    lo = data[..., 0]
    hi = data[..., 1]
    bad = lo - hi > tol
    if bad.any():
        return tuple(int(i) for i in np.argwhere(bad)[0]), "left end exceeds right end"
    if lo.shape[-1] > 1:
        dlo = np.diff(lo, axis=-1)
        bad = dlo < -tol
        if bad.any():
            idx = np.argwhere(bad)[0]
            idx[-1] += 1
            return tuple(int(i) for i in idx), "left end decreases in alpha"
        dhi = np.diff(hi, axis=-1)
        bad = dhi > tol
        if bad.any():
            idx = np.argwhere(bad)[0]
            idx[-1] += 1
            return tuple(int(i) for i in idx), "right end increases in alpha"
    if not np.all(np.isfinite(data)):
        return tuple(int(i) for i in np.argwhere(~np.isfinite(lo + hi))[0]), "non-finite endpoint"
    return None


def t2_violation(data, tol):
    """First violation of the type-2 conditions on a ``(2, nb, na, 2)`` array.

    Returns ``(plane, beta_index, alpha_index, reason)`` or None.
    """
    found = t1_violation(data, tol)
    if found is not None:
        (plane, ib, ia), reason = found
        return plane, ib, ia, reason
    lower, upper = data[0], data[1]
    bad = upper[..., 0] - lower[..., 0] > tol
    if bad.any():
        ib, ia = np.argwhere(bad)[0]
        return 1, int(ib), int(ia), "upper plane left end inside lower plane"
    bad = lower[..., 1] - upper[..., 1] > tol
    if bad.any():
        ib, ia = np.argwhere(bad)[0]
        return 1, int(ib), int(ia), "upper plane right end inside lower plane"
    if lower.shape[0] > 1:
        checks = (
            (0, 0, -1, "lower plane left end increases in beta"),
            (0, 1, 1, "lower plane right end decreases in beta"),
            (1, 0, 1, "upper plane left end decreases in beta"),
            (1, 1, -1, "upper plane right end increases in beta"),
        )
        for plane, end, sign, reason in checks:
            d = sign * np.diff(data[plane, :, :, end], axis=0)
            bad = d < -tol
            if bad.any():
                ib, ia = np.argwhere(bad)[0]
                return plane, int(ib) + 1, int(ia), reason
    bad = np.abs(lower[-1] - upper[-1]).max(axis=-1) > tol
    if bad.any():
        return 1, lower.shape[0] - 1, int(np.argwhere(bad)[0][0]), "planes differ at beta = 1"
    return None


def t2_bad_samples(data, tol):
    """Boolean mask over the leading axis of ``(n, 2, nb, na, 2)`` marking invalid samples.

    Applies the same conditions as :func:`t2_violation`, batched.
    """
    lo, hi = data[..., 0], data[..., 1]
    axes = tuple(range(1, lo.ndim))
    bad = (lo - hi > tol).any(axis=axes)
    bad |= ~np.isfinite(data).all(axis=axes + (lo.ndim,))
    if lo.shape[-1] > 1:
        bad |= (np.diff(lo, axis=-1) < -tol).any(axis=axes)
        bad |= (np.diff(hi, axis=-1) > tol).any(axis=axes)
    lower, upper = data[:, 0], data[:, 1]
    sub = tuple(range(1, lower.ndim - 1))
    bad |= (upper[..., 0] - lower[..., 0] > tol).any(axis=sub)
    bad |= (lower[..., 1] - upper[..., 1] > tol).any(axis=sub)
    if lower.shape[1] > 1:
        d = np.diff(data, axis=2)
        bad |= (-d[:, 0, ..., 0] < -tol).any(axis=sub)
        bad |= (d[:, 0, ..., 1] < -tol).any(axis=sub)
        bad |= (d[:, 1, ..., 0] < -tol).any(axis=sub)
        bad |= (-d[:, 1, ..., 1] < -tol).any(axis=sub)
    bad |= (np.abs(lower[:, -1] - upper[:, -1]) > tol).any(axis=(1, 2))
    return bad
