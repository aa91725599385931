"""Second-order linear type-2 fuzzy initial value problems.

The problem ``D^2 Y + a D Y + b Y = 0`` with ``Y(0) = U`` and ``D Y(0) = V``
is reduced, for every plane (lower, upper), beta level and alpha level, to a
four-dimensional crisp linear system in the state
``(y_-, y_+, y'_-, y'_+)``. A form pair ``(i, j)`` fixes how the endpoint
derivatives are arranged into the cuts of ``D_i Y`` and ``D^2_{ij} Y``.

A trajectory is admissible in a form when, at every sample, both the value
and its first derivative in form ``i`` are type-2 fuzzy numbers.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import _cuts
from .errors import IntegrationFailure, UnsupportedSpectrum
from .t1 import AlphaGrid
from .t2 import BetaGrid, T2Fuzzy, TriangularQT2, from_triangular_qt2

FORMS = ((1, 1), (1, 2), (2, 1), (2, 2))
#: Tolerance of the admissibility checks on ordering and monotonicity.
ADMISSIBLE_TOL = 1e-7
#: Largest eigenvector condition number accepted by the closed-form backend.
MAX_EIGVEC_COND = 1e8
MIN_ROWS_PER_THREAD = 512


@dataclass(frozen=True)
class TermMode:
    """How a crisp coefficient enters the equation.

    ``PlusScaled(k)`` adds ``k * Z``; ``HukuharaMinusScaled(k)`` subtracts
    ``k * Z`` as a Hukuhara difference, so both endpoints keep their roles.
    """

    kind: str
    k: float

    def __post_init__(self):
        if self.kind not in ("plus", "hminus"):
            raise ValueError(f"unknown term mode {self.kind!r}")
        if not np.isfinite(self.k):
            raise ValueError("coefficient must be finite")
        if self.kind == "hminus" and self.k < 0:
            raise ValueError("a Hukuhara-minus coefficient must be nonnegative")

    def endpoint_coeffs(self) -> np.ndarray:
        """2x2 matrix taking ``(z_-, z_+)`` to the term's (left, right) ends."""
        k = float(self.k)
        if self.kind == "hminus":
            return np.diag([-k, -k])
        if k >= 0:
            return np.diag([k, k])
        return np.array([[0.0, k], [k, 0.0]])

    def __str__(self):
        return f"{'+' if self.kind == 'plus' else '-'}{self.k:g}"


def PlusScaled(k: float) -> TermMode:
    return TermMode("plus", float(k))


def HukuharaMinusScaled(k: float) -> TermMode:
    return TermMode("hminus", float(k))


def parse_form(form) -> Union[tuple, str]:
    """Normalise ``"12"``, ``(1, 2)`` or ``"auto"``."""
    if isinstance(form, str):
        if form == "auto":
            return "auto"
        if len(form) == 2 and form.isdigit():
            form = (int(form[0]), int(form[1]))
    form = tuple(int(v) for v in form)
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS} or 'auto', got {form}")
    return form


@dataclass(frozen=True)
class ProblemSpec:
    a_term: TermMode
    b_term: TermMode
    U: TriangularQT2
    V: TriangularQT2
    x_end: float = 1.0
    form: Union[tuple, str] = "auto"
    agrid: AlphaGrid = AlphaGrid()
    bgrid: BetaGrid = BetaGrid()
    dx: float = 1e-3
    samples: int = 11
    backend: str = "rk4"

    def __post_init__(self):
        if not self.x_end > 0:
            raise ValueError("x_end must be positive")
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        if self.samples < 2:
            raise ValueError("need at least two samples")
        if self.backend not in ("rk4", "closed_form"):
            raise ValueError(f"unknown backend {self.backend!r}")
        object.__setattr__(self, "form", parse_form(self.form))

    @property
    def steps(self) -> int:
        """Number of rk4 steps; dx is shrunk slightly so they end on x_end."""
        return max(1, int(np.ceil(self.x_end / self.dx - 1e-9)))

    @property
    def x_samples(self) -> np.ndarray:
        return np.linspace(0.0, self.x_end, self.samples)


@dataclass(frozen=True)
class CutSystem:
    """``u' = M u`` plus the map from initial cuts to the initial state.

    ``init`` is a 4x4 matrix applied to ``(u_-, u_+, v_-, v_+)``.
    """

    form: tuple
    M: np.ndarray
    init: np.ndarray


def build_cut_system(spec: ProblemSpec, form) -> CutSystem:
    i, j = parse_form(form)
    # cut of D_i Y as indices into the state
    d_idx = [2, 3] if i == 1 else [3, 2]
    # which endpoint second derivative sits on the left of D^2_{ij} Y
    dd_idx = [0, 1] if i == j else [1, 0]
    M = np.zeros((4, 4))
    M[0, 2] = M[1, 3] = 1.0
    A = spec.a_term.endpoint_coeffs()
    B = spec.b_term.endpoint_coeffs()
    for side in (0, 1):
        row = 2 + dd_idx[side]
        for col in (0, 1):
            M[row, d_idx[col]] -= A[side, col]
            M[row, col] -= B[side, col]
    init = np.eye(4)
    if i == 2:
        init[[2, 3]] = init[[3, 2]]
    return CutSystem((i, j), M, init)


@dataclass
class Failure:
    x: float
    beta: float
    alpha: float
    reason: str

    def __str__(self):
        return f"x = {self.x:g}, beta = {self.beta:g}, alpha = {self.alpha:g}: {self.reason}"


@dataclass
class FuzzyTrajectory:
    """Solution samples of one form pair.

    ``values`` and ``derivative`` have shape ``(len(x), 2, nb, na, 2)``;
    ``derivative`` holds the cuts of ``D_i Y`` in the form's arrangement.
    """

    x: np.ndarray
    values: np.ndarray
    derivative: np.ndarray
    form: tuple
    agrid: AlphaGrid
    bgrid: BetaGrid
    failure: Optional[Failure] = None
    backend: str = "rk4"
    meta: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.failure is None

    def value(self, k: int) -> T2Fuzzy:
        return T2Fuzzy(self.agrid, self.bgrid, self.values[k])

    def at(self, alpha: float, beta: float) -> np.ndarray:
        """Endpoint trajectories ``(nx, 4)``: lower-left, lower-right, upper-left, upper-right."""
        ia, ib = self.agrid.index_of(alpha), self.bgrid.index_of(beta)
        v = self.values[:, :, ib, ia, :]
        return v.reshape(len(self.x), 4)

    def __repr__(self):
        verdict = "ok" if self.valid else f"invalid ({self.failure})"
        return f"FuzzyTrajectory(form={self.form}, samples={len(self.x)}, {verdict})"


def _initial_state(spec: ProblemSpec, system: CutSystem) -> np.ndarray:
    u = from_triangular_qt2(spec.U, spec.agrid, spec.bgrid).data
    v = from_triangular_qt2(spec.V, spec.agrid, spec.bgrid).data
    raw = np.concatenate([u, v], axis=-1)  # (2, nb, na, 4)
    return raw @ system.init.T


def _thread_count(default: int) -> int:
    env = os.environ.get("T2FDE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(default, os.cpu_count() or 1))


def _rk4_block(M: np.ndarray, state: np.ndarray, h: float, steps: int, keep: np.ndarray) -> np.ndarray:
    """Integrate rows of ``state`` (n, 4); return states at step indices ``keep``."""
    Mt = M.T
    out = np.empty((len(keep), *state.shape))
    want = dict((int(s), n) for n, s in enumerate(keep))
    if 0 in want:
        out[want[0]] = state
    y = state.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        return _rk4_loop(Mt, y, h, steps, want, out)


def _rk4_loop(Mt, y, h, steps, want, out):
    for s in range(1, steps + 1):
        k1 = y @ Mt
        k2 = (y + 0.5 * h * k1) @ Mt
        k3 = (y + 0.5 * h * k2) @ Mt
        k4 = (y + h * k3) @ Mt
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if s in want:
            out[want[s]] = y
        if not np.all(np.isfinite(y)):
            raise IntegrationFailure(f"state became non-finite at x = {s * h:g}")
    return out


def rk4_solve(spec: ProblemSpec, form, threads: Optional[int] = None) -> FuzzyTrajectory:
    system = build_cut_system(spec, form)
    s0 = _initial_state(spec, system)
    shape = s0.shape
    flat = s0.reshape(-1, 4)
    steps = spec.steps
    h = spec.x_end / steps
    xs = spec.x_samples
    keep = np.rint(xs / h).astype(int)
    if np.max(np.abs(keep * h - xs)) > 1e-9:
        raise ValueError("sample points must fall on the rk4 step grid")
    n = _thread_count(4) if threads is None else threads
    # threads only pay off once each chunk is a sizeable matmul
    n = min(n, max(1, len(flat) // MIN_ROWS_PER_THREAD))
    chunks = np.array_split(flat, n)
    if len(chunks) == 1:
        parts = [_rk4_block(system.M, flat, h, steps, keep)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda c: _rk4_block(system.M, c, h, steps, keep), chunks))
    states = np.concatenate(parts, axis=1).reshape(len(xs), *shape)
    return _assemble(spec, system, xs, states, "rk4")


def closed_form_solve(spec: ProblemSpec, form, xs=None) -> FuzzyTrajectory:
    """Exact solution through the eigen-decomposition of the cut system.

    ``xs`` overrides the spec's sample points. Raises UnsupportedSpectrum
    when the matrix has complex eigenvalues or its eigenvectors are too
    close to dependent.
    """
    system = build_cut_system(spec, form)
    w, P = np.linalg.eig(system.M)
    if np.max(np.abs(np.imag(w))) > 1e-12:
        raise UnsupportedSpectrum(f"complex eigenvalues {w}")
    w, P = np.real(w), np.real(P)
    cond = np.linalg.cond(P)
    if not np.isfinite(cond) or cond > MAX_EIGVEC_COND:
        raise UnsupportedSpectrum(f"eigenvectors are nearly dependent (condition {cond:.3g})")
    Pinv = np.linalg.inv(P)
    s0 = _initial_state(spec, system)
    xs = spec.x_samples if xs is None else np.atleast_1d(np.asarray(xs, dtype=float))
    coeffs = s0 @ Pinv.T  # (..., 4) in the eigenbasis
    growth = np.exp(np.outer(xs, w))  # (nx, 4)
    states = (coeffs[None] * growth[:, None, None, None, :]) @ P.T
    if not np.all(np.isfinite(states)):
        raise IntegrationFailure("closed-form solution overflowed")
    return _assemble(spec, system, xs, states, "closed_form")


def _assemble(spec, system, xs, states, backend) -> FuzzyTrajectory:
    values = np.ascontiguousarray(states[..., 0:2])
    deriv = states[..., 2:4]
    if system.form[0] == 2:
        deriv = _cuts.swap(deriv)
    traj = FuzzyTrajectory(
        x=xs,
        values=values,
        derivative=np.ascontiguousarray(deriv),
        form=system.form,
        agrid=spec.agrid,
        bgrid=spec.bgrid,
        backend=backend,
    )
    traj.failure = check_trajectory(traj)
    return traj


def check_trajectory(traj: FuzzyTrajectory, tol: float = ADMISSIBLE_TOL) -> Optional[Failure]:
    """First sample at which the value or its derivative stops being a type-2 number."""
    bad = _cuts.t2_bad_samples(traj.values, tol) | _cuts.t2_bad_samples(traj.derivative, tol)
    if not bad.any():
        return None
    k = int(np.argmax(bad))
    x = traj.x[k]
    for what, arr in (("value", traj.values[k]), (f"D_{traj.form[0]} derivative", traj.derivative[k])):
        found = _cuts.t2_violation(arr, tol)
        if found is not None:
            plane, ib, ia, reason = found
            return Failure(
                float(x),
                float(traj.bgrid.levels[ib]),
                float(traj.agrid.levels[ia]),
                f"{what}, {('lower', 'upper')[plane]} plane: {reason}",
            )
    raise AssertionError("batched and per-sample validity checks disagree")


def solve_form(spec: ProblemSpec, form, backend: Optional[str] = None) -> FuzzyTrajectory:
    backend = backend or spec.backend
    if backend == "closed_form":
        try:
            return closed_form_solve(spec, form)
        except UnsupportedSpectrum:
            pass
    return rk4_solve(spec, form)


def solve(spec: ProblemSpec, backend: Optional[str] = None):
    """Solve in the spec's form, or in all four forms when it is ``"auto"``.

    Returns a FuzzyTrajectory for a fixed form and a list of
    ``(form, FuzzyTrajectory)`` pairs for ``"auto"``. Validity failures are
    reported on the trajectory; only a non-finite state raises.
    """
    if spec.form != "auto":
        return solve_form(spec, spec.form, backend)
    return [(f, solve_form(spec, f, backend)) for f in FORMS]


def admissible_forms(spec: ProblemSpec, backend: Optional[str] = None) -> set:
    return {f for f in FORMS if solve_form(spec, f, backend).valid}


# ---------------------------------------------------------------------------
# worked problems

FIVE = TriangularQT2(3.5, 4, 4.5, 5, 5.5, 6, 6.5)
ONE = TriangularQT2(-0.5, 0, 0.5, 1, 1.5, 2, 2.5)


def _problem(a, b, **kw) -> ProblemSpec:
    kw.setdefault("agrid", AlphaGrid(31))
    kw.setdefault("bgrid", BetaGrid(21))
    return ProblemSpec(a, b, FIVE, ONE, **kw)


def problem1(**kw) -> ProblemSpec:
    """``D^2 Y + 3 D Y = 0`` with ``Y(0) = five``, ``D Y(0) = one``."""
    return _problem(PlusScaled(3), PlusScaled(0), **kw)


def problem2(**kw) -> ProblemSpec:
    """``D^2 Y - Y = 0`` with the subtraction taken as a Hukuhara difference."""
    return _problem(PlusScaled(0), HukuharaMinusScaled(1), **kw)


def problem3(**kw) -> ProblemSpec:
    """``D^2 Y + (-1) Y = 0``."""
    return _problem(PlusScaled(0), PlusScaled(-1), **kw)
