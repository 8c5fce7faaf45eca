"""Smooth majorants for weights.

The chain built here: the strictly positive lift ``beta(x) = w(x) +
exp(-eps|x|)``, its windowed suprema ``omega_rho`` (the ``rho = 1`` case is
the sup-smoothed weight), a compactly supported bump kernel with
position-dependent half-width, the mollified C-infinity majorant
``smooth_weight``, the explicit width function ``phi`` with its sharp
two-sided bounds, and a full verification of the sandwich and derivative
bounds on a grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, PreconditionError
from .numerics import (QuadratureResult, central_diff, grid_sup,
                       integrate_bump, window_sup_batch)
from .reports import BoundReport
from .weights import Weight, eval_weight

__all__ = [
    "SmoothingConfig", "beta", "omega_rho", "kernel", "smooth_weight",
    "smooth_weight_with_derivative", "phi", "mollified", "kappa",
    "verify_corollary1", "default_omega", "bump_profile",
]


# ---------------------------------------------------------------------------
# bump kernels

def bump_profile(t):
    """exp(-1/(1-t^2)) on (-1, 1), zero outside (defined by continuity)."""
    t = np.asarray(t, dtype=float)
    u = 1.0 - t * t
    out = np.zeros(t.shape)
    m = u > 0
    out[m] = np.exp(-1.0 / u[m])
    return out


def _moment_odd(t):
    """2 t / (t^2 - 1)^2 * exp(-1/(1-t^2)); the d/dx kernel of the bump."""
    t = np.asarray(t, dtype=float)
    u = 1.0 - t * t
    out = np.zeros(t.shape)
    m = u > 0
    out[m] = 2.0 * t[m] * np.exp(-1.0 / u[m] - 2.0 * np.log(u[m]))
    return out


def _moment_even(t):
    """t^2 / (t^2 - 1)^2 * exp(-1/(1-t^2))."""
    t = np.asarray(t, dtype=float)
    u = 1.0 - t * t
    out = np.zeros(t.shape)
    m = u > 0
    out[m] = t[m] ** 2 * np.exp(-1.0 / u[m] - 2.0 * np.log(u[m]))
    return out


_KAPPA_CACHE: dict[float, float] = {}


def kappa(tol: float = 1e-12) -> float:
    """Normalization constant of the bump, ``int_{-1}^{1} exp(-1/(1-t^2)) dt``.

    Cached after the first quadrature; lands in (1.2/e, 1.21/e).
    """
    if tol not in _KAPPA_CACHE:
        _KAPPA_CACHE[tol] = integrate_bump(bump_profile, -1.0, 1.0, tol).value
    return _KAPPA_CACHE[tol]


def default_omega(eps: float) -> Callable:
    """The stock admissible width function ``(1/4) exp(-x^2 - eps^2/4)``."""
    def omega(x):
        x = np.asarray(x, dtype=float)
        return 0.25 * np.exp(-x * x - eps * eps / 4.0)
    return omega


@dataclass
class SmoothingConfig:
    """Parameters of the mollified majorant.

    ``omega`` must satisfy ``0 < omega(x) <= exp(-eps|x|)/4`` (checked at a
    sample of points on construction); ``omega_deriv`` is optional and used
    in derivative formulas instead of a central difference when given.
    """

    eps: float
    rho: float = 0.5
    omega: Callable | None = None
    omega_deriv: Callable | None = None

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise PreconditionError(f"eps must lie in (0,1), got {self.eps}")
        if not 0.0 < self.rho <= 1.0:
            raise PreconditionError(f"rho must lie in (0,1], got {self.rho}")
        if self.omega is None:
            self.omega = default_omega(self.eps)
            if self.omega_deriv is None:
                eps = self.eps
                self.omega_deriv = lambda x: -2.0 * np.asarray(x, dtype=float) * \
                    0.25 * np.exp(-np.asarray(x, dtype=float) ** 2 - eps * eps / 4.0)
        xs = np.linspace(-20.0, 20.0, 81)
        vals = np.asarray(self.omega(xs), dtype=float)
        cap = np.exp(-self.eps * np.abs(xs)) / 4.0
        if not np.all((vals > 0) & (vals <= cap * (1 + 1e-12))):
            raise PreconditionError(
                "omega must satisfy 0 < omega(x) <= exp(-eps|x|)/4")


# ---------------------------------------------------------------------------
# windowed suprema

def beta(w: Weight, eps: float, x):
    """The strictly positive lift ``w(x) + exp(-eps |x|)``."""
    if not 0.0 < eps < 1.0:
        raise PreconditionError(f"eps must lie in (0,1), got {eps}")
    x_arr = np.asarray(x, dtype=float)
    return eval_weight(w, x) + np.exp(-eps * np.abs(x_arr))


def _omega_values(w: Weight, eps: float, rho: float, ys: np.ndarray) -> np.ndarray:
    """Vectorized windowed sup of the lift over ``[y - r(y), y + r(y)]``.

    ``r(y) = rho * exp(-eps |y|)``.  Discrete weights decompose exactly:
    the sup is the max of the closed-form exponential sup and the lift at
    each support point inside the window.  Evaluable weights use a batched
    grid supremum with the origin (the kink of the exponential) folded in
    as an exact candidate.
    """
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    radii = rho * np.exp(-eps * np.abs(ys))
    # sup of exp(-eps|.|) over the window, attained at minimal |.|
    exp_sup = np.exp(-eps * np.maximum(0.0, np.abs(ys) - radii))
    if w.kind == "discrete":
        pts = w.support_points
        lo = np.searchsorted(pts, ys - radii, side="left")
        hi = np.searchsorted(pts, ys + radii, side="right")
        best = exp_sup.copy()
        for i in range(ys.size):
            if hi[i] > lo[i]:
                seg = slice(lo[i], hi[i])
                cand = w.support_values[seg] + np.exp(-eps * np.abs(pts[seg]))
                best[i] = max(best[i], float(np.max(cand)))
        return best

    def lift(pts2d):
        return eval_weight(w, pts2d) + np.exp(-eps * np.abs(pts2d))

    sup = window_sup_batch(lift, ys, radii)
    # exact candidate at the origin where the window contains it
    contains0 = np.abs(ys) <= radii
    if np.any(contains0):
        sup[contains0] = np.maximum(sup[contains0],
                                    eval_weight(w, 0.0) + 1.0)
    return sup


def omega_rho(w: Weight, eps: float, rho: float, x: float,
              tol: float | None = None) -> float:
    """Sup of the lift over the closed window ``[x - rho e^{-eps|x|}, x + ...]``.

    ``rho = 1`` gives the sup-smoothed weight itself.
    """
    if not 0.0 < eps < 1.0:
        raise PreconditionError(f"eps must lie in (0,1), got {eps}")
    if not 0.0 < rho <= 1.0:
        raise PreconditionError(f"rho must lie in (0,1], got {rho}")
    x = float(x)
    r = rho * math.exp(-eps * abs(x))
    if w.kind == "discrete":
        return float(_omega_values(w, eps, rho, np.array([x]))[0])
    if tol is None:
        tol = 1e-9 * (1.0 + beta(w, eps, x))

    def lift(t):
        return eval_weight(w, t) + np.exp(-eps * np.abs(np.asarray(t, dtype=float)))

    cands = [x - r, x + r]
    if abs(x) <= r:
        cands.append(0.0)
    return grid_sup(lift, x - r, x + r, tol, candidates=cands).sup_value


# ---------------------------------------------------------------------------
# mollification

_KERNEL_NORM_CACHE: dict[float, float] = {}


def kernel(omega_x: float, t: float) -> float:
    """Normalized bump kernel of half-width ``omega_x`` evaluated at ``t``.

    Zero at ``t = +-omega_x`` by definition; integrates to one over
    ``(-omega_x, omega_x)``.  The normalization constant is computed by
    quadrature once per half-width and cached.
    """
    if not omega_x > 0:
        raise DomainError("kernel half-width must be positive")
    if abs(t) > omega_x:
        raise DomainError(f"|t|={abs(t)} exceeds the kernel half-width {omega_x}")
    if omega_x not in _KERNEL_NORM_CACHE:
        _KERNEL_NORM_CACHE[omega_x] = integrate_bump(
            lambda s: bump_profile(np.asarray(s, dtype=float) / omega_x),
            -omega_x, omega_x, 1e-13 * omega_x).value
    norm = _KERNEL_NORM_CACHE[omega_x]
    return float(bump_profile(np.array([t / omega_x]))[0]) / norm


def mollified(f: Callable, omega, x: float, *,
              omega_deriv: Callable | None = None,
              tol: float = 1e-10) -> tuple[float, float]:
    """Mollified value and derivative of ``f`` with half-width ``omega``.

    value      = (1/kappa) int f(x + t w(x)) exp(-1/(1-t^2)) dt
    derivative = (1/(kappa w)) int f(x + t w) 2t/(t^2-1)^2 exp(-1/(1-t^2)) dt
                 - (w'/w) value
                 + (2 w'/(kappa w)) int f(x + t w) t^2/(t^2-1)^2 exp(...) dt

    ``omega`` may be a callable or a positive constant; its derivative is a
    central difference unless ``omega_deriv`` is supplied.
    """
    x = float(x)
    if callable(omega):
        om = float(np.asarray(omega(np.array([x])), dtype=float)[0])
        if omega_deriv is not None:
            dom = float(np.asarray(omega_deriv(np.array([x])), dtype=float)[0])
        else:
            dom = central_diff(omega, x, 1e-6 * (1.0 + abs(x)))
    else:
        om = float(omega)
        dom = 0.0
    if not om > 0:
        raise PreconditionError(f"omega(x) must be positive, got {om} at x={x}")

    kap = kappa()
    splits = []
    t0 = -x / om
    if -1.0 < t0 < 1.0:
        splits.append(t0)  # kink of exp(-eps|x+t*om|)-type integrands

    def shifted(g):
        return lambda t: np.asarray(f(x + np.asarray(t, dtype=float) * om),
                                    dtype=float) * g(t)

    value = integrate_bump(shifted(bump_profile), -1.0, 1.0, tol,
                           split_points=splits).value / kap
    d1 = integrate_bump(shifted(_moment_odd), -1.0, 1.0, tol,
                        split_points=splits).value / (kap * om)
    d3 = integrate_bump(shifted(_moment_even), -1.0, 1.0, tol,
                        split_points=splits).value * 2.0 * dom / (kap * om)
    deriv = d1 - (dom / om) * value + d3
    return value, deriv


def _mollified_value(f: Callable, omega_val: float, x: float,
                     tol: float) -> float:
    """Value-only mollification at a fixed half-width (no derivative work)."""
    splits = []
    t0 = -x / omega_val
    if -1.0 < t0 < 1.0:
        splits.append(t0)
    integral = integrate_bump(
        lambda t: np.asarray(f(x + np.asarray(t, dtype=float) * omega_val),
                             dtype=float) * bump_profile(t),
        -1.0, 1.0, tol, split_points=splits).value
    return integral / kappa()


def _phi_integrals(eps: float, x: float, tol: float,
                   want_deriv: bool) -> tuple[float, float]:
    pref = math.exp(-eps) / (4.0 * kappa())
    splits = [-x] if -1.0 < -x < 1.0 else []

    def decay(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-eps * np.abs(x + t))

    val = pref * integrate_bump(lambda t: decay(t) * bump_profile(t),
                                -1.0, 1.0, tol, split_points=splits).value
    if not want_deriv:
        return val, 0.0
    dval = pref * integrate_bump(lambda t: decay(t) * _moment_odd(t),
                                 -1.0, 1.0, tol, split_points=splits).value
    return val, dval


def phi(eps: float, x: float, tol: float = 1e-10) -> tuple[float, float]:
    """The explicit admissible width function and its derivative.

    Satisfies ``(e^{-2 eps}/4) e^{-eps|x|} <= phi <= (1/4) e^{-eps|x|}`` and
    ``|phi'| <= (5/12) e^{-eps|x|}``.
    """
    if not 0.0 < eps < 1.0:
        raise PreconditionError(f"eps must lie in (0,1), got {eps}")
    return _phi_integrals(eps, float(x), tol, want_deriv=True)


def smooth_weight(w: Weight, cfg: SmoothingConfig, x: float,
                  tol: float = 1e-10) -> float:
    """The mollified majorant: bump average of the ``rho = 1/2`` windowed sup.

    Satisfies the sandwich ``w(x) + e^{-eps|x|} <= value <= omega_rho(w, eps,
    1, x)`` up to quadrature tolerance.
    """
    value, _ = smooth_weight_with_derivative(w, cfg, x, tol=tol)
    return value


def smooth_weight_with_derivative(w: Weight, cfg: SmoothingConfig, x: float,
                                  tol: float = 1e-10) -> tuple[float, float]:
    def inner(ys):
        return _omega_values(w, cfg.eps, 0.5, np.asarray(ys, dtype=float))

    return mollified(inner, cfg.omega, x, omega_deriv=cfg.omega_deriv, tol=tol)


# ---------------------------------------------------------------------------
# grid verification

def verify_corollary1(w: Weight, eps: float, grid, h: float = 1e-3,
                      tol: float = 1e-8) -> BoundReport:
    """Check the sandwich, the 74-bound, and the derivative formula on a grid.

    Uses ``omega = phi`` as the width function.  At each grid point the
    derivative is computed both from the three-integral formula and by a
    central difference with step ``h * phi(x)`` (``h`` is relative to the
    local width); the two must agree within ``max(1e-5 * scale, 1e-8)``.
    """
    grid = list(grid)
    if not grid:
        raise PreconditionError("grid must be nonempty")
    if not h > 0:
        raise PreconditionError("h must be positive")
    if not 0.0 < eps < 1.0:
        raise PreconditionError(f"eps must lie in (0,1), got {eps}")

    report = BoundReport(tolerance=0.0,
                         notes="sandwich + 74-bound + derivative cross-check, "
                               "omega = phi")

    def phi_fn(xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return np.array([_phi_integrals(eps, float(xi), 1e-12, False)[0]
                         for xi in xs])

    def phi_deriv_fn(xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return np.array([_phi_integrals(eps, float(xi), 1e-12, True)[1]
                         for xi in xs])

    def inner(ys):
        return _omega_values(w, eps, 0.5, np.asarray(ys, dtype=float))

    for x in grid:
        x = float(x)
        lower = eval_weight(w, x) + math.exp(-eps * abs(x))
        w_eps = omega_rho(w, eps, 1.0, x)
        om = float(phi_fn(np.array([x]))[0])

        value, deriv = mollified(inner, phi_fn, x, omega_deriv=phi_deriv_fn,
                                 tol=1e-11)
        step = h * om

        def w_at(u: float) -> float:
            om_u = _phi_integrals(eps, u, 1e-12, False)[0]
            return _mollified_value(inner, om_u, u, 1e-12)

        # fourth-order difference: second-order steps are too coarse for
        # the 1e-5 relative agreement requirement
        deriv_fd = (8.0 * (w_at(x + step) - w_at(x - step))
                    - (w_at(x + 2 * step) - w_at(x - 2 * step))) / (12.0 * step)

        report.add(x, lower - tol, value, "sandwich-lower")
        report.add(x, value, w_eps + tol, "sandwich-upper")
        report.add(x, abs(deriv), 74.0 * math.exp(eps * abs(x)) * w_eps,
                   "74-bound")
        scale = max(abs(deriv), abs(deriv_fd))
        report.add(x, abs(deriv - deriv_fd), max(1e-5 * scale, 1e-8),
                   "derivative-agreement")
    return report
