"""Shared numerical kernel.

Adaptive quadrature tuned for integrands that vanish to all orders at the
interval endpoints, grid suprema over intervals, and central differences.
All integrand/function arguments must accept numpy arrays (vectorized
evaluation); scalars in, scalars out also works.
"""
from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BudgetExhaustedError, DomainError, EvaluationError

DEFAULT_BUDGET = 1_000_000
BUDGET_ENV = "BERNSTEIN_BUDGET"

# Fixed symmetric rules per panel; all nodes are interior, so endpoint-flat
# integrands like exp(-1/(1-t^2)) are never sampled where they are defined
# only by continuity.
_GL15_X, _GL15_W = np.polynomial.legendre.leggauss(15)
_GL7_X, _GL7_W = np.polynomial.legendre.leggauss(7)
_PANEL_X = np.concatenate([_GL15_X, _GL7_X])
_PANEL_EVALS = _PANEL_X.size


def evaluation_budget() -> int:
    """Current quadrature budget; the BERNSTEIN_BUDGET env var overrides."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise DomainError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if value < _PANEL_EVALS:
        raise DomainError(f"{BUDGET_ENV} must allow at least one panel ({_PANEL_EVALS})")
    return value


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise EvaluationError("quadrature produced a non-finite value")
        if self.error_estimate < 0 or self.evaluations < 1:
            raise DomainError("invalid quadrature result fields")


@dataclass(frozen=True)
class GridSupResult:
    sup_value: float
    arg: float
    grid_points: int
    refinement_levels: int


def _panel_estimates(f, lo: float, hi: float):
    """Gauss 15/7 estimates of one panel. Returns (I15, err)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fx = np.asarray(f(mid + half * _PANEL_X), dtype=float)
    if fx.shape != (_PANEL_EVALS,):
        fx = np.broadcast_to(fx, (_PANEL_EVALS,)).astype(float)
    if not np.all(np.isfinite(fx)):
        raise EvaluationError(f"integrand returned non-finite value on [{lo}, {hi}]")
    i15 = half * float(_GL15_W @ fx[:15])
    i7 = half * float(_GL7_W @ fx[15:])
    return i15, abs(i15 - i7)


def integrate_bump(
    f: Callable,
    a: float,
    b: float,
    tol: float,
    *,
    budget: int | None = None,
    split_points: Sequence[float] = (),
) -> QuadratureResult:
    """Adaptive quadrature of ``f`` over ``(a, b)``.

    Panels are bisected worst-error-first until the summed error estimate
    drops below ``tol``.  ``split_points`` seeds panel edges at known kinks
    (for example the corner of ``|x + t|`` inside the window).  Endpoints
    are never sampled.
    """
    if not a < b:
        raise DomainError(f"integration interval is empty: [{a}, {b}]")
    if not tol > 0:
        raise DomainError("tol must be positive")
    if budget is None:
        budget = evaluation_budget()

    edges = [a]
    for s in sorted(set(float(p) for p in split_points)):
        if a < s < b:
            edges.append(s)
    edges.append(b)

    evaluations = 0
    counter = 0
    heap = []  # (-err, counter, lo, hi, value, err)
    total_value = 0.0
    total_err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, err = _panel_estimates(f, lo, hi)
        evaluations += _PANEL_EVALS
        heapq.heappush(heap, (-err, counter, lo, hi, value, err))
        counter += 1
        total_value += value
        total_err += err

    min_width = 1e-15 * (b - a)
    frozen_value = 0.0  # panels too narrow to split further
    frozen_err = 0.0
    sweep_defect = 0.0

    def exhausted(extra_value, extra_err):
        return BudgetExhaustedError(
            f"quadrature budget ({budget}) exhausted before reaching tol={tol}",
            best_estimate=frozen_value + total_value + extra_value,
            error_estimate=frozen_err + total_err + extra_err,
            evaluations=evaluations,
        )

    while True:
        # worst-error-first refinement of the panel heap
        while heap and total_err + frozen_err > tol:
            _, _, lo, hi, value, err = heapq.heappop(heap)
            total_value -= value
            total_err -= err
            if hi - lo <= min_width or err == 0.0:
                frozen_value += value
                frozen_err += err
                continue
            if evaluations + 2 * _PANEL_EVALS > budget:
                raise exhausted(value, err)
            mid = 0.5 * (lo + hi)
            for plo, phi_ in ((lo, mid), (mid, hi)):
                v, e = _panel_estimates(f, plo, phi_)
                evaluations += _PANEL_EVALS
                heapq.heappush(heap, (-e, counter, plo, phi_, v, e))
                counter += 1
                total_value += v
                total_err += e

        # Verification sweep: the embedded-pair difference can be
        # coincidentally tiny on a panel containing a kink, so bisect every
        # surviving panel once and accept only if the total barely moves.
        splittable = [item for item in heap
                      if item[3] - item[2] > min_width
                      and not (item[4] == 0.0 and item[5] == 0.0)]
        if not splittable:
            break
        if evaluations + 2 * _PANEL_EVALS * len(splittable) > budget:
            raise exhausted(0.0, 0.0)
        old_value = total_value
        kept = [item for item in heap if item not in splittable]
        heap = kept
        total_value = sum(item[4] for item in kept)
        total_err = sum(item[5] for item in kept)
        for _, _, lo, hi, value, err in splittable:
            mid = 0.5 * (lo + hi)
            for plo, phi_ in ((lo, mid), (mid, hi)):
                v, e = _panel_estimates(f, plo, phi_)
                evaluations += _PANEL_EVALS
                heap.append((-e, counter, plo, phi_, v, e))
                counter += 1
                total_value += v
                total_err += e
        heapq.heapify(heap)
        sweep_defect = abs(total_value - old_value)
        if sweep_defect <= tol and total_err + frozen_err <= tol:
            break

    parts = [frozen_value] + [item[4] for item in heap]
    value = math.fsum(parts)
    return QuadratureResult(
        value=value,
        error_estimate=frozen_err + total_err + sweep_defect,
        evaluations=evaluations,
    )


def _parabolic_polish(f, xs: np.ndarray, fs: np.ndarray, idx: int):
    """One parabolic-vertex refinement around an interior grid argmax.

    Returns ``(value, arg, extra_evals)``; never below the grid value.
    """
    if idx <= 0 or idx >= xs.size - 1:
        return fs[idx], xs[idx], 0
    x0, x1, x2 = xs[idx - 1], xs[idx], xs[idx + 1]
    f0, f1, f2 = fs[idx - 1], fs[idx], fs[idx + 1]
    denom = (f0 - 2.0 * f1 + f2)
    if denom >= 0 or not np.isfinite(denom):
        return fs[idx], xs[idx], 0
    # equispaced three-point parabola vertex
    h = 0.5 * (x2 - x0)
    shift = 0.5 * h * (f0 - f2) / denom
    v = x1 + np.clip(shift, -h, h)
    fv = float(np.asarray(f(np.array([v])), dtype=float)[0])
    if np.isfinite(fv) and fv > f1:
        return fv, float(v), 1
    return f1, x1, 1


def grid_sup(
    f: Callable,
    lo: float,
    hi: float,
    tol: float,
    *,
    max_levels: int = 20,
    candidates: Iterable[float] | None = None,
    polish: bool = True,
) -> GridSupResult:
    """Supremum of ``f`` over ``[lo, hi]`` on an adaptively refined dyadic grid.

    Starts from 257 points and doubles until the inter-level change drops
    below ``tol`` (or ``max_levels``).  ``candidates`` are evaluated exactly
    and folded into the result; for a purely discrete candidate set pass
    ``lo == hi`` bounds with the candidates, which makes the result exact.
    A final parabolic step refines an interior smooth maximum well below
    ``tol``.
    """
    if lo > hi:
        raise DomainError(f"empty interval: lo={lo} > hi={hi}")
    if not tol > 0:
        raise DomainError("tol must be positive")

    cand = [float(c) for c in candidates or [] if lo <= c <= hi]
    best_val = -math.inf
    best_arg = math.nan
    evals = 0
    if cand:
        fc = np.asarray(f(np.array(cand)), dtype=float)
        if not np.all(np.isfinite(fc)):
            raise EvaluationError("function returned non-finite value at a candidate")
        evals += len(cand)
        j = int(np.argmax(fc))
        best_val = float(fc[j])
        best_arg = cand[j]

    if lo == hi:
        fx = float(np.asarray(f(np.array([lo])), dtype=float)[0])
        evals += 1
        if fx >= best_val:
            best_val, best_arg = fx, lo
        return GridSupResult(best_val, best_arg, evals, 0)

    n = 257
    levels = 0
    prev_sup = None
    xs = fs = None
    while True:
        xs = np.linspace(lo, hi, n)
        fs = np.asarray(f(xs), dtype=float)
        if not np.all(np.isfinite(fs)):
            raise EvaluationError("function returned non-finite value on the grid")
        evals += n
        sup = float(np.max(fs))
        if prev_sup is not None and abs(sup - prev_sup) < tol:
            break
        prev_sup = sup
        levels += 1
        if levels >= max_levels or n > 2_000_000:
            break
        n = 2 * n - 1

    idx = int(np.argmax(fs))
    sup, arg = fs[idx], xs[idx]
    if polish:
        sup, arg, extra = _parabolic_polish(f, xs, fs, idx)
        evals += extra
    if sup >= best_val:
        best_val, best_arg = float(sup), float(arg)
    return GridSupResult(best_val, best_arg, evals, levels)


def window_sup_batch(
    f: Callable,
    centers: np.ndarray,
    radii: np.ndarray,
    *,
    n: int = 513,
) -> np.ndarray:
    """Suprema of ``f`` over ``[c_i - r_i, c_i + r_i]`` for a batch of windows.

    Fixed-size grid per window plus one parabolic-vertex refinement; used by
    the smoothing integrals where thousands of window suprema are needed per
    quadrature panel.  Consistent with :func:`grid_sup` to ~1e-12.
    """
    centers = np.atleast_1d(np.asarray(centers, dtype=float))
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    u = np.linspace(-1.0, 1.0, n)
    pts = centers[:, None] + radii[:, None] * u[None, :]
    vals = np.asarray(f(pts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("function returned non-finite value in a window")
    idx = np.argmax(vals, axis=1)
    rows = np.arange(centers.size)
    sup = vals[rows, idx]

    interior = (idx > 0) & (idx < n - 1) & (radii > 0)
    if np.any(interior):
        i = idx[interior]
        r = rows[interior]
        f0 = vals[r, i - 1]
        f1 = vals[r, i]
        f2 = vals[r, i + 1]
        denom = f0 - 2.0 * f1 + f2
        h = radii[interior] * (2.0 / (n - 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            shift = np.where(denom < 0, 0.5 * h * (f0 - f2) / denom, 0.0)
        shift = np.clip(shift, -h, h)
        v = pts[r, i] + shift
        fv = np.asarray(f(v[:, None]), dtype=float)[:, 0]
        sup_interior = np.maximum(f1, np.where(np.isfinite(fv), fv, -np.inf))
        out = sup.copy()
        out[interior] = sup_interior
        sup = out
    return sup


def central_diff(f: Callable, x: float, h: float) -> float:
    """Symmetric difference quotient ``(f(x+h) - f(x-h)) / (2h)``."""
    if not h > 0:
        raise DomainError("h must be positive")
    try:
        vals = np.asarray(f(np.array([x + h, x - h])), dtype=float)
        if vals.shape != (2,):
            raise TypeError
    except TypeError:  # scalar-only function
        vals = np.array([float(f(x + h)), float(f(x - h))])
    if not np.all(np.isfinite(vals)):
        raise EvaluationError(f"function returned non-finite value near x={x}")
    return float((vals[0] - vals[1]) / (2.0 * h))
