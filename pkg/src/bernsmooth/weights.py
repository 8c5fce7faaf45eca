"""Weights on the real line.

Two representations cover every example used here: an evaluable function
with a stated uniform bound, and a discrete weight carried by finitely many
support points.  Also: the upper-Baire regularization, class-membership
diagnostics (polynomial decay, unbounded support, upper semicontinuity),
and the log-spaced step majorant.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, EvaluationError
from .numerics import grid_sup


@dataclass(frozen=True)
class Weight:
    """A nonnegative, uniformly bounded weight.

    kind = "evaluable": ``fn`` is vectorized over numpy arrays; values are
    clamped into ``[0, bound]``.  kind = "discrete": nonzero only at the
    strictly increasing ``support_points`` (exact float match).
    """

    kind: str
    bound: float
    fn: Callable | None = None
    support_points: np.ndarray | None = None
    support_values: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("evaluable", "discrete"):
            raise DomainError(f"unknown weight kind {self.kind!r}")
        if not self.bound > 0:
            raise DomainError("bound must be positive")
        if self.kind == "evaluable":
            if self.fn is None:
                raise DomainError("evaluable weight needs fn")
        else:
            pts = np.asarray(self.support_points, dtype=float)
            vals = np.asarray(self.support_values, dtype=float)
            if pts.ndim != 1 or pts.shape != vals.shape or pts.size == 0:
                raise DomainError("discrete weight needs matching 1-d points/values")
            if not np.all(np.diff(pts) > 0):
                raise DomainError("support points must be strictly increasing")
            if not np.all(vals > 0):
                raise DomainError("support values must be strictly positive")
            if not np.all(vals <= self.bound):
                raise DomainError("support values exceed the stated bound")
            object.__setattr__(self, "support_points", pts)
            object.__setattr__(self, "support_values", vals)

    @classmethod
    def from_function(cls, fn: Callable, bound: float, name: str = "") -> "Weight":
        return cls(kind="evaluable", bound=bound, fn=fn, name=name)

    @classmethod
    def from_points(cls, points: Sequence[float], values: Sequence[float],
                    bound: float | None = None, name: str = "") -> "Weight":
        values = np.asarray(values, dtype=float)
        if bound is None:
            bound = float(np.max(values))
        return cls(kind="discrete", bound=bound,
                   support_points=np.asarray(points, dtype=float),
                   support_values=values, name=name)

    @classmethod
    def zero(cls) -> "Weight":
        return cls.from_function(lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                                 bound=1.0, name="zero")


def eval_weight(w: Weight, x):
    """Evaluate ``w`` at a scalar or array ``x``."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if w.kind == "discrete":
        out = np.zeros(arr.shape)
        idx = np.searchsorted(w.support_points, arr.ravel())
        idx = np.clip(idx, 0, w.support_points.size - 1)
        hit = w.support_points[idx] == arr.ravel()
        out.ravel()[hit] = w.support_values[idx[hit]]
    else:
        out = np.asarray(w.fn(arr), dtype=float)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"weight {w.name or '<anonymous>'} returned NaN/inf")
        out = np.clip(out, 0.0, w.bound)
    return float(out[0]) if scalar else out.reshape(np.shape(x))


_DEFAULT_DELTAS = tuple(2.0 ** -k for k in range(1, 51))


def upper_baire(w: Weight, x: float, deltas: Sequence[float] | None = None) -> float:
    """Approximation of the upper Baire regularization at ``x``.

    Shrinks the neighborhood through ``deltas`` and returns the value once
    three consecutive suprema agree to 1e-12.  Exact for discrete weights
    with isolated support.
    """
    if w.kind == "discrete":
        return eval_weight(w, x)
    if deltas is None:
        deltas = _DEFAULT_DELTAS
    deltas = list(deltas)
    if not deltas or any(d <= 0 for d in deltas) or any(
            b >= a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("deltas must be a decreasing positive sequence")
    history = []
    for d in deltas:
        sup = grid_sup(lambda t: eval_weight(w, t), x - d, x + d,
                       tol=1e-13 * (1.0 + w.bound)).sup_value
        history.append(sup)
        if len(history) >= 3 and max(history[-3:]) - min(history[-3:]) <= 1e-12:
            break
    return history[-1]


@dataclass
class ClassReport:
    bounded_ok: bool
    support_unbounded_ok: bool
    decay_ok_up_to: int
    usc_ok: bool
    notes: str = ""
    n_max: int = 0

    @property
    def passed(self) -> bool:
        return (self.bounded_ok and self.support_unbounded_ok
                and self.usc_ok and self.decay_ok_up_to >= self.n_max)


def class_check(w: Weight, n_max: int, radius: float, seed: int = 0) -> ClassReport:
    """Diagnostics for membership in the admissible weight class.

    Probes ``|x|^n w(x) -> 0`` at geometric samples up to ``radius`` for
    each ``n <= n_max``, whether the support plausibly reaches out to
    ``radius``, and whether ``w`` agrees with its upper-Baire regularization
    at random points.  Purely diagnostic; never raises on a "bad" weight.
    """
    if n_max < 0 or radius <= 0:
        raise DomainError("need n_max >= 0 and radius > 0")
    rng = np.random.default_rng(seed)

    if w.kind == "discrete":
        xs = w.support_points[np.abs(w.support_points) <= radius]
        vals = eval_weight(w, xs) if xs.size else np.array([])
        far = np.abs(w.support_points).max() >= radius / 2
    else:
        r = np.geomspace(1e-2, radius, 64)
        xs = np.concatenate([-r[::-1], r])
        vals = eval_weight(w, xs)
        far = bool(np.any(vals[np.abs(xs) >= radius / 2] > 0))

    bounded_ok = bool(np.all(vals <= w.bound * (1 + 1e-12))) if vals.size else True

    decay_ok_up_to = -1
    if xs.size:
        order = np.argsort(np.abs(xs))
        ax = np.abs(xs)[order]
        v = vals[order]
        for n in range(n_max + 1):
            g = ax ** n * v
            peak = g.max() if g.size else 0.0
            tail = g[ax >= ax.max() / 2]
            ok = peak == 0.0 or (tail.size > 0 and tail.max() <= 0.1 * peak)
            if not ok:
                break
            decay_ok_up_to = n
    decay_ok_up_to = max(decay_ok_up_to, 0)

    probes = rng.uniform(-radius, radius, size=16)
    if w.kind == "discrete":
        probes = np.concatenate([probes, w.support_points])
    usc_ok = True
    for x in probes:
        if upper_baire(w, float(x)) > eval_weight(w, float(x)) + 1e-12:
            usc_ok = False
            break

    return ClassReport(
        bounded_ok=bounded_ok,
        support_unbounded_ok=bool(far),
        decay_ok_up_to=decay_ok_up_to,
        usc_ok=usc_ok,
        notes=f"probed n<={n_max} up to |x|<={radius}",
        n_max=n_max,
    )


@dataclass(frozen=True)
class StepWeight:
    """Piecewise-constant majorant on log-spaced segments.

    Segment ``n`` spans ``[sign(n)*log1p(|n|), sign(n)*log1p(|n|+1))`` for
    ``n != 0``; the segment for ``n = 0`` is taken as ``[0, log 2)`` so that
    the covered range has no gap.  ``values[i]`` is the supremum of the
    underlying weight over the closed segment.
    """

    breakpoints: np.ndarray  # ascending, size m+1
    values: np.ndarray       # size m
    indices: np.ndarray      # segment index n per value

    def __call__(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(arr.shape)
        inside = (arr >= self.breakpoints[0]) & (arr < self.breakpoints[-1])
        pos = np.searchsorted(self.breakpoints, arr[inside], side="right") - 1
        out[inside] = self.values[np.clip(pos, 0, self.values.size - 1)]
        return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])

    def as_weight(self) -> Weight:
        bound = float(max(self.values.max(), 1e-300))
        return Weight.from_function(self, bound=max(bound, 1e-300), name="step")


def _segment(n: int) -> tuple[float, float]:
    if n == 0:
        return 0.0, math.log1p(1)
    if n > 0:
        return math.log1p(n), math.log1p(n + 1)
    return -math.log1p(-n), -math.log1p(-n - 1)


def step_weight(w: Weight, n_range: int) -> StepWeight:
    """The log-spaced step majorant restricted to segments ``|n| <= n_range``."""
    if n_range < 1:
        raise DomainError("n_range must be >= 1")
    ns = list(range(-n_range, n_range + 1))
    segs = [_segment(n) for n in ns]
    values = []
    for left, right in segs:
        if w.kind == "discrete":
            mask = (w.support_points >= left) & (w.support_points <= right)
            values.append(float(w.support_values[mask].max()) if np.any(mask) else 0.0)
        else:
            values.append(grid_sup(lambda t: eval_weight(w, t), left, right,
                                   tol=1e-12 * (1.0 + w.bound)).sup_value)
    breakpoints = np.array([segs[0][0]] + [s[1] for s in segs])
    return StepWeight(breakpoints=breakpoints, values=np.array(values),
                      indices=np.array(ns))


def builtin_weight(name: str, params: dict | None = None, bound: float = 1.0) -> Weight:
    params = params or {}
    if name == "exp_abs":
        fn = lambda x: np.exp(-np.abs(np.asarray(x, dtype=float)))
    elif name == "gauss":
        fn = lambda x: np.exp(-np.asarray(x, dtype=float) ** 2)
    elif name == "freud":
        alpha = float(params.get("alpha", 1.5))
        if alpha <= 0:
            raise DomainError("freud weight needs alpha > 0")
        fn = lambda x: np.exp(-np.abs(np.asarray(x, dtype=float)) ** alpha)
    elif name == "zero":
        return Weight.zero()
    else:
        raise DomainError(f"unknown builtin weight {name!r}")
    return Weight.from_function(fn, bound=bound, name=name)


def weight_from_json(obj: dict | str) -> Weight:
    """Parse the JSON weight schema (dict, JSON text, or a file path)."""
    if isinstance(obj, str):
        text = obj
        if not text.lstrip().startswith("{"):
            with open(text) as fh:
                text = fh.read()
        obj = json.loads(text)
    kind = obj.get("kind")
    if kind == "discrete":
        pts = obj.get("points")
        if not pts:
            raise DomainError("discrete weight JSON needs nonempty 'points'")
        xs = [p[0] for p in pts]
        vs = [p[1] for p in pts]
        order = np.argsort(xs)
        return Weight.from_points(np.asarray(xs)[order], np.asarray(vs)[order],
                                  bound=obj.get("bound"))
    if kind == "builtin":
        return builtin_weight(obj.get("name", ""), obj.get("params"),
                              bound=float(obj.get("bound", 1.0)))
    raise DomainError(f"unknown weight JSON kind {kind!r}")
