"""Entire functions of minimal exponential type with real simple zeros.

Truncated infinite products evaluated in log-magnitude with sign tracking,
derivatives at zeros, the reciprocal-derivative sum controlling all
perturbation constants, growth-type diagnostics, the explicit zero
perturbation plan with its verified conclusion, and the auxiliary ratio /
growth / separation inequalities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .reports import BoundReport

__all__ = [
    "ZeroSet", "EntireProduct", "PerturbationPlan", "counting",
    "eval_product", "derivative_at_zero", "log_derivative_at_zero", "theta",
    "theta_terms", "type_estimate", "lemma1_constants", "perturb",
    "separation_check", "ratio_bound_check", "cauchy_bound_check",
    "zeros_from_json", "zero_family",
]

_SYMMETRY_TIE_TOL = 1e-12


@dataclass(frozen=True)
class ZeroSet:
    """A finite, strictly increasing set of nonzero real simple zeros.

    Stands for a (possibly truncated) zero set of an entire function of
    minimal exponential type; ``truncation_note`` names the infinite family
    it samples.
    """

    zeros: np.ndarray
    truncation_note: str = ""

    def __post_init__(self):
        z = np.asarray(self.zeros, dtype=float)
        if z.ndim != 1 or z.size == 0:
            raise DomainError("zeros must be a nonempty 1-d array")
        if not np.all(np.isfinite(z)):
            raise DomainError("zeros must be finite")
        if np.any(z == 0.0):
            raise DomainError("0 must not be a zero (origin normalization)")
        if not np.all(np.diff(z) > 0):
            raise DomainError("zeros must be strictly increasing (simple zeros)")
        object.__setattr__(self, "zeros", z)

    @property
    def size(self) -> int:
        return self.zeros.size


@dataclass(frozen=True)
class EntireProduct:
    """``B(z) = a0 * prod (1 - z/lambda)`` over a finite zero set.

    Evaluation is in log-magnitude plus sign (``log_scale``), so products
    whose magnitude leaves the double range still behave.
    """

    zeros: ZeroSet
    a0: float = 1.0
    log_scale: bool = True

    def __post_init__(self):
        if self.a0 == 0.0 or not math.isfinite(self.a0):
            raise DomainError("a0 must be finite and nonzero")


def zero_family(family: str, n_max: int, signs: str = "both",
                note: str | None = None) -> ZeroSet:
    """Stock truncated families: ``n_squared`` (+-n^2) and ``lacunary_2n`` (+-2^n)."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if family == "n_squared":
        pos = np.array([float(n * n) for n in range(1, n_max + 1)])
    elif family == "lacunary_2n":
        pos = np.array([float(2 ** n) for n in range(1, n_max + 1)])
    else:
        raise DomainError(f"unknown zero family {family!r}")
    if signs == "both":
        zeros = np.concatenate([-pos[::-1], pos])
    elif signs == "plus":
        zeros = pos
    else:
        raise DomainError(f"signs must be 'both' or 'plus', got {signs!r}")
    if note is None:
        note = f"{family}, n <= {n_max}, signs={signs}"
    return ZeroSet(zeros=zeros, truncation_note=note)


def zeros_from_json(obj: dict | str) -> EntireProduct:
    """Parse the JSON zero-set schema (dict, JSON text, or a file path)."""
    import json
    if isinstance(obj, str):
        text = obj
        if not text.lstrip().startswith("{"):
            with open(text) as fh:
                text = fh.read()
        obj = json.loads(text)
    a0 = float(obj.get("a0", 1.0))
    if "zeros" in obj:
        zs = ZeroSet(np.sort(np.asarray(obj["zeros"], dtype=float)),
                     truncation_note=obj.get("note", "custom"))
        return EntireProduct(zeros=zs, a0=a0)
    family = obj.get("family")
    if family == "custom":
        raise DomainError("family 'custom' requires an explicit 'zeros' list")
    if family is None:
        raise DomainError("zero-set JSON needs 'zeros' or 'family'")
    zs = zero_family(family, int(obj.get("n_max", 1)),
                     obj.get("signs", "both"))
    return EntireProduct(zeros=zs, a0=a0)


# ---------------------------------------------------------------------------
# evaluation

def counting(zs: ZeroSet, R: float) -> tuple[int, float]:
    """Zero count and reciprocal sum inside ``(-R, R)``."""
    if not R > 0:
        raise DomainError("R must be positive")
    inside = np.abs(zs.zeros) < R
    n = int(np.count_nonzero(inside))
    delta_sum = math.fsum(1.0 / lam for lam in zs.zeros[inside])
    return n, delta_sum


def eval_product(B: EntireProduct, x: float) -> tuple[int, float]:
    """Signed log-magnitude of ``B`` at a real point.

    Returns ``(sign, log|B(x)|)``; at a zero the sign is 0 and the log is
    ``-inf``.
    """
    terms = 1.0 - float(x) / B.zeros.zeros
    if np.any(terms == 0.0):
        return 0, -math.inf
    sign = int(np.sign(B.a0)) * (-1 if np.count_nonzero(terms < 0) % 2 else 1)
    log_abs = math.log(abs(B.a0)) + float(np.sum(np.log(np.abs(terms))))
    return sign, log_abs


def eval_product_value(B: EntireProduct, x: float) -> float:
    """``B(x)`` as a plain float (may over/underflow for extreme products)."""
    sign, log_abs = eval_product(B, x)
    if sign == 0:
        return 0.0
    return sign * math.exp(log_abs)


def _log_abs_complex(B: EntireProduct, z: complex) -> float:
    """log |B(z)| for complex z, overflow-safe."""
    terms = 1.0 - z / B.zeros.zeros.astype(complex)
    mags = np.abs(terms)
    if np.any(mags == 0.0):
        return -math.inf
    return math.log(abs(B.a0)) + float(np.sum(np.log(mags)))


def log_derivative_at_zero(B: EntireProduct, lam: float) -> tuple[int, float]:
    """Sign and log-magnitude of ``B'`` at the zero ``lam``.

    Product rule on the zero product: ``B'(lam) = -(a0/lam) *
    prod_{mu != lam} (1 - lam/mu)``.
    """
    zeros = B.zeros.zeros
    idx = np.searchsorted(zeros, lam)
    if idx >= zeros.size or zeros[idx] != lam:
        raise DomainError(f"{lam} is not a zero of the product")
    others = np.delete(zeros, idx)
    terms = 1.0 - lam / others
    sign = -int(np.sign(B.a0 / lam))
    sign *= (-1 if np.count_nonzero(terms < 0) % 2 else 1)
    log_abs = math.log(abs(B.a0 / lam)) + float(np.sum(np.log(np.abs(terms))))
    return sign, log_abs


def derivative_at_zero(B: EntireProduct, lam: float) -> float:
    """``B'(lam)`` as a float; finite and nonzero for modest products."""
    sign, log_abs = log_derivative_at_zero(B, lam)
    return sign * math.exp(log_abs)


def theta_terms(B: EntireProduct) -> np.ndarray:
    """Terms ``1/|B'(lambda)|`` ordered as the zeros are."""
    return np.array([math.exp(-log_derivative_at_zero(B, lam)[1])
                     for lam in B.zeros.zeros])


def theta(B: EntireProduct) -> float:
    """The reciprocal-derivative sum over the truncated zero set."""
    return math.fsum(theta_terms(B))


def type_estimate(B: EntireProduct, radii: Sequence[float],
                  angle_samples: int = 360) -> list[tuple[float, float]]:
    """Decay trace of ``log max_{|z|=r} |B| / r`` over the given radii.

    Heuristic diagnostic for minimal exponential type, not a proof.
    """
    radii = list(radii)
    if not radii or any(r <= 0 for r in radii):
        raise DomainError("radii must be positive")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise DomainError("radii must be increasing")
    out = []
    thetas = np.linspace(0.0, math.pi, angle_samples, endpoint=False)
    for r in radii:
        zs = r * np.exp(1j * thetas)
        log_m = max(_log_abs_complex(B, complex(z)) for z in zs)
        out.append((float(r), log_m / r))
    return out


# ---------------------------------------------------------------------------
# perturbation constants

@dataclass(frozen=True)
class PerturbationPlan:
    """Explicit constants of the zero-perturbation construction.

    All per-zero quantities are expressed in the original (untranslated)
    frame; ``translation`` is the normalizing shift applied internally so
    that the zero set straddles the origin symmetrically (0 when the input
    already does).  ``delta_effective`` is the clamped value used for the
    constants when ``delta >= 1/e`` (larger offsets reuse the clamped
    constants).
    """

    delta: float
    eps: float
    c_eps: float
    log_c_eps: float
    rho_delta: float
    log_rho_delta: float
    deltas_lambda: np.ndarray
    c_delta: float
    theta_b: float
    translation: float
    delta_effective: float
    zeros: np.ndarray
    shifts: np.ndarray | None = None

    def admissible_radius(self, lam: float) -> float:
        """Largest admissible |shift| for the zero ``lam``."""
        return self.rho_delta * math.exp(-self.delta * abs(lam))


def _normalized_translation(zeros: np.ndarray) -> float:
    """Translation ``a`` making ``zeros - a`` satisfy the origin normalization."""
    has_pos = zeros[-1] > 0
    has_neg = zeros[0] < 0
    if has_pos and has_neg:
        i = int(np.searchsorted(zeros, 0.0))
        lam1, lam2 = zeros[i - 1], zeros[i]
        if abs(lam1 + lam2) <= _SYMMETRY_TIE_TOL * max(abs(lam1), abs(lam2)):
            return 0.0
        return 0.5 * (lam1 + lam2)
    if has_pos:  # bounded below by a positive number
        if zeros[0] > 1.0:
            return 0.0
        return zeros[0] - 1.0 - 1.0  # shift so min(zeros - a) > 1
    if zeros[-1] < -1.0:
        return 0.0
    return zeros[-1] + 2.0


def _estimate_log_c_eps(B: EntireProduct, eps: float,
                        circle_samples: int) -> float:
    """log of sup_z e^{-eps|z|} |B(z)|, estimated on 16 geometric circles.

    An overestimate (the 1.05 factor) is the conservative direction: it
    only shrinks the admissible radii and grows the final constant.
    """
    r_max = 10.0 * float(np.max(np.abs(B.zeros.zeros)))
    radii = np.geomspace(1.0, max(r_max, 2.0), 16)
    thetas = np.linspace(0.0, math.pi, circle_samples, endpoint=False)
    best = -math.inf
    zeros = B.zeros.zeros.astype(complex)
    log_a0 = math.log(abs(B.a0))
    for r in radii:
        zs = r * np.exp(1j * thetas)
        terms = 1.0 - zs[:, None] / zeros[None, :]
        mags = np.abs(terms)
        mags[mags == 0.0] = np.finfo(float).tiny
        logs = log_a0 + np.sum(np.log(mags), axis=1) - eps * r
        best = max(best, float(np.max(logs)))
    if not math.isfinite(best):
        raise PreconditionError("growth estimate is non-finite")
    return best + math.log(1.05)


def lemma1_constants(B: EntireProduct, delta: float,
                     circle_samples: int = 720) -> PerturbationPlan:
    """Compute the explicit perturbation constants for offset ``delta``.

    ``eps = delta/2``; the admissible-radius constant is
    ``(e^{-eps} / (4 + 8 C_eps Theta))^2`` (always below 1/16), the
    per-zero interval radii are ``sqrt(rho) e^{-eps|lambda|}`` (below 1/4),
    and the conclusion constant is ``4 |B(0)| prod (1 + radius)^2``.
    Offsets at or beyond 1/e reuse the constants of the clamped offset.
    """
    if not delta > 0:
        raise PreconditionError("delta must be positive")
    delta_eff = min(delta, (1.0 - 1e-9) / math.e)
    eps = delta_eff / 2.0

    a = _normalized_translation(B.zeros.zeros)
    shifted = B.zeros.zeros - a
    if a != 0.0:
        a0_norm = eval_product_value(B, a)
        if a0_norm == 0.0 or not math.isfinite(a0_norm):
            raise PreconditionError("translation landed on a zero or overflowed")
        B_norm = EntireProduct(ZeroSet(shifted, B.zeros.truncation_note),
                               a0=a0_norm)
    else:
        B_norm = B

    theta_b = theta(B_norm)
    if not math.isfinite(theta_b):
        raise PreconditionError("reciprocal-derivative sum is not finite")

    log_c_eps = _estimate_log_c_eps(B_norm, eps, circle_samples)
    c_eps = math.exp(log_c_eps) if log_c_eps < 700 else math.inf
    # log(4 + 8 C Theta), stable for huge C
    log_8ct = math.log(8.0) + log_c_eps + math.log(theta_b)
    log_denom = np.logaddexp(math.log(4.0), log_8ct)
    log_rho_norm = 2.0 * (-eps - log_denom)
    log_rho = log_rho_norm - delta_eff * abs(a)  # translate back
    rho_delta = math.exp(log_rho)

    # per-zero radii and the conclusion constant live in the normalized frame
    log_sqrt_rho = 0.5 * log_rho_norm
    log_deltas = log_sqrt_rho - eps * np.abs(shifted)
    deltas_lambda = np.exp(log_deltas)
    log_c_delta = math.log(4.0 * abs(B_norm.a0)) + \
        2.0 * float(np.sum(np.log1p(deltas_lambda)))
    c_delta = math.exp(log_c_delta)

    return PerturbationPlan(
        delta=delta, eps=eps, c_eps=c_eps, log_c_eps=log_c_eps,
        rho_delta=rho_delta, log_rho_delta=log_rho,
        deltas_lambda=deltas_lambda, c_delta=c_delta, theta_b=theta_b,
        translation=a, delta_effective=delta_eff,
        zeros=B.zeros.zeros.copy())


def perturb(B: EntireProduct, plan: PerturbationPlan,
            shifts: Sequence[float]) -> tuple[EntireProduct, BoundReport]:
    """Apply admissible per-zero shifts and verify the derivative conclusion.

    Checks every ``|B'(lambda)| <= C_delta |D'(d_lambda)|`` (in log
    magnitudes, so extreme products stay comparable) and the pairwise
    disjointness of the per-zero ``2 Delta`` intervals.
    """
    shifts = np.asarray(shifts, dtype=float)
    zeros = plan.zeros
    if shifts.shape != zeros.shape:
        raise PreconditionError("one shift per zero required")
    radii = plan.rho_delta * np.exp(-plan.delta * np.abs(zeros))
    bad = np.abs(shifts) > radii * (1.0 + 1e-12)
    if np.any(bad):
        lam = zeros[bad][0]
        raise PreconditionError(
            f"shift at lambda={lam} exceeds the admissible radius "
            f"{plan.rho_delta * math.exp(-plan.delta * abs(lam))}")

    new_zeros = zeros + shifts
    if np.any(np.diff(new_zeros) <= 0) or np.any(new_zeros == 0.0):
        raise PreconditionError("shifts destroyed the simple-zero ordering")
    D = EntireProduct(ZeroSet(new_zeros, B.zeros.truncation_note), a0=1.0)

    report = BoundReport(tolerance=1e-9,
                         notes="log|B'(lambda)| <= log C_delta + log|D'(d)| "
                               "plus 2*Delta interval disjointness "
                               "(normalized frame)")
    log_cd = math.log(plan.c_delta)
    for lam, d in zip(zeros, new_zeros):
        _, log_bp = log_derivative_at_zero(B, lam)
        _, log_dp = log_derivative_at_zero(D, d)
        report.add(lam, log_bp, log_cd + log_dp, "derivative-ratio")

    norm = zeros - plan.translation
    left = norm - 2.0 * plan.deltas_lambda
    right = norm + 2.0 * plan.deltas_lambda
    for i in range(zeros.size - 1):
        report.add(zeros[i], right[i], left[i + 1], "interval-disjoint")
        mid = 0.5 * (norm[i] + norm[i + 1])
        # midpoint of adjacent zeros outside both 2*Delta intervals
        report.add(zeros[i], right[i], mid, "midpoint-exclusion")
        report.add(zeros[i + 1], mid, left[i + 1], "midpoint-exclusion")
    # origin outside every 2*Delta interval (normalized frame)
    for lam, l, r in zip(zeros, left, right):
        if l <= 0.0 <= r:
            report.add(lam, 1.0, 0.0, "origin-exclusion")
        else:
            report.add(lam, 0.0, 1.0, "origin-exclusion")
    return D, report


def separation_check(B: EntireProduct, delta: float,
                     circle_samples: int = 720) -> BoundReport:
    """Verify the zero-gap lower bound implied by the growth estimate.

    For every zero, the distance to the nearest other zero must exceed
    ``e^{-eps} e^{-eps|lambda|} / (1 + 2 C_eps Theta)`` with
    ``eps = delta/2``; compared in logs.
    """
    if not delta > 0:
        raise PreconditionError("delta must be positive")
    delta_eff = min(delta, (1.0 - 1e-9) / math.e)
    eps = delta_eff / 2.0
    theta_b = theta(B)
    log_c = _estimate_log_c_eps(B, eps, circle_samples)
    # log(1 + 2 C Theta)
    log_2ct = math.log(2.0) + log_c + math.log(theta_b)
    log_denom = np.logaddexp(0.0, log_2ct)
    zeros = B.zeros.zeros
    report = BoundReport(tolerance=0.0,
                         notes="log(nearest gap) > log bound; C_eps estimated, "
                               "conservative direction")
    for i, lam in enumerate(zeros):
        gaps = []
        if i > 0:
            gaps.append(lam - zeros[i - 1])
        if i < zeros.size - 1:
            gaps.append(zeros[i + 1] - lam)
        gap = min(gaps)
        log_bound = -eps - float(log_denom) - eps * abs(lam)
        report.add(lam, log_bound, math.log(gap), "separation")
    return report


def ratio_bound_check(a: float, b: float, x: float,
                      Delta: float) -> tuple[float, float, bool]:
    """The two-factor ratio inequality used termwise in the perturbation.

    Requires ``Delta in (0,1)``, ``b`` within ``Delta^2`` of ``a``, the
    origin outside the ``Delta`` interval around ``a`` and ``x`` outside
    the ``2 Delta`` interval.  Returns ``(ratio, (1+Delta)^2, pass)``.
    """
    if not 0.0 < Delta < 1.0:
        raise PreconditionError(f"Delta must lie in (0,1), got {Delta}")
    if not (a - Delta * Delta < b < a + Delta * Delta):
        raise PreconditionError("b must lie within Delta^2 of a")
    if a - Delta < 0.0 < a + Delta:
        raise PreconditionError("origin must lie outside (a-Delta, a+Delta)")
    if a - 2.0 * Delta < x < a + 2.0 * Delta:
        raise PreconditionError("x must lie outside (a-2Delta, a+2Delta)")
    ratio = abs((1.0 - x / a) / (1.0 - x / b))
    bound = (1.0 + Delta) ** 2
    return ratio, bound, ratio <= bound


def cauchy_bound_check(B: EntireProduct, eps: float,
                       grid: Sequence[complex],
                       circle_samples: int = 720) -> BoundReport:
    """Sampled check of the growth bounds on the derivative and on
    ``B(z)/(z - lambda)``.

    ``eps`` must lie in ``(0, 1/(2e))``.  The derivative is a complex
    central difference; the quotient uses the nearest zero (the worst one).
    """
    if not 0.0 < eps < 1.0 / (2.0 * math.e):
        raise PreconditionError(f"eps must lie in (0, 1/(2e)), got {eps}")
    grid = [complex(z) for z in grid]
    if not grid:
        raise PreconditionError("grid must be nonempty")
    log_c = _estimate_log_c_eps(B, eps, circle_samples)
    zeros = B.zeros.zeros

    def value(z: complex) -> complex:
        return B.a0 * complex(np.prod(1.0 - z / zeros.astype(complex)))

    report = BoundReport(tolerance=1e-9,
                         notes="log-domain comparison against the estimated "
                               "growth constant")
    for z in grid:
        h = 1e-6 * (1.0 + abs(z))
        dz = (value(z + h) - value(z - h)) / (2.0 * h)
        # Cauchy on a radius-1 circle around z
        log_bound = log_c + eps * (abs(z) + 1.0)
        log_dz = math.log(abs(dz)) if dz != 0 else -math.inf
        report.add(z.real, log_dz, log_bound, "derivative-growth")
        dist = float(np.min(np.abs(z - zeros.astype(complex))))
        if dist > 0:
            log_q = _log_abs_complex(B, z) - math.log(dist)
            report.add(z.real, log_q, log_bound, "quotient-growth")
    return report
