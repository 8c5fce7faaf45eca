"""Convergence diagnostics for reciprocal-derivative sums over zero sets.

The basic object is the sum of ``1/((1+lambda^2)^k w(lambda) |B'(lambda)|)``
over a truncated zero set, accumulated in increasing ``|lambda|``.  A
truncation can never decide convergence of the infinite sum, so verdicts
are three-way and the thresholds are documented on the report.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .entire import EntireProduct, ZeroSet, log_derivative_at_zero
from .errors import DomainError, PreconditionError, SupportViolationError
from .weights import Weight, eval_weight

__all__ = ["CriterionReport", "debranges_sum", "singular_profile",
           "subproduct_sums", "report_to_csv", "report_to_json"]

TAIL_TOL_SCALE = 1e-10
GROWTH_TOL = 1e-6
FINITE_SET_LIMIT = 20


@dataclass
class CriterionReport:
    """Partial sums of one criterion sum, ordered by increasing |lambda|."""

    lambdas: list[float] = field(default_factory=list)
    terms: list[float] = field(default_factory=list)
    partial_sums: list[float] = field(default_factory=list)
    k: int = 0
    verdict: str = "inconclusive"
    notes: str = ""

    @property
    def tail_indicator(self) -> float:
        return self.terms[-1] if self.terms else 0.0

    @property
    def total(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "lambdas": self.lambdas,
            "terms": self.terms,
            "partial_sums": self.partial_sums,
            "tail_indicator": self.tail_indicator,
            "total": self.total,
            "verdict": self.verdict,
            "notes": self.notes,
        }


def _decide_verdict(terms: list[float], sums: list[float],
                    finite_set: bool) -> str:
    """Three-way verdict from the truncated tail behaviour.

    ``converged``: last term negligible relative to the sum and the last
    decade of terms is decreasing.  ``diverging``: tail terms are not
    small and not decreasing.  Small sets are finite sums by fiat.
    """
    if finite_set:
        return "converged"
    s = sums[-1]
    rel_tail = terms[-1] / (s + 1.0)
    decade = terms[-(max(2, len(terms) // 10)):]
    decreasing = all(b <= a * (1.0 + 1e-12) for a, b in zip(decade, decade[1:]))
    if rel_tail < GROWTH_TOL and decreasing:
        return "converged"
    if rel_tail >= GROWTH_TOL and not all(
            b < a for a, b in zip(decade, decade[1:])):
        return "diverging"
    return "inconclusive"


def debranges_sum(w: Weight, B: EntireProduct, k: int = 0) -> CriterionReport:
    """Sum ``1/((1+lambda^2)^k w(lambda) |B'(lambda)|)`` over the zeros.

    Terms are accumulated with compensated summation in increasing
    ``|lambda|``; every zero must carry positive weight.
    """
    if k < 0:
        raise PreconditionError("k must be >= 0")
    zeros = B.zeros.zeros
    order = np.argsort(np.abs(zeros), kind="stable")
    lams = zeros[order]
    wvals = eval_weight(w, lams)
    if np.any(wvals <= 0.0):
        lam = float(lams[np.argmax(wvals <= 0.0)])
        raise SupportViolationError(
            f"weight vanishes at the zero lambda={lam}; every zero must lie "
            "in the support of the weight")

    report = CriterionReport(k=k)
    running = 0.0
    comp = 0.0  # Kahan compensation
    for lam, wv in zip(lams, wvals):
        _, log_bp = log_derivative_at_zero(B, float(lam))
        log_term = -k * math.log1p(lam * lam) - math.log(wv) - log_bp
        term = math.exp(log_term)
        y = term - comp
        t = running + y
        comp = (t - running) - y
        running = t
        report.lambdas.append(float(lam))
        report.terms.append(term)
        report.partial_sums.append(running)
    finite = lams.size <= FINITE_SET_LIMIT
    report.verdict = _decide_verdict(report.terms, report.partial_sums, finite)
    report.notes = (
        f"truncated zero set of size {lams.size}"
        + ("; finite truncation — all partial sums converge" if finite else "")
        + f"; tail_tol={TAIL_TOL_SCALE}*(sum+1) advisory, "
        f"verdict uses relative-tail {GROWTH_TOL} plus last-decade trend")
    return report


def singular_profile(w: Weight, E: EntireProduct,
                     k_max: int) -> tuple[list[CriterionReport], int | None]:
    """Criterion sums for shifts ``k = 0..k_max`` and the transition order.

    ``n_estimate`` is the smallest ``n`` whose report diverges while the
    report at ``n+1`` converges; ``None`` when no transition shows up in
    the truncation.  Requires a discrete weight.
    """
    if w.kind != "discrete":
        raise DomainError("singular profile requires a discrete weight")
    if k_max < 1:
        raise PreconditionError("k_max must be >= 1")
    reports = [debranges_sum(w, E, k) for k in range(k_max + 1)]
    n_estimate = None
    for n in range(k_max):
        if reports[n].verdict == "diverging" and \
                reports[n + 1].verdict == "converged":
            n_estimate = n
            break
    return reports, n_estimate


Selector = Callable[[np.ndarray], np.ndarray]

_NAMED_SELECTORS: dict[str, Selector] = {
    "all": lambda z: np.ones(z.size, dtype=bool),
    "every_other": lambda z: np.arange(z.size) % 2 == 0,
    "positive": lambda z: z > 0,
}


def subproduct_sums(w: Weight, E: EntireProduct,
                    families: Sequence[str | Selector]) -> list[CriterionReport]:
    """Criterion sums for products over selected zero subsets.

    Each selector (name or boolean-mask callable) keeps a subset of the
    zeros; the sum uses the subproduct's own derivative.  Only the supplied
    families are checked — nothing is decided about all infinite
    subfamilies.
    """
    zeros = E.zeros.zeros
    out = []
    for fam in families:
        if isinstance(fam, str):
            try:
                selector = _NAMED_SELECTORS[fam]
            except KeyError:
                raise DomainError(f"unknown selector {fam!r}") from None
            name = fam
        else:
            selector, name = fam, getattr(fam, "__name__", "custom")
        mask = np.asarray(selector(zeros), dtype=bool)
        kept = zeros[mask]
        if kept.size < 2:
            raise PreconditionError(
                f"selector {name!r} keeps {kept.size} zeros; a family needs "
                "at least 2")
        F = EntireProduct(ZeroSet(kept, f"{E.zeros.truncation_note} | {name}"))
        rep = debranges_sum(w, F, 0)
        rep.notes += f"; family={name}"
        if kept.size < zeros.size // 2:
            rep.notes += "; WARNING: fewer than half the zeros retained"
        if np.all(kept > 0) or np.all(kept < 0):
            rep.notes += "; one-sided family"
        rep.notes += "; only this finite family checked, not all subfamilies"
        out.append(rep)
    return out


def report_to_csv(report: CriterionReport, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("# schema=1\n")
        fh.write(f"# k={report.k} verdict={report.verdict}\n")
        fh.write("lambda,term,partial_sum\n")
        for lam, t, s in zip(report.lambdas, report.terms,
                             report.partial_sums):
            fh.write(f"{lam:.17g},{t:.17g},{s:.17g}\n")


def report_to_json(report: CriterionReport, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
