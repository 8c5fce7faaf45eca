"""Command-line front end.

Subcommands: ``smooth``, ``kappa``, ``perturb``, ``criterion``, ``verify``,
``stepweight``.  All delimited output starts with ``# schema=1``, uses 17
significant digits, and is byte-identical for identical config + seed.
Exit codes: 1 bad input, 2 precondition violation, 3 budget exhausted,
4 verification failed.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import criteria, entire, smoothing, weights
from .errors import (BernsmoothError, BudgetExhaustedError, DomainError,
                     EvaluationError, PreconditionError)

EXIT_BAD_INPUT = 1
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_VERIFY_FAILED = 4

RNG_ALGORITHM = "numpy.random.default_rng (PCG64)"


@dataclass
class RunConfig:
    command: str
    weight: str | None = None
    zeros: str | None = None
    eps: float = 0.5
    delta: float = 0.5
    rho: float = 0.5
    grid: tuple[float, float, int] = (-8.0, 8.0, 201)
    k: int = 0
    k_max: int | None = None
    seed: int = 0
    out: str | None = None
    tol: float | None = None
    shifts: str | None = None
    families: str | None = None
    n_max: int = 10
    plot: bool = False


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError("grid must be LO:HI:N")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if not (lo < hi and n >= 2):
        raise DomainError("grid requires lo < hi and at least 2 points")
    return lo, hi, n


def _load_weight(cfg: RunConfig) -> weights.Weight:
    if cfg.weight is None:
        raise DomainError("--weight FILE is required for this command")
    return weights.weight_from_json(cfg.weight)


def _load_product(cfg: RunConfig) -> entire.EntireProduct:
    if cfg.zeros is None:
        raise DomainError("--zeros FILE is required for this command")
    return entire.zeros_from_json(cfg.zeros)


def _out_path(cfg: RunConfig, default: str) -> str:
    return cfg.out if cfg.out else default


def _write_csv(path: str, header: list[str], rows, meta: list[str]) -> None:
    with open(path, "w") as fh:
        fh.write("# schema=1\n")
        for line in meta:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _cmd_kappa(cfg: RunConfig) -> int:
    from .numerics import integrate_bump
    tol = cfg.tol or 1e-10
    k = smoothing.kappa(tol)
    odd = integrate_bump(lambda t: np.abs(smoothing._moment_odd(t)),
                         -1.0, 1.0, tol).value
    even = integrate_bump(smoothing._moment_even, -1.0, 1.0, tol).value
    lo, hi = 1.2 / math.e, 1.21 / math.e
    ok = lo < k < hi
    print(f"kappa = {k:.10f}")
    print(f"odd moment integral  = {odd:.10f}  (target 2/e = {2/math.e:.10f})")
    print(f"even moment integral = {even:.10f}  (target kappa/2 = {k/2:.10f})")
    print(f"in (1.2/e, 1.21/e): {'PASS' if ok else 'FAIL'}")
    return 0 if ok else EXIT_VERIFY_FAILED


def _cmd_smooth(cfg: RunConfig) -> int:
    w = _load_weight(cfg)
    scfg = smoothing.SmoothingConfig(eps=cfg.eps, rho=cfg.rho)
    lo, hi, n = cfg.grid
    xs = np.linspace(lo, hi, n)
    wvals = weights.eval_weight(w, xs)
    beta = smoothing.beta(w, cfg.eps, xs)
    om_half = smoothing._omega_values(w, cfg.eps, 0.5, xs)
    om_one = smoothing._omega_values(w, cfg.eps, 1.0, xs)
    pairs = [smoothing.smooth_weight_with_derivative(w, scfg, float(x))
             for x in xs]
    Wv = np.array([p[0] for p in pairs])
    Wd = np.array([p[1] for p in pairs])
    header = ["x", "w", "beta_eps", "omega_half", "w_eps", "W_eps",
              "W_eps_deriv"]
    rows = zip(xs, wvals, beta, om_half, om_one, Wv, Wd)
    path = _out_path(cfg, "smooth.csv")
    _write_csv(path, header, rows,
               [f"command=smooth eps={cfg.eps:.17g} rho={cfg.rho:.17g} "
                f"seed={cfg.seed} weight={w.name}"])
    print(f"wrote {path}")
    if cfg.plot:
        from . import plots
        cols = {"w": wvals, "beta_eps": beta, "omega_half": om_half,
                "w_eps": om_one, "W_eps": Wv}
        png = plots.plot_smooth(xs, cols, path.rsplit(".", 1)[0] + ".png")
        print(f"wrote {png}")
    return 0


def _cmd_stepweight(cfg: RunConfig) -> int:
    w = _load_weight(cfg)
    sw = weights.step_weight(w, cfg.n_max)
    path = _out_path(cfg, "stepweight.csv")
    rows = [(b, v) for b, v in zip(sw.breakpoints[:-1], sw.values)]
    _write_csv(path, ["breakpoint", "value"], rows,
               [f"command=stepweight n_max={cfg.n_max} weight={w.name}",
                f"last_breakpoint={sw.breakpoints[-1]:.17g}"])
    print(f"wrote {path}")
    if cfg.plot:
        from . import plots
        png = plots.plot_step(sw.breakpoints, sw.values,
                              path.rsplit(".", 1)[0] + ".png")
        print(f"wrote {png}")
    return 0


def _cmd_verify(cfg: RunConfig) -> int:
    w = _load_weight(cfg)
    lo, hi, n = cfg.grid
    xs = np.linspace(lo, hi, n)
    report = smoothing.verify_corollary1(w, cfg.eps, xs,
                                         tol=cfg.tol or 1e-8)
    path = _out_path(cfg, "verify.json")
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
    print(f"wrote {path}; pass={report.passed} "
          f"max_violation={report.max_violation:.3e}")
    if cfg.plot:
        from . import plots
        png = plots.plot_verify(report, path.rsplit(".", 1)[0] + ".png")
        print(f"wrote {png}")
    return 0 if report.passed else EXIT_VERIFY_FAILED


def _cmd_perturb(cfg: RunConfig) -> int:
    B = _load_product(cfg)
    plan = entire.lemma1_constants(B, cfg.delta)
    if cfg.shifts:
        shifts = np.asarray(json.load(open(cfg.shifts)), dtype=float)
    else:
        rng = np.random.default_rng(cfg.seed)
        radii = plan.rho_delta * np.exp(-plan.delta * np.abs(plan.zeros))
        shifts = rng.uniform(-1.0, 1.0, plan.zeros.size) * radii
    D, report = entire.perturb(B, plan, shifts)
    sep = entire.separation_check(B, cfg.delta)
    payload = {
        "delta": plan.delta,
        "eps": plan.eps,
        "log_c_eps": plan.log_c_eps,
        "rho_delta": plan.rho_delta,
        "log_rho_delta": plan.log_rho_delta,
        "c_delta": plan.c_delta,
        "theta": plan.theta_b,
        "translation": plan.translation,
        "shift_source": cfg.shifts or f"random seed={cfg.seed}",
        "rng_algorithm": RNG_ALGORITHM,
        "shifts": shifts.tolist(),
        "perturbed_zeros": D.zeros.zeros.tolist(),
        "conclusion_report": report.to_dict(),
        "separation_report": sep.to_dict(),
    }
    path = _out_path(cfg, "perturb.json")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    ok = report.passed and sep.passed
    print(f"wrote {path}; pass={ok}")
    return 0 if ok else EXIT_VERIFY_FAILED


def _cmd_criterion(cfg: RunConfig) -> int:
    w = _load_weight(cfg)
    B = _load_product(cfg)
    path = _out_path(cfg, "criterion.csv")
    json_path = path.rsplit(".", 1)[0] + ".json"
    if cfg.k_max is not None:
        reports, n_est = criteria.singular_profile(w, B, cfg.k_max)
        summary = {"reports": [r.to_dict() for r in reports],
                   "n_estimate": n_est}
        main = reports[min(cfg.k, cfg.k_max)]
    elif cfg.families:
        fams = [f.strip() for f in cfg.families.split(",") if f.strip()]
        reports = criteria.subproduct_sums(w, B, fams)
        summary = {"reports": [r.to_dict() for r in reports]}
        main = reports[0]
    else:
        main = criteria.debranges_sum(w, B, cfg.k)
        reports = [main]
        summary = main.to_dict()
    criteria.report_to_csv(main, path)
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(f"wrote {path} and {json_path}")
    for r in reports:
        print(f"k={r.k} total={r.total:.10g} verdict={r.verdict}")
    if cfg.plot:
        from . import plots
        png = plots.plot_criterion(reports, path.rsplit(".", 1)[0] + ".png")
        print(f"wrote {png}")
    return 0


_COMMANDS = {
    "kappa": _cmd_kappa,
    "smooth": _cmd_smooth,
    "stepweight": _cmd_stepweight,
    "verify": _cmd_verify,
    "perturb": _cmd_perturb,
    "criterion": _cmd_criterion,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    try:
        return _COMMANDS[config.command](config)
    except BudgetExhaustedError as exc:
        print(f"error: evaluation budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionError as exc:
        print(f"error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (DomainError, EvaluationError, OSError, ValueError,
            json.JSONDecodeError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to the bad-input exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: bad input: {message}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="bernsmooth",
        description="Smooth majorants of weights, entire-product zero "
                    "perturbation, and criterion-sum diagnostics.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in [
            ("kappa", "print the bump normalization and moment identities"),
            ("smooth", "tabulate the smoothing chain over a grid"),
            ("stepweight", "emit step-majorant breakpoints and values"),
            ("verify", "verify the sandwich and derivative bounds"),
            ("perturb", "build and verify a zero-perturbation plan"),
            ("criterion", "run criterion sums over a zero set"),
    ]:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--weight", help="weight JSON file or inline JSON")
        sp.add_argument("--zeros", help="zero-set JSON file or inline JSON")
        sp.add_argument("--eps", type=float, default=0.5)
        sp.add_argument("--delta", type=float, default=0.5)
        sp.add_argument("--rho", type=float, default=0.5)
        sp.add_argument("--grid", default="-8:8:201", help="LO:HI:N")
        sp.add_argument("--k", type=int, default=0)
        sp.add_argument("--k-max", type=int, default=None, dest="k_max")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--shifts", default=None,
                        help="JSON file with one shift per zero")
        sp.add_argument("--families", default=None,
                        help="comma list: all,every_other,positive")
        sp.add_argument("--n-max", type=int, default=10, dest="n_max",
                        help="step-weight index range")
        sp.add_argument("--plot", action="store_true",
                        help="also render a PNG figure next to the output")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        grid = _parse_grid(args.grid)
    except (DomainError, ValueError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    cfg = RunConfig(command=args.command, weight=args.weight,
                    zeros=args.zeros, eps=args.eps, delta=args.delta,
                    rho=args.rho, grid=grid, k=args.k, k_max=args.k_max,
                    seed=args.seed, out=args.out, tol=args.tol,
                    shifts=args.shifts, families=args.families,
                    n_max=args.n_max, plot=args.plot)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
