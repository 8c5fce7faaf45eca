"""Optional figure rendering for CLI outputs.

Figures are written as PNG next to the delimited output; everything here is
opt-in and headless (Agg backend).
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["plot_smooth", "plot_criterion", "plot_step", "plot_verify"]


def _save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_smooth(xs, columns: dict[str, np.ndarray], path: str) -> str:
    """Weight, its envelopes and the smooth majorant on one axis."""
    fig, ax = plt.subplots(figsize=(8, 5))
    for label, ys in columns.items():
        if label == "W_eps_deriv":
            continue
        ax.plot(xs, ys, label=label, lw=1.2)
    ax.set_xlabel("x")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.set_title("sup-smoothing and mollified majorant")
    return _save(fig, path)


def plot_criterion(reports, path: str) -> str:
    fig, ax = plt.subplots(figsize=(8, 5))
    for rep in reports:
        ax.plot(np.abs(rep.lambdas), rep.partial_sums, marker=".",
                lw=1.0, label=f"k={rep.k} ({rep.verdict})")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("|lambda|")
    ax.set_ylabel("partial sum")
    ax.legend(fontsize=8)
    ax.set_title("criterion partial sums")
    return _save(fig, path)


def plot_step(breakpoints, values, path: str) -> str:
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.step(breakpoints[:-1], values, where="post", lw=1.2)
    ax.set_xlabel("x")
    ax.set_ylabel("step value")
    ax.set_title("step majorant")
    return _save(fig, path)


def plot_verify(report, path: str) -> str:
    fig, ax = plt.subplots(figsize=(8, 5))
    grid = np.asarray(report.grid)
    lhs = np.asarray(report.lhs)
    rhs = np.asarray(report.rhs)
    labels = np.asarray(report.labels)
    for lab in sorted(set(report.labels)):
        m = labels == lab
        ax.plot(grid[m], lhs[m] - rhs[m], marker=".", lw=0.8,
                label=f"{lab} (lhs-rhs)")
    ax.axhline(report.tolerance, color="k", ls="--", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("margin")
    ax.legend(fontsize=8)
    ax.set_title("bound margins (negative = satisfied)")
    return _save(fig, path)
