"""Figure rendering for the CLI report paths (written next to the CSVs)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_error_modulus(ts, sigmas, gamma: float, path) -> None:
    """Top singular value of the optimal error around the circle; flat at
    the Hankel norm when the solve is exact."""
    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    ax.plot(np.asarray(ts) / (2 * np.pi), sigmas, lw=1.0, label=r"$\sigma_{\max}$ of error")
    ax.axhline(gamma, color="k", ls="--", lw=0.8, label=f"gamma = {gamma:.12g}")
    ax.set_xlabel("t / 2pi")
    ax.set_ylabel("largest singular value")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_solution_entries(ts, values, gamma: float, path) -> None:
    """Entrywise magnitude of the analytic correction around the circle."""
    values = np.asarray(values)
    _, q, p = values.shape
    fig, ax = plt.subplots(figsize=(6.0, 3.2))
    x = np.asarray(ts) / (2 * np.pi)
    for i in range(q):
        for j in range(p):
            ax.plot(x, np.abs(values[:, i, j]), lw=1.0, label=f"|phi_{i}{j}|")
    ax.set_xlabel("t / 2pi")
    ax.set_ylabel("magnitude")
    ax.set_title(f"analytic correction, restricted norm {gamma:.6g}")
    if q * p <= 8:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(report, path) -> None:
    """Sup-error decay with the fitted and predicted rates, and the defect
    matrix gap, on log scales."""
    ks = [rec.k for rec in report.records if rec.skipped is None]
    errs = [rec.sup_err for rec in report.records if rec.skipped is None]
    gaps = [rec.delta_gap for rec in report.records if rec.skipped is None]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    floor = max(report.floor * 1e-2, 1e-17)
    ax1.semilogy(ks, np.maximum(errs, floor), "o-", ms=3, lw=1.0, label="sup error")
    if report.fit_ok:
        kk = np.array(ks, dtype=float)
        ax1.semilogy(
            kk,
            np.exp(report.fitted_intercept + report.fitted_slope * kk),
            "-",
            lw=0.8,
            label=f"fit slope {report.fitted_slope:.4g}",
        )
    if report.predicted_log_rate is not None:
        kk = np.array(ks, dtype=float)
        anchor = np.log(max(errs[0], floor)) - report.predicted_log_rate * ks[0]
        ax1.semilogy(
            kk,
            np.exp(anchor + report.predicted_log_rate * kk),
            "--",
            lw=0.8,
            label=f"predicted slope {report.predicted_log_rate:.4g}",
        )
    ax1.axhline(report.floor, color="gray", lw=0.6, ls=":")
    ax1.set_xlabel("level k")
    ax1.set_ylabel("sup error on circle")
    ax1.legend(fontsize=7)

    ax2.semilogy(ks, np.maximum(gaps, floor), "s-", ms=3, lw=1.0, color="C2")
    ax2.set_xlabel("level k")
    ax2.set_ylabel("defect matrix gap")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
