"""Matplotlib figures written next to the tabular outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_links(h_hat, points, path, max_curves: int = 9):
    """Estimated link ``h_hat_t(x_i)`` against ``t``, one curve per grid point."""
    h_hat = np.asarray(h_hat)
    n, M = h_hat.shape
    t = np.arange(1, n + 1)
    fig, ax = plt.subplots(figsize=(6, 4))
    picks = np.unique(np.linspace(0, M - 1, min(M, max_curves)).round().astype(int))
    for i in picks:
        ax.plot(t, h_hat[:, i], marker=".", lw=1, label=f"x = {points[i]:.3g}")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\hat h_t(x)$")
    ax.legend(fontsize=7, ncol=2)
    _save(fig, path)


def plot_bootstrap(report, path):
    """Histogram of bootstrap replicates with the observed statistic marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(report.boot_stats, bins=30, color="0.7", edgecolor="0.3")
    ax.axvline(report.s_m, color="C3", lw=2, label=f"S_M = {report.s_m:.3g}")
    ax.set_xlabel("bootstrap S_M")
    ax.set_ylabel("count")
    ax.set_title(f"p = {report.p_value:.3g}, {'reject' if report.reject else 'retain'}")
    ax.legend()
    _save(fig, path)


def plot_power(rows, path):
    """Power against time length, one panel per model, one line per (alternative, N)."""
    models = list(dict.fromkeys(r["model"] for r in rows))
    fig, axes = plt.subplots(1, len(models), figsize=(5 * len(models), 4), squeeze=False)
    styles = {}
    for ax, model in zip(axes[0], models):
        sub = [r for r in rows if r["model"] == model]
        for key in dict.fromkeys((r["alternative"], r["N"]) for r in sub):
            pts = sorted((r["n"], r["power"]) for r in sub if (r["alternative"], r["N"]) == key)
            ls = styles.setdefault(key[1], "-" if not styles else ":")
            ax.plot(*zip(*pts), ls, marker="o", label=f"{key[0]}, N={key[1]}")
        ax.set_title(model)
        ax.set_xlabel("n")
        ax.set_ylabel("power")
        ax.set_ylim(-0.02, 1.02)
        ax.legend(fontsize=7)
    _save(fig, path)
