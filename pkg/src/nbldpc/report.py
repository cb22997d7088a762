"""Figures written next to the CSV output of the command-line tools."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["plot_thresholds", "plot_exit_curves", "plot_de_trace", "plot_simulation"]


def _finish(fig, path):
    fig.tight_layout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_thresholds(ms, thresholds, path, stability=None, shannon=None):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(ms, thresholds, "o-", label="BP threshold")
    if stability is not None:
        ax.plot(ms, stability, "s--", alpha=0.7, label="stability bound")
    if shannon is not None:
        ax.axhline(shannon, color="k", lw=0.8, ls=":", label="Shannon limit")
    ax.set_xlabel("m  (alphabet size $2^m$)")
    ax.set_ylabel(r"$\epsilon$")
    ax.legend(frameon=False)
    return _finish(fig, path)


def plot_exit_curves(curves, path, rate=None):
    """``curves`` maps m -> (grid, values, map_bound)."""
    fig, ax = plt.subplots(figsize=(5, 4))
    for m, (grid, values, bound) in sorted(curves.items()):
        (line,) = ax.plot(grid, values, lw=1.2, label=f"m={m}")
        if bound is not None:
            ax.axvline(bound, color=line.get_color(), lw=0.6, ls="--")
    if rate is not None:
        ax.axvline(1.0 - rate, color="k", lw=0.8, ls=":", label="Shannon limit")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.02)
    ax.set_xlabel(r"$\epsilon$")
    ax.set_ylabel(r"$h^{BP}(\epsilon)$")
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)


def plot_de_trace(p_v: np.ndarray, path, title=None):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    it = np.arange(1, len(p_v) + 1)
    for k in range(p_v.shape[1]):
        ax.plot(it, p_v[:, k], lw=1, label=f"dim {k}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("probability")
    if title:
        ax.set_title(title, fontsize=9)
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)


def plot_simulation(mc_mean, mc_se, de, path, title=None):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    it = np.arange(1, len(mc_mean) + 1)
    for k in range(mc_mean.shape[1]):
        ebar = ax.errorbar(it, mc_mean[:, k], yerr=3 * mc_se[:, k], fmt="o", ms=3, label=f"MC dim {k}")
        if de is not None:
            ax.plot(it[: len(de)], de[: len(it), k], color=ebar[0].get_color(), lw=1)
    ax.set_xlabel("iteration")
    ax.set_ylabel("fraction of messages")
    if title:
        ax.set_title(title, fontsize=9)
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, path)
