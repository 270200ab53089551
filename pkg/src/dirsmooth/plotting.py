"""Figure rendering for the CLI report path.

Figures are written next to the delimited output: optimality-gap curves,
realized-vs-bound overlays, and the three-panel quadratic view (gap,
point-wise smoothness, step-size). All rendering uses the Agg backend so it
works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["gap_figure", "bounds_overlay_figure", "quadratic_panels_figure"]

plt.rcParams.update({
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 8,
    "axes.labelsize": 10,
})

_FLOOR = 1e-300


def _semilogy(ax, series, label):
    y = np.asarray(series, dtype=float)
    y = np.where(np.isfinite(y) & (y > 0), y, np.nan)
    ax.semilogy(np.arange(len(y)), y, label=label, linewidth=1.2)


def gap_figure(path, curves, title="optimality gap", ylabel="f(x_k) - f*"):
    """One log-scale panel of gap curves, keyed by method label."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, series in curves.items():
        _semilogy(ax, series, label)
    ax.set_xlabel("iteration k")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def bounds_overlay_figure(path, realized, bounds, title="realized vs theoretical"):
    """Solid realized series against dashed theoretical bound series."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, series in realized.items():
        _semilogy(ax, series, label)
    for label, series in bounds.items():
        y = np.asarray(series, dtype=float)
        y = np.where(np.isfinite(y) & (y > 0), y, np.nan)
        ax.semilogy(np.arange(len(y)), y, "--", label=label, linewidth=1.2)
    ax.set_xlabel("iteration k")
    ax.set_ylabel("sub-optimality")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def quadratic_panels_figure(path, gap_curves, smooth_curves, eta_curves,
                            L=None, title="quadratic dynamics"):
    """Three panels: gap, point-wise smoothness D_k, and step-sizes; a 2/L
    guide line marks the stability edge when L is given."""
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6))
    for label, series in gap_curves.items():
        _semilogy(axes[0], series, label)
    axes[0].set_ylabel("f(x_k) - f*")
    for label, series in smooth_curves.items():
        _semilogy(axes[1], series, label)
    axes[1].set_ylabel("D(x_k, x_{k+1})")
    for label, series in eta_curves.items():
        _semilogy(axes[2], series, label)
    axes[2].set_ylabel("step-size")
    if L is not None:
        axes[2].axhline(2.0 / L, color="k", linestyle=":", linewidth=1.0,
                        label="2/L")
    for ax in axes:
        ax.set_xlabel("iteration k")
        ax.legend()
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
