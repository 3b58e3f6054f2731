"""Figure rendering for the report path: analytic curves with optional
Monte Carlo overlays, written to image files next to the delimited data."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams["figure.figsize"] = (5.0, 3.4)
plt.rcParams["figure.dpi"] = 160
plt.rcParams["savefig.bbox"] = "tight"


def render_curve(path, xs, ys, mc_overlay=None, xlabel="s", ylabel="E(s)",
                 title=None):
    """Solid analytic curve; the overlay, when given, is a (positions,
    values) pair drawn as unconnected symbols."""
    fig, ax = plt.subplots()
    ax.plot(xs, ys, "-", lw=1.6, color="#1f4e9c", label="recursive scheme")
    if mc_overlay is not None:
        ox, oy = mc_overlay
        ax.plot(ox, oy, "o", ms=3.5, mfc="none", mec="#c23b22",
                label="matrix-model sampling")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=10)
    if mc_overlay is not None:
        ax.legend(frameon=False, fontsize=8)
    ax.margins(x=0.02)
    fig.savefig(path)
    plt.close(fig)
    return path


def thin_overlay(samples: np.ndarray, points: int = 25):
    """Evenly spaced empirical CDF symbols from a sample of the largest
    eigenvalue."""
    v = np.sort(np.asarray(samples, dtype=float))
    n = v.size
    qs = np.linspace(0.02, 0.98, points)
    xs = np.quantile(v, qs)
    ys = np.searchsorted(v, xs, side="right") / n
    return xs, ys
