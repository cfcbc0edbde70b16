"""Figure rendering for CLI reports.

Each function takes already-computed report data and returns a matplotlib
figure; :func:`save_figure` writes it as PNG.  Figures are a side channel of
the CLI report path (``--plot-dir``); every number they show is also in the
delimited output.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams.update({
    "figure.figsize": (7.0, 4.2),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 10,
})


def save_figure(fig, directory: str, name: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
    return path


def bias_figure(labels, values, title: str, reference: float | None = None):
    """Bar chart of per-input biases, optionally with a reference level."""
    fig, ax = plt.subplots()
    positions = np.arange(len(values))
    ax.bar(positions, values, color="#4878a8")
    ax.set_xticks(positions)
    ax.set_xticklabels([str(v) for v in labels])
    if reference is not None:
        ax.axhline(reference, color="#b04a4a", linestyle="--",
                   label=f"reference {reference:.4f}")
        ax.legend()
    ax.set_xlabel("Bob input")
    ax.set_ylabel("bias E")
    ax.set_title(title)
    return fig


def information_figure(i_value: float, bound: float, per_target):
    """Per-target information stack against the message bound."""
    fig, ax = plt.subplots()
    positions = np.arange(len(per_target))
    ax.bar(positions, per_target, color="#4878a8", label="I(x_k : guess)")
    ax.axhline(bound, color="#b04a4a", linestyle="--", label=f"bound {bound:g}")
    ax.set_xticks(positions)
    ax.set_xticklabels([str(k + 1) for k in positions])
    ax.set_xlabel("target k")
    ax.set_ylabel("bits")
    ax.set_title(f"summed information {i_value:.6f} vs bound {bound:g}")
    ax.legend()
    return fig


def bound_figure(reports):
    """Grouped lhs/rhs bars for a list of BoundReport objects."""
    fig, ax = plt.subplots()
    positions = np.arange(len(reports))
    width = 0.38
    ax.bar(positions - width / 2, [r.lhs for r in reports], width,
           color="#4878a8", label="lhs")
    ax.bar(positions + width / 2, [r.rhs for r in reports], width,
           color="#b08a3e", label="rhs")
    ax.set_xticks(positions)
    ax.set_xticklabels([f"{r.kind}\n({r.status})" for r in reports])
    ax.set_ylabel("value")
    ax.set_title("quadratic bound checks")
    ax.legend()
    return fig


def slack_histogram_figure(slacks_by_name: dict):
    """One histogram panel per inequality, marking the smallest slack."""
    names = list(slacks_by_name)
    fig, axes = plt.subplots(
        1, len(names), figsize=(3.4 * max(len(names), 1), 3.4), squeeze=False)
    for ax, name in zip(axes[0], names):
        values = np.asarray(slacks_by_name[name])
        ax.hist(values, bins=40, color="#4878a8")
        ax.axvline(values.min(), color="#b04a4a", linestyle="--")
        ax.set_title(f"{name}\nmin {values.min():.3e}", fontsize=9)
        ax.set_xlabel("slack (bits)")
    fig.tight_layout()
    return fig


def growth_figure(rows, bias: float):
    """Squared-bias total per nesting depth against the message threshold."""
    fig, ax = plt.subplots()
    levels = [r["levels"] for r in rows]
    totals = [r["sum_sq_bias"] for r in rows]
    ax.plot(levels, totals, marker="o", color="#4878a8",
            label=f"sum of squared biases, E = {bias:g}")
    ax.axhline(rows[0]["threshold"], color="#b04a4a", linestyle="--",
               label="2 ln 2")
    ax.set_xlabel("nesting depth L")
    ax.set_ylabel("sum over 2^L targets of E_k^2")
    ax.set_xticks(levels)
    ax.set_title("bias growth under nesting")
    ax.legend()
    return fig
