"""Rendering of trace figures to image files next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .analysis import CorrelationTrace

_MEASURE_LABEL = {"C": "concurrence", "D": "discord", "I": "mutual information",
                  "Q": "classical correlation"}


def _curve_label(trace: CorrelationTrace) -> str:
    return str(trace.meta.get("label", "trace"))


def plot_trace(trace: CorrelationTrace, path) -> Path:
    """One panel with every measure column of a single trace."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for name, col in trace.series.items():
        if name.startswith("g"):
            continue
        ax.plot(trace.times, col, lw=1.0, label=_MEASURE_LABEL.get(name, name))
    ax.set_xlabel(r"$\gamma_0 t$")
    ax.set_ylabel("correlation")
    ax.set_title(_curve_label(trace))
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_figure(fig_id: int, traces: list[CorrelationTrace], path) -> Path:
    """Overlay the curves of one figure preset, one panel per measure column."""
    path = Path(path)
    columns = []
    for tr in traces:
        for name in tr.series:
            if not name.startswith("g") and name not in columns and "_" not in name:
                columns.append(name)
    n_panels = max(1, len(columns))
    fig, axes = plt.subplots(n_panels, 1, figsize=(7.0, 3.2 * n_panels), squeeze=False)
    for ax, col in zip(axes[:, 0], columns):
        for tr in traces:
            if col in tr.series:
                ax.plot(tr.times, tr.series[col], lw=0.8, label=_curve_label(tr))
        ax.set_ylabel(_MEASURE_LABEL.get(col, col))
        ax.legend(frameon=False, fontsize=7)
    axes[-1, 0].set_xlabel(r"$\gamma_0 t$")
    axes[0, 0].set_title(f"figure preset {fig_id}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
