"""Matplotlib renderings of evaluation reports and training diagnostics.

Everything draws on the Agg backend and writes straight to files; figures
accompany the plain-text outputs, they never replace them.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .machine import TrainReport
from .metrics import ConfusionMatrix, average_accuracy, overall_accuracy, per_class_accuracy


def save_perclass_accuracy(cm: ConfusionMatrix, class_names: Sequence[str],
                           path, method: str = "") -> None:
    """Bar chart of per-class accuracy with AA and OA reference lines."""
    accs = [100.0 * a for a in per_class_accuracy(cm)]
    k = len(accs)
    fig, ax = plt.subplots(figsize=(max(6.0, 0.45 * k), 4.0))
    ax.bar(range(k), accs, color="#4878a8")
    ax.axhline(100.0 * average_accuracy(cm), color="#a84848", ls="--", lw=1, label="AA")
    ax.axhline(100.0 * overall_accuracy(cm), color="#48a860", ls=":", lw=1.2, label="OA")
    ax.set_xticks(range(k))
    ax.set_xticklabels([f"c{i + 1}\n{name}" for i, name in enumerate(class_names)],
                       fontsize=7, rotation=0)
    ax.set_ylabel("accuracy (%)")
    ax.set_ylim(0, 105)
    ax.legend(loc="lower right", fontsize=8)
    if method:
        ax.set_title(method)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)


def save_confusion_heatmap(cm: ConfusionMatrix, class_names: Sequence[str],
                           path, method: str = "") -> None:
    """Row-normalized confusion matrix heatmap."""
    counts = np.array(cm.counts, dtype=float)
    row_sums = counts.sum(axis=1, keepdims=True)
    frac = np.divide(counts, row_sums, out=np.zeros_like(counts), where=row_sums > 0)
    k = counts.shape[0]
    fig, ax = plt.subplots(figsize=(max(5.0, 0.5 * k), max(4.2, 0.45 * k)))
    im = ax.imshow(frac, cmap="Blues", vmin=0.0, vmax=1.0)
    ax.set_xticks(range(k))
    ax.set_yticks(range(k))
    ax.set_xticklabels([f"c{i + 1}" for i in range(k)], fontsize=7)
    ax.set_yticklabels([f"c{i + 1} {name}" for i, name in enumerate(class_names)], fontsize=7)
    ax.set_xlabel("predicted")
    ax.set_ylabel("true")
    if method:
        ax.set_title(method)
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)


def save_objective_traces(reports: Sequence[TrainReport], class_names: Sequence[str],
                          path) -> None:
    """Per-class objective value against ADMM iteration, log-scaled y."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for name, report in zip(class_names, reports):
        ax.plot(report.objective_trace, lw=1, label=name)
    ax.set_xlabel("iteration")
    ax.set_ylabel("objective")
    ax.set_yscale("log")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)
