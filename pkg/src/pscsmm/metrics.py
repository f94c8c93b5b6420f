"""Confusion matrix and the three summary metrics: OA, AA, Cohen's kappa.

Counts stay exact integers; ratios go through `fractions.Fraction` and only
become floats on return, so the hand-derivable cases come out exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple


@dataclass(frozen=True)
class ConfusionMatrix:
    """K x K count table; rows are true classes, columns predicted."""

    counts: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.counts)
        if k == 0:
            raise ValueError("confusion matrix must have at least one class")
        for row in self.counts:
            if len(row) != k:
                raise ValueError("confusion matrix must be square")
            for v in row:
                if v < 0 or v != int(v):
                    raise ValueError(f"counts must be nonnegative integers, got {v!r}")

    @property
    def num_classes(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.counts)))

    def row_sums(self) -> List[int]:
        return [sum(row) for row in self.counts]

    def col_sums(self) -> List[int]:
        k = len(self.counts)
        return [sum(self.counts[i][j] for i in range(k)) for j in range(k)]


def confusion(true_labels: Sequence[int], predicted_labels: Sequence[int], k: int) -> ConfusionMatrix:
    """Count (true, predicted) pairs into a K x K table."""
    if len(true_labels) != len(predicted_labels):
        raise ValueError(
            f"length mismatch: {len(true_labels)} true vs {len(predicted_labels)} predicted"
        )
    if len(true_labels) == 0:
        raise ValueError("cannot build a confusion matrix from no labels")
    counts = [[0] * k for _ in range(k)]
    for i, (t, p) in enumerate(zip(true_labels, predicted_labels)):
        if not (0 <= t < k):
            raise ValueError(f"pair {i}: true label {t} out of range for K={k}")
        if not (0 <= p < k):
            raise ValueError(f"pair {i}: predicted label {p} out of range for K={k}")
        counts[t][p] += 1
    return ConfusionMatrix(counts=tuple(tuple(row) for row in counts))


def overall_accuracy(cm: ConfusionMatrix) -> float:
    """Trace over total."""
    total = cm.total
    if total == 0:
        raise ValueError("confusion matrix is empty")
    return float(Fraction(cm.trace, total))


def per_class_accuracy(cm: ConfusionMatrix) -> List[float]:
    """Per-class recall: diagonal over row sum, one value per true class."""
    out = []
    for k, (row_sum, row) in enumerate(zip(cm.row_sums(), cm.counts)):
        if row_sum == 0:
            raise ValueError(f"class {k} has no true samples")
        out.append(float(Fraction(row[k], row_sum)))
    return out


def average_accuracy(cm: ConfusionMatrix) -> float:
    """Mean per-class recall."""
    accs = Fraction(0)
    for k, (row_sum, row) in enumerate(zip(cm.row_sums(), cm.counts)):
        if row_sum == 0:
            raise ValueError(f"class {k} has no true samples")
        accs += Fraction(row[k], row_sum)
    return float(accs / cm.num_classes)


def kappa(cm: ConfusionMatrix) -> float:
    """Cohen's kappa: (p_o - p_e) / (1 - p_e) with chance agreement p_e.

    p_e = 1 forces every count into a single (k, k) cell, where agreement is
    perfect and kappa is 1 by convention; p_e = 1 with p_o < 1 cannot happen
    for a valid table and is rejected.
    """
    total = cm.total
    if total == 0:
        raise ValueError("confusion matrix is empty")
    p_o = Fraction(cm.trace, total)
    p_e = Fraction(
        sum(r * c for r, c in zip(cm.row_sums(), cm.col_sums())), total * total
    )
    if p_e == 1:
        if p_o == 1:
            return 1.0
        raise ValueError("degenerate table: chance agreement is 1 but observed is not")
    return float((p_o - p_e) / (1 - p_e))


def format_report(cm: ConfusionMatrix, class_names: Sequence[str] | None = None,
                  method: str = "") -> str:
    """Plain-text accuracy table: per-class rows c1..cK, then AA, OA, Kappa.

    Per-class and aggregate accuracies print as percentages with two
    decimals; kappa prints as a bare coefficient with three.
    """
    k = cm.num_classes
    if class_names is not None and len(class_names) != k:
        raise ValueError(f"{len(class_names)} class names for {k} classes")
    heading = method if method else "accuracy"
    lines = [f"{'class':<24}{heading + ' (%)':>14}"]
    for i, acc in enumerate(per_class_accuracy(cm)):
        code = f"c{i + 1}"
        name = f" {class_names[i]}" if class_names is not None else ""
        lines.append(f"{code + name:<24}{100.0 * acc:>14.2f}")
    lines.append(f"{'AA':<24}{100.0 * average_accuracy(cm):>14.2f}")
    lines.append(f"{'OA':<24}{100.0 * overall_accuracy(cm):>14.2f}")
    lines.append(f"{'Kappa':<24}{kappa(cm):>14.3f}")
    return "\n".join(lines) + "\n"
