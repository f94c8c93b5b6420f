"""One-vs-rest reduction over binary matrix classifiers.

Class k's binary problem relabels class-k samples +1 and everything else -1;
prediction takes the argmax of the K decision values, breaking exact ties
toward the lowest class index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .machine import BinaryModel, ObjectiveSpec, SolverConfig, TrainReport, train_binary
from .types import PscMatrix


def as_matrix(x) -> np.ndarray:
    """Accept a PscMatrix or any 2-D array-like."""
    if isinstance(x, PscMatrix):
        return np.array(x.rows, dtype=float)
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class MulticlassModel:
    """K one-vs-rest binary models in class order, plus the class-name table."""

    models: Tuple[BinaryModel, ...]
    class_names: Tuple[str, ...]
    spec: ObjectiveSpec
    input_shape: Tuple[int, int]

    def __post_init__(self):
        k = len(self.models)
        if k < 2:
            raise ValueError(f"need at least 2 classes, got {k}")
        if len(self.class_names) != k:
            raise ValueError(f"{k} models but {len(self.class_names)} class names")
        for i, m in enumerate(self.models):
            if m.shape != tuple(self.input_shape):
                raise ValueError(f"model {i} shape {m.shape} != input_shape {self.input_shape}")

    @property
    def num_classes(self) -> int:
        return len(self.models)


def train_multiclass(
    encoded: Sequence[Tuple[PscMatrix, int]],
    k: int,
    spec: ObjectiveSpec,
    cfg: SolverConfig = SolverConfig(),
    class_names: Optional[Sequence[str]] = None,
) -> Tuple[MulticlassModel, List[TrainReport]]:
    """Train the K binary classifiers in class order 0..K-1.

    Every class must be represented; an empty class is an error naming it.
    Deterministic given the sample order, spec and cfg.
    """
    if k < 2:
        raise ValueError(f"need at least 2 classes, got {k}")
    if class_names is None:
        class_names = tuple(f"c{i + 1}" for i in range(k))
    if len(class_names) != k:
        raise ValueError(f"expected {k} class names, got {len(class_names)}")
    mats = [as_matrix(x) for x, _ in encoded]
    labels = [label for _, label in encoded]
    for i, label in enumerate(labels):
        if not (0 <= label < k):
            raise ValueError(f"sample {i}: class index {label} out of range for K={k}")
    counts = np.bincount(labels, minlength=k) if labels else np.zeros(k, dtype=int)
    for cls in range(k):
        if counts[cls] == 0:
            raise ValueError(f"class {cls} has no samples")

    models: List[BinaryModel] = []
    reports: List[TrainReport] = []
    for cls in range(k):
        signed = [(m, 1 if label == cls else -1) for m, label in zip(mats, labels)]
        model, report = train_binary(signed, spec, cfg)
        models.append(model)
        reports.append(report)

    mc = MulticlassModel(
        models=tuple(models),
        class_names=tuple(class_names),
        spec=spec,
        input_shape=mats[0].shape,
    )
    return mc, reports


def decision_values(model: MulticlassModel, x) -> List[float]:
    """All K decision values tr(W_k^T X) + b_k for one input."""
    xm = as_matrix(x)
    if xm.shape != tuple(model.input_shape):
        raise ValueError(f"shape mismatch: model {model.input_shape}, input {xm.shape}")
    return [float(np.sum(m.w * xm) + m.b) for m in model.models]


def predict(model: MulticlassModel, x) -> Tuple[int, List[float]]:
    """Argmax class for one input, with the per-class decision values."""
    values = decision_values(model, x)
    return int(np.argmax(values)), values


def predict_batch(model: MulticlassModel, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized prediction for a stack of inputs shaped (n, m, d).

    Returns (labels, scores) with scores shaped (n, K). Same argmax and
    tie-break as `predict`.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.shape[0]
    if xs.shape[1:] != tuple(model.input_shape):
        raise ValueError(f"shape mismatch: model {model.input_shape}, inputs {xs.shape[1:]}")
    flat = xs.reshape(n, -1)
    wstack = np.stack([m.w.ravel() for m in model.models])
    bias = np.array([m.b for m in model.models])
    scores = flat @ wstack.T + bias
    return np.argmax(scores, axis=1), scores
