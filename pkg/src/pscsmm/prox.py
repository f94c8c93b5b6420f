"""Proximal operators and matrix norms used by the regularized trainers."""

from __future__ import annotations

import numpy as np


def l1_norm(w: np.ndarray) -> float:
    """Entrywise L1 norm, sum of |w_ij|."""
    return float(np.sum(np.abs(w)))


def nuclear_norm(w: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(w, compute_uv=False)))


def prox_soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    """Entrywise soft threshold sign(v) * max(|v| - t, 0).

    Minimizer of (1/2)||x - v||_F^2 + t ||x||_1.
    """
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def prox_nuclear(v: np.ndarray, t: float) -> np.ndarray:
    """Singular value thresholding: soft threshold the spectrum of v.

    Minimizer of (1/2)||x - v||_F^2 + t ||x||_*. Each singular value is
    reduced by exactly min(sigma, t).
    """
    if t < 0:
        raise ValueError(f"threshold must be >= 0, got {t}")
    v = np.asarray(v, dtype=float)
    try:
        u, s, vt = np.linalg.svd(v, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"SVD failed on {v.shape} input: {exc}") from None
    return (u * np.maximum(s - t, 0.0)) @ vt
