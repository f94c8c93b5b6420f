import numpy as np
import pytest

from pscsmm import l1_norm, nuclear_norm, prox_nuclear, prox_soft_threshold


def _grid_prox_entry(v, t, step=1e-4):
    """Brute-force scalar prox: minimize (1/2)(x-v)^2 + t|x| on a grid."""
    lo, hi = v - t - 1.0, v + t + 1.0
    xs = np.arange(lo, hi + step, step)
    vals = 0.5 * (xs - v) ** 2 + t * np.abs(xs)
    return xs[int(np.argmin(vals))]


def test_soft_threshold_example():
    out = prox_soft_threshold(np.array([[3.0, -1.0]]), 2.0)
    assert np.array_equal(out, np.array([[1.0, 0.0]]))


def test_soft_threshold_identity_at_zero():
    v = np.array([[1.5, -2.5], [0.0, 3.0]])
    assert np.array_equal(prox_soft_threshold(v, 0.0), v)


def test_soft_threshold_matches_grid_oracle():
    rng = np.random.default_rng(21)
    v = rng.normal(0, 2, (3, 3))
    out = prox_soft_threshold(v, 0.7)
    for i in range(3):
        for j in range(3):
            assert abs(out[i, j] - _grid_prox_entry(v[i, j], 0.7)) <= 1e-4


def test_soft_threshold_rejects_negative_t():
    with pytest.raises(ValueError, match=">= 0"):
        prox_soft_threshold(np.zeros((2, 2)), -0.1)


def test_soft_threshold_optimality_dominates_random_candidates():
    rng = np.random.default_rng(22)
    v = rng.normal(0, 1, (3, 3))
    t = 0.4
    x = prox_soft_threshold(v, t)
    fx = 0.5 * np.sum((x - v) ** 2) + t * l1_norm(x)
    for _ in range(1000):
        cand = x + rng.normal(0, 0.5, (3, 3))
        fc = 0.5 * np.sum((cand - v) ** 2) + t * l1_norm(cand)
        assert fx <= fc + 1e-12


def test_nuclear_diagonal_case():
    out = prox_nuclear(np.diag([5.0, 1.0]), 2.0)
    assert np.allclose(out, np.diag([3.0, 0.0]), atol=1e-12)


def test_nuclear_identity_at_zero():
    rng = np.random.default_rng(23)
    v = rng.normal(0, 1, (3, 3))
    assert np.allclose(prox_nuclear(v, 0.0), v, atol=1e-10)


def test_nuclear_rejects_negative_t():
    with pytest.raises(ValueError, match=">= 0"):
        prox_nuclear(np.eye(2), -1.0)


def test_svt_shrinks_each_singular_value():
    rng = np.random.default_rng(24)
    for _ in range(100):
        m, d = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        v = rng.normal(0, 1, (m, d))
        t = float(rng.uniform(0, 2))
        sv_in = np.linalg.svd(v, compute_uv=False)
        sv_out = np.linalg.svd(prox_nuclear(v, t), compute_uv=False)
        assert np.allclose(sv_out, np.maximum(sv_in - t, 0.0), atol=1e-8)


def test_nuclear_optimality_dominates_random_candidates():
    rng = np.random.default_rng(25)
    v = rng.normal(0, 1, (3, 3))
    t = 1.0
    x = prox_nuclear(v, t)
    fx = 0.5 * np.sum((x - v) ** 2) + t * nuclear_norm(x)
    for _ in range(10_000):
        cand = x + rng.normal(0, 0.3, (3, 3))
        fc = 0.5 * np.sum((cand - v) ** 2) + t * nuclear_norm(cand)
        assert fx <= fc + 1e-10


def test_norm_helpers():
    w = np.array([[2.0, -3.0], [0.0, 0.0]])
    assert l1_norm(w) == 5.0
    assert nuclear_norm(np.diag([2.0, 3.0])) == pytest.approx(5.0, abs=1e-12)
