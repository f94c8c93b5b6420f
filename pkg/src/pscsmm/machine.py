"""Binary matrix classifiers trained by consensus ADMM.

Four objective variants over a regression matrix W and unregularized bias b,
all sharing the hinge loss sum_i max(0, 1 - y_i(tr(W^T X_i) + b)):

    ssmm:  gamma*||W||_1 + tau*||W||_*  + C*hinge
    smm:   (1/2)tr(W^T W) + tau*||W||_* + C*hinge
    svm:   (1/2)tr(W^T W)               + C*hinge
    ssvm:  gamma*||W||_1                + C*hinge

The solver splits the objective into one consensus block per term: a loss
block (hinge plus the intrinsic Frobenius term when present, minimized on a
smoothed hinge by damped Newton steps with an exact bias update), an L1
block (closed-form soft threshold) and a nuclear block (closed-form singular
value thresholding). The global W is the block average; b lives inside the
loss block. Everything is deterministic: zero initialization, no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .prox import l1_norm, nuclear_norm, prox_nuclear, prox_soft_threshold

VARIANTS = ("ssmm", "smm", "svm", "ssvm")

#: Uniform gap bound of the smoothed hinge: 0 <= hinge(s) - smoothed(s, mu) <= mu/2.
HINGE_SMOOTHING = 1e-3


@dataclass(frozen=True)
class ObjectiveSpec:
    """Variant selector plus the three trade-off weights.

    gamma weighs the entrywise L1 term, tau the nuclear norm, c the hinge
    sum. Variants fix the weights they do not use: smm/svm have no L1 term
    (gamma = 0), svm/ssvm no nuclear term (tau = 0). ssmm accepts tau = 0,
    in which case it degenerates to ssvm.
    """

    variant: str
    gamma: float = 0.0
    tau: float = 0.0
    c: float = 0.7

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        for name in ("gamma", "tau", "c"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.c <= 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if self.gamma < 0 or self.tau < 0:
            raise ValueError("gamma and tau must be >= 0")
        if self.variant == "ssmm" and self.gamma <= 0:
            raise ValueError("ssmm requires gamma > 0")
        if self.variant == "smm" and (self.tau <= 0 or self.gamma != 0):
            raise ValueError("smm requires tau > 0 and gamma = 0")
        if self.variant == "svm" and (self.gamma != 0 or self.tau != 0):
            raise ValueError("svm fixes gamma = tau = 0")
        if self.variant == "ssvm" and (self.gamma <= 0 or self.tau != 0):
            raise ValueError("ssvm requires gamma > 0 and fixes tau = 0")

    @property
    def intrinsic_frobenius(self) -> bool:
        """Whether (1/2)tr(W^T W) is part of the objective."""
        return self.variant in ("smm", "svm")


def make_spec(variant: str, gamma: float = 0.3, tau: float = 0.1, c: float = 0.7) -> ObjectiveSpec:
    """Build a spec from user knobs, zeroing the weights the variant fixes."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    if variant in ("smm", "svm"):
        gamma = 0.0
    if variant in ("svm", "ssvm"):
        tau = 0.0
    return ObjectiveSpec(variant=variant, gamma=gamma, tau=tau, c=c)


@dataclass(frozen=True)
class SolverConfig:
    """Consensus-ADMM knobs; all fields must be positive as stated.

    `inner_iters` caps the loss-block rounds per outer iteration and
    `inner_step` is the trial step of its line search (1.0 = full step).
    """

    rho: float = 1.0
    max_iters: int = 2000
    tol_primal: float = 1e-5
    tol_dual: float = 1e-5
    inner_iters: int = 10
    inner_step: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol_primal <= 0 or self.tol_dual <= 0:
            raise ValueError("tolerances must be > 0")
        if self.inner_iters < 1:
            raise ValueError(f"inner_iters must be >= 1, got {self.inner_iters}")
        if self.inner_step <= 0:
            raise ValueError(f"inner_step must be > 0, got {self.inner_step}")


@dataclass(frozen=True)
class BinaryModel:
    """Regression matrix and bias; decision value is tr(W^T X) + b."""

    w: np.ndarray
    b: float

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        if w.ndim != 2:
            raise ValueError(f"W must be 2-D, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or not np.isfinite(self.b):
            raise ValueError("model entries must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.w.shape


@dataclass(frozen=True)
class TrainReport:
    """Solver diagnostics for one binary training run."""

    iterations: int
    converged: bool
    primal_residual: float
    dual_residual: float
    objective_trace: Tuple[float, ...] = field(repr=False)
    best_objective: float = float("inf")
    best_iteration: int = 0


def decision_value(model: BinaryModel, x: np.ndarray) -> float:
    """tr(W^T X) + b, the elementwise inner product plus bias."""
    x = np.asarray(x, dtype=float)
    if x.shape != model.w.shape:
        raise ValueError(f"shape mismatch: model {model.w.shape}, input {x.shape}")
    return float(np.sum(model.w * x) + model.b)


def hinge_loss_sum(model: BinaryModel, data: Sequence[Tuple[np.ndarray, int]]) -> float:
    """Sum over samples of max(0, 1 - y*(tr(W^T X) + b)), y in {-1, +1}."""
    total = 0.0
    for i, (x, y) in enumerate(data):
        x = np.asarray(x, dtype=float)
        if x.shape != model.w.shape:
            raise ValueError(f"sample {i}: shape mismatch {x.shape} vs model {model.w.shape}")
        if y not in (-1, 1):
            raise ValueError(f"sample {i}: label must be -1 or +1, got {y}")
        total += max(0.0, 1.0 - y * (float(np.sum(model.w * x)) + model.b))
    return total


def objective(model: BinaryModel, spec: ObjectiveSpec, data: Sequence[Tuple[np.ndarray, int]]) -> float:
    """Full objective value of the given variant at the model."""
    val = spec.c * hinge_loss_sum(model, data)
    if spec.intrinsic_frobenius:
        val += 0.5 * float(np.sum(model.w * model.w))
    if spec.gamma > 0:
        val += spec.gamma * l1_norm(model.w)
    if spec.tau > 0:
        val += spec.tau * nuclear_norm(model.w)
    return val


def smoothed_hinge(s, mu: float = HINGE_SMOOTHING):
    """Huber-smoothed hinge of the slack s = 1 - y*f.

    Quadratic on [0, mu], linear beyond; underestimates the true hinge by at
    most mu/2 everywhere, with equality approached for s >= mu.
    """
    s = np.asarray(s, dtype=float)
    return np.where(s <= 0.0, 0.0, np.where(s >= mu, s - 0.5 * mu, 0.5 * s * s / mu))


def smoothed_hinge_grad(s, mu: float = HINGE_SMOOTHING):
    """Derivative of `smoothed_hinge` with respect to the slack."""
    s = np.asarray(s, dtype=float)
    return np.clip(s / mu, 0.0, 1.0)


def _as_design_matrix(data):
    """Stack (matrix, label) pairs into a flat design matrix and a sign vector."""
    if len(data) == 0:
        raise ValueError("training data is empty")
    first = np.asarray(data[0][0], dtype=float)
    if first.ndim != 2:
        raise ValueError(f"sample 0: expected a 2-D matrix, got shape {first.shape}")
    shape = first.shape
    rows = []
    ys = []
    for i, (x, y) in enumerate(data):
        x = np.asarray(x, dtype=float)
        if x.shape != shape:
            raise ValueError(f"sample {i}: shape mismatch {x.shape} vs {shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError(f"sample {i}: non-finite entries")
        if y not in (-1, 1):
            raise ValueError(f"sample {i}: label must be -1 or +1, got {y}")
        rows.append(x.ravel())
        ys.append(float(y))
    a = np.asarray(rows)
    y = np.asarray(ys)
    if np.all(y > 0) or np.all(y < 0):
        raise ValueError("training data must contain at least one sample of each class")
    return a, y, shape


class _LossBlock:
    """Inexact minimizer of the hinge block subproblem.

    Objective over (z, b), z flat:
        C * sum_i smoothed_hinge(1 - y_i(a_i.z + b))
        + (1/2)||z||^2            (smm/svm only)
        + (rho/2)||z - v||^2
    Each call runs up to `inner_iters` rounds of: exact 1-D minimization in b
    (bisection on the monotone derivative), then a damped Newton step in z
    with Armijo backtracking from trial step `inner_step`. The z-Hessian is
    rho*I plus the curvature of the samples inside the smoothing band, so it
    is always positive definite; plain fixed-step gradient descent is
    hopeless here because the band curvature is C/mu per sample.
    """

    def __init__(self, a, y, c, intrinsic, cfg: SolverConfig, mu: float = HINGE_SMOOTHING):
        self.a = a
        self.y = y
        self.c = c
        self.intrinsic = intrinsic
        self.rho = cfg.rho
        self.iters = cfg.inner_iters
        self.max_step = cfg.inner_step
        self.mu = mu
        self.ridge = self.rho + (1.0 if intrinsic else 0.0)

    def _value(self, f, b, z, v):
        s = 1.0 - self.y * (f + b)
        val = self.c * float(np.sum(smoothed_hinge(s, self.mu)))
        if self.intrinsic:
            val += 0.5 * float(z @ z)
        dz = z - v
        return val + 0.5 * self.rho * float(dz @ dz)

    def _best_b(self, f):
        """Exact minimizer over b for fixed scores f = A z.

        The derivative in b is -C*n_pos + (C/mu) * sum_i clip(b - t_i, 0, mu):
        every sample contributes one ramp of width mu and equal slope. The
        zero crossing is found exactly by sweeping the sorted ramp events.
        """
        pos = self.y > 0
        t = np.where(pos, 1.0 - f - self.mu, -1.0 - f)
        target = self.mu * float(np.count_nonzero(pos))
        events = np.concatenate([t, t + self.mu])
        signs = np.concatenate([np.ones(t.size), -np.ones(t.size)])
        order = np.argsort(events, kind="stable")
        ev = events[order]
        slope = np.cumsum(signs[order])
        ramp = np.concatenate([[0.0], np.cumsum(slope[:-1] * np.diff(ev))])
        j = int(np.searchsorted(ramp, target, side="left"))
        if j <= 0:
            return float(ev[0])
        if j >= ev.size:
            return float(ev[-1])
        k = slope[j - 1]
        if ramp[j - 1] >= target or k <= 0.0:
            return float(ev[j - 1])
        return float(ev[j - 1] + (target - ramp[j - 1]) / k)

    def minimize(self, z, b, v):
        z = z.copy()
        f = self.a @ z
        b = self._best_b(f)
        p = z.size
        for _ in range(self.iters):
            s = 1.0 - self.y * (f + b)
            coef = self.c * smoothed_hinge_grad(s, self.mu) * self.y
            gz = -(self.a.T @ coef) + self.rho * (z - v)
            if self.intrinsic:
                gz += z
            gb = -float(np.sum(coef))
            if float(gz @ gz) + gb * gb <= 1e-22:
                break
            band = (s > 0.0) & (s < self.mu)
            if np.any(band):
                # joint Newton over (z, b); PD because the band curvature
                # covers the b direction and rho*I covers z
                ab = self.a[band]
                scale = self.c / self.mu
                h = np.empty((p + 1, p + 1))
                h[:p, :p] = scale * (ab.T @ ab)
                h[:p, :p].flat[:: p + 1] += self.ridge
                hzb = scale * ab.sum(axis=0)
                h[:p, p] = hzb
                h[p, :p] = hzb
                h[p, p] = scale * ab.shape[0]
                try:
                    d = np.linalg.solve(h, -np.concatenate([gz, [gb]]))
                    dz, db = d[:p], float(d[p])
                except np.linalg.LinAlgError:
                    dz, db = -gz / self.ridge, 0.0
            else:
                dz, db = -gz / self.ridge, 0.0
            adz = self.a @ dz
            gdotd = float(gz @ dz) + gb * db
            val = self._value(f, b, z, v)
            t = self.max_step
            while t > 1e-20:
                zn = z + t * dz
                fn = f + t * adz
                bn = b + t * db
                if self._value(fn, bn, zn, v) <= val + 0.3 * t * gdotd:
                    break
                t *= 0.5
            else:
                break
            z, f, b = zn, fn, bn
            if db == 0.0:
                b = self._best_b(f)
            if t * t * (float(dz @ dz) + db * db) <= 1e-26 * (1.0 + float(z @ z)):
                break
        return z, b


def train_binary(
    data: Sequence[Tuple[np.ndarray, int]],
    spec: ObjectiveSpec,
    cfg: SolverConfig = SolverConfig(),
) -> Tuple[BinaryModel, TrainReport]:
    """Fit one binary classifier with labels in {-1, +1}.

    Runs consensus ADMM until the primal residual sqrt(sum_k ||Z_k - W||^2)
    and the dual residual rho*||W_new - W_old|| both drop below their
    tolerances, or `max_iters` is hit. On convergence the returned W is the
    final iterate; otherwise it is the best-objective iterate seen, with
    `converged=False` on the report. When the L1 block is active its iterate
    is reported as W (the soft threshold produces exact zeros; the consensus
    average never does), so sparsity in the model is exact.

    Deterministic given (data order, spec, cfg): initialization is all-zero
    and no randomness is consumed.
    """
    a, y, shape = _as_design_matrix(data)
    p = shape[0] * shape[1]
    rho = cfg.rho

    loss = _LossBlock(a, y, spec.c, spec.intrinsic_frobenius, cfg)
    use_l1 = spec.gamma > 0
    use_nuc = spec.tau > 0
    n_blocks = 1 + int(use_l1) + int(use_nuc)

    w = np.zeros(p)
    b = 0.0
    z_loss = np.zeros(p)
    u_loss = np.zeros(p)
    z_l1 = np.zeros(p)
    u_l1 = np.zeros(p)
    z_nuc = np.zeros(p)
    u_nuc = np.zeros(p)

    def report_w(wc):
        # the L1 iterate carries the exact zeros; fall back to the consensus
        return z_l1 if use_l1 else wc

    def true_objective(wflat, bias):
        s = 1.0 - y * (a @ wflat + bias)
        val = spec.c * float(np.sum(np.maximum(s, 0.0)))
        if spec.intrinsic_frobenius:
            val += 0.5 * float(wflat @ wflat)
        if use_l1:
            val += spec.gamma * float(np.sum(np.abs(wflat)))
        if use_nuc:
            val += spec.tau * nuclear_norm(wflat.reshape(shape))
        return val

    trace = [true_objective(report_w(w), b)]
    best_obj = trace[0]
    best_w = report_w(w).copy()
    best_b = b
    best_it = 0

    converged = False
    primal = float("inf")
    dual = float("inf")
    it = 0
    for it in range(1, cfg.max_iters + 1):
        z_loss, b = loss.minimize(z_loss, b, w - u_loss)
        if use_l1:
            z_l1 = prox_soft_threshold(w - u_l1, spec.gamma / rho).ravel()
        if use_nuc:
            z_nuc = prox_nuclear((w - u_nuc).reshape(shape), spec.tau / rho).ravel()

        w_old = w
        acc = z_loss + u_loss
        if use_l1:
            acc = acc + z_l1 + u_l1
        if use_nuc:
            acc = acc + z_nuc + u_nuc
        w = acc / n_blocks

        u_loss = u_loss + z_loss - w
        r2 = float(np.sum((z_loss - w) ** 2))
        if use_l1:
            u_l1 = u_l1 + z_l1 - w
            r2 += float(np.sum((z_l1 - w) ** 2))
        if use_nuc:
            u_nuc = u_nuc + z_nuc - w
            r2 += float(np.sum((z_nuc - w) ** 2))
        primal = float(np.sqrt(r2))
        dual = rho * float(np.linalg.norm(w - w_old))

        obj = true_objective(report_w(w), b)
        trace.append(obj)
        if obj < best_obj:
            best_obj = obj
            best_w = report_w(w).copy()
            best_b = b
            best_it = it

        if primal <= cfg.tol_primal and dual <= cfg.tol_dual:
            converged = True
            break

    if converged:
        final_w, final_b = report_w(w), b
    else:
        final_w, final_b = best_w, best_b
    model = BinaryModel(w=final_w.reshape(shape), b=float(final_b))
    report = TrainReport(
        iterations=it,
        converged=converged,
        primal_residual=primal,
        dual_residual=dual,
        objective_trace=tuple(trace),
        best_objective=best_obj,
        best_iteration=best_it,
    )
    return model, report
