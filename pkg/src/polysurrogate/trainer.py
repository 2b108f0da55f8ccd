"""Featureless stochastic training of a surrogate report.

Minimizes the empirical induced loss over outcomes drawn from ``p`` with
step sizes ``learning_rate * schedule(t)``. Iterates are clipped to a box
twice the size of the polytope's bounding box. With stochastic batches the
reported solution is the running average of the iterates after a 1% burn-in
(``average=False`` reports the last iterate); full-batch runs report the
last iterate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .embedding import check_distribution
from .errors import InputError, TrainingError

SCHEDULES = {
    "inv_sqrt": lambda t: 1.0 / np.sqrt(t),
    "inv_t": lambda t: 1.0 / t,
    "constant": lambda t: 1.0,
}


@dataclass(frozen=True)
class TrainConfig:
    steps: int = 10_000
    learning_rate: float = 0.5
    schedule: str = "inv_sqrt"
    seed: int = 0
    batch: int = 1
    n_samples: int | None = None  # fixed sample pool; None draws a fresh stream
    average: bool = True

    def __post_init__(self):
        if self.steps < 1:
            raise InputError("steps must be >= 1")
        if not self.learning_rate > 0:
            raise InputError("learning_rate must be positive")
        if self.batch < 1:
            raise InputError("batch must be >= 1")
        if self.schedule not in SCHEDULES:
            raise InputError(f"unknown schedule {self.schedule!r}; choose from {sorted(SCHEDULES)}")
        if self.n_samples is not None and self.n_samples < 1:
            raise InputError("n_samples must be >= 1")


class TrainTrace(NamedTuple):
    final_report: np.ndarray
    loss_curve: np.ndarray  # batch loss at each iterate, final iterate included
    grad_norm_curve: np.ndarray
    empirical: np.ndarray  # distribution of all outcomes the run drew
    last_iterate: np.ndarray


def empirical_distribution(samples, n):
    samples = np.asarray(samples)
    if samples.size == 0:
        raise InputError("no samples")
    if samples.min() < 0 or samples.max() >= n:
        raise InputError(f"sample ids must lie in [0, {n})")
    return np.bincount(samples.ravel(), minlength=n) / samples.size


def _box(V):
    lo, hi = V.min(axis=0), V.max(axis=0)
    center, half = (lo + hi) / 2, np.maximum((hi - lo) / 2, 0.5)
    return center - 2 * half, center + 2 * half


def sgd_minimize(L, p, cfg=TrainConfig(), start=None):
    E, gen = L.embedding, L.generator
    p = check_distribution(p, E.n)
    V = E.vertices
    G_vertex = np.array([gen.value(v) for v in V])
    rng = np.random.default_rng(cfg.seed)

    if cfg.n_samples is not None:
        pool = rng.choice(E.n, size=cfg.n_samples, p=p)
        empirical = empirical_distribution(pool, E.n)
        if cfg.batch >= cfg.n_samples:
            draws = None  # full batch
        else:
            draws = pool[rng.integers(0, cfg.n_samples, size=(cfg.steps, cfg.batch))]
    else:
        draws = rng.choice(E.n, size=(cfg.steps, cfg.batch), p=p)
        empirical = empirical_distribution(draws, E.n)
    full_weights = empirical

    lo, hi = _box(V)
    u = V.mean(axis=0) if start is None else np.asarray(start, dtype=float).copy()
    step = SCHEDULES[cfg.schedule]
    losses, grad_norms = [], []
    tail_sum, tail_count = np.zeros_like(u), 0
    tail_start = 0 if cfg.steps < 100 else cfg.steps // 100

    def batch_stats(u, weights):
        mean_v = weights @ V
        loss = weights @ G_vertex - gen.value(u) - gen.gradient(u) @ (mean_v - u)
        g = gen.hessian_vector(u, u - mean_v)
        return float(loss), g

    for t in range(1, cfg.steps + 1):
        weights = full_weights if draws is None else np.bincount(draws[t - 1], minlength=E.n) / cfg.batch
        loss, g = batch_stats(u, weights)
        losses.append(loss)
        grad_norms.append(float(np.linalg.norm(g)))
        if not np.isfinite(loss) or loss > 1e6 * max(losses[0], 1e-12):
            trace = TrainTrace(u, np.array(losses), np.array(grad_norms), empirical, u)
            raise TrainingError(f"loss diverged at step {t}", trace)
        u = np.clip(u - cfg.learning_rate * step(t) * g, lo, hi)
        if t > tail_start:
            tail_sum += u
            tail_count += 1

    loss, g = batch_stats(u, full_weights)
    losses.append(loss)
    grad_norms.append(float(np.linalg.norm(g)))
    final = tail_sum / tail_count if cfg.average and draws is not None else u
    return TrainTrace(final, np.array(losses), np.array(grad_norms), empirical, u)
