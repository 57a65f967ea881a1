"""Adam training loop producing per-epoch validation metrics.

Quantum angles and classical weights are updated jointly by one Adam
instance over the flattened parameter vector. Runs are deterministic per
config: theta comes from seed + 2, network weights from seed + 3, and epoch
shuffles from seed + 4 (dataset generation and splitting, done by the
caller, use seed and seed + 1).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .data import Dataset
from .model import (HybridModel, evaluate, grad_all, init_model_params,
                    params_from_vector)


@dataclass
class AdamState:
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0
    lr: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


@dataclass
class TrainConfig:
    epochs: int = 100
    batch_size: int = 16
    lr: float = 0.05
    seed: int = 0
    dataset: str = "synthetic"
    model: str = "classical_net"


@dataclass
class MetricsRecord:
    epoch: int
    val_loss: float
    val_accuracy: float


class TrainingDiverged(RuntimeError):
    """Loss became NaN during training."""


def adam_init(n_params: int, lr: float = 0.05) -> AdamState:
    return AdamState(np.zeros(n_params), np.zeros(n_params), lr=lr)


def adam_step(state: AdamState, params: np.ndarray,
              grads: np.ndarray) -> tuple[AdamState, np.ndarray]:
    """One bias-corrected Adam update; returns new state and parameters."""
    if params.shape != grads.shape or params.shape != state.first_moment.shape:
        raise ValueError("parameter, gradient, and moment shapes must match")
    t = state.step_count + 1
    m = state.beta1 * state.first_moment + (1.0 - state.beta1) * grads
    v = state.beta2 * state.second_moment + (1.0 - state.beta2) * grads ** 2
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_params = params - state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return replace(state, first_moment=m, second_moment=v, step_count=t), new_params


def train(model: HybridModel, train_set: Dataset, val_set: Dataset,
          config: TrainConfig):
    """Mini-batch Adam over shuffled epochs; evaluates on the validation set
    after each epoch. Returns (history, final ModelParams)."""
    if config.epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {config.epochs}")
    if not 1 <= config.batch_size <= train_set.n_rows:
        raise ValueError(f"batch_size must be in [1, {train_set.n_rows}], "
                         f"got {config.batch_size}")
    params = init_model_params(model, config.seed + 2)
    vec = params.to_vector()
    adam = adam_init(len(vec), lr=config.lr)
    shuffle_rng = np.random.default_rng(config.seed + 4)
    history: list[MetricsRecord] = []
    for epoch in range(1, config.epochs + 1):
        order = shuffle_rng.permutation(train_set.n_rows)
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            grad_sum = np.zeros_like(vec)
            for i in batch:
                g = grad_all(model, params, train_set.features[i],
                             int(train_set.targets[i]))
                grad_sum += g.to_vector()
            grad_mean = grad_sum / len(batch)
            if not np.all(np.isfinite(grad_mean)):
                raise TrainingDiverged(
                    f"non-finite gradient in epoch {epoch}")
            adam, vec = adam_step(adam, vec, grad_mean)
            params = params_from_vector(model, vec)
        val_loss, val_acc = evaluate(model, params, val_set)
        if not np.isfinite(val_loss):
            raise TrainingDiverged(f"validation loss is not finite in epoch {epoch}")
        history.append(MetricsRecord(epoch, val_loss, val_acc))
    return history, params


def best_metrics(history: list[MetricsRecord]) -> tuple[float, float]:
    """(min loss, max accuracy) taken independently over epochs."""
    if not history:
        raise ValueError("metrics history is empty")
    return (min(r.val_loss for r in history),
            max(r.val_accuracy for r in history))
