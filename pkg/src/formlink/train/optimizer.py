"""Adam with decoupled weight decay, global-norm clipping, warmup schedule."""

from __future__ import annotations

import math

import numpy as np

from ..model.params import Params


def lr_at(step: int, total_steps: int, peak: float, warmup_ratio: float) -> float:
    """Linear warmup to the peak at ceil(warmup_ratio * total), linear decay to 0.

    ``step`` is 1-based; lr(total_steps) == 0 when there is any decay phase.
    """
    warmup = math.ceil(warmup_ratio * total_steps)
    if warmup > 0 and step <= warmup:
        return peak * step / warmup
    if total_steps <= warmup:
        return peak
    return peak * (total_steps - step) / (total_steps - warmup)


def clip_global_norm(grads: dict[str, np.ndarray], max_norm: float) -> float:
    """Scale all gradients so the global L2 norm is at most max_norm."""
    total = 0.0
    for g in grads.values():
        total += float(np.sum(g.astype(np.float64) ** 2))
    norm = math.sqrt(total)
    if max_norm > 0 and norm > max_norm:
        scale = max_norm / norm
        for g in grads.values():
            g *= scale
    return norm


class AdamW:
    """Decoupled weight decay applied to matrix-shaped tensors only."""

    def __init__(
        self,
        params: Params,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
        weight_decay: float = 0.01,
    ):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.weight_decay = weight_decay
        self.m = params.zeros_like()
        self.v = params.zeros_like()
        self.t = 0

    def step(self, params: Params, grads: dict[str, np.ndarray], lr: float) -> None:
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        for name, p in params.items():
            g = grads[name]
            m = self.m[name]
            v = self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            update = (m / bc1) / (np.sqrt(v / bc2) + self.eps)
            if self.weight_decay > 0 and p.ndim >= 2:
                update = update + self.weight_decay * p
            p -= lr * update
