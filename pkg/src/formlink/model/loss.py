"""Circle loss over the unmasked cells of the score tensor.

loss = log(1 + sum_neg e^{z}) + log(1 + sum_pos e^{-z}); the implicit 1 inside
each log is the zero-score anchor that separates positives from negatives, so
scores are pushed above / below 0 rather than merely apart. Masked cells carry
no value and no gradient.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError


def _log1p_sum_exp(values: np.ndarray) -> tuple[float, float]:
    """log(1 + sum(e^v)) and its max-shift, overflow-safe. Empty -> 0."""
    if values.size == 0:
        return 0.0, 0.0
    m = max(float(values.max()), 0.0)
    total = np.exp(-m) + np.exp(values - m).sum()
    return float(np.log(total) + m), m


def circle_loss(z: np.ndarray, zhat: np.ndarray, mask: np.ndarray) -> float:
    """Scalar loss over unmasked cells; no unmasked cells gives exactly 0."""
    loss, _ = _circle_loss_parts(z, zhat, mask)
    return loss


def circle_loss_with_grad(z: np.ndarray, zhat: np.ndarray, mask: np.ndarray) -> tuple[float, np.ndarray]:
    """Loss and dloss/dZ (dense, zero at masked cells)."""
    loss, parts = _circle_loss_parts(z, zhat, mask)
    flat_idx, positive, neg_vals, pos_vals, lse_neg, lse_pos = parts
    dz = np.zeros(z.size, dtype=z.dtype)
    if neg_vals.size:
        dz[flat_idx[~positive]] = np.exp(neg_vals - lse_neg)
    if pos_vals.size:
        dz[flat_idx[positive]] = -np.exp(-pos_vals - lse_pos)
    return loss, dz.reshape(z.shape)


def _circle_loss_parts(z, zhat, mask):
    if z.shape != zhat.shape or z.shape != mask.shape:
        raise ValueError(f"shape mismatch: z {z.shape}, zhat {zhat.shape}, mask {mask.shape}")
    flat_idx = np.flatnonzero(mask)
    cells = z.reshape(-1)[flat_idx].astype(np.float64)
    positive = zhat.reshape(-1)[flat_idx].astype(bool)
    neg_vals = cells[~positive]
    pos_vals = cells[positive]
    lse_neg, _ = _log1p_sum_exp(neg_vals)
    lse_pos, _ = _log1p_sum_exp(-pos_vals)
    loss = lse_neg + lse_pos
    if not np.isfinite(loss):
        raise NumericError("non-finite circle loss")
    return loss, (flat_idx, positive, neg_vals, pos_vals, lse_neg, lse_pos)
