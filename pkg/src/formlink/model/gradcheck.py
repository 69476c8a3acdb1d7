"""Central finite-difference verification of the analytic gradients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError, NumericError
from ..linking.masks import build_masks
from ..serialize.vocab import EOS_ID, N_RESERVED, SEP_ID, SOS_ID
from ..serialize.windows import InputSample, QuestionSpan
from .config import ModelConfig
from .loss import circle_loss
from .network import forward_scores, loss_and_grads
from .params import Params, init_params


@dataclass(frozen=True)
class GradCheckReport:
    max_rel_error: float
    per_tensor: dict[str, float]


def _loss_only(params, config, sample, zhat, mask) -> float:
    z, _ = forward_scores(params, config, sample, mask)
    return circle_loss(z, zhat, mask)


def grad_check(
    params: Params,
    config: ModelConfig,
    sample: InputSample,
    zhat: np.ndarray,
    mask: np.ndarray,
    eps: float = 1e-5,
    coords_per_tensor: int = 20,
    seed: int = 0,
) -> GradCheckReport:
    """Compare analytic gradients against central differences coordinate-wise.

    Relative error uses a 1e-5 floor in the denominator so that coordinates
    whose true gradient is zero (for instance the attention key bias, which
    cancels inside softmax) compare on an absolute scale instead of dividing
    finite-difference roundoff by itself.
    """
    if params.dtype != np.float64:
        raise InputError("grad_check requires float64 parameters")
    loss0, grads = loss_and_grads(params, config, sample, zhat, mask)
    if not np.isfinite(loss0):
        raise NumericError("non-finite loss in grad_check")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 83))))
    per_tensor: dict[str, float] = {}
    for name, tensor in params.items():
        if not np.all(np.isfinite(grads[name])):
            raise NumericError(f"non-finite analytic gradient for {name}")
        flat = tensor.reshape(-1)
        count = min(coords_per_tensor, flat.size)
        coords = rng.choice(flat.size, size=count, replace=False)
        worst = 0.0
        for idx in coords:
            original = flat[idx]
            flat[idx] = original + eps
            loss_plus = _loss_only(params, config, sample, zhat, mask)
            flat[idx] = original - eps
            loss_minus = _loss_only(params, config, sample, zhat, mask)
            flat[idx] = original
            numeric = (loss_plus - loss_minus) / (2.0 * eps)
            analytic = float(grads[name].reshape(-1)[idx])
            if not np.isfinite(numeric):
                raise NumericError(f"non-finite finite-difference gradient for {name}")
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-5)
            worst = max(worst, rel)
        per_tensor[name] = worst
    return GradCheckReport(max_rel_error=max(per_tensor.values()), per_tensor=per_tensor)


def make_tiny_problem(
    d_model: int = 8,
    seq_len: int = 16,
    n_layers: int = 1,
    n_heads: int = 2,
    d_head_score: int = 4,
    use_key_channels: bool = True,
    use_sinusoidal: bool = True,
    seed: int = 0,
):
    """A small synthetic (params, config, sample, zhat, mask) in float64."""
    if seq_len < 8:
        raise InputError("tiny problem needs seq_len >= 8")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 89))))
    vocab_size = N_RESERVED + 12
    config = ModelConfig(
        vocab_size=vocab_size,
        d_model=d_model,
        n_layers=n_layers,
        n_heads=n_heads,
        d_head_score=d_head_score,
        max_seq_len=seq_len,
        layout_buckets=16,
        use_key_channels=use_key_channels,
        use_sinusoidal=use_sinusoidal,
    )
    # <s> qa [T] qb </s> then context words
    ids = np.empty(seq_len, dtype=np.int32)
    ids[0] = SOS_ID
    ids[1] = N_RESERVED
    ids[2] = SEP_ID
    ids[3] = N_RESERVED + 1
    ids[4] = EOS_ID
    context_offset = 5
    ids[context_offset:] = rng.integers(N_RESERVED, vocab_size, size=seq_len - context_offset)
    layout = np.zeros((seq_len, 4), dtype=np.int32)
    layout[context_offset:] = rng.integers(0, 16, size=(seq_len - context_offset, 4))
    segment = np.zeros(seq_len, dtype=np.int32)
    segment[context_offset:] = 1
    origin = np.full(seq_len, -1, dtype=np.int32)
    origin[context_offset:] = np.arange(seq_len - context_offset)
    sample = InputSample(
        doc_id="tiny",
        window_index=0,
        n_windows=1,
        token_ids=ids,
        segment_ids=segment,
        position_ids=np.arange(seq_len, dtype=np.int32),
        layout=layout,
        question_registry=(QuestionSpan("qa", 1, 1), QuestionSpan("qb", 3, 3)),
        context_offset=context_offset,
        origin_map=origin,
        doc_labels=("qa", "qb"),
    )
    mask = build_masks(sample, n_link_types=config.n_link_types, flags=config.isolation_flags)
    zhat = ((rng.random(mask.shape) < 0.05) & mask).astype(np.uint8)
    params = init_params(config, seed=seed, dtype=np.float64)
    return params, config, sample, zhat, mask


def run_grad_check(
    d_model: int = 8,
    seq_len: int = 16,
    eps: float = 1e-5,
    seed: int = 0,
    coords_per_tensor: int = 20,
    **problem_kwargs,
) -> GradCheckReport:
    params, config, sample, zhat, mask = make_tiny_problem(
        d_model=d_model, seq_len=seq_len, seed=seed, **problem_kwargs
    )
    return grad_check(params, config, sample, zhat, mask, eps=eps, coords_per_tensor=coords_per_tensor, seed=seed)
