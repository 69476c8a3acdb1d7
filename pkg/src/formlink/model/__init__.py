"""Encoder, scorer, circle loss, and gradient verification."""

from .config import ModelConfig
from .gradcheck import GradCheckReport, grad_check, make_tiny_problem, run_grad_check
from .loss import circle_loss, circle_loss_with_grad
from .network import (
    attention_mask,
    backward_scores,
    embed_forward,
    encode_forward,
    forward_scores,
    loss_and_grads,
    neg_sentinel,
    score_forward,
)
from .params import Params, init_params, tensor_shapes

__all__ = [
    "GradCheckReport",
    "ModelConfig",
    "Params",
    "attention_mask",
    "backward_scores",
    "circle_loss",
    "circle_loss_with_grad",
    "embed_forward",
    "encode_forward",
    "forward_scores",
    "grad_check",
    "init_params",
    "loss_and_grads",
    "make_tiny_problem",
    "neg_sentinel",
    "run_grad_check",
    "score_forward",
    "tensor_shapes",
]
