"""Optimization loop, schedule, and checkpoint persistence."""

from .checkpoint import load_checkpoint, save_checkpoint
from .loop import TrainConfig, TrainResult, train
from .optimizer import AdamW, clip_global_norm, lr_at

__all__ = [
    "AdamW",
    "TrainConfig",
    "TrainResult",
    "clip_global_norm",
    "load_checkpoint",
    "lr_at",
    "save_checkpoint",
    "train",
]
