"""Evaluation harness: metrics, protocol runs, ablations, speed benchmarks."""

from ..metrics import LabelCounts, Metrics, evaluate_predictions
from .ablation import ABLATION_FLAGS, AblationRow, run_ablations
from .protocol import ProtocolResult, evaluate_checkpoint, run_protocol
from .speed import REFERENCE_RATIO, SpeedReport, kernel_bench, make_bench_corpus, speed_bench

__all__ = [
    "ABLATION_FLAGS",
    "AblationRow",
    "LabelCounts",
    "Metrics",
    "ProtocolResult",
    "REFERENCE_RATIO",
    "SpeedReport",
    "evaluate_checkpoint",
    "evaluate_predictions",
    "kernel_bench",
    "make_bench_corpus",
    "run_ablations",
    "run_protocol",
    "speed_bench",
]
