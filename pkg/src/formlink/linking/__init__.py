"""Token linking: gold matrices, isolation masks, threshold decoding."""

from .decode import (
    DEFAULT_THRESHOLD,
    PredictedEntity,
    Prediction,
    binarize,
    decode,
    merge_predictions,
    prediction_from_record,
    prediction_to_record,
    save_predictions,
)
from .link_types import CONTEXT_ONLY_TYPES, LinkType, N_LINK_TYPES, N_VALUE_ONLY_TYPES
from .masks import IsolationFlags, build_masks
from .matrix import build_link_matrix

__all__ = [
    "CONTEXT_ONLY_TYPES",
    "DEFAULT_THRESHOLD",
    "IsolationFlags",
    "LinkType",
    "N_LINK_TYPES",
    "N_VALUE_ONLY_TYPES",
    "PredictedEntity",
    "Prediction",
    "binarize",
    "build_link_matrix",
    "build_masks",
    "decode",
    "merge_predictions",
    "prediction_from_record",
    "prediction_to_record",
    "save_predictions",
]
