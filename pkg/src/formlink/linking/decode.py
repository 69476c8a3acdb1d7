"""Threshold binarization and word-graph decoding into predictions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..serialize.windows import InputSample
from .. import _kernels
from .link_types import N_LINK_TYPES

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class PredictedEntity:
    """Spans use document token index ranges, end exclusive."""

    spans: tuple[tuple[int, int], ...]
    key_spans: tuple[tuple[int, int], ...] | None = None


@dataclass
class Prediction:
    doc_id: str
    answers: dict[str, list[PredictedEntity]] = field(default_factory=dict)


def binarize(scores: np.ndarray, delta: float = DEFAULT_THRESHOLD, mask: np.ndarray | None = None) -> np.ndarray:
    """Elementwise ``score >= delta``; the mask sentinel keeps masked cells 0."""
    out = (scores >= delta).astype(np.uint8)
    if mask is not None:
        out &= mask.astype(np.uint8)
    return out


def _segments_to_doc_spans(segments: list[tuple[int, int]], origin: np.ndarray) -> tuple[tuple[int, int], ...]:
    """Map position segments to document-index spans, splitting any segment
    whose underlying document indices are not consecutive."""
    spans: list[tuple[int, int]] = []
    for first, last in segments:
        start = prev = int(origin[first])
        for pos in range(first + 1, last + 1):
            cur = int(origin[pos])
            if cur != prev + 1:
                spans.append((start, prev + 1))
                start = cur
            prev = cur
        spans.append((start, prev + 1))
    return tuple(spans)


def _positions_covered(segments: list[tuple[int, int]]) -> set[int]:
    covered: set[int] = set()
    for first, last in segments:
        covered.update(range(first, last + 1))
    return covered


def decode(binary: np.ndarray, sample: InputSample, kernel=None) -> Prediction:
    """Walk the binarized link tensor and emit entities per question.

    Overlapping accepted entities for the same question are resolved in favor
    of the earlier head; exact duplicates collapse. Unresolvable paths yield
    no prediction and never fail.
    """
    if kernel is None:
        kernel = _kernels.active_kernel
    binary = np.ascontiguousarray(binary, dtype=np.uint8)
    use_keys = binary.shape[0] >= N_LINK_TYPES
    prediction = Prediction(doc_id=sample.doc_id)
    for q in sample.question_registry:
        raw = kernel.decode_question(binary, q.head, q.tail, sample.context_offset, use_keys)
        taken: set[int] = set()
        seen_spans: set[tuple] = set()
        entities: list[PredictedEntity] = []
        for segments, key_segments in raw:
            covered = _positions_covered(segments)
            spans = _segments_to_doc_spans(segments, sample.origin_map)
            if spans in seen_spans or covered & taken:
                continue
            seen_spans.add(spans)
            taken |= covered
            key_spans = (
                _segments_to_doc_spans(key_segments, sample.origin_map)
                if key_segments is not None
                else None
            )
            entities.append(PredictedEntity(spans=spans, key_spans=key_spans))
        prediction.answers[q.label] = entities
    return prediction


def merge_predictions(parts: list[Prediction]) -> Prediction:
    """Union the per-window predictions of one document."""
    if not parts:
        raise ValueError("nothing to merge")
    merged = Prediction(doc_id=parts[0].doc_id)
    for part in parts:
        if part.doc_id != merged.doc_id:
            raise ValueError(f"cannot merge predictions of {part.doc_id} into {merged.doc_id}")
        for label, entities in part.answers.items():
            merged.answers.setdefault(label, []).extend(entities)
    return merged


def prediction_to_record(pred: Prediction) -> dict:
    return {
        "doc_id": pred.doc_id,
        "answers": {
            label: [
                {
                    "spans": [list(s) for s in e.spans],
                    "key_spans": [list(s) for s in e.key_spans] if e.key_spans is not None else None,
                }
                for e in entities
            ]
            for label, entities in pred.answers.items()
        },
    }


def prediction_from_record(rec: dict) -> Prediction:
    return Prediction(
        doc_id=rec["doc_id"],
        answers={
            label: [
                PredictedEntity(
                    spans=tuple(tuple(s) for s in e["spans"]),
                    key_spans=tuple(tuple(s) for s in e["key_spans"]) if e["key_spans"] is not None else None,
                )
                for e in entities
            ]
            for label, entities in rec["answers"].items()
        },
    )


def save_predictions(preds: list[Prediction], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pred in preds:
            fh.write(json.dumps(prediction_to_record(pred), ensure_ascii=False) + "\n")
