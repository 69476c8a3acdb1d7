"""Ground-truth relation matrix construction."""

from __future__ import annotations

import numpy as np

from ..corpus.documents import Document, Entity
from ..errors import CoverageError, InputError
from ..serialize.windows import InputSample
from .link_types import LinkType, N_LINK_TYPES, N_VALUE_ONLY_TYPES


def _entity_positions(sample: InputSample, entity: Entity) -> list[tuple[int, int]]:
    """Entity spans mapped to serialized (first, last) position segments."""
    segments: list[tuple[int, int]] = []
    for start, end in entity.spans:
        positions = [sample.position_of(t) for t in range(start, end)]
        for prev, cur in zip(positions, positions[1:]):
            if cur != prev + 1:
                raise InputError(
                    f"doc {sample.doc_id}: span ({start}, {end}) is not contiguous after serialization"
                )
        segments.append((positions[0], positions[-1]))
    return segments


def _link_segments(z: np.ndarray, segments: list[tuple[int, int]], chain: LinkType, continuation: LinkType) -> None:
    for first, last in segments:
        for p in range(first, last):
            z[chain.channel, p, p + 1] = 1
    for (_, last), (nxt_first, _) in zip(segments, segments[1:]):
        z[continuation.channel, last, nxt_first] = 1
    final_tail = segments[-1][1]
    z[continuation.channel, final_tail, final_tail] = 1


def build_link_matrix(sample: InputSample, doc: Document, n_link_types: int = N_LINK_TYPES) -> np.ndarray:
    """Binary [n_link_types, L, L] tensor of gold links for one window.

    Entities whose question lives in a different window of the same document
    are skipped here and handled by that window; a label missing from the
    document's whole question set is a coverage error.
    """
    if n_link_types not in (N_VALUE_ONLY_TYPES, N_LINK_TYPES):
        raise InputError(f"n_link_types must be 5 or 11, got {n_link_types}")
    length = sample.length
    z = np.zeros((n_link_types, length, length), dtype=np.uint8)
    window_questions = {q.label: q for q in sample.question_registry}
    doc_labels = set(sample.doc_labels) or set(window_questions)

    for value_index, entity in doc.value_entities():
        if entity.label not in doc_labels:
            raise CoverageError(
                f"doc {doc.id}: value label {entity.label!r} missing from the question set"
            )
        question = window_questions.get(entity.label)
        if question is None:
            continue
        segments = _entity_positions(sample, entity)
        head = segments[0][0]
        tail = segments[-1][1]
        _link_segments(z, segments, LinkType.VALUE_HEAD_TO_TAIL, LinkType.VALUE_SEGMENT_CONTINUATION)
        z[LinkType.VALUE_TAIL_TO_HEAD.channel, tail, head] = 1
        z[LinkType.QUESTION_HEAD_TO_VALUE_HEAD.channel, question.head, head] = 1
        z[LinkType.QUESTION_TAIL_TO_VALUE_TAIL.channel, question.tail, tail] = 1

        if n_link_types == N_VALUE_ONLY_TYPES:
            continue
        key_index = doc.key_for_value(value_index)
        if key_index is None:
            continue  # no-key and implicit-key values skip the key channels
        key_segments = _entity_positions(sample, doc.entities[key_index])
        key_head = key_segments[0][0]
        key_tail = key_segments[-1][1]
        _link_segments(z, key_segments, LinkType.KEY_HEAD_TO_TAIL, LinkType.KEY_SEGMENT_CONTINUATION)
        z[LinkType.KEY_HEAD_TO_VALUE_HEAD.channel, key_head, head] = 1
        z[LinkType.VALUE_TAIL_TO_KEY_TAIL.channel, tail, key_tail] = 1
        z[LinkType.QUESTION_HEAD_TO_KEY_HEAD.channel, question.head, key_head] = 1
        z[LinkType.KEY_TAIL_TO_QUESTION_TAIL.channel, key_tail, question.tail] = 1
    return z
