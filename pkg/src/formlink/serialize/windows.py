"""Model input assembly: question packing, windowing, layout quantization.

A window's token stream is ``<s> Q1 [T] Q2 [T] ... Qk </s> C`` where the
question region is capped by ``max_question_window`` and the full context C
(in reading order) is replicated into every window of a document.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus.documents import Document
from ..corpus.schema import CategorySchema
from ..errors import InputError, SchemaError, TruncationError
from .reading_order import reading_order
from .vocab import EOS_ID, SEP_ID, SOS_ID, Vocab, question_tokens

LAYOUT_BUCKETS = 1001  # 0..1000 inclusive


@dataclass(frozen=True)
class QuestionSpan:
    label: str
    head: int
    tail: int


@dataclass
class InputSample:
    doc_id: str
    window_index: int
    n_windows: int
    token_ids: np.ndarray
    segment_ids: np.ndarray
    position_ids: np.ndarray
    layout: np.ndarray
    question_registry: tuple[QuestionSpan, ...]
    context_offset: int
    origin_map: np.ndarray
    doc_labels: tuple[str, ...] = ()
    _origin_inverse: dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def length(self) -> int:
        return int(self.token_ids.shape[0])

    def position_of(self, doc_index: int) -> int:
        """Serialized position of a document token index within this window."""
        if not self._origin_inverse:
            for pos in range(self.context_offset, self.length):
                self._origin_inverse[int(self.origin_map[pos])] = pos
        return self._origin_inverse[doc_index]

    def registry_labels(self) -> list[str]:
        return [q.label for q in self.question_registry]


def build_question_set(doc: Document, schema: CategorySchema) -> list[str]:
    """All value-type labels of the document's category, sorted. Absent types
    become negative questions."""
    if schema.name != doc.form_category:
        raise SchemaError(f"doc {doc.id} has category {doc.form_category!r}, schema is {schema.name!r}")
    if not schema.value_types:
        raise SchemaError(f"schema {schema.name} defines no value types")
    return sorted(schema.value_types)


def _quantize(coord: int, extent: int) -> int:
    bucket = int(coord * 1000 // max(extent, 1))
    return min(max(bucket, 0), 1000)


def assemble_input(
    questions: list[str],
    doc: Document,
    vocab: Vocab,
    schema: CategorySchema,
    max_question_window: int = 128,
    max_seq_len: int = 512,
) -> list[InputSample]:
    """Pack questions greedily into windows and serialize each with the context."""
    if not questions:
        raise InputError(f"doc {doc.id}: empty question list")

    tokenized: list[tuple[str, list[int]]] = []
    for label in questions:
        ids = vocab.tokenize_all(question_tokens(schema, label))
        if len(ids) + 1 > max_question_window:
            raise InputError(
                f"question {label!r} needs {len(ids) + 1} tokens, window is {max_question_window}"
            )
        tokenized.append((label, ids))

    groups: list[list[tuple[str, list[int]]]] = []
    current: list[tuple[str, list[int]]] = []
    used = 0
    for label, ids in tokenized:
        cost = len(ids) + 1
        if current and used + cost > max_question_window:
            groups.append(current)
            current, used = [], 0
        current.append((label, ids))
        used += cost
    groups.append(current)

    perm = reading_order(doc.tokens)
    context_ids = [vocab.tokenize(doc.tokens[i].text) for i in perm]
    context_layout = [
        (
            _quantize(doc.tokens[i].bbox.x1, doc.page_width),
            _quantize(doc.tokens[i].bbox.y1, doc.page_height),
            _quantize(doc.tokens[i].bbox.x2, doc.page_width),
            _quantize(doc.tokens[i].bbox.y2, doc.page_height),
        )
        for i in perm
    ]

    samples: list[InputSample] = []
    for w, group in enumerate(groups):
        ids: list[int] = [SOS_ID]
        registry: list[QuestionSpan] = []
        for g, (label, q_ids) in enumerate(group):
            if g > 0:
                ids.append(SEP_ID)
            registry.append(QuestionSpan(label, head=len(ids), tail=len(ids) + len(q_ids) - 1))
            ids.extend(q_ids)
        ids.append(EOS_ID)
        context_offset = len(ids)
        ids.extend(context_ids)
        length = len(ids)
        if length > max_seq_len:
            raise TruncationError(
                f"doc {doc.id}: window {w} needs {length} tokens, max_seq_len is {max_seq_len}"
            )
        layout = np.zeros((length, 4), dtype=np.int32)
        layout[context_offset:] = np.asarray(context_layout, dtype=np.int32).reshape(-1, 4)
        segment = np.zeros(length, dtype=np.int32)
        segment[context_offset:] = 1
        origin = np.full(length, -1, dtype=np.int32)
        origin[context_offset:] = np.asarray(perm, dtype=np.int32)
        samples.append(
            InputSample(
                doc_id=doc.id,
                window_index=w,
                n_windows=len(groups),
                token_ids=np.asarray(ids, dtype=np.int32),
                segment_ids=segment,
                position_ids=np.arange(length, dtype=np.int32),
                layout=layout,
                question_registry=tuple(registry),
                context_offset=context_offset,
                origin_map=origin,
                doc_labels=tuple(questions),
            )
        )
    return samples
