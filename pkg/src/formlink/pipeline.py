"""End-to-end inference: documents in, merged predictions out."""

from __future__ import annotations

import numpy as np

from .corpus.documents import Document
from .corpus.schema import CategorySchema
from .errors import SchemaError
from .linking.decode import Prediction, binarize, decode, merge_predictions
from .linking.masks import build_masks
from .linking.matrix import build_link_matrix
from .model.config import ModelConfig
from .model.network import forward_scores
from .model.params import Params
from .serialize.vocab import Vocab
from .serialize.windows import InputSample, assemble_input, build_question_set

DEFAULT_QUESTION_WINDOW = 128


def samples_for_doc(
    doc: Document,
    schemas: dict[str, CategorySchema],
    vocab: Vocab,
    max_question_window: int = DEFAULT_QUESTION_WINDOW,
    max_seq_len: int = 512,
) -> list[InputSample]:
    schema = schemas.get(doc.form_category)
    if schema is None:
        raise SchemaError(f"doc {doc.id}: no schema for category {doc.form_category!r}")
    questions = build_question_set(doc, schema)
    return assemble_input(questions, doc, vocab, schema, max_question_window, max_seq_len)


def predict_sample(
    params: Params,
    config: ModelConfig,
    sample: InputSample,
    delta: float,
    kernel=None,
) -> Prediction:
    mask = build_masks(sample, n_link_types=config.n_link_types, flags=config.isolation_flags)
    z, _ = forward_scores(params, config, sample, mask)
    return decode(binarize(z, delta), sample, kernel=kernel)


def predict_documents(
    params: Params,
    config: ModelConfig,
    docs: list[Document],
    schemas: dict[str, CategorySchema],
    vocab: Vocab,
    delta: float = 0.5,
    max_question_window: int = DEFAULT_QUESTION_WINDOW,
    kernel=None,
) -> dict[str, Prediction]:
    """Parallel-question inference, one forward pass per window."""
    out: dict[str, Prediction] = {}
    for doc in docs:
        samples = samples_for_doc(doc, schemas, vocab, max_question_window, config.max_seq_len)
        parts = [predict_sample(params, config, s, delta, kernel=kernel) for s in samples]
        out[doc.id] = merge_predictions(parts)
    return out


def gold_tensors(sample: InputSample, doc: Document, config: ModelConfig) -> tuple[np.ndarray, np.ndarray]:
    """Ground-truth link matrix and isolation mask for one window."""
    zhat = build_link_matrix(sample, doc, n_link_types=config.n_link_types)
    mask = build_masks(sample, n_link_types=config.n_link_types, flags=config.isolation_flags)
    return zhat, mask
