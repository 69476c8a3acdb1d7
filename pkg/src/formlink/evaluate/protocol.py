"""Zero-shot, few-shot, and full-data evaluation protocol."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..corpus.documents import Document
from ..corpus.schema import CategorySchema, schema_by_category
from ..corpus.splits import FEW_SHOT, FULL, ZERO_SHOT, SplitSpec, make_splits
from ..errors import EvaluationError
from ..metrics import Metrics, evaluate_predictions
from ..model.config import ModelConfig
from ..pipeline import predict_documents
from ..serialize.vocab import build_vocab
from ..train.checkpoint import load_checkpoint
from ..train.loop import TrainConfig, train


@dataclass
class ProtocolResult:
    mode: str
    k: int | None
    metrics: Metrics
    checkpoint: Path
    split: SplitSpec

    def to_dict(self) -> dict:
        body = self.metrics.to_dict()
        body["mode"] = self.mode if self.k is None else f"{self.mode}_{self.k}"
        return body


def evaluate_checkpoint(
    checkpoint_path: str | Path,
    docs: list[Document],
    schemas: list[CategorySchema] | dict[str, CategorySchema],
    vocab,
    delta: float = 0.5,
    max_question_window: int = 128,
) -> Metrics:
    """Entity-level metrics of a stored checkpoint on a document list."""
    params, config = load_checkpoint(checkpoint_path)
    if config.vocab_size != vocab.size:
        raise EvaluationError(
            f"checkpoint vocab size {config.vocab_size} does not match vocabulary {vocab.size}"
        )
    if not isinstance(schemas, dict):
        schemas = schema_by_category(schemas)
    preds = predict_documents(
        params, config, docs, schemas, vocab, delta=delta, max_question_window=max_question_window
    )
    return evaluate_predictions(docs, preds)


def run_protocol(
    docs: list[Document],
    schemas: list[CategorySchema],
    mode: str,
    train_config: TrainConfig,
    out_dir: str | Path,
    k: int | None = None,
    model_kwargs: dict | None = None,
    dev_fraction: float = 0.1,
) -> ProtocolResult:
    """Split, train, and evaluate one mode; writes a metrics report JSON."""
    if mode not in (ZERO_SHOT, FEW_SHOT, FULL):
        raise EvaluationError(f"unknown protocol mode {mode!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    split = make_splits(docs, mode, k=k, seed=train_config.seed)
    by_id = {d.id: d for d in docs}
    train_docs = [by_id[i] for i in split.train_ids]
    test_docs = [by_id[i] for i in split.test_ids]
    vocab = build_vocab(train_docs, schemas)
    model_config = ModelConfig(vocab_size=vocab.size, **(model_kwargs or {}))

    # hold a dev slice out of training for checkpoint selection; few-shot
    # moved documents stay in training, so dev comes from train categories
    test_categories = {d.form_category for d in test_docs}
    if mode == FULL:
        candidates = train_docs
    else:
        candidates = [d for d in train_docs if d.form_category not in test_categories]
    stride = max(1, int(1 / dev_fraction)) if dev_fraction > 0 else 0
    dev_docs = candidates[::stride] if stride else []
    dev_ids = {d.id for d in dev_docs}
    fit_docs = [d for d in train_docs if d.id not in dev_ids]
    result = train(
        train_config, model_config, fit_docs, schemas, vocab, out_dir, dev_docs=dev_docs or None
    )
    metrics = evaluate_checkpoint(
        result.best_checkpoint,
        test_docs,
        schemas,
        vocab,
        delta=train_config.threshold,
        max_question_window=train_config.max_question_window,
    )
    outcome = ProtocolResult(mode=mode, k=k, metrics=metrics, checkpoint=result.best_checkpoint, split=split)
    (out_dir / "report.json").write_text(json.dumps(outcome.to_dict(), indent=2) + "\n", encoding="utf-8")
    return outcome
