"""Ablation runner: one retrained model per disabled component."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..corpus.documents import Document
from ..corpus.schema import CategorySchema
from ..corpus.splits import SplitSpec
from ..errors import EvaluationError
from ..metrics import Metrics
from ..model.config import ModelConfig
from ..serialize.vocab import build_vocab
from ..train.loop import TrainConfig, train
from .protocol import evaluate_checkpoint

ABLATION_FLAGS = ("sin", "key", "qci", "qhi", "qti")

_FLAG_FIELDS = {
    "sin": "use_sinusoidal",
    "key": "use_key_channels",
    "qci": "use_qci",
    "qhi": "use_qhi",
    "qti": "use_qti",
}


@dataclass
class AblationRow:
    name: str
    metrics: Metrics
    delta_f1: float
    n_link_types: int


def run_ablations(
    docs: list[Document],
    schemas: list[CategorySchema],
    split: SplitSpec,
    train_config: TrainConfig,
    out_dir: str | Path,
    flags: tuple[str, ...] = ABLATION_FLAGS,
    model_kwargs: dict | None = None,
    dev_fraction: float = 0.1,
) -> list[AblationRow]:
    """Train the full model plus one variant per disabled flag; report deltas."""
    unknown = set(flags) - set(ABLATION_FLAGS)
    if unknown:
        raise EvaluationError(f"unknown ablation flags {sorted(unknown)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_id = {d.id: d for d in docs}
    train_docs = [by_id[i] for i in split.train_ids]
    test_docs = [by_id[i] for i in split.test_ids]
    vocab = build_vocab(train_docs, schemas)
    stride = max(1, int(1 / dev_fraction)) if dev_fraction > 0 else len(train_docs) + 1
    dev_docs = train_docs[::stride] or None

    rows: list[AblationRow] = []
    runs = [("full", None)] + [(f"-{flag}", flag) for flag in flags]
    base_f1 = 0.0
    for name, flag in runs:
        kwargs = dict(model_kwargs or {})
        if flag is not None:
            kwargs[_FLAG_FIELDS[flag]] = False
        model_config = ModelConfig(vocab_size=vocab.size, **kwargs)
        run_dir = out_dir / name.replace("-", "no_") if flag else out_dir / "full"
        result = train(train_config, model_config, train_docs, schemas, vocab, run_dir, dev_docs=dev_docs)
        metrics = evaluate_checkpoint(
            result.best_checkpoint,
            test_docs,
            schemas,
            vocab,
            delta=train_config.threshold,
            max_question_window=train_config.max_question_window,
        )
        if flag is None:
            base_f1 = metrics.f1
        rows.append(
            AblationRow(
                name=name,
                metrics=metrics,
                delta_f1=metrics.f1 - base_f1,
                n_link_types=model_config.n_link_types,
            )
        )

    report = [
        {
            "name": row.name,
            "precision": row.metrics.precision,
            "recall": row.metrics.recall,
            "f1": row.metrics.f1,
            "delta_f1": row.delta_f1,
            "n_link_types": row.n_link_types,
        }
        for row in rows
    ]
    (out_dir / "ablations.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return rows
