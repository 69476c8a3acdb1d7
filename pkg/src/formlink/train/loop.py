"""Seeded training loop with warmup, periodic dev evaluation, checkpointing."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus.documents import Document
from ..corpus.schema import CategorySchema, rng_for, schema_by_category
from ..errors import ConfigError, NumericError
from ..metrics import evaluate_predictions
from ..model.config import ModelConfig
from ..model.network import loss_and_grads
from ..model.params import Params, init_params
from ..pipeline import gold_tensors, predict_documents, samples_for_doc
from ..serialize.vocab import Vocab
from .checkpoint import save_checkpoint
from .optimizer import AdamW, clip_global_norm, lr_at


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 5e-5
    epochs: int = 30
    batch_size: int = 8
    warmup_ratio: float = 0.1
    eval_every_steps: int = 500
    seed: int = 0
    threshold: float = 0.5
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    weight_decay: float = 0.01
    clip_norm: float = 1.0
    max_steps: int | None = None
    max_question_window: int = 128
    stop_at_dev_f1: float | None = None

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if not 0.0 <= self.warmup_ratio <= 1.0:
            raise ConfigError("warmup_ratio must lie in [0, 1]")
        if self.epochs < 1 or self.batch_size < 1:
            raise ConfigError("epochs and batch_size must be >= 1")


@dataclass
class TrainResult:
    best_checkpoint: Path
    last_checkpoint: Path
    log_path: Path
    best_dev_f1: float | None
    total_steps: int


def train(
    config: TrainConfig,
    model_config: ModelConfig,
    train_docs: list[Document],
    schemas: list[CategorySchema] | dict[str, CategorySchema],
    vocab: Vocab,
    out_dir: str | Path,
    dev_docs: list[Document] | None = None,
) -> TrainResult:
    """Optimize from scratch on the given documents; returns checkpoint paths.

    Deterministic for a fixed (config, model_config, corpus) within one build:
    sample order, dropout, and initialization all derive from config.seed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not isinstance(schemas, dict):
        schemas = schema_by_category(schemas)
    if not train_docs:
        raise ConfigError("no training documents")

    windows = []
    for doc in train_docs:
        for sample in samples_for_doc(
            doc, schemas, vocab, config.max_question_window, model_config.max_seq_len
        ):
            windows.append((sample, doc))

    steps_per_epoch = math.ceil(len(windows) / config.batch_size)
    total_steps = config.epochs * steps_per_epoch
    if config.max_steps is not None:
        total_steps = min(total_steps, config.max_steps)

    params = init_params(model_config, seed=config.seed, dtype=np.float32)
    optimizer = AdamW(
        params,
        beta1=config.beta1,
        beta2=config.beta2,
        eps=config.adam_eps,
        weight_decay=config.weight_decay,
    )
    shuffle_rng = rng_for(config.seed, 503)

    best_path = out_dir / "best.ckpt"
    last_path = out_dir / "last.ckpt"
    log_path = out_dir / "train_log.jsonl"
    best_f1: float | None = None
    step = 0
    done = False

    with open(log_path, "w", encoding="utf-8") as log:
        for _epoch in range(config.epochs):
            if done:
                break
            order = shuffle_rng.permutation(len(windows))
            for start in range(0, len(order), config.batch_size):
                step += 1
                batch = order[start : start + config.batch_size]
                grads = params.zeros_like()
                batch_loss = 0.0
                drop_rng = rng_for(config.seed, 509, step) if model_config.dropout > 0 else None
                for idx in batch:
                    sample, doc = windows[int(idx)]
                    zhat, mask = gold_tensors(sample, doc, model_config)
                    loss, grads = loss_and_grads(
                        params, model_config, sample, zhat, mask,
                        train=True, drop_rng=drop_rng, grads=grads,
                    )
                    batch_loss += loss
                batch_loss /= len(batch)
                if not np.isfinite(batch_loss):
                    raise NumericError(f"non-finite loss at step {step}")
                for g in grads.values():
                    g /= len(batch)
                clip_global_norm(grads, config.clip_norm)
                lr = lr_at(step, total_steps, config.learning_rate, config.warmup_ratio)
                optimizer.step(params, grads, lr)

                entry: dict = {"step": step, "loss": round(float(batch_loss), 6), "lr": lr}
                if dev_docs and (step % config.eval_every_steps == 0 or step == total_steps):
                    preds = predict_documents(
                        params, model_config, dev_docs, schemas, vocab,
                        delta=config.threshold,
                        max_question_window=config.max_question_window,
                    )
                    dev_f1 = evaluate_predictions(dev_docs, preds).f1
                    entry["dev_f1"] = dev_f1
                    if best_f1 is None or dev_f1 > best_f1:
                        best_f1 = dev_f1
                        save_checkpoint(params, model_config, best_path)
                        (out_dir / "best.json").write_text(
                            json.dumps({"step": step, "dev_f1": dev_f1}) + "\n", encoding="utf-8"
                        )
                    if config.stop_at_dev_f1 is not None and dev_f1 >= config.stop_at_dev_f1:
                        done = True
                log.write(json.dumps(entry) + "\n")
                if step >= total_steps:
                    done = True
                if done:
                    break

    save_checkpoint(params, model_config, last_path)
    if best_f1 is None:
        save_checkpoint(params, model_config, best_path)
    return TrainResult(
        best_checkpoint=best_path,
        last_checkpoint=last_path,
        log_path=log_path,
        best_dev_f1=best_f1,
        total_steps=step,
    )
