"""Command-line entry point.

Commands: gen, split, train, eval, decode, bench, gradcheck, ablate,
kernelbench. Every command accepts --config FILE (JSON, keys matching the
command's long flags with underscores); explicit flags override file values,
and the effective merged configuration is echoed into the output directory.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import (
    GeneratorConfig,
    build_schemas,
    generate_corpus,
    load_corpus,
    load_schemas,
    load_split,
    make_splits,
    save_corpus,
    save_schemas,
    save_split,
    schema_by_category,
)
from .errors import ConfigError, EvaluationError, FormlinkError, InputError
from .evaluate import (
    ABLATION_FLAGS,
    kernel_bench,
    make_bench_corpus,
    run_ablations,
    speed_bench,
)
from .evaluate.protocol import evaluate_checkpoint
from .linking.decode import prediction_to_record
from .metrics import evaluate_predictions
from .model import ModelConfig, init_params, run_grad_check
from .pipeline import predict_documents
from .serialize import build_vocab, load_vocab, save_vocab
from .train import TrainConfig, load_checkpoint, save_checkpoint, train


def _echo_config(out_dir: Path, command: str, values: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {"command": command, **{k: v for k, v in sorted(values.items())}}
    (out_dir / "run_config.json").write_text(json.dumps(payload, indent=2, default=str) + "\n", encoding="utf-8")


def _merge_config_file(parser: argparse.ArgumentParser, args: argparse.Namespace) -> dict:
    """Apply --config file values underneath explicit flags; reject unknown keys."""
    known = {a.dest for a in parser._actions}
    values = vars(args).copy()
    config_path = values.pop("config", None)
    if config_path:
        try:
            file_values = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        if not isinstance(file_values, dict):
            raise ConfigError(f"config file {config_path} must hold a JSON object")
        unknown = set(file_values) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        explicit = {
            a.dest for a in parser._actions
            if getattr(args, a.dest, None) != a.default
        }
        for key, value in file_values.items():
            if key not in explicit:
                values[key] = value
    values.pop("func", None)
    return values


def _model_config(ns: dict, vocab_size: int) -> ModelConfig:
    return ModelConfig(
        vocab_size=vocab_size,
        d_model=ns["d_model"],
        n_layers=ns["n_layers"],
        n_heads=ns["n_heads"],
        d_head_score=ns["d_head_score"],
        max_seq_len=ns["max_seq_len"],
        dropout=ns["dropout"],
        use_sinusoidal=not ns["no_sinusoidal"],
        use_key_channels=not ns["no_key_channels"],
        use_qci=not ns["no_qci"],
        use_qhi=not ns["no_qhi"],
        use_qti=not ns["no_qti"],
    )


def _train_config(ns: dict) -> TrainConfig:
    return TrainConfig(
        learning_rate=ns["learning_rate"],
        epochs=ns["epochs"],
        batch_size=ns["batch_size"],
        warmup_ratio=ns["warmup_ratio"],
        eval_every_steps=ns["eval_every_steps"],
        seed=ns["seed"],
        threshold=ns["threshold"],
        weight_decay=ns["weight_decay"],
        clip_norm=ns["clip_norm"],
        max_steps=ns["max_steps"],
        max_question_window=ns["max_question_window"],
        stop_at_dev_f1=ns["stop_at_dev_f1"],
    )


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d-model", type=int, default=64)
    p.add_argument("--n-layers", type=int, default=2)
    p.add_argument("--n-heads", type=int, default=4)
    p.add_argument("--d-head-score", type=int, default=32)
    p.add_argument("--max-seq-len", type=int, default=512)
    p.add_argument("--dropout", type=float, default=0.1)
    p.add_argument("--no-sinusoidal", action="store_true", help="disable the rotary scorer transform")
    p.add_argument("--no-key-channels", action="store_true", help="5-channel variant without key links")
    p.add_argument("--no-qci", action="store_true", help="disable question-context isolation")
    p.add_argument("--no-qhi", action="store_true", help="disable question-head isolation")
    p.add_argument("--no-qti", action="store_true", help="disable question-tail isolation")


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--learning-rate", type=float, default=5e-5)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--warmup-ratio", type=float, default=0.1)
    p.add_argument("--eval-every-steps", type=int, default=500)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--weight-decay", type=float, default=0.01)
    p.add_argument("--clip-norm", type=float, default=1.0)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--max-question-window", type=int, default=128)
    p.add_argument("--stop-at-dev-f1", type=float, default=None)
    p.add_argument("--dev-fraction", type=float, default=0.1)


def _load_docs_by_split(ns: dict, side: str):
    docs = load_corpus(ns["corpus"])
    if ns.get("split"):
        spec = load_split(ns["split"])
        wanted = set(spec.train_ids if side == "train" else spec.test_ids)
        docs = [d for d in docs if d.id in wanted]
    return docs


# ---------------------------------------------------------------------------
# commands

def _cmd_gen(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    config = GeneratorConfig(
        n_categories=ns["categories"],
        layouts_per_category=ns["layouts_per_category"],
        docs_per_category=ns["docs_per_category"],
        no_key_ratio=ns["no_key_ratio"],
        multi_span_ratio=ns["multi_span_ratio"],
        seed=ns["seed"],
    )
    schemas = build_schemas(config)
    docs = generate_corpus(config, schemas)
    save_corpus(docs, ns["out"])
    save_schemas(schemas, ns["schemas_out"])
    _echo_config(Path(ns["out"]).parent, "gen", ns)
    n_values = sum(len(d.value_entities()) for d in docs)
    n_linked = sum(len(d.kv_links) for d in docs)
    stats = {
        "documents": len(docs),
        "categories": config.n_categories,
        "value_entities": n_values,
        "no_key_fraction": round(1.0 - n_linked / n_values, 4) if n_values else 0.0,
        "tokens": sum(len(d.tokens) for d in docs),
    }
    print(json.dumps(stats))
    return 0


def _cmd_split(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    docs = load_corpus(ns["corpus"])
    spec = make_splits(docs, ns["mode"], k=ns["k"], seed=ns["seed"])
    save_split(spec, ns["out"])
    _echo_config(Path(ns["out"]).parent, "split", ns)
    print(json.dumps({"mode": spec.mode, "k": spec.k, "train": len(spec.train_ids), "test": len(spec.test_ids)}))
    return 0


def _cmd_train(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    out_dir = Path(ns["out"])
    docs = _load_docs_by_split(ns, "train")
    schemas = load_schemas(ns["schemas"])
    vocab = build_vocab(docs, schemas)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_vocab(vocab, out_dir / "vocab.json")
    stride = max(1, int(1 / ns["dev_fraction"])) if ns["dev_fraction"] > 0 else 0
    dev_docs = docs[::stride] if stride else []
    dev_ids = {d.id for d in dev_docs}
    fit_docs = [d for d in docs if d.id not in dev_ids] or docs
    result = train(
        _train_config(ns),
        _model_config(ns, vocab.size),
        fit_docs,
        schemas,
        vocab,
        out_dir,
        dev_docs=dev_docs or None,
    )
    _echo_config(out_dir, "train", ns)
    print(
        json.dumps(
            {
                "best_checkpoint": str(result.best_checkpoint),
                "last_checkpoint": str(result.last_checkpoint),
                "log": str(result.log_path),
                "best_dev_f1": result.best_dev_f1,
                "steps": result.total_steps,
            }
        )
    )
    return 0


def _cmd_eval(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    docs = _load_docs_by_split(ns, ns["side"])
    schemas = load_schemas(ns["schemas"])
    vocab = load_vocab(ns["vocab"])
    metrics = evaluate_checkpoint(
        ns["ckpt"], docs, schemas, vocab,
        delta=ns["delta"], max_question_window=ns["max_question_window"],
    )
    payload = metrics.to_dict()
    payload["documents"] = len(docs)
    if ns.get("out"):
        Path(ns["out"]).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        _echo_config(Path(ns["out"]).parent, "eval", ns)
    print(json.dumps({k: payload[k] for k in ("precision", "recall", "f1", "documents")}))
    return 0


def _cmd_decode(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    docs = load_corpus(ns["corpus"])
    doc = next((d for d in docs if d.id == ns["doc_id"]), None)
    if doc is None:
        raise InputError(f"document {ns['doc_id']!r} not found in {ns['corpus']}")
    schemas = load_schemas(ns["schemas"])
    vocab = load_vocab(ns["vocab"])
    params, config = load_checkpoint(ns["ckpt"])
    if config.vocab_size != vocab.size:
        raise EvaluationError(
            f"checkpoint vocab size {config.vocab_size} does not match vocabulary {vocab.size}"
        )
    preds = predict_documents(
        params, config, [doc], schema_by_category(schemas), vocab,
        delta=ns["delta"], max_question_window=ns["max_question_window"],
    )
    print(json.dumps(prediction_to_record(preds[doc.id]), ensure_ascii=False))
    return 0


def _cmd_bench(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    out_dir = Path(ns["out"]) if ns.get("out") else None
    if ns.get("corpus") and ns.get("schemas"):
        docs = load_corpus(ns["corpus"])[: ns["docs"]]
        schemas = load_schemas(ns["schemas"])
        categories = {d.form_category for d in docs}
        if len(categories) != 1:
            raise InputError("the speed benchmark expects documents of one category")
        schema = schema_by_category(schemas)[next(iter(categories))]
    else:
        docs, schema = make_bench_corpus(ns["docs"], ns["questions"], seed=ns["seed"])
    if ns.get("vocab"):
        vocab = load_vocab(ns["vocab"])
    else:
        vocab = build_vocab(docs, [schema])
    if ns.get("ckpt"):
        params, config = load_checkpoint(ns["ckpt"])
    else:
        config = ModelConfig(vocab_size=vocab.size)
        params = init_params(config, seed=ns["seed"])
    report = speed_bench(
        params, config, docs, schema, vocab,
        questions_per_doc=ns["questions"], delta=ns["delta"], out_dir=out_dir,
    )
    if out_dir is not None:
        (out_dir / "speed_report.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
        _echo_config(out_dir, "bench", ns)
    print(json.dumps(report.to_dict()))
    return 0


def _cmd_gradcheck(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    report = run_grad_check(
        d_model=ns["d_model"],
        seq_len=ns["seq_len"],
        eps=ns["eps"],
        seed=ns["seed"],
        n_layers=ns["n_layers"],
    )
    print(json.dumps({"max_rel_error": report.max_rel_error, "threshold": ns["threshold"]}))
    return 0 if report.max_rel_error < ns["threshold"] else 1


def _cmd_ablate(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    docs = load_corpus(ns["corpus"])
    schemas = load_schemas(ns["schemas"])
    split = load_split(ns["split"])
    flags = tuple(f.strip() for f in ns["flags"].split(",") if f.strip())
    rows = run_ablations(
        docs, schemas, split,
        _train_config(ns),
        ns["out"],
        flags=flags,
        dev_fraction=ns["dev_fraction"],
    )
    _echo_config(Path(ns["out"]), "ablate", ns)
    for row in rows:
        print(
            json.dumps(
                {
                    "name": row.name,
                    "f1": round(row.metrics.f1, 4),
                    "delta_f1": round(row.delta_f1, 4),
                    "n_link_types": row.n_link_types,
                }
            )
        )
    return 0


def _cmd_kernelbench(parser, args) -> int:
    ns = _merge_config_file(parser, args)
    config = GeneratorConfig(
        n_categories=ns["categories"], docs_per_category=ns["docs_per_category"], seed=ns["seed"]
    )
    schemas = build_schemas(config)
    docs = generate_corpus(config, schemas)
    vocab = build_vocab(docs, schemas)
    report = kernel_bench(docs, schema_by_category(schemas), vocab, repeats=ns["repeats"])
    print(json.dumps(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="formlink", description=__doc__)
    parser.add_argument("--version", action="version", version=f"formlink {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="JSON config file; flags override")
        p.add_argument("--seed", type=int, default=0)
        return p

    p = command("gen", "generate a synthetic corpus and its schemas")
    p.add_argument("--out", required=True)
    p.add_argument("--schemas-out", required=True)
    p.add_argument("--categories", type=int, default=10)
    p.add_argument("--layouts-per-category", type=int, default=2)
    p.add_argument("--docs-per-category", type=int, default=30)
    p.add_argument("--no-key-ratio", type=float, default=0.305)
    p.add_argument("--multi-span-ratio", type=float, default=0.15)
    p.set_defaults(func=_cmd_gen, parser=p)

    p = command("split", "derive a train/test split file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--mode", choices=("zero_shot", "few_shot", "full"), default="zero_shot")
    p.add_argument("--k", type=int, default=None, help="few-shot count, one of 1/5/10")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_split, parser=p)

    p = command("train", "train a model on the train side of a split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--schemas", required=True)
    p.add_argument("--split", default=None)
    p.add_argument("--out", required=True)
    _add_model_flags(p)
    _add_train_flags(p)
    p.set_defaults(func=_cmd_train, parser=p)

    p = command("eval", "entity-level metrics of a checkpoint")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--schemas", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--split", default=None)
    p.add_argument("--side", choices=("train", "test"), default="test")
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--max-question-window", type=int, default=128)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_eval, parser=p)

    p = command("decode", "print the prediction for one document")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--schemas", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--doc-id", required=True)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--max-question-window", type=int, default=128)
    p.set_defaults(func=_cmd_decode, parser=p)

    p = command("bench", "parallel vs sequential inference wall time")
    p.add_argument("--questions", type=int, default=16)
    p.add_argument("--docs", type=int, default=100)
    p.add_argument("--ckpt", default=None)
    p.add_argument("--corpus", default=None)
    p.add_argument("--schemas", default=None)
    p.add_argument("--vocab", default=None)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench, parser=p)

    p = command("gradcheck", "finite-difference gradient verification")
    p.add_argument("--d-model", type=int, default=8)
    p.add_argument("--seq-len", type=int, default=16)
    p.add_argument("--n-layers", type=int, default=1)
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--threshold", type=float, default=1e-4)
    p.set_defaults(func=_cmd_gradcheck, parser=p)

    p = command("ablate", "train and score the full model plus one run per disabled component")
    p.add_argument("--corpus", required=True)
    p.add_argument("--schemas", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--flags", default=",".join(ABLATION_FLAGS))
    _add_train_flags(p)
    p.set_defaults(func=_cmd_ablate, parser=p)

    p = command("kernelbench", "compare the compiled and pure-Python decode kernels")
    p.add_argument("--categories", type=int, default=4)
    p.add_argument("--docs-per-category", type=int, default=25)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=_cmd_kernelbench, parser=p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args.parser, args)
    except FormlinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
