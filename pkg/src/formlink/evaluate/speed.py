"""Wall-clock comparison of parallel multi-question inference against
per-question sequential querying, plus the decode-kernel benchmark."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

from .. import _kernels
from ..corpus.documents import Document
from ..corpus.schema import CategorySchema, GeneratorConfig, VALUE_TYPES, schema_by_category
from ..corpus.generator import generate_corpus
from ..errors import BenchmarkError
from ..linking.decode import binarize, decode, merge_predictions, save_predictions
from ..linking.masks import build_masks
from ..linking.matrix import build_link_matrix
from ..model.config import ModelConfig
from ..model.network import forward_scores
from ..model.params import Params
from ..pipeline import samples_for_doc
from ..serialize.vocab import Vocab
from ..serialize.windows import assemble_input

# full-scale published reference speedup, carried in reports for context only
REFERENCE_RATIO = 6.4

_MIN_MEASURED_SECONDS = 0.010


@dataclass(frozen=True)
class SpeedReport:
    n_documents: int
    n_questions_total: int
    parallel_wall_time: float
    sequential_wall_time: float
    ratio: float
    decode_kernel: str
    reference_ratio: float = REFERENCE_RATIO

    def to_dict(self) -> dict:
        return {
            "n_documents": self.n_documents,
            "n_questions_total": self.n_questions_total,
            "parallel_wall_time": self.parallel_wall_time,
            "sequential_wall_time": self.sequential_wall_time,
            "ratio": self.ratio,
            "decode_kernel": self.decode_kernel,
            "reference_ratio": self.reference_ratio,
        }


def make_bench_corpus(n_docs: int, n_questions: int, seed: int = 0) -> tuple[list[Document], CategorySchema]:
    """One category whose schema carries exactly ``n_questions`` value types."""
    labels = sorted(VALUE_TYPES)
    if n_questions > len(labels):
        raise BenchmarkError(f"at most {len(labels)} questions supported, got {n_questions}")
    chosen = labels[:n_questions]
    schema = CategorySchema(
        name="bench_00",
        n_layout_templates=2,
        value_types=tuple(chosen),
        key_phrases={lab: tuple(VALUE_TYPES[lab][1][0]) for lab in chosen},
        no_key_ratio=0.2,
        multi_span_ratio=0.1,
    )
    config = GeneratorConfig(n_categories=1, docs_per_category=n_docs, seed=seed)
    return generate_corpus(config, [schema]), schema


def _predict(params, config, sample, delta, kernel):
    mask = build_masks(sample, n_link_types=config.n_link_types, flags=config.isolation_flags)
    z, _ = forward_scores(params, config, sample, mask)
    return decode(binarize(z, delta), sample, kernel=kernel)


def speed_bench(
    params: Params,
    config: ModelConfig,
    docs: list[Document],
    schema: CategorySchema,
    vocab: Vocab,
    questions_per_doc: int,
    delta: float = 0.5,
    max_question_window: int = 128,
    out_dir: str | Path | None = None,
    kernel=None,
) -> SpeedReport:
    """Time parallel (all questions, one pass) vs sequential (one question per
    pass) inference end to end, decoding included. Both modes share the same
    parameters, threshold, and decode implementation; one warm-up document is
    excluded from the timed section.
    """
    if len(schema.value_types) < questions_per_doc:
        raise BenchmarkError(
            f"schema {schema.name} has {len(schema.value_types)} value types, "
            f"benchmark needs {questions_per_doc}"
        )
    if kernel is None:
        kernel = _kernels.active_kernel
    questions = sorted(schema.value_types)[:questions_per_doc]
    schemas = schema_by_category([schema])

    def run_parallel(doc):
        samples = assemble_input(questions, doc, vocab, schema, max_question_window, config.max_seq_len)
        return merge_predictions([_predict(params, config, s, delta, kernel) for s in samples])

    def run_sequential(doc):
        parts = []
        for label in questions:
            (sample,) = assemble_input([label], doc, vocab, schema, max_question_window, config.max_seq_len)
            parts.append(_predict(params, config, sample, delta, kernel))
        return merge_predictions(parts)

    run_parallel(docs[0])
    run_sequential(docs[0])

    start = time.perf_counter()
    parallel_out = [run_parallel(doc) for doc in docs]
    parallel_time = time.perf_counter() - start

    start = time.perf_counter()
    sequential_out = [run_sequential(doc) for doc in docs]
    sequential_time = time.perf_counter() - start

    if parallel_time + sequential_time < _MIN_MEASURED_SECONDS:
        raise BenchmarkError(
            "benchmark measured under 10 ms of work; rerun with more documents"
        )
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        save_predictions(parallel_out, out_dir / "parallel_predictions.jsonl")
        save_predictions(sequential_out, out_dir / "sequential_predictions.jsonl")
    return SpeedReport(
        n_documents=len(docs),
        n_questions_total=len(docs) * questions_per_doc,
        parallel_wall_time=parallel_time,
        sequential_wall_time=sequential_time,
        ratio=sequential_time / parallel_time,
        decode_kernel=kernel.IMPLEMENTATION,
    )


def kernel_bench(
    docs: list[Document],
    schemas: dict[str, CategorySchema],
    vocab: Vocab,
    repeats: int = 3,
    max_question_window: int = 128,
    max_seq_len: int = 512,
) -> dict:
    """Time the compiled and pure-Python decode walkers on gold link tensors
    and verify they produce identical predictions."""
    jobs = []
    for doc in docs:
        for sample in samples_for_doc(doc, schemas, vocab, max_question_window, max_seq_len):
            jobs.append((sample, build_link_matrix(sample, doc)))

    results = {}
    outputs = {}
    for name, pure in (("cython", False), ("python", True)):
        if not pure and not _kernels.HAVE_COMPILED:
            continue
        kernel = _kernels.get_kernel(pure_python=pure)
        start = time.perf_counter()
        for _ in range(repeats):
            outputs[name] = [decode(z, s, kernel=kernel) for s, z in jobs]
        results[name] = (time.perf_counter() - start) / repeats
    report = {
        "n_windows": len(jobs),
        "repeats": repeats,
        "seconds_per_pass": results,
        "compiled_available": _kernels.HAVE_COMPILED,
    }
    if "cython" in outputs and "python" in outputs:
        same = all(
            json.dumps(a.answers, default=str, sort_keys=True)
            == json.dumps(b.answers, default=str, sort_keys=True)
            for a, b in zip(outputs["cython"], outputs["python"])
        )
        report["outputs_identical"] = same
        if results["python"] > 0 and results["cython"] > 0:
            report["speedup"] = results["python"] / results["cython"]
    return report
