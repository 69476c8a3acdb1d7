import numpy as np
import pytest

from formlink.errors import InputError, SchemaError, TruncationError
from formlink.serialize import (
    EOS_ID,
    PAD_ID,
    SEP_ID,
    SOS_ID,
    UNK_ID,
    assemble_input,
    build_question_set,
    build_vocab,
    load_vocab,
    question_tokens,
    save_vocab,
)


def test_reserved_ids_fixed():
    assert (SOS_ID, EOS_ID, SEP_ID, PAD_ID, UNK_ID) == (0, 1, 2, 3, 4)


def test_vocab_known_and_unknown(vocab, docs):
    word = docs[0].tokens[0].text
    wid = vocab.tokenize(word)
    assert wid == vocab.tokenize(word)
    assert wid >= 5
    assert vocab.tokenize("definitely-not-in-vocab") == UNK_ID


def test_vocab_round_trip(vocab, tmp_path):
    path = tmp_path / "vocab.json"
    save_vocab(vocab, path)
    assert load_vocab(path).token_to_id == vocab.token_to_id


def test_question_set_includes_absent_labels(docs, by_cat):
    doc = docs[0]
    schema = by_cat[doc.form_category]
    questions = build_question_set(doc, schema)
    assert questions == sorted(schema.value_types)
    present = {e.label for _, e in doc.value_entities()}
    assert set(questions) >= present


def test_question_set_schema_mismatch(docs, by_cat, schemas):
    doc = docs[0]
    other = next(s for s in schemas if s.name != doc.form_category)
    with pytest.raises(SchemaError):
        build_question_set(doc, other)


def test_single_window_layout(docs, by_cat, vocab):
    doc = docs[0]
    schema = by_cat[doc.form_category]
    questions = build_question_set(doc, schema)
    samples = assemble_input(questions, doc, vocab, schema)
    assert len(samples) == 1
    s = samples[0]
    assert s.token_ids[0] == SOS_ID
    assert s.token_ids[s.context_offset - 1] == EOS_ID
    assert list(s.position_ids) == list(range(s.length))
    # segment 0 strictly before the context, 1 after
    assert all(s.segment_ids[:s.context_offset] == 0)
    assert all(s.segment_ids[s.context_offset:] == 1)
    # separators sit between consecutive questions
    seps = [i for i, t in enumerate(s.token_ids) if t == SEP_ID]
    assert len(seps) == len(questions) - 1
    # question layout is the zero box, context layout is quantized
    assert not s.layout[: s.context_offset].any()
    assert s.layout[s.context_offset :].max() <= 1000


def test_registry_matches_questions(docs, by_cat, vocab):
    doc = docs[1]
    schema = by_cat[doc.form_category]
    questions = build_question_set(doc, schema)
    (sample,) = assemble_input(questions, doc, vocab, schema)
    assert sample.registry_labels() == questions
    for q in sample.question_registry:
        expect = vocab.tokenize_all(question_tokens(schema, q.label))
        assert list(sample.token_ids[q.head : q.tail + 1]) == expect
        assert q.tail < sample.context_offset


def test_origin_fidelity(docs, by_cat, vocab):
    doc = docs[2]
    schema = by_cat[doc.form_category]
    (sample,) = assemble_input(build_question_set(doc, schema), doc, vocab, schema)
    for pos in range(sample.context_offset, sample.length):
        src = int(sample.origin_map[pos])
        assert sample.token_ids[pos] == vocab.tokenize(doc.tokens[src].text)
    assert all(sample.origin_map[: sample.context_offset] == -1)


def test_greedy_windowing_oracle(docs, by_cat, vocab):
    doc = docs[0]
    schema = by_cat[doc.form_category]
    base = build_question_set(doc, schema)
    questions = (base * 8)[:40]
    window = 16
    samples = assemble_input(questions, doc, vocab, schema, max_question_window=window)
    assert len(samples) > 1
    # oracle: greedy packing by cost len(tokens)+1
    packed, used = [[]], 0
    for label in questions:
        cost = len(question_tokens(schema, label)) + 1
        if packed[-1] and used + cost > window:
            packed.append([])
            used = 0
        packed[-1].append(label)
        used += cost
    assert [s.registry_labels() for s in samples] == packed
    # exhaustive and exclusive
    assert [q for s in samples for q in s.registry_labels()] == questions
    assert all(s.n_windows == len(samples) for s in samples)
    # full context replicated per window
    for s in samples:
        assert s.length - s.context_offset == len(doc.tokens)


def test_empty_question_list_rejected(docs, by_cat, vocab):
    doc = docs[0]
    with pytest.raises(InputError):
        assemble_input([], doc, vocab, by_cat[doc.form_category])


def test_oversize_context_names_document(docs, by_cat, vocab):
    doc = docs[0]
    schema = by_cat[doc.form_category]
    with pytest.raises(TruncationError, match=doc.id):
        assemble_input(build_question_set(doc, schema), doc, vocab, schema, max_seq_len=10)


def test_question_longer_than_window_rejected(docs, by_cat, vocab):
    doc = docs[0]
    schema = by_cat[doc.form_category]
    with pytest.raises(InputError):
        assemble_input(build_question_set(doc, schema), doc, vocab, schema, max_question_window=1)
