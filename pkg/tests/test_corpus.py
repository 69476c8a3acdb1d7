import json

import pytest

from formlink.corpus import (
    BBox,
    Document,
    Entity,
    GeneratorConfig,
    KVLink,
    Token,
    build_schemas,
    generate_corpus,
    load_corpus,
    save_corpus,
)
from formlink.corpus.io import document_to_record
from formlink.errors import ConfigError, ParseError, ValidationError


def test_generation_is_deterministic(gen_config, schemas, docs, tmp_path):
    again = generate_corpus(gen_config, schemas)
    p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    save_corpus(docs, p1)
    save_corpus(again, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_documents_validate(docs):
    for doc in docs:
        doc.validate()


def test_no_key_fraction_near_configured(docs):
    values = [(d, i) for d in docs for i, e in d.value_entities()]
    linked = sum(1 for d, i in values if d.key_for_value(i) is not None)
    fraction = 1.0 - linked / len(values)
    assert 0.205 <= fraction <= 0.405


def test_every_link_connects_key_to_value(docs):
    for doc in docs:
        for link in doc.kv_links:
            assert doc.entities[link.key_entity_index].role == "key"
            assert doc.entities[link.value_entity_index].role == "value"


def test_multi_span_probability_zero_forces_single_spans():
    config = GeneratorConfig(n_categories=3, docs_per_category=6, multi_span_ratio=0.0, seed=2)
    for doc in generate_corpus(config):
        for entity in doc.entities:
            assert len(entity.spans) == 1


def test_corpus_contains_all_entity_kinds(docs):
    kinds = set()
    for doc in docs:
        for i, entity in doc.value_entities():
            if len(entity.spans) > 1:
                kinds.add("multi_span")
            if doc.key_for_value(i) is None:
                kinds.add("no_key")
            else:
                kinds.add("explicit_key")
    assert kinds == {"multi_span", "no_key", "explicit_key"}


def test_invalid_config_rejected():
    with pytest.raises(ConfigError):
        GeneratorConfig(n_categories=0)
    with pytest.raises(ConfigError):
        GeneratorConfig(docs_per_category=0)
    with pytest.raises(ConfigError):
        GeneratorConfig(no_key_ratio=1.5)


def test_save_load_round_trip(docs, tmp_path):
    path = tmp_path / "corpus.jsonl"
    save_corpus(docs, path)
    loaded = load_corpus(path)
    assert loaded == docs


def test_empty_file_loads_empty_corpus(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    assert load_corpus(path) == []


def test_bad_bbox_is_validation_error(tmp_path, docs):
    rec = document_to_record(docs[0])
    rec["tokens"][0]["bbox"] = [50, 10, 20, 30]  # x1 > x2
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps(rec) + "\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_corpus(path)


def test_malformed_json_names_line_number(tmp_path, docs):
    path = tmp_path / "broken.jsonl"
    good = json.dumps(document_to_record(docs[0]))
    path.write_text(good + "\n{not json\n", encoding="utf-8")
    with pytest.raises(ParseError, match=":2:"):
        load_corpus(path)


def test_entity_invariants():
    with pytest.raises(ValidationError):
        Entity(role="value", label="x", spans=((3, 3),))
    with pytest.raises(ValidationError):
        Entity(role="value", label="x", spans=((0, 2), (1, 4)))
    with pytest.raises(ValidationError):
        Entity(role="value", label=None, spans=((0, 2),))
    with pytest.raises(ValidationError):
        Token(text="two words", bbox=BBox(0, 0, 10, 10))


def test_double_link_rejected():
    doc = Document(
        id="d",
        form_category="c",
        page_width=100,
        page_height=100,
        tokens=[Token("a", BBox(0, 0, 10, 10)), Token("b", BBox(20, 0, 30, 10))],
        entities=[
            Entity(role="key", label=None, spans=((0, 1),)),
            Entity(role="value", label="x", spans=((1, 2),)),
        ],
        kv_links=[KVLink(0, 1), KVLink(0, 1)],
    )
    with pytest.raises(ValidationError):
        doc.validate()
