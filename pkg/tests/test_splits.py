import pytest

from formlink.corpus import (
    GeneratorConfig,
    generate_corpus,
    load_split,
    make_splits,
    save_split,
)
from formlink.errors import SplitError


@pytest.fixture(scope="module")
def split_docs():
    return generate_corpus(GeneratorConfig(n_categories=10, docs_per_category=10, seed=21))


def _cats(docs, ids):
    by_id = {d.id: d for d in docs}
    return {by_id[i].form_category for i in ids}


def test_zero_shot_partitions_categories_7_3(split_docs):
    spec = make_splits(split_docs, "zero_shot", seed=0)
    train_cats = _cats(split_docs, spec.train_ids)
    test_cats = _cats(split_docs, spec.test_ids)
    assert len(train_cats) == 7 and len(test_cats) == 3
    assert not train_cats & test_cats
    assert len(spec.train_ids) + len(spec.test_ids) == len(split_docs)


def test_few_shot_moves_exactly_k(split_docs):
    zero = make_splits(split_docs, "zero_shot", seed=0)
    spec = make_splits(split_docs, "few_shot", k=5, seed=0)
    test_cats = _cats(split_docs, zero.test_ids)
    by_id = {d.id: d for d in split_docs}
    for cat in test_cats:
        moved = [i for i in spec.train_ids if by_id[i].form_category == cat]
        remaining = [i for i in spec.test_ids if by_id[i].form_category == cat]
        assert len(moved) == 5
        assert len(remaining) == 5


def test_few_shot_train_sets_are_nested(split_docs):
    t1 = set(make_splits(split_docs, "few_shot", k=1, seed=3).train_ids)
    t5 = set(make_splits(split_docs, "few_shot", k=5, seed=3).train_ids)
    t10 = set(make_splits(split_docs, "few_shot", k=10, seed=3).train_ids)
    assert t1 < t5 < t10


def test_few_shot_k_too_large_names_category(split_docs):
    docs = [d for d in split_docs if not d.id.endswith(("8", "9"))]  # 8 docs per category
    with pytest.raises(SplitError, match="_0"):
        make_splits(docs, "few_shot", k=10, seed=0)


def test_invalid_modes_rejected(split_docs):
    with pytest.raises(SplitError):
        make_splits(split_docs, "few_shot", k=3, seed=0)
    with pytest.raises(SplitError):
        make_splits(split_docs, "nope", seed=0)


def test_full_mode_ignores_categories(split_docs):
    spec = make_splits(split_docs, "full", seed=4)
    assert len(spec.train_ids) == 70
    assert len(spec.test_ids) == 30
    assert _cats(split_docs, spec.train_ids) & _cats(split_docs, spec.test_ids)


def test_split_determinism_and_round_trip(split_docs, tmp_path):
    a = make_splits(split_docs, "few_shot", k=10, seed=7)
    b = make_splits(split_docs, "few_shot", k=10, seed=7)
    assert a == b
    path = tmp_path / "split.json"
    save_split(a, path)
    assert load_split(path) == a
