"""Train/test splitting: zero-shot by category, few-shot moves, full 7:3."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ParseError, SplitError
from .documents import Document
from .schema import rng_for

ZERO_SHOT = "zero_shot"
FEW_SHOT = "few_shot"
FULL = "full"
FEW_SHOT_K = (1, 5, 10)
TRAIN_FRACTION = 0.7


@dataclass(frozen=True)
class SplitSpec:
    mode: str
    k: int | None
    seed: int
    train_ids: tuple[str, ...] = field(hash=False)
    test_ids: tuple[str, ...] = field(hash=False)

    def __post_init__(self) -> None:
        overlap = set(self.train_ids) & set(self.test_ids)
        if overlap:
            raise SplitError(f"train/test overlap: {sorted(overlap)[:3]}")


def _category_partition(docs: list[Document]) -> tuple[set[str], set[str]]:
    """Assign whole categories to train greedily toward a 7:3 document ratio."""
    by_cat: dict[str, int] = {}
    for doc in docs:
        by_cat[doc.form_category] = by_cat.get(doc.form_category, 0) + 1
    total = len(docs)
    target = round(TRAIN_FRACTION * total)
    train_cats: set[str] = set()
    taken = 0
    for cat in sorted(by_cat):
        if taken + by_cat[cat] <= target:
            train_cats.add(cat)
            taken += by_cat[cat]
    test_cats = set(by_cat) - train_cats
    if not test_cats and train_cats:
        # degenerate corpora (e.g. one category) still need a test side
        last = sorted(train_cats)[-1]
        train_cats.remove(last)
        test_cats.add(last)
    return train_cats, test_cats


def make_splits(docs: list[Document], mode: str, k: int | None = None, seed: int = 0) -> SplitSpec:
    """Split a corpus. Deterministic in (docs, mode, k, seed)."""
    if mode not in (ZERO_SHOT, FEW_SHOT, FULL):
        raise SplitError(f"unknown split mode {mode!r}")
    if mode == FEW_SHOT and k not in FEW_SHOT_K:
        raise SplitError(f"few-shot k must be one of {FEW_SHOT_K}, got {k}")

    ids_by_cat: dict[str, list[str]] = {}
    for doc in docs:
        ids_by_cat.setdefault(doc.form_category, []).append(doc.id)
    for cat in ids_by_cat:
        ids_by_cat[cat] = sorted(ids_by_cat[cat])

    if mode == FULL:
        all_ids = sorted(doc.id for doc in docs)
        perm = rng_for(seed, 307).permutation(len(all_ids))
        n_train = round(TRAIN_FRACTION * len(all_ids))
        train = [all_ids[int(i)] for i in perm[:n_train]]
        test = [all_ids[int(i)] for i in perm[n_train:]]
        return SplitSpec(FULL, None, seed, tuple(sorted(train)), tuple(sorted(test)))

    train_cats, test_cats = _category_partition(docs)
    train = [i for c in sorted(train_cats) for i in ids_by_cat[c]]
    test = [i for c in sorted(test_cats) for i in ids_by_cat[c]]
    if mode == ZERO_SHOT:
        return SplitSpec(ZERO_SHOT, None, seed, tuple(train), tuple(test))

    assert k is not None
    moved: list[str] = []
    for cat in sorted(test_cats):
        pool = ids_by_cat[cat]
        if k > len(pool):
            raise SplitError(f"few-shot k={k} exceeds {len(pool)} documents in category {cat}")
        perm = rng_for(seed, 311, _cat_key(cat)).permutation(len(pool))
        moved.extend(pool[int(i)] for i in perm[:k])
    moved_set = set(moved)
    train = train + sorted(moved)
    test = [i for i in test if i not in moved_set]
    return SplitSpec(FEW_SHOT, k, seed, tuple(train), tuple(test))


def _cat_key(cat: str) -> int:
    # stable integer key for seeding per-category streams
    return int.from_bytes(cat.encode("utf-8")[:8].ljust(8, b"\0"), "big") & 0x7FFFFFFF


def save_split(spec: SplitSpec, path: str | Path) -> None:
    payload = {
        "mode": spec.mode,
        "k": spec.k,
        "seed": spec.seed,
        "train_ids": list(spec.train_ids),
        "test_ids": list(spec.test_ids),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_split(path: str | Path) -> SplitSpec:
    try:
        rec = json.loads(Path(path).read_text(encoding="utf-8"))
        return SplitSpec(
            mode=rec["mode"],
            k=rec["k"],
            seed=rec["seed"],
            train_ids=tuple(rec["train_ids"]),
            test_ids=tuple(rec["test_ids"]),
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed split file {path}: {exc}") from exc
