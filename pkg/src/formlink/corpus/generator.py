"""Synthetic complex-layout form generator.

Pages are built line by line so that the emitted token order is exactly the
top-left to bottom-right reading order. Entity spans are recovered from token
ownership at the end, which makes folded (discontinuous) values and keys fall
out naturally: a fold interleaved with another cell's tokens yields a genuine
multi-span entity, a fold with nothing in between collapses back to one
contiguous span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .documents import BBox, Document, Entity, KVLink, Token, KEY, VALUE
from .schema import (
    CODES,
    CategorySchema,
    GeneratorConfig,
    LAYOUT_KINDS,
    NOISE_FORM_WORDS,
    NOISE_TITLE_WORDS,
    VALUE_TYPES,
    build_schemas,
    rng_for,
    _pick,
)

PAGE_W = 1000
PAGE_H = 1000
LEFT_MARGIN = 48
MAX_X = 950
TOP_MARGIN = 30
LINE_STEP = 34
TOKEN_H = 18
TOKEN_GAP = 10


def _token_width(text: str) -> int:
    return min(8 + 8 * len(text), 260)


@dataclass
class _FieldInst:
    label: str
    value_tokens: list[str]
    key_tokens: list[str] | None
    implicit_phrase: list[str] | None
    fold_value: bool
    fold_key: bool


@dataclass
class _Placement:
    line: int
    x: int
    text: str
    owner: tuple[str, int] | None


class _Page:
    """Line-oriented placement surface with per-line cursors."""

    def __init__(self) -> None:
        self.placements: list[_Placement] = []
        self.cursors: dict[int, int] = {}
        self.max_line = -1

    def fits(self, line: int, tokens: list[str], at_x: int = 0) -> bool:
        x = max(self.cursors.get(line, LEFT_MARGIN), at_x)
        width = sum(_token_width(t) + TOKEN_GAP for t in tokens)
        return x + width <= MAX_X

    def put(self, line: int, tokens: list[str], owner: tuple[str, int] | None, at_x: int = 0) -> None:
        x = max(self.cursors.get(line, LEFT_MARGIN), at_x)
        for text in tokens:
            self.placements.append(_Placement(line, x, text, owner))
            x += _token_width(text) + TOKEN_GAP
        self.cursors[line] = x
        self.max_line = max(self.max_line, line)

    def next_free_line(self) -> int:
        return self.max_line + 1


def _make_fields(
    schema: CategorySchema,
    config: GeneratorConfig,
    field_order: list[str],
    rng: np.random.Generator,
) -> list[_FieldInst]:
    present = {lab for lab in schema.value_types if rng.random() < config.field_presence}
    if not present:
        present = {schema.value_types[0]}
    # category-fixed field order; a second instance follows its sibling
    instances = []
    for lab in field_order:
        if lab not in present:
            continue
        instances.append(lab)
        if rng.random() < config.second_instance_ratio:
            instances.append(lab)
    fields: list[_FieldInst] = []
    for label in instances:
        value_tokens = VALUE_TYPES[label][0](rng)
        phrase = list(schema.key_phrases[label])
        no_key = rng.random() < schema.no_key_ratio
        key_tokens = None if no_key else phrase
        implicit = phrase if (no_key and rng.random() < 0.5) else None
        fields.append(
            _FieldInst(
                label=label,
                value_tokens=value_tokens,
                key_tokens=key_tokens,
                implicit_phrase=implicit,
                fold_value=len(value_tokens) >= 2 and rng.random() < schema.multi_span_ratio,
                fold_key=key_tokens is not None
                and len(key_tokens) >= 2
                and rng.random() < schema.multi_span_ratio * 0.5,
            )
        )
    return fields


def _split_fold(tokens: list[str], rng: np.random.Generator) -> tuple[list[str], list[str]]:
    cut = int(rng.integers(1, len(tokens)))
    return tokens[:cut], tokens[cut:]


def _place_kv_rows(page: _Page, fields: list[_FieldInst], rng: np.random.Generator, col2: int = 0) -> None:
    for fi, f in enumerate(fields):
        line = page.next_free_line()
        if f.key_tokens is not None:
            if f.fold_key:
                k1, k2 = _split_fold(f.key_tokens, rng)
                page.put(line, k1, ("k", fi))
                page.put(line + 1, k2, ("k", fi))
                line += 1
            else:
                page.put(line, f.key_tokens, ("k", fi))
            page.put(line, [":"], None)
        elif f.implicit_phrase is not None:
            page.put(line, f.implicit_phrase, None)
        value_x = page.cursors.get(line, LEFT_MARGIN)
        if f.fold_value:
            v1, v2 = _split_fold(f.value_tokens, rng)
            page.put(line, v1, ("v", fi))
            page.put(line + 1, v2, ("v", fi), at_x=value_x)
        else:
            page.put(line, f.value_tokens, ("v", fi))


def _place_cell(page: _Page, f: _FieldInst, fi: int, line: int, col_x: int, rng: np.random.Generator) -> None:
    """One `key : value` cell anchored at a column, value folds dropping a line."""
    cell_tokens = (f.key_tokens or f.implicit_phrase or []) + [":"] + f.value_tokens
    if not page.fits(line, cell_tokens, at_x=col_x):
        line = page.next_free_line()
        col_x = LEFT_MARGIN
    if f.key_tokens is not None:
        page.put(line, f.key_tokens, ("k", fi), at_x=col_x)
        page.put(line, [":"], None)
    elif f.implicit_phrase is not None:
        page.put(line, f.implicit_phrase + [":"], None, at_x=col_x)
    if f.fold_value:
        v1, v2 = _split_fold(f.value_tokens, rng)
        page.put(line, v1, ("v", fi), at_x=col_x)
        page.put(line + 1, v2, ("v", fi), at_x=col_x)
    else:
        page.put(line, f.value_tokens, ("v", fi), at_x=col_x)


def _place_kv_grid(page: _Page, fields: list[_FieldInst], rng: np.random.Generator, col2: int = 520) -> None:
    cols = [LEFT_MARGIN, col2]
    for start in range(0, len(fields), 2):
        line = page.next_free_line()
        for j, f in enumerate(fields[start : start + 2]):
            _place_cell(page, f, start + j, line, cols[j], rng)


def _place_stacked(page: _Page, fields: list[_FieldInst], rng: np.random.Generator, col2: int = 520) -> None:
    cols = [LEFT_MARGIN, col2]
    for start in range(0, len(fields), 2):
        key_line = page.next_free_line()
        val_line = key_line + 1
        for j, f in enumerate(fields[start : start + 2]):
            fi = start + j
            if f.key_tokens is not None:
                if f.fold_key:
                    k1, k2 = _split_fold(f.key_tokens, rng)
                    page.put(key_line, k1, ("k", fi), at_x=cols[j])
                    page.put(val_line + 1, k2, ("k", fi), at_x=cols[j])
                else:
                    page.put(key_line, f.key_tokens, ("k", fi), at_x=cols[j])
            elif f.implicit_phrase is not None:
                page.put(key_line, f.implicit_phrase, None, at_x=cols[j])
            if f.fold_value:
                v1, v2 = _split_fold(f.value_tokens, rng)
                page.put(val_line, v1, ("v", fi), at_x=cols[j])
                page.put(val_line + 2, v2, ("v", fi), at_x=cols[j])
            else:
                page.put(val_line, f.value_tokens, ("v", fi), at_x=cols[j])
        page.max_line = max(page.max_line, val_line)


def _place_table(page: _Page, fields: list[_FieldInst], rng: np.random.Generator, col2: int = 500) -> None:
    keyed = [i for i, f in enumerate(fields) if f.key_tokens is not None]
    bare = [i for i, f in enumerate(fields) if f.key_tokens is None]
    cols = [LEFT_MARGIN, col2]
    for start in range(0, len(keyed), 2):
        block = keyed[start : start + 2]
        head_line = page.next_free_line()
        val_line = head_line + 1
        for j, fi in enumerate(block):
            page.put(head_line, fields[fi].key_tokens, ("k", fi), at_x=cols[j])
        for j, fi in enumerate(block):
            f = fields[fi]
            if f.fold_value:
                v1, v2 = _split_fold(f.value_tokens, rng)
                page.put(val_line, v1, ("v", fi), at_x=cols[j])
                page.put(val_line + 1, v2, ("v", fi), at_x=cols[j])
            else:
                page.put(val_line, f.value_tokens, ("v", fi), at_x=cols[j])
        page.max_line = max(page.max_line, val_line)
    for fi in bare:
        f = fields[fi]
        line = page.next_free_line()
        if f.implicit_phrase is not None:
            page.put(line, f.implicit_phrase, None)
        if f.fold_value:
            v1, v2 = _split_fold(f.value_tokens, rng)
            page.put(line, v1, ("v", fi))
            page.put(line + 1, v2, ("v", fi))
        else:
            page.put(line, f.value_tokens, ("v", fi))


_PLACERS = {
    "kv_rows": _place_kv_rows,
    "kv_grid": _place_kv_grid,
    "stacked": _place_stacked,
    "table": _place_table,
}


def _runs(positions: list[int]) -> tuple[tuple[int, int], ...]:
    """Maximal consecutive runs of sorted positions as (start, end) spans."""
    spans = []
    start = prev = positions[0]
    for p in positions[1:]:
        if p != prev + 1:
            spans.append((start, prev + 1))
            start = p
        prev = p
    spans.append((start, prev + 1))
    return tuple(spans)


def _render(
    doc_id: str,
    schema: CategorySchema,
    kind: str,
    fields: list[_FieldInst],
    rng: np.random.Generator,
    col2: int,
) -> Document:
    page = _Page()
    page.put(0, [_pick(rng, NOISE_TITLE_WORDS), _pick(rng, NOISE_FORM_WORDS), _pick(rng, CODES)], None)
    _PLACERS[kind](page, fields, rng, col2=col2)
    if rng.random() < 0.6:
        page.put(page.next_free_line(), ["stamp", _pick(rng, CODES)], None)

    order = sorted(range(len(page.placements)), key=lambda i: (page.placements[i].line, page.placements[i].x, i))
    tokens: list[Token] = []
    positions: dict[tuple[str, int], list[int]] = {}
    for pos, idx in enumerate(order):
        p = page.placements[idx]
        # coordinates stay on a 4px grid so layout buckets recur across documents
        y1 = TOP_MARGIN + p.line * LINE_STEP
        x1 = (p.x // 4) * 4
        tokens.append(Token(p.text, BBox(x1, y1, x1 + _token_width(p.text), y1 + TOKEN_H)))
        if p.owner is not None:
            positions.setdefault(p.owner, []).append(pos)

    entities: list[Entity] = []
    kv_links: list[KVLink] = []
    for fi, f in enumerate(fields):
        entities.append(Entity(role=VALUE, label=f.label, spans=_runs(positions[("v", fi)])))
        value_idx = len(entities) - 1
        if ("k", fi) in positions:
            entities.append(Entity(role=KEY, label=None, spans=_runs(positions[("k", fi)])))
            kv_links.append(KVLink(key_entity_index=len(entities) - 1, value_entity_index=value_idx))

    doc = Document(
        id=doc_id,
        form_category=schema.name,
        page_width=PAGE_W,
        page_height=PAGE_H,
        tokens=tokens,
        entities=entities,
        kv_links=kv_links,
    )
    doc.validate()
    return doc


def generate_corpus(config: GeneratorConfig, schemas: list[CategorySchema] | None = None) -> list[Document]:
    """Generate the full corpus for a configuration, deterministic in (config, seed).

    Each category keeps one template family (its layout kind) and a fixed
    field order; template variants within the family shift column anchors, so
    documents of one category are recognizably structured but not identical.
    """
    if schemas is None:
        schemas = build_schemas(config)
    docs: list[Document] = []
    for cat, schema in enumerate(schemas):
        kind = LAYOUT_KINDS[cat % len(LAYOUT_KINDS)]
        variant_cols = [
            int(rng_for(config.seed, 223, cat, t).integers(110, 146)) * 4
            for t in range(schema.n_layout_templates)
        ]
        order_rng = rng_for(config.seed, 227, cat)
        field_order = [schema.value_types[int(i)] for i in order_rng.permutation(len(schema.value_types))]
        for d in range(config.docs_per_category):
            rng = rng_for(config.seed, 211, cat, d)
            fields = _make_fields(schema, config, field_order, rng)
            col2 = variant_cols[d % len(variant_cols)]
            docs.append(_render(f"{schema.name}-{d:04d}", schema, kind, fields, rng, col2))
    return docs
