"""Line-delimited JSON persistence for corpora."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ParseError, ValidationError
from .documents import BBox, Document, Entity, KVLink, Token


def document_to_record(doc: Document) -> dict:
    return {
        "id": doc.id,
        "form_category": doc.form_category,
        "page_width": doc.page_width,
        "page_height": doc.page_height,
        "tokens": [{"text": t.text, "bbox": t.bbox.as_list()} for t in doc.tokens],
        "entities": [
            {"role": e.role, "label": e.label, "spans": [list(s) for s in e.spans]}
            for e in doc.entities
        ],
        "kv_links": [
            {"key": link.key_entity_index, "value": link.value_entity_index}
            for link in doc.kv_links
        ],
    }


def document_from_record(rec: dict) -> Document:
    doc = Document(
        id=rec["id"],
        form_category=rec["form_category"],
        page_width=rec["page_width"],
        page_height=rec["page_height"],
        tokens=[Token(t["text"], BBox(*t["bbox"])) for t in rec["tokens"]],
        entities=[
            Entity(role=e["role"], label=e["label"], spans=tuple(tuple(s) for s in e["spans"]))
            for e in rec["entities"]
        ],
        kv_links=[KVLink(link["key"], link["value"]) for link in rec["kv_links"]],
    )
    doc.validate()
    return doc


def save_corpus(docs: list[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(document_to_record(doc), ensure_ascii=False) + "\n")


def load_corpus(path: str | Path) -> list[Document]:
    docs: list[Document] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            try:
                docs.append(document_from_record(rec))
            except ValidationError:
                raise
            except (KeyError, TypeError) as exc:
                raise ParseError(f"{path}:{lineno}: missing or malformed field: {exc}") from exc
    return docs
