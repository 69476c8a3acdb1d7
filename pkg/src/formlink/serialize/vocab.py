"""Closed word-level vocabulary with fixed reserved ids."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus.documents import Document
from ..corpus.schema import CategorySchema
from ..errors import ParseError

SOS_ID = 0
EOS_ID = 1
SEP_ID = 2
PAD_ID = 3
UNK_ID = 4
N_RESERVED = 5

RESERVED_NAMES = {"<s>": SOS_ID, "</s>": EOS_ID, "[T]": SEP_ID, "<pad>": PAD_ID, "<unk>": UNK_ID}


@dataclass(frozen=True)
class Vocab:
    token_to_id: dict[str, int] = field(hash=False)

    @property
    def size(self) -> int:
        return N_RESERVED + len(self.token_to_id)

    def tokenize(self, text: str) -> int:
        return self.token_to_id.get(text, UNK_ID)

    def tokenize_all(self, texts: list[str]) -> list[int]:
        return [self.tokenize(t) for t in texts]


def build_vocab(train_docs: list[Document], schemas: list[CategorySchema]) -> Vocab:
    """Vocabulary over training-document tokens plus all schema-declared text.

    Question labels/phrases and key phrase variants are part of the schema,
    which is an input at question time, so they are always in-vocabulary;
    unseen document content at test time maps to UNK.
    """
    words: set[str] = set()
    for doc in train_docs:
        for tok in doc.tokens:
            words.add(tok.text)
    for schema in schemas:
        for label in schema.value_types:
            words.update(question_tokens(schema, label))
        for phrase in schema.key_phrases.values():
            words.update(phrase)
    mapping = {w: N_RESERVED + i for i, w in enumerate(sorted(words))}
    return Vocab(mapping)


def question_tokens(schema: CategorySchema, label: str) -> list[str]:
    return schema.question_text(label).split()


def save_vocab(vocab: Vocab, path: str | Path) -> None:
    payload = {"reserved": RESERVED_NAMES, "tokens": vocab.token_to_id}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_vocab(path: str | Path) -> Vocab:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload["reserved"] != RESERVED_NAMES:
            raise ParseError(f"vocab file {path}: reserved block mismatch")
        return Vocab({str(k): int(v) for k, v in payload["tokens"].items()})
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed vocab file {path}: {exc}") from exc
