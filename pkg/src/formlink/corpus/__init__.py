"""Synthetic form corpus: documents, generation, splits, persistence."""

from .documents import BBox, Document, Entity, KVLink, Token, KEY, VALUE
from .generator import generate_corpus
from .io import load_corpus, save_corpus
from .schema import (
    CategorySchema,
    GeneratorConfig,
    build_schemas,
    load_schemas,
    save_schemas,
    schema_by_category,
)
from .splits import FEW_SHOT, FULL, ZERO_SHOT, SplitSpec, load_split, make_splits, save_split

__all__ = [
    "BBox",
    "CategorySchema",
    "Document",
    "Entity",
    "FEW_SHOT",
    "FULL",
    "GeneratorConfig",
    "KEY",
    "KVLink",
    "SplitSpec",
    "Token",
    "VALUE",
    "ZERO_SHOT",
    "build_schemas",
    "generate_corpus",
    "load_corpus",
    "load_schemas",
    "load_split",
    "make_splits",
    "save_corpus",
    "save_schemas",
    "save_split",
    "schema_by_category",
]
