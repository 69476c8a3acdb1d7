"""Reading order, vocabulary, and model-input assembly."""

from .reading_order import reading_order
from .vocab import (
    EOS_ID,
    N_RESERVED,
    PAD_ID,
    SEP_ID,
    SOS_ID,
    UNK_ID,
    Vocab,
    build_vocab,
    load_vocab,
    question_tokens,
    save_vocab,
)
from .windows import InputSample, QuestionSpan, assemble_input, build_question_set

__all__ = [
    "EOS_ID",
    "InputSample",
    "N_RESERVED",
    "PAD_ID",
    "QuestionSpan",
    "SEP_ID",
    "SOS_ID",
    "UNK_ID",
    "Vocab",
    "assemble_input",
    "build_question_set",
    "build_vocab",
    "load_vocab",
    "question_tokens",
    "reading_order",
    "save_vocab",
]
