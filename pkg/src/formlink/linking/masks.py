"""Information isolation masks over the score tensor.

True = scorable cell. Question-context isolation confines the in-context
channels to context-by-context cells; question head/tail isolation pins the
question-bound channels to the registered head/tail rows (or columns, for the
key-tail to question-tail channel). Special tokens are never scorable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..serialize.vocab import EOS_ID, PAD_ID, SEP_ID, SOS_ID
from ..serialize.windows import InputSample
from ..errors import InputError
from .link_types import CONTEXT_ONLY_TYPES, LinkType, N_LINK_TYPES, N_VALUE_ONLY_TYPES

_SPECIAL_IDS = (SOS_ID, EOS_ID, SEP_ID, PAD_ID)


@dataclass(frozen=True)
class IsolationFlags:
    qci: bool = True
    qhi: bool = True
    qti: bool = True


def build_masks(
    sample: InputSample,
    n_link_types: int = N_LINK_TYPES,
    flags: IsolationFlags = IsolationFlags(),
) -> np.ndarray:
    """Boolean [n_link_types, L, L] tensor of scorable cells."""
    if n_link_types not in (N_VALUE_ONLY_TYPES, N_LINK_TYPES):
        raise InputError(f"n_link_types must be 5 or 11, got {n_link_types}")
    length = sample.length
    word = ~np.isin(sample.token_ids, _SPECIAL_IDS)
    context = np.zeros(length, dtype=bool)
    context[sample.context_offset :] = True
    context &= word

    base = word[:, None] & word[None, :]
    context_pair = context[:, None] & context[None, :]

    heads = np.zeros(length, dtype=bool)
    tails = np.zeros(length, dtype=bool)
    for q in sample.question_registry:
        heads[q.head] = True
        tails[q.tail] = True

    mask = np.zeros((n_link_types, length, length), dtype=bool)
    for link in CONTEXT_ONLY_TYPES:
        if link.channel < n_link_types:
            mask[link.channel] = context_pair if flags.qci else base

    head_rows = (heads[:, None] & context[None, :]) if flags.qhi else base
    tail_rows = (tails[:, None] & context[None, :]) if flags.qti else base
    mask[LinkType.QUESTION_HEAD_TO_VALUE_HEAD.channel] = head_rows
    mask[LinkType.QUESTION_TAIL_TO_VALUE_TAIL.channel] = tail_rows
    if n_link_types == N_LINK_TYPES:
        mask[LinkType.QUESTION_HEAD_TO_KEY_HEAD.channel] = head_rows
        tail_cols = (context[:, None] & tails[None, :]) if flags.qti else base
        mask[LinkType.KEY_TAIL_TO_QUESTION_TAIL.channel] = tail_cols
    return mask
