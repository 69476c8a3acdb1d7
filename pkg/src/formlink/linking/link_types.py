"""The eleven directed word-to-word link types.

Ids are stable: channel k of every matrix and score tensor in this package
corresponds to link type id k (1-based). Types 1-5 describe value entities
and their question bindings; types 6-11 carry the key-side clues and are
dropped entirely in the 5-channel (word-pointer) variant.
"""

from __future__ import annotations

from enum import IntEnum


class LinkType(IntEnum):
    VALUE_HEAD_TO_TAIL = 1          # consecutive token pairs inside a value span
    VALUE_TAIL_TO_HEAD = 2          # final value token back to the first
    QUESTION_HEAD_TO_VALUE_HEAD = 3
    QUESTION_TAIL_TO_VALUE_TAIL = 4
    VALUE_SEGMENT_CONTINUATION = 5  # discontinuity jump; self-loop closes the entity
    KEY_HEAD_TO_TAIL = 6            # consecutive token pairs inside a key span
    KEY_HEAD_TO_VALUE_HEAD = 7
    VALUE_TAIL_TO_KEY_TAIL = 8
    QUESTION_HEAD_TO_KEY_HEAD = 9
    KEY_TAIL_TO_QUESTION_TAIL = 10
    KEY_SEGMENT_CONTINUATION = 11   # discontinuity jump; self-loop closes the key

    @property
    def channel(self) -> int:
        """0-based tensor channel for this type."""
        return int(self) - 1


N_LINK_TYPES = 11
N_VALUE_ONLY_TYPES = 5

# channels whose links live entirely inside the context region
CONTEXT_ONLY_TYPES = (
    LinkType.VALUE_HEAD_TO_TAIL,
    LinkType.VALUE_TAIL_TO_HEAD,
    LinkType.VALUE_SEGMENT_CONTINUATION,
    LinkType.KEY_HEAD_TO_TAIL,
    LinkType.KEY_HEAD_TO_VALUE_HEAD,
    LinkType.VALUE_TAIL_TO_KEY_TAIL,
    LinkType.KEY_SEGMENT_CONTINUATION,
)
