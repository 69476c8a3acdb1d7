"""Pure-Python decode walker, the fallback for the compiled kernel.

Semantics are shared with ``_walk.pyx`` and pinned by the differential tests:
any divergence between the two implementations is a bug.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"

_CH1 = 0   # value chain
_CH3 = 2   # question head -> value head
_CH4 = 3   # question tail -> value tail
_CH5 = 4   # value continuation / closing self-loop
_CH6 = 5   # key chain
_CH7 = 6   # key head -> value head
_CH8 = 7   # value tail -> key tail
_CH9 = 8   # question head -> key head
_CH10 = 9  # key tail -> question tail
_CH11 = 10  # key continuation / closing self-loop


def _walk(chain: np.ndarray, cont: np.ndarray, start: int, ctx0: int, length: int):
    """Grow segments from ``start``; returns (segments, closing_tail) or None.

    A segment extends while the chain channel links consecutive positions.
    The continuation channel either jumps to a new segment head or closes the
    walk with a self-loop at the final tail. Each position may start at most
    one segment, which bounds the walk by the sequence length.
    """
    segments: list[tuple[int, int]] = []
    starts: set[int] = set()
    cur = start
    while True:
        if cur in starts:
            return None
        starts.add(cur)
        t = cur
        while t + 1 < length and chain[t, t + 1]:
            t += 1
        segments.append((cur, t))
        row = cont[t]
        nxt = -1
        for j in np.flatnonzero(row[ctx0:]):
            pos = int(j) + ctx0
            if pos != t:
                nxt = pos
                break
        if nxt >= 0:
            cur = nxt
            continue
        if row[t]:
            return segments, t
        return None


def decode_question(binary: np.ndarray, qh: int, qt: int, ctx0: int, use_keys: bool):
    """Decode one question from a binarized [K, L, L] link tensor.

    Returns a list of (value_segments, key_segments_or_None) with segments as
    inclusive (first, last) position pairs, in ascending value-head order.
    """
    length = binary.shape[1]
    entities = []
    for h in np.flatnonzero(binary[_CH3, qh, ctx0:]):
        head = int(h) + ctx0
        walked = _walk(binary[_CH1], binary[_CH5], head, ctx0, length)
        if walked is None:
            continue
        segments, tail = walked
        if not binary[_CH4, qt, tail]:
            continue
        key_segments = None
        if use_keys:
            key_segments = _attach_key(binary, qh, qt, head, tail, ctx0, length)
        entities.append((segments, key_segments))
    return entities


def _attach_key(binary: np.ndarray, qh: int, qt: int, head: int, tail: int, ctx0: int, length: int):
    for kh in np.flatnonzero(binary[_CH7, ctx0:, head]):
        key_head = int(kh) + ctx0
        if not binary[_CH9, qh, key_head]:
            continue
        walked = _walk(binary[_CH6], binary[_CH11], key_head, ctx0, length)
        if walked is None:
            continue
        key_segments, key_tail = walked
        if binary[_CH8, tail, key_tail] and binary[_CH10, key_tail, qt]:
            return key_segments
    return None
