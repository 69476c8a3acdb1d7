# cython: boundscheck=False, wraparound=False
"""Compiled decode walker over the binarized link tensor.

Mirrors ``_walk_py`` exactly; the differential tests keep both in lockstep.
"""

import numpy as np

cimport cython
from libc.stdint cimport uint8_t

IMPLEMENTATION = "cython"

DEF CH1 = 0
DEF CH3 = 2
DEF CH4 = 3
DEF CH5 = 4
DEF CH6 = 5
DEF CH7 = 6
DEF CH8 = 7
DEF CH9 = 8
DEF CH10 = 9
DEF CH11 = 10


cdef list _walk(const uint8_t[:, :, ::1] binary, int chain, int cont, int start, int ctx0, int length, int* closing_tail):
    cdef list segments = []
    cdef uint8_t[::1] visited = np.zeros(length, dtype=np.uint8)
    cdef int cur = start
    cdef int t, j, nxt
    while True:
        if visited[cur]:
            return None
        visited[cur] = 1
        t = cur
        while t + 1 < length and binary[chain, t, t + 1]:
            t += 1
        segments.append((cur, t))
        nxt = -1
        for j in range(ctx0, length):
            if binary[cont, t, j] and j != t:
                nxt = j
                break
        if nxt >= 0:
            cur = nxt
            continue
        if binary[cont, t, t]:
            closing_tail[0] = t
            return segments
        return None


cdef object _attach_key(const uint8_t[:, :, ::1] binary, int qh, int qt, int head, int tail, int ctx0, int length):
    cdef int key_head, key_tail
    cdef list key_segments
    for key_head in range(ctx0, length):
        if not binary[CH7, key_head, head]:
            continue
        if not binary[CH9, qh, key_head]:
            continue
        key_tail = -1
        key_segments = _walk(binary, CH6, CH11, key_head, ctx0, length, &key_tail)
        if key_segments is None:
            continue
        if binary[CH8, tail, key_tail] and binary[CH10, key_tail, qt]:
            return key_segments
    return None


def decode_question(const uint8_t[:, :, ::1] binary, int qh, int qt, int ctx0, bint use_keys):
    """Decode one question; see the Python fallback for the full contract."""
    cdef int length = binary.shape[1]
    cdef int head, tail
    cdef list segments
    cdef object key_segments
    entities = []
    for head in range(ctx0, length):
        if not binary[CH3, qh, head]:
            continue
        tail = -1
        segments = _walk(binary, CH1, CH5, head, ctx0, length, &tail)
        if segments is None:
            continue
        if not binary[CH4, qt, tail]:
            continue
        key_segments = None
        if use_keys:
            key_segments = _attach_key(binary, qh, qt, head, tail, ctx0, length)
        entities.append((segments, key_segments))
    return entities
