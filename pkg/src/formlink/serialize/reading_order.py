"""Top-left to bottom-right serialization of tokens via line grouping.

Two tokens share a line iff their boxes' vertical overlap is at least half the
smaller box height; sharing is closed transitively (connected components), so
slightly staggered tokens on one visual line stay together. Lines are ordered
by their topmost box, tokens within a line by x1.
"""

from __future__ import annotations

from ..corpus.documents import Token


def _same_line(a: Token, b: Token) -> bool:
    overlap = min(a.bbox.y2, b.bbox.y2) - max(a.bbox.y1, b.bbox.y1)
    return overlap >= 0.5 * min(a.bbox.height, b.bbox.height)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def reading_order(tokens: list[Token]) -> list[int]:
    """Permutation of token indices in reading order. Stable for ties."""
    n = len(tokens)
    if n == 0:
        return []
    by_top = sorted(range(n), key=lambda i: (tokens[i].bbox.y1, tokens[i].bbox.x1, i))
    uf = _UnionFind(n)
    # sorted by y1, so any overlapping partner of i appears before i's bottom
    for a in range(n):
        i = by_top[a]
        for b in range(a + 1, n):
            j = by_top[b]
            if tokens[j].bbox.y1 >= tokens[i].bbox.y2:
                break
            if _same_line(tokens[i], tokens[j]):
                uf.union(i, j)
    lines: dict[int, list[int]] = {}
    for i in range(n):
        lines.setdefault(uf.find(i), []).append(i)
    line_order = sorted(
        lines.values(),
        key=lambda members: min((tokens[i].bbox.y1, tokens[i].bbox.x1) for i in members),
    )
    out: list[int] = []
    for members in line_order:
        out.extend(sorted(members, key=lambda i: (tokens[i].bbox.x1, tokens[i].bbox.y1, i)))
    return out
