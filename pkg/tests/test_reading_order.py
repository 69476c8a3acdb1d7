import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formlink.corpus import BBox, Token
from formlink.serialize import reading_order


def _token(x1, y1, w=30, h=16, text="w"):
    return Token(text, BBox(x1, y1, x1 + w, y1 + h))


def _oracle(tokens):
    """Naive O(n^2) reference: pairwise line graph, components, sort."""
    n = len(tokens)
    adj = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            a, b = tokens[i].bbox, tokens[j].bbox
            overlap = min(a.y2, b.y2) - max(a.y1, b.y1)
            adj[i][j] = overlap >= 0.5 * min(a.height, b.height)
    seen = [False] * n
    lines = []
    for i in range(n):
        if seen[i]:
            continue
        stack, members = [i], []
        seen[i] = True
        while stack:
            u = stack.pop()
            members.append(u)
            for v in range(n):
                if adj[u][v] and not seen[v]:
                    seen[v] = True
                    stack.append(v)
        lines.append(members)
    lines.sort(key=lambda ms: min((tokens[i].bbox.y1, tokens[i].bbox.x1) for i in ms))
    out = []
    for ms in lines:
        out.extend(sorted(ms, key=lambda i: (tokens[i].bbox.x1, tokens[i].bbox.y1, i)))
    return out


def test_empty_and_singleton():
    assert reading_order([]) == []
    assert reading_order([_token(5, 5)]) == [0]


def test_forced_top_left_order():
    tokens = [_token(10, 10), _token(200, 10), _token(10, 50)]
    assert reading_order(tokens) == [0, 1, 2]


def test_staggered_tokens_share_line():
    # 60% vertical overlap keeps them on one line despite offset tops
    tokens = [_token(100, 20, h=20), _token(40, 26, h=20)]
    assert reading_order(tokens) == [1, 0]


def test_matches_oracle_on_random_boxes():
    rng = np.random.default_rng(99)
    for _ in range(25):
        n = int(rng.integers(1, 60))
        tokens = [
            _token(int(rng.integers(0, 900)), int(rng.integers(0, 900)),
                   w=int(rng.integers(5, 80)), h=int(rng.integers(6, 30)))
            for _ in range(n)
        ]
        assert reading_order(tokens) == _oracle(tokens)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.integers(0, 500), st.integers(0, 500),
            st.integers(4, 60), st.integers(4, 24),
        ),
        min_size=1,
        max_size=25,
    )
)
def test_oracle_property(boxes):
    tokens = [_token(x, y, w=w, h=h) for x, y, w, h in boxes]
    assert reading_order(tokens) == _oracle(tokens)


def test_permutation_stability(docs):
    rng = np.random.default_rng(3)
    for doc in docs[:10]:
        perm = reading_order(doc.tokens)
        texts = [doc.tokens[i].text for i in perm]
        shuffled_idx = rng.permutation(len(doc.tokens))
        shuffled = [doc.tokens[int(i)] for i in shuffled_idx]
        perm2 = reading_order(shuffled)
        assert [shuffled[i].text for i in perm2] == texts
