import random
from bisect import bisect_left

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kplcp.index import build_index
from kplcp.predecessor import (SortedKeys, YFastTrie, build_gram_set, make_search, query_exact,
                               query_pred, query_succ)
from kplcp.text import encode_text, pack_codes, pack_gram


def test_all_distinct_grams():
    t = encode_text("ABCD")
    gset = build_gram_set(t, build_index(t), 1)
    assert len(gset) == 4
    assert all(gset.lo[r] == gset.hi[r] for r in range(4))


def test_uniform_text_interval():
    t = encode_text("AAAA")
    gset = build_gram_set(t, build_index(t), 2)
    e = query_exact(gset, pack_gram(t, 0, 2))
    assert e is not None
    assert sorted(gset.order[e.sa_lo:e.sa_hi + 1]) == [0, 1, 2]
    tail = query_exact(gset, pack_gram(t, 3, 2))
    assert gset.order[tail.sa_lo:tail.sa_hi + 1] == [3]


def test_pred_succ_and_errors():
    t = encode_text("ACGTTGCA")
    gset = build_gram_set(t, build_index(t), 3)
    z = pack_gram(t, 3, 3)
    assert query_exact(gset, z).key.value == z.value
    p, s = query_pred(gset, z), query_succ(gset, z)
    assert p is None or p.key.value < z.value
    assert s is None or s.key.value > z.value
    with pytest.raises(ValueError):
        query_exact(gset, pack_gram(t, 3, 4))


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, (1 << 20) - 1), max_size=300),
       st.lists(st.integers(0, (1 << 20) - 1), min_size=1, max_size=50))
def test_yfast_matches_bisect(keys, queries):
    keys = sorted(keys)
    trie = YFastTrie(keys, 20)
    for x in queries + keys:
        r = bisect_left(keys, x)
        assert trie.rank(x) == r
        assert trie.member(x) == (r < len(keys) and keys[r] == x)
        assert trie.predecessor(x) == (keys[r - 1] if r else None)
        nxt = r + 1 if r < len(keys) and keys[r] == x else r
        assert trie.successor(x) == (keys[nxt] if nxt < len(keys) else None)


def test_backend_selection():
    assert make_search([1, 2], 64).name == "yfast"
    assert make_search([1, 2], 65).name == "sorted"
    assert make_search([1, 2], 65, "yfast").name == "yfast"
    with pytest.raises(ValueError):
        make_search([1], 8, "btree")


def test_sorted_fallback_equivalent():
    rng = random.Random(1)
    keys = sorted({rng.getrandbits(70) for _ in range(500)})
    a, b = YFastTrie(keys, 70), SortedKeys(keys)
    for x in [rng.getrandbits(70) for _ in range(300)] + keys:
        assert a.rank(x) == b.rank(x)


@pytest.mark.parametrize("backend", ["yfast", "sorted"])
def test_best_match_is_longest_prefix(backend):
    rng = np.random.default_rng(9)
    t = encode_text("".join(rng.choice(list("ACGT"), 300)))
    gset = build_gram_set(t, build_index(t), 6, backend)
    grams = [pack_gram(t, i, 6) for i in range(t.n)]
    for _ in range(200):
        q = pack_codes(rng.integers(1, 5, 6).tolist(), 6, 3)
        m, r, exact = gset.best_match(q.value, 6)
        best = max(_common(q.digits, g.digits) for g in grams)
        assert m == best
        assert exact == any(g.value == q.value for g in grams)


def _common(a, b):
    n = 0
    while n < len(a) and a[n] == b[n] and a[n] != 0:
        n += 1
    return n
