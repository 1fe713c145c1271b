import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kplcp.index import (best_neighbor_outside, build_index, kangaroo, lce, plcp0_init,
                         suffix_array)
from kplcp.text import encode_text


def naive_sa(s):
    return sorted(range(len(s)), key=lambda i: s[i:])


def naive_lcp(a, b):
    n = 0
    while n < min(len(a), len(b)) and a[n] == b[n]:
        n += 1
    return n


def test_uniform_text():
    idx = build_index(encode_text("AAAA"))
    assert idx.sa == [3, 2, 1, 0]
    assert idx.lcp == [0, 1, 2, 3]


def test_distinct_letters():
    idx = build_index(encode_text("ABCD"))
    assert idx.sa == [0, 1, 2, 3]
    assert idx.lcp == [0, 0, 0, 0]


def test_lce_example():
    idx = build_index(encode_text("ABAB"))
    assert lce(idx, 0, 2) == 2
    assert lce(idx, 1, 1) == 3
    with pytest.raises(IndexError):
        lce(idx, 0, 4)


@pytest.mark.parametrize("raw,expected", [("AAAA", [3, 3, 2, 1]), ("ABCD", [0, 0, 0, 0]),
                                          ("ABAB", [2, 1, 2, 1])])
def test_plcp0(raw, expected):
    res = plcp0_init(build_index(encode_text(raw)))
    assert res.plcp == expected
    for i, p in enumerate(res.p):
        assert p != i


def test_empty_rejected():
    with pytest.raises(ValueError):
        build_index([])


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet="ABC", min_size=1, max_size=64))
def test_against_sorting_oracle(s):
    idx = build_index([ord(c) - 64 for c in s])
    assert idx.sa == naive_sa(s)
    for r in range(1, len(s)):
        assert idx.lcp[r] == naive_lcp(s[idx.sa[r - 1]:], s[idx.sa[r]:])
    for i in range(len(s)):
        for j in range(len(s)):
            assert idx.lce(i, j) == naive_lcp(s[i:], s[j:])


def test_random_texts_up_to_256():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(1, 257))
        s = "".join(rng.choice(list("ACGT"), n))
        assert suffix_array([ord(c) for c in s]).tolist() == naive_sa(s)


def test_kangaroo_counts_mismatches():
    idx = build_index(encode_text("ACGTACCTACGA"))
    # suffixes 0 and 4: ACGTACCTACGA / ACCTACGA -> mismatches at 2, 6 and 7
    assert kangaroo(idx, 0, 4, 0) == 2
    assert kangaroo(idx, 0, 4, 1) == 6
    assert kangaroo(idx, 0, 4, 2) == 7
    assert kangaroo(idx, 0, 4, 3) == 8
    assert kangaroo(idx, 0, 4, 2, limit=5) == 5


def test_best_neighbor_outside():
    s = "ABABABXAB"
    idx = build_index(encode_text(s))
    f, length = best_neighbor_outside(idx, 0, range(0, 3))
    assert f not in range(0, 3)
    assert length == max(naive_lcp(s, s[j:]) for j in range(3, len(s)))
    assert length == naive_lcp(s, s[f:])
    assert best_neighbor_outside(idx, 0, range(0, len(s))) == (-1, 0)
