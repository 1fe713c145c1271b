"""Suffix array, inverse suffix array, LCP array and O(1) longest common extensions."""
from typing import Optional, Sequence, Tuple

import numpy as np

from .result import HAMMING, PlcpResult
from .text import Text


def suffix_array(codes: Sequence[int]) -> np.ndarray:
    """Suffix array by prefix doubling; the end of the text sorts before every code.

    O(n log^2 n) worst case, a handful of rounds on non-repetitive input.
    """
    rank = np.asarray(codes, dtype=np.int64)
    n = len(rank)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    step = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if step < n:
            second[:n - step] = rank[step:]
        order = np.lexsort((second, rank))
        r1, r2 = rank[order], second[order]
        changed = np.empty(n, dtype=np.int64)
        changed[0] = 0
        changed[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order] = np.cumsum(changed)
        rank = new_rank
        if rank[order[-1]] == n - 1:
            return order
        step *= 2


def kasai(codes: Sequence[int], sa: Sequence[int], isa: Sequence[int]) -> list:
    """lcp[r] = lcp of the suffixes at sa[r-1] and sa[r]; lcp[0] = 0."""
    n = len(sa)
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = isa[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and codes[i + h] == codes[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


def sparse_table(values: Sequence[int]) -> np.ndarray:
    """table[d][r] = min(values[r : r + 2**d]); entries past the end are padded."""
    base = np.asarray(values, dtype=np.int32)
    n = len(base)
    levels = max(1, n.bit_length())
    table = np.full((levels, n), np.iinfo(np.int32).max, dtype=np.int32)
    table[0] = base
    for d in range(1, levels):
        half = 1 << (d - 1)
        span = n - (1 << d) + 1
        if span <= 0:
            break
        table[d, :span] = np.minimum(table[d - 1, :span], table[d - 1, half:half + span])
    return table


class SuffixIndex:
    """SA, iSA and LCP of a code sequence with a sparse-table RMQ over LCP.

    Plain lists back the Python query path; ``table`` and the ``*_arr`` arrays
    feed the compiled kernels.
    """

    def __init__(self, codes: Sequence[int]):
        codes_list = [int(c) for c in codes]
        self.n = n = len(codes_list)
        self.codes = codes_list
        sa_arr = suffix_array(codes_list)
        isa_arr = np.empty(n, dtype=np.int64)
        isa_arr[sa_arr] = np.arange(n, dtype=np.int64)
        self.sa = sa_arr.tolist()
        self.isa = isa_arr.tolist()
        self.lcp = kasai(codes_list, self.sa, self.isa)
        self.table = sparse_table(self.lcp)
        self.rows = [row.tolist() for row in self.table]
        self.sa_arr = sa_arr
        self.isa_arr = isa_arr
        self.lcp_arr = np.asarray(self.lcp, dtype=np.int32)

    def rmq(self, lo: int, hi: int) -> int:
        """Minimum of lcp[lo..hi] (inclusive, lo <= hi)."""
        d = (hi - lo + 1).bit_length() - 1
        row = self.rows[d]
        a, b = row[lo], row[hi - (1 << d) + 1]
        return a if a < b else b

    def lce(self, i: int, j: int) -> int:
        if i == j:
            return self.n - i
        a, b = self.isa[i], self.isa[j]
        if a > b:
            a, b = b, a
        d = (b - a).bit_length() - 1
        row = self.rows[d]
        x, y = row[a + 1], row[b - (1 << d) + 1]
        return x if x < y else y


def build_index(text) -> SuffixIndex:
    codes = text.codes if isinstance(text, Text) else text
    if len(codes) < 1:
        raise ValueError("cannot index an empty text")
    return SuffixIndex(codes)


def lce(idx: SuffixIndex, i: int, j: int) -> int:
    if not (0 <= i < idx.n and 0 <= j < idx.n):
        raise IndexError(f"positions ({i}, {j}) outside text of length {idx.n}")
    return idx.lce(i, j)


def kangaroo(idx: SuffixIndex, i: int, j: int, k: int, limit: Optional[int] = None) -> int:
    """Hamming k-error common prefix of the suffixes at i and j, at most ``limit`` long."""
    if limit is None:
        limit = idx.n - max(i, j)
    length = 0
    errors = 0
    while True:
        if length >= limit:
            return limit
        length += idx.lce(i + length, j + length)
        if length >= limit:
            return limit
        if errors == k:
            return length
        errors += 1
        length += 1


def plcp0_init(idx: SuffixIndex) -> PlcpResult:
    """Longest exact prefix occurring elsewhere, from both SA neighbours."""
    n = idx.n
    plcp = [0] * n
    wit = [-1] * n
    sa, isa, lcp = idx.sa, idx.isa, idx.lcp
    for i in range(n):
        r = isa[i]
        best, arg = -1, -1
        if r > 0:
            best, arg = lcp[r], sa[r - 1]
        if r + 1 < n and lcp[r + 1] > best:
            best, arg = lcp[r + 1], sa[r + 1]
        if arg >= 0:
            plcp[i], wit[i] = best, arg
    return PlcpResult(plcp, wit, HAMMING, 0)


def best_neighbor_outside(idx: SuffixIndex, j: int, excluded: range) -> Tuple[int, int]:
    """Position f not in ``excluded`` maximising lce(j, f), scanning outward in SA order.

    Ties go to the lexicographic predecessor; (-1, 0) when every position is excluded.
    """
    sa, lcp, n = idx.sa, idx.lcp, idx.n
    r0 = idx.isa[j]
    best_pos, best_len = -1, -1
    run = n
    r = r0 - 1
    while r >= 0:
        run = min(run, lcp[r + 1])
        if sa[r] not in excluded:
            best_pos, best_len = sa[r], run
            break
        r -= 1
    run = n
    r = r0 + 1
    while r < n:
        run = min(run, lcp[r])
        if run <= best_len:
            break
        if sa[r] not in excluded:
            best_pos, best_len = sa[r], run
            break
        r += 1
    if best_pos < 0:
        return -1, 0
    return best_pos, best_len
