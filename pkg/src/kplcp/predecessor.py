"""Ordered sets of packed grams with exact, predecessor and successor search.

A :class:`GramSet` stores every distinct gram once together with the range
of positions (in key order) that start with it.  For the self-comparison
case that order is the suffix array itself, so a gram's range is its SA
interval.  Searching is delegated to a static y-fast trie when keys fit a
machine word, and to binary search over the sorted keys otherwise.
"""
from bisect import bisect_left
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .text import WORD_BITS, PackedGram, Text, gram_values


class SortedKeys:
    """Binary search over sorted distinct integers."""

    name = "sorted"

    def __init__(self, keys: Sequence[int]):
        self.keys = list(keys)

    def rank(self, x: int) -> int:
        return bisect_left(self.keys, x)


class YFastTrie:
    """Static y-fast trie over sorted distinct integers in ``[0, 2**width)``.

    Keys are cut into buckets of about ``width`` keys; each bucket is
    represented in an x-fast trie by its maximum.  The x-fast part keeps one
    hash table per prefix length mapping a prefix to the smallest and largest
    representative index below it, so a lookup is a binary search over prefix
    lengths followed by a bisect inside one bucket.
    """

    name = "yfast"

    def __init__(self, keys: Sequence[int], width: int):
        self.keys = list(keys)
        self.width = width
        size = max(1, width)
        self.starts = list(range(0, len(self.keys), size))
        self.buckets = [self.keys[s:s + size] for s in self.starts]
        self.reps = [b[-1] for b in self.buckets]
        self.levels: List[dict] = [dict() for _ in range(width + 1)]
        for idx, rep in enumerate(self.reps):
            for depth in range(width + 1):
                prefix = rep >> (width - depth)
                node = self.levels[depth].get(prefix)
                if node is None:
                    self.levels[depth][prefix] = [idx, idx]
                else:
                    node[1] = idx

    def _succ_rep(self, x: int) -> int:
        """Index of the smallest representative >= x, or len(reps)."""
        if not self.reps:
            return 0
        if x >= (1 << self.width):
            return len(self.reps)
        exact = self.levels[self.width].get(x)
        if exact is not None:
            return exact[0]
        lo, hi = 0, self.width
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if (x >> (self.width - mid)) in self.levels[mid]:
                lo = mid
            else:
                hi = mid
        node = self.levels[lo][x >> (self.width - lo)]
        if (x >> (self.width - lo - 1)) & 1:
            return node[1] + 1
        return node[0]

    def rank(self, x: int) -> int:
        b = self._succ_rep(x)
        if b == len(self.reps):
            return len(self.keys)
        return self.starts[b] + bisect_left(self.buckets[b], x)

    def member(self, x: int) -> bool:
        r = self.rank(x)
        return r < len(self.keys) and self.keys[r] == x

    def predecessor(self, x: int) -> Optional[int]:
        r = self.rank(x)
        return self.keys[r - 1] if r > 0 else None

    def successor(self, x: int) -> Optional[int]:
        r = self.rank(x)
        if r < len(self.keys) and self.keys[r] == x:
            r += 1
        return self.keys[r] if r < len(self.keys) else None


def make_search(keys: Sequence[int], width: int, backend: str = "auto"):
    if backend == "auto":
        backend = "yfast" if width <= WORD_BITS else "sorted"
    if backend == "yfast":
        return YFastTrie(keys, width)
    if backend == "sorted":
        return SortedKeys(keys)
    raise ValueError(f"unknown search backend {backend!r}")


@dataclass(frozen=True)
class GramEntry:
    key: PackedGram
    sa_lo: int
    sa_hi: int


class GramSet:
    """Distinct grams in increasing order, each with an inclusive range into ``order``."""

    def __init__(self, keys, lens, lo, hi, order, lam, bits, backend="auto"):
        self.keys = keys
        self.lens = lens
        self.lo = lo
        self.hi = hi
        self.order = order
        self.lam = lam
        self.bits = bits
        self.width = lam * bits
        self.search = make_search(keys, self.width, backend)

    def __len__(self):
        return len(self.keys)

    def entry(self, r: int) -> GramEntry:
        return GramEntry(PackedGram(self.keys[r], self.lens[r], self.lam, self.bits),
                         self.lo[r], self.hi[r])

    def positions(self, r: int) -> list:
        return self.order[self.lo[r]:self.hi[r] + 1]

    def rank(self, value: int) -> int:
        return self.search.rank(value)

    def common(self, value: int, r: int) -> int:
        """Leading digits shared by ``value`` and key ``r`` (the XOR / highest-bit rule)."""
        d = value ^ self.keys[r]
        if d == 0:
            return self.lam
        return (self.width - d.bit_length()) // self.bits

    def best_match(self, value: int, zlen: int):
        """(longest prefix of the query found in the set, key index, exact hit).

        At most three searches: exact, predecessor and successor.  Ties between
        the two neighbours go to the predecessor.
        """
        r = self.search.rank(value)
        keys = self.keys
        if r < len(keys) and keys[r] == value:
            return zlen, r, True
        best, arg = -1, -1
        if r > 0:
            best, arg = self.common(value, r - 1), r - 1
        if r < len(keys):
            c = self.common(value, r)
            if c > best:
                best, arg = c, r
        if arg < 0:
            return 0, -1, False
        return min(best, zlen), arg, False

    def prefix_range(self, value: int, plen: int):
        """Key indices [a, b) whose first ``plen`` digits equal those of ``value``."""
        span = 1 << (self.bits * (self.lam - plen))
        base = (value // span) * span
        return self.search.rank(base), self.search.rank(base + span)


def build_gram_set(text: Text, idx, lam: int, backend: str = "auto") -> GramSet:
    """Group consecutive SA rows sharing their first ``lam`` letters."""
    bits = text.alphabet.bits_per_letter
    values = gram_values(idx.codes, lam, bits)
    return gram_set_from_sorted(values, idx.sa, idx.lcp, lam, bits, text.n, backend)


def gram_set_from_sorted(values, sa, lcp, lam, bits, n, backend="auto") -> GramSet:
    keys, lens, lo, hi = [], [], [], []
    for r, pos in enumerate(sa):
        if r > 0 and lcp[r] >= lam:
            hi[-1] = r
            continue
        keys.append(values[pos])
        lens.append(min(lam, n - pos))
        lo.append(r)
        hi.append(r)
    return GramSet(keys, lens, lo, hi, list(sa), lam, bits, backend)


def gram_set_from_positions(values, lengths, positions, lam, bits, backend="auto") -> GramSet:
    """Gram set over an arbitrary subset of positions (values indexed by position)."""
    order = sorted(positions, key=lambda p: (values[p], p))
    keys, lens, lo, hi = [], [], [], []
    for r, pos in enumerate(order):
        v = values[pos]
        if keys and keys[-1] == v:
            hi[-1] = r
            continue
        keys.append(v)
        lens.append(lengths[pos])
        lo.append(r)
        hi.append(r)
    return GramSet(keys, lens, lo, hi, order, lam, bits, backend)


def _as_value(gset: GramSet, key: PackedGram) -> int:
    if key.lam != gset.lam or key.bits != gset.bits:
        raise ValueError("query gram packed with a different lambda or bits per letter")
    return key.value


def query_exact(gset: GramSet, key: PackedGram) -> Optional[GramEntry]:
    v = _as_value(gset, key)
    r = gset.rank(v)
    if r < len(gset) and gset.keys[r] == v:
        return gset.entry(r)
    return None


def query_pred(gset: GramSet, key: PackedGram) -> Optional[GramEntry]:
    r = gset.rank(_as_value(gset, key))
    return gset.entry(r - 1) if r > 0 else None


def query_succ(gset: GramSet, key: PackedGram) -> Optional[GramEntry]:
    v = _as_value(gset, key)
    r = gset.rank(v)
    if r < len(gset) and gset.keys[r] == v:
        r += 1
    return gset.entry(r) if r < len(gset) else None
