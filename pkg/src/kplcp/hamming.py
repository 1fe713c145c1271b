"""PLCP_k and P_k under the Hamming distance.

Pipeline for a text x of length n:

1. exact longest-previous-factor values from the suffix array neighbours;
2. pairs of suffixes sharing a whole gram (``lam`` letters) are extended by
   kangaroo jumps, k + 1 LCE queries each;
3. every distinct gram goes into an ordered set;
4. for each position i, substitution sequences applied to the gram at i are
   generated depth first.  The (e+1)-th substitution may only sit strictly
   after the e-th one and no further than the longest prefix of the current
   string found in the set, so no substitution set is produced twice and
   hopeless branches are never opened.  Each string is looked up with one
   exact, one predecessor and one successor search; an exact hit of a full
   gram hands every occurrence to a kangaroo extension.
"""
import logging
from typing import Optional

from . import _kernels
from .index import SuffixIndex, build_index, kangaroo, plcp0_init
from .predecessor import GramSet, build_gram_set
from .result import HAMMING, PlcpResult
from .text import Config, PackedGram, Text, gram_values

log = logging.getLogger(__name__)


class InvariantError(RuntimeError):
    """An internal consistency check failed."""


class SearchContext:
    """Read-only state shared by every per-position search over one text.

    ``ends[p]`` bounds the string segment of position p; it is ``None`` for a
    single text.  ``self_match`` is True when queries and grams come from the
    same text, so a position must never be its own witness.
    """

    def __init__(self, codes, values, gset: GramSet, idx: SuffixIndex, k: int,
                 sigma: int, ends=None, self_match=True):
        self.codes = codes
        self.values = values
        self.gset = gset
        self.idx = idx
        self.k = k
        self.sigma = sigma
        self.lam = gset.lam
        self.bits = gset.bits
        self.shifts = [gset.bits * (gset.lam - 1 - q) for q in range(gset.lam)]
        self.ends = ends
        self.self_match = self_match
        self.n = len(codes)

    def seg_len(self, p: int) -> int:
        return (self.n if self.ends is None else self.ends[p]) - p


def context_for(text: Text, cfg: Config, gset: GramSet, idx: SuffixIndex) -> SearchContext:
    values = gram_values(idx.codes, cfg.lam, text.alphabet.bits_per_letter)
    return SearchContext(idx.codes, values, gset, idx, cfg.k, text.alphabet.sigma)


def _heavy(ctx: SearchContext, i, ylen, r, best, wit, seen):
    """Kangaroo-extend i against every occurrence of key r."""
    idx, k = ctx.idx, ctx.k
    for t in ctx.gset.positions(r):
        if t in seen or (ctx.self_match and t == i):
            continue
        seen.add(t)
        ell = kangaroo(idx, i, t, k, min(ylen, ctx.seg_len(t)))
        if ell > best:
            best, wit = ell, t
    return best, wit


def search_position(ctx: SearchContext, i: int, ylen: int, best: int, wit: int,
                    m0: Optional[int] = None, audit: Optional[list] = None):
    """Best (length, witness) for query position i after enumerating substitutions.

    ``best``/``wit`` is the value already known for i (never lowered).  ``m0``
    is the exact prefix length the first substitution window is based on;
    when ``None`` it comes from a lookup of the unmodified gram, which also
    handles exact full-gram hits.
    """
    gset, codes, shifts, sigma, k = ctx.gset, ctx.codes, ctx.shifts, ctx.sigma, ctx.k
    order, lo = gset.order, gset.lo
    L = min(ctx.lam, ylen)
    seen = set()
    z0 = ctx.values[i]
    if m0 is None:
        m0, r, exact = gset.best_match(z0, L)
        if r >= 0:
            if exact:
                best, wit = _heavy(ctx, i, ylen, r, best, wit, seen)
            elif m0 > best:
                best, wit = m0, order[lo[r]]
    if k == 0:
        return best, wit

    def rec(z, start, m, e, subs):
        nonlocal best, wit
        hi = min(i + m, i + L - 1)
        for p in range(start, hi + 1):
            q = p - i
            sh = shifts[q]
            cur = codes[p]
            base = z - (cur << sh)
            for a in range(1, sigma + 1):
                if a == cur:
                    continue
                z2 = base + (a << sh)
                if audit is not None:
                    audit.append((i, subs + ((p, a),)))
                m2, r, exact = gset.best_match(z2, L)
                if exact:
                    best, wit = _heavy(ctx, i, ylen, r, best, wit, seen)
                elif m2 > best:
                    t = order[lo[r]]
                    if ctx.self_match and t == i:
                        raise InvariantError(
                            f"witness {t} equals query position while improving {best} -> {m2}")
                    best, wit = m2, t
                if e + 1 < k and m2 > q:
                    rec(z2, p + 1, m2, e + 1, subs + ((p, a),) if audit is not None else subs)

    rec(z0, i, m0, 0, ())
    return best, wit


def query_best_neighbor(z: PackedGram, i: int, gset: GramSet, idx: SuffixIndex, text: Text,
                        k: int = 0, exclude_self: bool = True):
    """(length, witness) of the longest prefix of z occurring in the set.

    On an exact hit every occurrence other than i is extended with kangaroo
    jumps under budget k; if none remains the neighbours are used instead.
    A miss-path witness may equal i; callers only use it to improve a value
    that is strictly smaller.
    """
    ylen = text.n - i
    L = min(z.length, ylen)
    m, r, exact = gset.best_match(z.value, L)
    if exact:
        best, wit = -1, -1
        for t in gset.positions(r):
            if exclude_self and t == i:
                continue
            ell = kangaroo(idx, i, t, k, min(ylen, text.n - t))
            if ell > best:
                best, wit = ell, t
        if wit >= 0:
            return best, wit
        keys = gset.keys
        cands = [c for c in (r - 1, r + 1) if 0 <= c < len(keys)]
        if not cands:
            return 0, -1
        c = max(cands, key=lambda c: (gset.common(z.value, c), -c))
        return min(gset.common(z.value, c), L), gset.order[gset.lo[c]]
    if r < 0:
        return 0, -1
    return m, gset.order[gset.lo[r]]


def count_long_pairs(idx: SuffixIndex, lam: int) -> int:
    """SA-adjacent pairs sharing at least ``lam`` letters."""
    return sum(1 for v in idx.lcp[1:] if v >= lam)


def long_pairs_pass(text: Text, idx: SuffixIndex, cfg: Config, result: PlcpResult) -> PlcpResult:
    """Kangaroo extension for every pair inside a run of SA rows sharing ``lam`` letters."""
    lam, k, n = cfg.lam, cfg.k, idx.n
    sa, lcp = idx.sa, idx.lcp
    plcp, wit = result.plcp, result.p
    r = 1
    while r < n:
        if lcp[r] < lam:
            r += 1
            continue
        start = r - 1
        while r < n and lcp[r] >= lam:
            r += 1
        group = sa[start:r]
        for a in range(len(group)):
            i = group[a]
            for b in range(a + 1, len(group)):
                j = group[b]
                ell = kangaroo(idx, i, j, k, n - max(i, j))
                if ell > plcp[i]:
                    plcp[i], wit[i] = ell, j
                if ell > plcp[j]:
                    plcp[j], wit[j] = ell, i
    return result


def enumerate_errors(text: Text, i: int, cfg: Config, gset: GramSet, idx: SuffixIndex,
                     result: PlcpResult, ctx: Optional[SearchContext] = None,
                     audit: Optional[list] = None) -> PlcpResult:
    if ctx is None:
        ctx = context_for(text, cfg, gset, idx)
    best, wit = search_position(ctx, i, text.n - i, result.plcp[i], result.p[i],
                                m0=result.plcp[i], audit=audit)
    if best < result.plcp[i]:
        raise InvariantError(f"value at {i} decreased")
    result.plcp[i], result.p[i] = best, wit
    return result


def compute_plcp_hamming(text: Text, cfg: Config, engine: str = "auto",
                         backend: str = "auto", idx: Optional[SuffixIndex] = None) -> PlcpResult:
    """PLCP_k and P_k of ``text`` under the Hamming distance."""
    if idx is None:
        idx = build_index(text)
    result = plcp0_init(idx)
    result.model, result.k = HAMMING, cfg.k
    result.meta.update(lam=cfg.lam, alpha=cfg.alpha)
    if cfg.k == 0 or text.n == 1:
        return result
    long_pairs_pass(text, idx, cfg, result)
    engine = _kernels.resolve(engine)
    result.meta["engine"] = engine
    if engine == "numba":
        _kernels.hamming_self(text, cfg, idx, result)
        return result
    gset = build_gram_set(text, idx, cfg.lam, backend)
    ctx = context_for(text, cfg, gset, idx)
    for i in range(text.n):
        enumerate_errors(text, i, cfg, gset, idx, result, ctx)
    return result
