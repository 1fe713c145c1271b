"""PLCP_k and P_k under edit distance.

For suffixes y = x[i..] and z = x[j..], the edit k-lcp is the largest ell
such that y[0..ell-1] is within edit distance k of some prefix of z; the
length is counted on the y side.  Position i may not be matched against
any j in [i-k, i+k], since those suffixes are trivially within k edits.

The search mirrors the Hamming one.  A state is an edited gram: a head of
``hlen`` edited letters followed by y from offset ``ypos``.  Every state
spends one query on the gram set; operations (substitute, insert, delete)
are applied only at gram offsets not beyond the prefix length that query
returned.  The i-side length of a hit is ``ypos + m - hlen``, i.e. the
matched length plus deletions minus insertions.  States are explored level
by level in cost order, and two states producing the same edited string at
the same alignment offset are merged, keeping the one that may still edit
more of it.
"""
import logging
from typing import Optional

from .index import SuffixIndex, best_neighbor_outside, build_index
from .predecessor import GramSet, build_gram_set
from .result import EDIT, PlcpResult
from .text import Config, Text, gram_values

log = logging.getLogger(__name__)

NEG = -(1 << 60)


def lv_extend(idx: SuffixIndex, i: int, j: int, k: int,
              ilen: Optional[int] = None, jlen: Optional[int] = None) -> int:
    """Edit k-lcp of the suffixes at i and j (Landau-Vishkin diagonals).

    ``ilen``/``jlen`` cap how far each side may be read; they default to the
    end of the text.  Returns the largest row (i-side length) any diagonal
    reaches with at most k errors.
    """
    n = idx.n
    if ilen is None:
        ilen = n - i
    if jlen is None:
        jlen = n - j
    lce = idx.lce
    width = 2 * k + 1
    prev = [NEG] * (width + 2)  # prev[d + k + 1]; guard cells at both ends

    def slide(row, d):
        col = row + d
        room = min(ilen - row, jlen - col)
        if room <= 0:
            return row
        ext = lce(i + row, j + col)
        return row + (ext if ext < room else room)

    prev[k + 1] = slide(0, 0)
    best = prev[k + 1]
    for e in range(1, k + 1):
        cur = [NEG] * (width + 2)
        for d in range(-e, e + 1):
            c = d + k + 1
            row = prev[c]
            r = prev[c] + 1  # substitution
            if r > row and r <= ilen and r + d <= jlen:
                row = r
            r = prev[c + 1] + 1  # deletion of a y letter
            if r > row and r <= ilen and r + d >= 0:
                row = r
            r = prev[c - 1]  # insertion into y
            if r > row and r + d <= jlen:
                row = r
            if row < 0 or row + d < 0:
                continue
            row = slide(row, d)
            cur[c] = row
            if row > best:
                best = row
        prev = cur
    return best


class ExclusionTable:
    """Lazily computed f_j for the positions j excluded while processing one i."""

    def __init__(self, idx: SuffixIndex, excluded: range):
        self.idx = idx
        self.excluded = excluded
        self._f = {}

    def __contains__(self, j):
        return j in self.excluded

    def f(self, j: int):
        """(f_j, lce(j, f_j)); f_j is -1 when every position is excluded."""
        got = self._f.get(j)
        if got is None:
            got = best_neighbor_outside(self.idx, j, self.excluded)
            self._f[j] = got
        return got


def exclusion_range(i: int, k: int, n: int) -> range:
    return range(max(0, i - k), min(n, i + k + 1))


class EditContext:
    """Read-only state shared by the per-position edit searches over one text."""

    def __init__(self, codes, values, gset: GramSet, idx: SuffixIndex, k: int,
                 sigma: int, ends=None):
        self.codes = codes
        self.values = values
        self.gset = gset
        self.idx = idx
        self.k = k
        self.sigma = sigma
        self.lam = gset.lam
        self.bits = gset.bits
        self.ends = ends
        self.n = len(codes)

    def seg_len(self, p: int) -> int:
        return (self.n if self.ends is None else self.ends[p]) - p


def successors(ctx: EditContext, i: int, ylen: int, z: int, hlen: int, ypos: int, m: int):
    """Child states (z, hlen, ypos) of one edit applied at gram offsets hlen..min(m, lam-1)."""
    lam, b, sigma, codes, values = ctx.lam, ctx.bits, ctx.sigma, ctx.codes, ctx.values
    out = []
    for zidx in range(hlen, min(m, lam - 1) + 1):
        p = ypos + zidx - hlen
        if p >= ylen:
            break
        keep = z >> (b * (lam - zidx))
        cur = codes[i + p]
        base = keep << b
        rest_sub = values[i + p + 1] if p + 1 < ylen else 0
        rest_ins = values[i + p]
        sh = b * (lam - zidx - 1)
        for a in range(1, sigma + 1):
            head = (base + a) << sh
            out.append((head | (rest_ins >> (b * (zidx + 1))), zidx + 1, p))
            if a != cur:
                out.append((head | (rest_sub >> (b * (zidx + 1))), zidx + 1, p + 1))
        out.append(((keep << (b * (lam - zidx))) | (rest_sub >> (b * zidx)), zidx, p + 1))
    return out


def _witness_outside(ctx: EditContext, z: int, m: int, r: int, excl: Optional[ExclusionTable]):
    """A position outside the exclusion sharing the longest possible prefix with z.

    Returns (length, position) with length <= m, or (-1, -1) when none exists.
    """
    gset = ctx.gset
    t = gset.order[gset.lo[r]]
    if excl is None or t not in excl:
        return m, t
    a, b = gset.prefix_range(z, m)
    lo, hi = gset.lo[a], gset.hi[b - 1]
    for s in range(lo, hi + 1):
        u = gset.order[s]
        if u not in excl:
            return m, u
    f, length = excl.f(t)
    if f < 0:
        return -1, -1
    return min(m, length), f


def search_edit(ctx: EditContext, i: int, ylen: int, best: int, wit: int,
                excl: Optional[ExclusionTable] = None, audit: Optional[list] = None):
    """Best (length, witness) for query position i over all edit sequences of cost <= k."""
    gset, lam, b, k, idx = ctx.gset, ctx.lam, ctx.bits, ctx.k, ctx.idx
    values = ctx.values
    seen = {}
    lv_done = set()
    z0 = values[i] if ylen > 0 else 0
    level = {(z0, 0): (0, 0)}
    for e in range(k + 1):
        for key, (hlen, _) in level.items():
            old = seen.get(key)
            if old is None or hlen < old:
                seen[key] = hlen
        nxt = {}
        for (z, d), (hlen, ypos) in level.items():
            zlen = min(lam, ylen - d)
            m, r, exact = gset.best_match(z, zlen)
            if r >= 0:
                if exact and zlen == lam:
                    hit = False
                    for t in gset.positions(r):
                        if excl is not None and t in excl:
                            continue
                        hit = True
                        if t in lv_done:
                            continue
                        lv_done.add(t)
                        ell = lv_extend(idx, i, t, k, ylen, ctx.seg_len(t))
                        if ell > best:
                            best, wit = ell, t
                    if not hit and m >= hlen:
                        m2, t = _witness_outside(ctx, z, m, r, excl)
                        if m2 >= hlen and ypos + m2 - hlen > best:
                            best, wit = ypos + m2 - hlen, t
                elif m >= hlen:
                    m2, t = _witness_outside(ctx, z, m, r, excl)
                    if m2 >= hlen and ypos + m2 - hlen > best:
                        best, wit = ypos + m2 - hlen, t
            if e == k:
                continue
            for zc, hc, yc in successors(ctx, i, ylen, z, hlen, ypos, m):
                key = (zc, yc - hc)
                old = seen.get(key)
                if old is not None and old <= hc:
                    if audit is not None:
                        audit.append((i, e + 1, key))
                    continue
                got = nxt.get(key)
                if got is not None:
                    if audit is not None:
                        audit.append((i, e + 1, key))
                    if got[0] <= hc:
                        continue
                nxt[key] = (hc, yc)
        level = nxt
    return best, wit


def context_for(text: Text, cfg: Config, gset: GramSet, idx: SuffixIndex) -> EditContext:
    values = gram_values(idx.codes, cfg.lam, text.alphabet.bits_per_letter)
    return EditContext(idx.codes, values, gset, idx, cfg.k, text.alphabet.sigma)


def enumerate_errors_edit(text: Text, i: int, cfg: Config, gset: GramSet, idx: SuffixIndex,
                          result: PlcpResult, ctx: Optional[EditContext] = None,
                          audit: Optional[list] = None) -> PlcpResult:
    if ctx is None:
        ctx = context_for(text, cfg, gset, idx)
    n = text.n
    excl = ExclusionTable(idx, exclusion_range(i, cfg.k, n))
    f, _ = excl.f(i)
    if f < 0:
        result.plcp[i], result.p[i] = 0, -1
        return result
    best, wit = result.plcp[i], result.p[i]
    start = min(cfg.k, n - i)
    if wit < 0 or start > best:
        best, wit = start, f
    best, wit = search_edit(ctx, i, n - i, best, wit, excl, audit)
    result.plcp[i], result.p[i] = best, wit
    return result


def compute_plcp_edit(text: Text, cfg: Config, backend: str = "auto",
                      idx: Optional[SuffixIndex] = None) -> PlcpResult:
    """PLCP_k and P_k of ``text`` under edit distance with the [i-k, i+k] exclusion."""
    if idx is None:
        idx = build_index(text)
    n = text.n
    result = PlcpResult([0] * n, [-1] * n, EDIT, cfg.k, {"lam": cfg.lam, "alpha": cfg.alpha})
    gset = build_gram_set(text, idx, cfg.lam, backend)
    ctx = context_for(text, cfg, gset, idx)
    for i in range(n):
        enumerate_errors_edit(text, i, cfg, gset, idx, result, ctx)
    return result
