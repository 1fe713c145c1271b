"""Mappability queries, Lambda arrays with the ACS dissimilarity, and all-pairs overlaps."""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .edit import EditContext, lv_extend, search_edit, successors
from .hamming import SearchContext, search_position
from .index import SuffixIndex, kangaroo
from .predecessor import gram_set_from_positions
from .result import EDIT, HAMMING, MODELS, PlcpResult
from .text import Config, InputError, Text, gram_length, gram_values

DIST_FORMULA = "acs-selfnorm"


# --- mappability -----------------------------------------------------------------

@dataclass
class MappabilityIndex:
    """count[m] = #{i <= n - m : plcp[i] < m}; answer[mu] = least m with count[m] >= mu.

    Both lists have n + 1 cells; index 0 is unused.  ``answer`` holds ``None``
    where no length reaches the threshold.
    """
    n: int
    count: List[int]
    answer: List[Optional[int]]
    k: int = 0
    model: str = HAMMING


def build_mappability(plcp, n: Optional[int] = None) -> MappabilityIndex:
    values = plcp.plcp if isinstance(plcp, PlcpResult) else list(plcp)
    if n is None:
        n = len(values)
    if n != len(values):
        raise ValueError(f"n={n} does not match {len(values)} plcp values")
    diff = np.zeros(n + 2, dtype=np.int64)
    for i, v in enumerate(values):
        lo, hi = v + 1, n - i
        if lo <= hi:
            diff[lo] += 1
            diff[hi + 1] -= 1
    count = np.cumsum(diff)[: n + 1]
    count[0] = 0
    # first[c] = least m with count[m] == c, then a suffix minimum over c
    none = n + 1
    first = np.full(n + 2, none, dtype=np.int64)
    for m in range(n, 0, -1):
        first[count[m]] = m
    answer = np.minimum.accumulate(first[::-1])[::-1]
    out = [None] * (n + 1)
    for mu in range(1, n + 1):
        if answer[mu] != none:
            out[mu] = int(answer[mu])
    k = plcp.k if isinstance(plcp, PlcpResult) else 0
    model = plcp.model if isinstance(plcp, PlcpResult) else HAMMING
    return MappabilityIndex(n, count.tolist(), out, k, model)


def query_mappability(midx: MappabilityIndex, mu: int) -> Optional[int]:
    if not 1 <= mu <= midx.n:
        raise ValueError(f"mu must lie in [1, {midx.n}], got {mu}")
    return midx.answer[mu]


# --- concatenations --------------------------------------------------------------

@dataclass
class Concat:
    """Strings joined with distinct separator codes (sigma + 1, sigma + 2, ...)."""
    codes: List[int]
    starts: List[int]
    lengths: List[int]
    ends: List[int]
    owner: List[int]
    idx: SuffixIndex


def concatenate(texts: Sequence[Text]) -> Concat:
    sigma = texts[0].alphabet.sigma
    codes, starts, ends, owner = [], [], [], []
    for s, t in enumerate(texts):
        starts.append(len(codes))
        codes.extend(int(c) for c in t.codes)
        end = len(codes)
        ends.extend([end] * t.n)
        owner.extend([s] * t.n)
        if s + 1 < len(texts):
            codes.append(sigma + 1 + s)
            ends.append(end)
            owner.append(-1)
    return Concat(codes, starts, [t.n for t in texts], ends, owner, SuffixIndex(codes))


def _check_alphabets(texts: Sequence[Text]):
    first = texts[0].alphabet
    for t in texts[1:]:
        if t.alphabet != first:
            raise InputError("all inputs must share one alphabet")


# --- Lambda arrays and Dist_k -----------------------------------------------------

@dataclass
class LambdaArrays:
    lambda_xy: List[int]
    lambda_yx: List[int]
    k: int
    model: str
    witness_xy: List[int] = field(default_factory=list)
    witness_yx: List[int] = field(default_factory=list)

    def lcs_k(self) -> Tuple[int, int, int]:
        """(length, i in x, j in y) of the longest substring pair within k errors."""
        i = int(np.argmax(self.lambda_xy))
        return self.lambda_xy[i], i, self.witness_xy[i]


def _one_side(x: Text, y: Text, k: int, alpha: float, model: str, engine: str):
    """Lambda_{x,y} and witnesses (positions in y)."""
    cat = concatenate([x, y])
    off = cat.starts[1]
    lam = min(gram_length(len(cat.codes), alpha), max(x.n, y.n))
    bits = x.alphabet.bits_per_letter
    sigma = x.alphabet.sigma
    ypos = list(range(off, off + y.n))
    if model == HAMMING and _kernels.resolve(engine) == "numba":
        gw = _kernels.word_grams(cat.codes, lam, bits, cat.ends)
        keys, klo, khi, order = _kernels.key_table_from_positions(gw, np.array(ypos))
        qpos = np.arange(x.n, dtype=np.int64)
        vals, wit = _kernels.run_search(
            cat.codes, gw, keys, klo, khi, order, cat.idx.isa_arr, cat.idx.table, qpos,
            x.n - qpos, np.asarray(cat.ends, dtype=np.int64), np.zeros(x.n, np.int64),
            np.full(x.n, -1, np.int64), lam, bits, sigma, k, False, True)
        vals, wit = vals.tolist(), wit.tolist()
    else:
        values = gram_values(cat.codes, lam, bits, cat.ends)
        lengths = [min(lam, cat.ends[p] - p) for p in range(len(cat.codes))]
        gset = gram_set_from_positions(values, lengths, ypos, lam, bits)
        vals, wit = [], []
        if model == HAMMING:
            ctx = SearchContext(cat.codes, values, gset, cat.idx, k, sigma, cat.ends, False)
            for i in range(x.n):
                best, w = search_position(ctx, i, x.n - i, 0, -1)
                vals.append(best)
                wit.append(w)
        else:
            ctx = EditContext(cat.codes, values, gset, cat.idx, k, sigma, cat.ends)
            for i in range(x.n):
                ylen = x.n - i
                best, w = search_edit(ctx, i, ylen, min(k, ylen), off)
                vals.append(best)
                wit.append(w)
    return vals, [w - off if w >= 0 else -1 for w in wit]


def compute_lambda(x: Text, y: Text, cfg: Config, model: str = HAMMING,
                   engine: str = "auto") -> LambdaArrays:
    """Lambda_{x,y} and Lambda_{y,x}; gram length follows ``cfg.alpha`` on |x| + |y| + 1."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    _check_alphabets([x, y])
    xy, wxy = _one_side(x, y, cfg.k, cfg.alpha, model, engine)
    yx, wyx = _one_side(y, x, cfg.k, cfg.alpha, model, engine)
    return LambdaArrays(xy, yx, cfg.k, model, wxy, wyx)


def _acs_term(lam_ab: Sequence[int], len_a: int, len_b: int) -> float:
    avg = sum(v + 1 for v in lam_ab) / len(lam_ab)
    return math.log(len_b) / avg - 2.0 * math.log(len_a) / (len_a + 3)


def dist_from_lambda(arrays: LambdaArrays) -> float:
    """Symmetrised average-common-substring dissimilarity, zero for identical strings.

    Each direction is log|b| / mean(Lambda_ab + 1) - 2 log|a| / (|a| + 3); the
    second term is the first one's value when a == b, where Lambda_aa[i] = |a| - i.
    """
    nx, ny = len(arrays.lambda_xy), len(arrays.lambda_yx)
    if nx == 0 or ny == 0:
        raise ValueError("Dist_k needs non-empty strings")
    return 0.5 * _acs_term(arrays.lambda_xy, nx, ny) + 0.5 * _acs_term(arrays.lambda_yx, ny, nx)


def dist_k(x: Text, y: Text, cfg: Config, model: str = HAMMING, engine: str = "auto") -> float:
    return dist_from_lambda(compute_lambda(x, y, cfg, model, engine))


# --- all-pairs suffix/prefix overlaps -----------------------------------------------

@dataclass
class OverlapResult:
    """lengths[s][t]: longest suffix of s matching a prefix of t within k errors (0 if none)."""
    lengths: List[List[int]]
    k: int
    model: str

    def __getitem__(self, pair):
        s, t = pair
        return self.lengths[s][t]

    def pairs(self):
        m = len(self.lengths)
        for s in range(m):
            for t in range(m):
                if s != t:
                    yield s, t, self.lengths[s][t]


def _overlaps_hamming(ctx: SearchContext, cat: Concat, s: int, found: List[int]):
    gset, codes, shifts, sigma, k = ctx.gset, ctx.codes, ctx.shifts, ctx.sigma, ctx.k
    lam, idx = ctx.lam, ctx.idx
    st, slen = cat.starts[s], cat.lengths[s]
    for q in range(slen):
        g = st + q
        ylen = slen - q
        W = min(lam, ylen)

        def report(z):
            a, b = gset.prefix_range(z, W)
            for r in range(a, b):
                for t_pos in gset.positions(r):
                    t = cat.owner[t_pos]
                    if t == s or found[t] or cat.lengths[t] < ylen:
                        continue
                    if ylen <= lam or kangaroo(idx, g, t_pos, k, ylen) >= ylen:
                        found[t] = ylen

        def rec(z, start, m, e):
            if m >= W:
                report(z)
            if e == k:
                return
            for p in range(start, g + min(m, W - 1) + 1):
                sh = shifts[p - g]
                cur = codes[p]
                base = z - (cur << sh)
                for a in range(1, sigma + 1):
                    if a == cur:
                        continue
                    z2 = base + (a << sh)
                    m2, _, _ = gset.best_match(z2, W)
                    if m2 > p - g:
                        rec(z2, p + 1, m2, e + 1)

        z0 = ctx.values[g]
        m0, _, _ = gset.best_match(z0, W)
        rec(z0, g, m0, 0)


def _overlaps_edit(ctx: EditContext, cat: Concat, s: int, found: List[int]):
    gset, lam, k, idx = ctx.gset, ctx.lam, ctx.k, ctx.idx
    st, slen = cat.starts[s], cat.lengths[s]
    for q in range(slen):
        g = st + q
        ylen = slen - q
        seen = {}
        level = {(ctx.values[g], 0): (0, 0)}
        checked = set()
        for e in range(k + 1):
            for key, (hlen, _) in level.items():
                if key not in seen or hlen < seen[key]:
                    seen[key] = hlen
            nxt = {}
            for (z, d), (hlen, ypos) in level.items():
                full = ylen - d
                zlen = min(lam, full)
                m, _, _ = gset.best_match(z, zlen)
                if m >= zlen:
                    a, b = gset.prefix_range(z, zlen)
                    for r in range(a, b):
                        for t_pos in gset.positions(r):
                            t = cat.owner[t_pos]
                            if t == s or found[t] or cat.lengths[t] < ylen:
                                continue
                            if full <= lam:
                                found[t] = ylen
                            elif t_pos not in checked:
                                checked.add(t_pos)
                                if lv_extend(idx, g, t_pos, k, ylen, cat.lengths[t]) >= ylen:
                                    found[t] = ylen
                if e == k:
                    continue
                for zc, hc, yc in successors(ctx, g, ylen, z, hlen, ypos, m):
                    key = (zc, yc - hc)
                    old = seen.get(key)
                    if old is not None and old <= hc:
                        continue
                    got = nxt.get(key)
                    if got is not None and got[0] <= hc:
                        continue
                    nxt[key] = (hc, yc)
            level = nxt


def all_pairs_overlaps(strings: Sequence[Text], cfg: Config, model: str = HAMMING) -> OverlapResult:
    """Longest k-error suffix/prefix overlap for every ordered pair of distinct strings."""
    if len(strings) < 2:
        raise ValueError("overlaps need at least two strings")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    _check_alphabets(strings)
    cat = concatenate(strings)
    lam = min(gram_length(len(cat.codes), cfg.alpha), max(cat.lengths))
    bits = strings[0].alphabet.bits_per_letter
    sigma = strings[0].alphabet.sigma
    values = gram_values(cat.codes, lam, bits, cat.ends)
    lengths = [min(lam, cat.ends[p] - p) for p in range(len(cat.codes))]
    gset = gram_set_from_positions(values, lengths, cat.starts, lam, bits)
    out = []
    for s in range(len(strings)):
        found = [0] * len(strings)
        if model == HAMMING:
            ctx = SearchContext(cat.codes, values, gset, cat.idx, cfg.k, sigma, cat.ends, False)
            _overlaps_hamming(ctx, cat, s, found)
        else:
            ctx = EditContext(cat.codes, values, gset, cat.idx, cfg.k, sigma, cat.ends)
            _overlaps_edit(ctx, cat, s, found)
        out.append(found)
    return OverlapResult(out, cfg.k, model)
