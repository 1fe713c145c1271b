"""Numba kernels for the Hamming substitution search.

Grams live in the word layout (``64 // bits`` digits per uint64 word, no
digit split across words) so a key is a short row of a 2-D uint64 array.
Keys are searched by a direct table on leading bits followed by binary search
over the sorted rows; everything else
mirrors the pure-Python engine in :mod:`kplcp.hamming`.
"""
import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency
    numba = None

from .text import WORD_BITS

ENGINES = ("auto", "numba", "python")


def resolve(engine: str) -> str:
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if engine == "auto":
        return "numba" if numba is not None else "python"
    if engine == "numba" and numba is None:
        raise RuntimeError("numba engine requested but numba is not installed")
    return engine


def word_grams(codes, lam: int, bits: int, ends=None) -> np.ndarray:
    """(n, W) uint64 grams of every position, zero-padded past ``ends[p]``."""
    codes = np.asarray(codes, dtype=np.uint64)
    n = len(codes)
    per_word = WORD_BITS // bits
    nwords = -(-lam // per_word)
    end = np.full(n, n, dtype=np.int64) if ends is None else np.asarray(ends, dtype=np.int64)
    padded = np.zeros(n + lam, dtype=np.uint64)
    padded[:n] = codes
    pos = np.arange(n, dtype=np.int64)
    out = np.zeros((n, nwords), dtype=np.uint64)
    for q in range(lam):
        col = np.where(pos + q < end, padded[pos + q], np.uint64(0))
        shift = np.uint64(bits * (per_word - 1 - q % per_word))
        out[:, q // per_word] |= col << shift
    return out


def sorted_key_table(gw: np.ndarray, sa: np.ndarray, lcp: np.ndarray, lam: int):
    """Distinct keys in SA order with inclusive SA-row ranges."""
    n = len(sa)
    starts = np.flatnonzero((np.arange(n) == 0) | (lcp < lam))
    lo = starts.astype(np.int64)
    hi = np.empty_like(lo)
    hi[:-1] = lo[1:] - 1
    hi[-1] = n - 1
    keys = np.ascontiguousarray(gw[sa[lo]])
    return keys, lo, hi


def key_table_from_positions(gw: np.ndarray, positions: np.ndarray):
    """Distinct keys over a subset of positions; order is sorted by (key, position)."""
    positions = np.asarray(positions, dtype=np.int64)
    sub = gw[positions]
    cols = [positions] + [sub[:, w] for w in range(sub.shape[1] - 1, -1, -1)]
    perm = np.lexsort(cols)
    order = positions[perm]
    rows = sub[perm]
    m = len(order)
    new = np.ones(m, dtype=bool)
    if m > 1:
        new[1:] = np.any(rows[1:] != rows[:-1], axis=1)
    lo = np.flatnonzero(new).astype(np.int64)
    hi = np.empty_like(lo)
    hi[:-1] = lo[1:] - 1
    hi[-1] = m - 1
    return np.ascontiguousarray(rows[lo]), lo, hi, order


def top_table(keys: np.ndarray, bits: int):
    """Rank ranges by the leading bits of the first key word.

    ``top[v]`` is the first key whose leading ``B`` bits are >= v, so a search
    only has to look inside ``top[v] .. top[v + 1]``.
    """
    used = (WORD_BITS // bits) * bits
    nbits = min(used, max(1, len(keys).bit_length() - 1), 24)
    shift = used - nbits
    heads = (keys[:, 0] >> np.uint64(shift)).astype(np.int64) if len(keys) else np.zeros(0, np.int64)
    top = np.searchsorted(heads, np.arange((1 << nbits) + 1), side="left").astype(np.int32)
    return top, shift


if numba is not None:

    @njit(cache=True, inline="always")
    def _msb(d):
        r = 0
        if d >> np.uint64(32):
            d >>= np.uint64(32)
            r += 32
        if d >> np.uint64(16):
            d >>= np.uint64(16)
            r += 16
        if d >> np.uint64(8):
            d >>= np.uint64(8)
            r += 8
        if d >> np.uint64(4):
            d >>= np.uint64(4)
            r += 4
        if d >> np.uint64(2):
            d >>= np.uint64(2)
            r += 2
        if d >> np.uint64(1):
            r += 1
        return r

    @njit(cache=True, inline="always")
    def _imsb(x):
        r = 0
        while x > 1:
            x >>= 1
            r += 1
        return r

    @njit(cache=True)
    def _lce(isa, table, i, j, n):
        if i == j:
            return n - i
        a = isa[i]
        b = isa[j]
        if a > b:
            a, b = b, a
        d = _imsb(b - a)
        x = table[d, a + 1]
        y = table[d, b - (1 << d) + 1]
        return x if x < y else y

    @njit(cache=True)
    def _kangaroo(isa, table, i, j, k, limit, n):
        length = 0
        errors = 0
        while True:
            if length >= limit:
                return limit
            length += _lce(isa, table, i + length, j + length, n)
            if length >= limit:
                return limit
            if errors == k:
                return length
            errors += 1
            length += 1

    @njit(cache=True)
    def _rank(keys, head, z, top, shift):
        """First key row >= z.

        ``top`` narrows the range by the leading bits of word 0 and ``head``
        (a contiguous copy of word 0) keeps the search inside a small array.
        """
        v = z[0] >> shift
        lo = top[v]
        hi = top[v + 1]
        nw = keys.shape[1]
        z0 = z[0]
        while lo < hi:
            mid = (lo + hi) >> 1
            a = head[mid]
            if a != z0:
                less = a < z0
            else:
                less = False
                for w in range(1, nw):
                    a = keys[mid, w]
                    c = z[w]
                    if a != c:
                        less = a < c
                        break
            if less:
                lo = mid + 1
            else:
                hi = mid
        return lo

    @njit(cache=True)
    def _common(keys, head, r, z, per_word, bits, lam):
        used = per_word * bits
        d = head[r] ^ z[0]
        if d:
            return (used - _msb(d) - 1) // bits
        for w in range(1, keys.shape[1]):
            d = keys[r, w] ^ z[w]
            if d:
                return w * per_word + (used - _msb(d) - 1) // bits
        return lam

    @njit(cache=True)
    def _best_match(keys, head, top, shift, z, zlen, per_word, bits, lam):
        """(m, r, exact) with ties between the neighbours going to the predecessor."""
        nk = keys.shape[0]
        r = _rank(keys, head, z, top, shift)
        if r < nk and head[r] == z[0]:
            same = True
            for w in range(1, keys.shape[1]):
                if keys[r, w] != z[w]:
                    same = False
                    break
            if same:
                return zlen, r, True
        best = -1
        arg = -1
        if r > 0:
            best = _common(keys, head, r - 1, z, per_word, bits, lam)
            arg = r - 1
        if r < nk:
            c = _common(keys, head, r, z, per_word, bits, lam)
            if c > best:
                best = c
                arg = r
        if arg < 0:
            return 0, -1, False
        return min(best, zlen), arg, False

    @njit(cache=True)
    def hamming_search(codes, gw, keys, head, top, shift, klo, khi, order, isa, table, qpos, ylens,
                       seg_end, plcp, wit, lam, bits, sigma, k, self_match, use_base):
        """Substitution search for every query; updates ``plcp``/``wit`` in place.

        Returns the number of the first query whose witness check failed plus
        one, or 0 when every check held.
        """
        n = codes.shape[0]
        nw = gw.shape[1]
        per_word = WORD_BITS // bits
        mask = np.uint64((1 << bits) - 1)
        mark = np.full(n, -1, dtype=np.int64)
        zst = np.zeros((k + 2, nw), dtype=np.uint64)
        pos = np.zeros(k + 2, dtype=np.int64)
        let = np.zeros(k + 2, dtype=np.int64)
        reach = np.zeros(k + 2, dtype=np.int64)
        for qi in range(qpos.shape[0]):
            i = qpos[qi]
            ylen = ylens[qi]
            L = min(lam, ylen)
            best = plcp[qi]
            bw = wit[qi]
            for w in range(nw):
                zst[0, w] = gw[i, w]
            if use_base:
                m0, r, exact = _best_match(keys, head, top, shift, zst[0], L, per_word, bits, lam)
                if r >= 0:
                    if exact:
                        for s in range(klo[r], khi[r] + 1):
                            t = order[s]
                            if mark[t] == qi or (self_match and t == i):
                                continue
                            mark[t] = qi
                            lim = min(ylen, seg_end[t] - t)
                            ell = _kangaroo(isa, table, i, t, k, lim, n)
                            if ell > best:
                                best = ell
                                bw = t
                    elif m0 > best:
                        best = m0
                        bw = order[klo[r]]
            else:
                m0 = best
            if k > 0:
                sp = 0
                pos[0] = i
                let[0] = 0
                reach[0] = min(i + m0, i + L - 1)
                while sp >= 0:
                    p = pos[sp]
                    if p > reach[sp]:
                        sp -= 1
                        continue
                    a = let[sp] + 1
                    if a > sigma:
                        pos[sp] = p + 1
                        let[sp] = 0
                        continue
                    let[sp] = a
                    cur = codes[p]
                    if a == cur:
                        continue
                    q = p - i
                    w = q // per_word
                    sh = np.uint64(bits * (per_word - 1 - q % per_word))
                    for ww in range(nw):
                        zst[sp + 1, ww] = zst[sp, ww]
                    zst[sp + 1, w] = (zst[sp, w] & ~(mask << sh)) | (np.uint64(a) << sh)
                    m2, r, exact = _best_match(keys, head, top, shift, zst[sp + 1], L, per_word, bits, lam)
                    if exact:
                        for s in range(klo[r], khi[r] + 1):
                            t = order[s]
                            if mark[t] == qi or (self_match and t == i):
                                continue
                            mark[t] = qi
                            lim = min(ylen, seg_end[t] - t)
                            ell = _kangaroo(isa, table, i, t, k, lim, n)
                            if ell > best:
                                best = ell
                                bw = t
                    elif m2 > best:
                        t = order[klo[r]]
                        if self_match and t == i:
                            return qi + 1
                        best = m2
                        bw = t
                    if sp + 1 < k and m2 > q:
                        sp += 1
                        pos[sp] = p + 1
                        let[sp] = 0
                        reach[sp] = min(i + m2, i + L - 1)
            plcp[qi] = best
            wit[qi] = bw
        return 0


def run_search(codes, gw, keys, klo, khi, order, isa, table, qpos, ylens, seg_end,
               plcp, wit, lam, bits, sigma, k, self_match, use_base):
    """Call the kernel with normalised dtypes; returns the updated (plcp, wit) arrays."""
    plcp = np.asarray(plcp, dtype=np.int64).copy()
    wit = np.asarray(wit, dtype=np.int64).copy()
    top, shift = top_table(keys, bits)
    status = hamming_search(
        np.asarray(codes, dtype=np.int64), gw, keys, np.ascontiguousarray(keys[:, 0]), top,
        np.uint64(shift),
        np.asarray(klo, dtype=np.int64), np.asarray(khi, dtype=np.int64),
        np.asarray(order, dtype=np.int64), np.asarray(isa, dtype=np.int64),
        np.ascontiguousarray(table, dtype=np.int32),
        np.asarray(qpos, dtype=np.int64), np.asarray(ylens, dtype=np.int64),
        np.asarray(seg_end, dtype=np.int64), plcp, wit,
        int(lam), int(bits), int(sigma), int(k), bool(self_match), bool(use_base))
    if status:
        from .hamming import InvariantError
        raise InvariantError(f"witness equals query position {int(qpos[status - 1])}")
    return plcp, wit


def hamming_self(text, cfg, idx, result) -> None:
    """Run the compiled search over every position of ``text`` (in place on ``result``)."""
    bits = text.alphabet.bits_per_letter
    n = text.n
    gw = word_grams(idx.codes, cfg.lam, bits)
    keys, klo, khi = sorted_key_table(gw, idx.sa_arr, idx.lcp_arr, cfg.lam)
    qpos = np.arange(n, dtype=np.int64)
    plcp, wit = run_search(idx.codes, gw, keys, klo, khi, idx.sa_arr, idx.isa_arr, idx.table,
                           qpos, n - qpos, np.full(n, n, dtype=np.int64),
                           result.plcp, result.p, cfg.lam, bits, text.alphabet.sigma,
                           cfg.k, True, False)
    result.plcp = plcp.tolist()
    result.p = wit.tolist()


def warmup() -> None:
    """Compile the kernels on a tiny input so later timings exclude JIT cost."""
    if numba is None:
        return
    from .index import build_index
    from .text import encode_text, make_config
    from .result import PlcpResult
    text = encode_text("ACGTTGCAACGTAGCT")
    cfg = make_config(text.n, 1, strict=False)
    idx = build_index(text)
    hamming_self(text, cfg, idx, PlcpResult([0] * text.n, [-1] * text.n))
