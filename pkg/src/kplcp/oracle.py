"""Brute-force reference implementations and the random-text experiments.

Nothing here touches the suffix index, the gram sets or the search engines;
the only shared code is text encoding.  The experiment runner is the one
exception: it exists to measure the fast Hamming path.
"""
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .text import Alphabet, Text, text_from_codes

log = logging.getLogger(__name__)


def _codes(t) -> np.ndarray:
    return np.asarray(t.codes if isinstance(t, Text) else t, dtype=np.int64)


def hamming_matrix(a, b, k: int) -> np.ndarray:
    """M[i, j] = Hamming k-lcp of a[i:] and b[j:], one diagonal at a time."""
    a, b = _codes(a), _codes(b)
    na, nb = len(a), len(b)
    out = np.zeros((na, nb), dtype=np.int64)
    for d in range(-(na - 1), nb):
        i0, j0 = max(0, -d), max(0, d)
        span = min(na - i0, nb - j0)
        if span <= 0:
            continue
        miss = np.flatnonzero(a[i0:i0 + span] != b[j0:j0 + span])
        start = np.arange(span)
        at = np.searchsorted(miss, start) + k
        padded = np.append(miss, span)
        lengths = padded[np.minimum(at, len(miss))] - start
        rows = np.arange(i0, i0 + span)
        out[rows, rows - i0 + j0] = lengths
    return out


def edit_prefix_lengths(y, x, starts, k: int) -> np.ndarray:
    """For each j in ``starts``: largest ell with y[:ell] within edit distance k of a prefix of x[j:].

    Banded DP over diagonals d = col - row in [-k, k], vectorised across j.
    """
    y, x = _codes(y), _codes(x)
    starts = np.asarray(starts, dtype=np.int64)
    m, nx = len(y), len(x)
    cnt = len(starts)
    if cnt == 0:
        return np.zeros(0, dtype=np.int64)
    big = 10 ** 9
    width = 2 * k + 1
    offs = np.arange(-k, k + 1)
    avail = nx - starts
    xs = np.concatenate([x, np.full(m + k + 2, -1)])
    # row 0: D[0][col] = col for col in [0, k]
    cur = np.full((cnt, width), big, dtype=np.int64)
    for c, d in enumerate(offs):
        if d >= 0:
            cur[:, c] = np.where(d <= avail, d, big)
    best = np.zeros(cnt, dtype=np.int64)
    for row in range(1, m + 1):
        nxt = np.full((cnt, width), big, dtype=np.int64)
        for c, d in enumerate(offs):
            col = row + d
            if col < 0:
                continue
            ok = col <= avail
            cand = np.full(cnt, big, dtype=np.int64)
            if c + 1 < width:
                cand = np.minimum(cand, cur[:, c + 1] + 1)  # y letter unmatched
            if col >= 1:
                xl = xs[np.minimum(starts + col - 1, len(xs) - 1)]
                cand = np.minimum(cand, cur[:, c] + (xl != y[row - 1]))
            if c >= 1:
                cand = np.minimum(cand, nxt[:, c - 1] + 1)  # x letter unmatched
            nxt[:, c] = np.where(ok, cand, big)
        cur = nxt
        alive = cur.min(axis=1) <= k
        if not alive.any():
            break
        best[alive] = row
    return best


def full_edit_prefix(y, z, k: int) -> int:
    """Largest ell with y[:ell] within edit distance k of some prefix of z (unbanded DP)."""
    y, z = list(_codes(y)), list(_codes(z))
    prev = list(range(len(z) + 1))
    best = 0
    for r in range(1, len(y) + 1):
        cur = [r] + [0] * len(z)
        for c in range(1, len(z) + 1):
            cur[c] = min(prev[c] + 1, cur[c - 1] + 1, prev[c - 1] + (y[r - 1] != z[c - 1]))
        if min(cur) <= k:
            best = r
        prev = cur
    return best


def edit_distance(a, b) -> int:
    a, b = list(_codes(a)), list(_codes(b))
    prev = list(range(len(b) + 1))
    for r in range(1, len(a) + 1):
        cur = [r] + [0] * len(b)
        for c in range(1, len(b) + 1):
            cur[c] = min(prev[c] + 1, cur[c - 1] + 1, prev[c - 1] + (a[r - 1] != b[c - 1]))
        prev = cur
    return prev[-1]


def _argmax_rows(mat: np.ndarray) -> Tuple[List[int], List[int]]:
    if mat.shape[1] == 0:
        return [0] * mat.shape[0], [-1] * mat.shape[0]
    arg = mat.argmax(axis=1)
    val = mat[np.arange(mat.shape[0]), arg]
    return val.tolist(), arg.tolist()


def brute_plcp_hamming(text, k: int):
    """(plcp, witness) lists by scanning every ordered pair."""
    mat = hamming_matrix(text, text, k)
    n = mat.shape[0]
    np.fill_diagonal(mat, -1)
    vals, args = _argmax_rows(mat)
    if n == 1:
        return [0], [-1]
    return vals, args


def brute_plcp_edit(text, k: int):
    """(plcp, witness) lists over j outside [i-k, i+k]; (0, -1) when nothing is left."""
    x = _codes(text)
    n = len(x)
    plcp, wit = [0] * n, [-1] * n
    for i in range(n):
        js = np.array([j for j in range(n) if abs(j - i) > k], dtype=np.int64)
        if len(js) == 0:
            continue
        vals = edit_prefix_lengths(x[i:], x, js, k)
        a = int(vals.argmax())
        plcp[i], wit[i] = int(vals[a]), int(js[a])
    return plcp, wit


def brute_lambda(x, y, k: int, model: str = "hamming") -> List[int]:
    """Lambda_{x,y}[i] = max over j of the k-lcp of x[i:] and y[j:]."""
    xc, yc = _codes(x), _codes(y)
    if model == "hamming":
        return hamming_matrix(xc, yc, k).max(axis=1).tolist()
    starts = np.arange(len(yc))
    return [int(edit_prefix_lengths(xc[i:], yc, starts, k).max()) for i in range(len(xc))]


def brute_overlaps(strings: Sequence, k: int, model: str = "hamming") -> Dict[Tuple[int, int], int]:
    """Largest ell <= min(|s|, |t|) whose length-ell suffix of s is within distance k of t's start.

    Hamming compares with the length-ell prefix of t; edit compares with any
    prefix of t.  Pairs with no overlap map to 0.
    """
    seqs = [list(_codes(s)) for s in strings]
    out = {}
    for si, s in enumerate(seqs):
        for ti, t in enumerate(seqs):
            if si == ti:
                continue
            best = 0
            for ell in range(min(len(s), len(t)), 0, -1):
                suf = s[len(s) - ell:]
                if model == "hamming":
                    ok = sum(a != b for a, b in zip(suf, t)) <= k
                else:
                    ok = full_edit_prefix(suf, t, k) >= ell
                if ok:
                    best = ell
                    break
            out[si, ti] = best
    return out


def brute_mappability_counts(plcp: Sequence[int]) -> List[int]:
    """count[m] = #{i <= n-m : plcp[i] < m} for m = 0..n (count[0] unused)."""
    n = len(plcp)
    return [0] + [sum(1 for i in range(n - m + 1) if plcp[i] < m) for m in range(1, n + 1)]


# --- random texts and experiments -------------------------------------------------

def random_codes(rng: np.random.Generator, n: int, sigma: int) -> np.ndarray:
    return rng.integers(1, sigma + 1, size=n, dtype=np.int32)


def rng_streams(seed: int, count: int) -> List[np.random.Generator]:
    """Independent counter-based generators, one per trial."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def default_alphabet(sigma: int) -> Alphabet:
    if sigma == 4:
        return Alphabet(tuple("ACGT"))
    letters = [chr(ord("A") + c) for c in range(min(sigma, 26))]
    letters += [chr(ord("a") + c) for c in range(max(0, sigma - 26))]
    return Alphabet(tuple(sorted(letters)))


def random_text(rng: np.random.Generator, n: int, sigma: int) -> Text:
    return text_from_codes(random_codes(rng, n, sigma), default_alphabet(sigma))


@dataclass
class TrialRow:
    n: int
    sigma: int
    k: int
    trial: int
    max_plcp: int
    ratio: float
    long_pairs: int
    seconds: float = 0.0

    COLUMNS = ("n", "sigma", "k", "trial", "max_plcp", "ratio", "long_pairs")

    def tsv(self) -> str:
        return "\t".join([str(self.n), str(self.sigma), str(self.k), str(self.trial),
                          str(self.max_plcp), f"{self.ratio:.6f}", str(self.long_pairs)])


def _run_trial(args):
    from .hamming import compute_plcp_hamming, count_long_pairs
    from .index import build_index
    from .text import make_config
    import time
    n, sigma, k, trial, seed, alpha, engine = args
    rng = _trial_rng(seed, n, trial)
    text = random_text(rng, n, sigma)
    cfg = make_config(n, k, alpha, strict=False)
    start = time.perf_counter()
    idx = build_index(text)
    res = compute_plcp_hamming(text, cfg, engine=engine, idx=idx)
    elapsed = time.perf_counter() - start
    top = max(res.plcp)
    return TrialRow(n, sigma, k, trial, top, top / math.log(n, sigma),
                    count_long_pairs(idx, cfg.lam), elapsed)


def _trial_rng(seed: int, n: int, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed, n, trial])
    return np.random.Generator(np.random.Philox(ss))


def experiment_expected_length(sigma: int, k: int, sizes: Sequence[int], trials: int,
                               seed: int, alpha: float = 4.0, engine: str = "auto",
                               threads: int = 1) -> List[TrialRow]:
    """One row per (n, trial) of uniform random texts, ordered by n then trial."""
    if trials < 10:
        warnings.warn(f"only {trials} trials per size; statistics will be weak", stacklevel=2)
    jobs = [(n, sigma, k, t, seed, alpha, engine) for n in sizes for t in range(trials)]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_run_trial, jobs))
    return [_run_trial(j) for j in jobs]


def summarize(rows: Sequence[TrialRow]) -> List[dict]:
    """Per-n mean and max of max_plcp, mean ratio and mean long-pair count."""
    out = []
    for n in sorted({r.n for r in rows}):
        sel = [r for r in rows if r.n == n]
        out.append({
            "n": n,
            "trials": len(sel),
            "mean_max_plcp": float(np.mean([r.max_plcp for r in sel])),
            "max_max_plcp": max(r.max_plcp for r in sel),
            "mean_ratio": float(np.mean([r.ratio for r in sel])),
            "mean_long_pairs": float(np.mean([r.long_pairs for r in sel])),
            "seconds": float(sum(r.seconds for r in sel)),
        })
    return out
