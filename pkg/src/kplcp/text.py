"""Alphabet encoding, run-time configuration and packing of grams into integers.

Letters are coded ``1..sigma`` in sorted order; code ``0`` is the end-of-text
sentinel so that a gram running off the end of its string is padded with
zeros and still compares correctly against full-length grams.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

WORD_BITS = 64
DNA = "ACGT"


class InputError(ValueError):
    """Input text that cannot be encoded."""


class ConfigError(ValueError):
    """Parameters outside the regime the algorithms are defined for."""


@dataclass(frozen=True)
class Alphabet:
    letters: tuple

    def __post_init__(self):
        if len(self.letters) < 2:
            raise InputError("alphabet needs at least two letters")
        if len(set(self.letters)) != len(self.letters):
            raise InputError("alphabet letters must be distinct")
        if list(self.letters) != sorted(self.letters):
            raise InputError("alphabet letters must be sorted")

    @classmethod
    def of(cls, letters: Iterable[str]) -> "Alphabet":
        return cls(tuple(sorted(set(letters))))

    @classmethod
    def infer(cls, raw: str) -> "Alphabet":
        """DNA when every symbol is one of ACGT, otherwise the distinct symbols."""
        symbols = set(raw)
        if symbols <= set(DNA):
            return cls(tuple(DNA))
        return cls.of(symbols)

    @property
    def sigma(self) -> int:
        return len(self.letters)

    @property
    def bits_per_letter(self) -> int:
        # codes 0..sigma inclusive
        return self.sigma.bit_length()

    def code(self, letter: str) -> int:
        return self.letters.index(letter) + 1

    def decode(self, code: int) -> str:
        return self.letters[code - 1]


@dataclass(frozen=True, eq=False)
class Text:
    codes: np.ndarray
    alphabet: Alphabet
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.codes)

    def __len__(self):
        return len(self.codes)

    def __str__(self):
        return "".join(self.alphabet.decode(int(c)) for c in self.codes)


def encode_text(raw: str, alphabet: Optional[Alphabet] = None, name: str = "") -> Text:
    if len(raw) == 0:
        raise InputError("empty input")
    if alphabet is None:
        alphabet = Alphabet.infer(raw)
    table = {a: c for c, a in enumerate(alphabet.letters, start=1)}
    codes = np.empty(len(raw), dtype=np.int32)
    for pos, symbol in enumerate(raw):
        code = table.get(symbol)
        if code is None:
            raise InputError(f"symbol {symbol!r} at index {pos} is not in the alphabet")
        codes[pos] = code
    codes.flags.writeable = False
    return Text(codes, alphabet, name)


def text_from_codes(codes: Sequence[int], alphabet: Alphabet, name: str = "") -> Text:
    arr = np.asarray(codes, dtype=np.int32).copy()
    if arr.size == 0:
        raise InputError("empty input")
    if arr.min() < 1 or arr.max() > alphabet.sigma:
        raise InputError("codes must lie in [1, sigma]")
    arr.flags.writeable = False
    return Text(arr, alphabet, name)


def max_k(n: int) -> float:
    """Largest error budget accepted for a text of length n (log n / log log n)."""
    if n < 4:
        return math.inf
    return math.log2(n) / math.log2(math.log2(n))


def gram_length(n: int, alpha: float) -> int:
    if n <= 1:
        return 1
    return max(1, min(n, math.ceil(alpha * math.log2(n))))


@dataclass(frozen=True)
class Config:
    k: int
    alpha: float
    lam: int
    n: int


def make_config(n: int, k: int, alpha: float = 4.0, strict: bool = True) -> Config:
    """Validate parameters and derive the gram length for a text of length n.

    ``strict=False`` skips the ``k < n`` and ``k <= log n / log log n`` checks;
    the algorithms stay exact outside that regime, only slower.
    """
    if k < 0:
        raise ConfigError("k must be non-negative")
    if alpha <= 1:
        raise ConfigError("alpha must be greater than 1")
    if n < 1:
        raise ConfigError("text must be non-empty")
    if strict:
        if k >= n and k > 0:
            raise ConfigError(f"k={k} must be smaller than n={n}")
        if k > max_k(n):
            raise ConfigError(
                f"k={k} exceeds log n / log log n = {max_k(n):.3f} for n={n}")
    return Config(k=k, alpha=alpha, lam=gram_length(n, alpha), n=n)


@dataclass(frozen=True)
class PackedGram:
    """A gram stored as a ``lam``-digit number, most significant digit first.

    ``value`` is the contiguous ``lam * bits``-bit integer; ``words`` is the
    same digit sequence laid out in 64-bit words holding ``64 // bits`` digits
    each (right-aligned, no digit straddles a word).
    """
    value: int
    length: int
    lam: int
    bits: int

    @cached_property
    def digits(self) -> tuple:
        b, mask = self.bits, (1 << self.bits) - 1
        return tuple((self.value >> (b * (self.lam - 1 - q))) & mask for q in range(self.lam))

    @cached_property
    def words(self) -> tuple:
        b, lam = self.bits, self.lam
        per_word = WORD_BITS // b
        out = []
        for start in range(0, lam, per_word):
            take = min(per_word, lam - start)
            chunk = (self.value >> (b * (lam - start - take))) & ((1 << (b * take)) - 1)
            out.append(chunk << (b * (per_word - take)))
        return tuple(out)


def pack_codes(codes: Sequence[int], lam: int, bits: int) -> PackedGram:
    """Pack up to ``lam`` letter codes, padding with the sentinel."""
    length = min(lam, len(codes))
    value = 0
    for q in range(lam):
        value = (value << bits) | (int(codes[q]) if q < length else 0)
    return PackedGram(value, length, lam, bits)


def pack_gram(text: Text, i: int, lam: int) -> PackedGram:
    if not 0 <= i < text.n:
        raise IndexError(f"position {i} outside text of length {text.n}")
    return pack_codes(text.codes[i:i + lam], lam, text.alphabet.bits_per_letter)


def xor_lcp(z: PackedGram, z2: PackedGram) -> int:
    """Number of leading letters shared by two grams, one word at a time."""
    if z.lam != z2.lam or z.bits != z2.bits:
        raise ValueError("grams packed with different lambda or bits per letter")
    b = z.bits
    per_word = WORD_BITS // b
    used = per_word * b
    for w, (a, c) in enumerate(zip(z.words, z2.words)):
        d = a ^ c
        if d:
            delta = d.bit_length() - 1
            agree = w * per_word + (used - delta - 1) // b
            return min(agree, z.length, z2.length)
    return min(z.length, z2.length)


def gram_values(codes: Sequence[int], lam: int, bits: int, ends: Optional[Sequence[int]] = None) -> list:
    """Contiguous packed value of the gram at every position, plus a zero at the end.

    ``ends[p]`` is the exclusive end of the string segment containing ``p``;
    grams never read past it.
    """
    n = len(codes)
    out = [0] * (n + 1)
    top = bits * (lam - 1)
    for p in range(n - 1, -1, -1):
        end = n if ends is None else ends[p]
        nxt = out[p + 1] if p + 1 < end else 0
        out[p] = (int(codes[p]) << top) | (nxt >> bits)
    return out


def values_to_words(values: Sequence[int], lam: int, bits: int) -> np.ndarray:
    """Convert contiguous gram values to the word layout as a (len, W) uint64 array."""
    per_word = WORD_BITS // bits
    nwords = -(-lam // per_word)
    out = np.zeros((len(values), nwords), dtype=np.uint64)
    for w in range(nwords):
        first = w * per_word
        take = min(per_word, lam - first)
        shift = bits * (lam - first - take)
        mask = (1 << (bits * take)) - 1
        pad = bits * (per_word - take)
        col = [((v >> shift) & mask) << pad for v in values]
        out[:, w] = np.array(col, dtype=np.uint64)
    return out
