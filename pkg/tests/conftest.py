import numpy as np
import pytest

from kplcp.oracle import default_alphabet
from kplcp.text import Alphabet, text_from_codes

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)


@pytest.fixture
def report():
    """Record a one-line verdict for an acceptance criterion and return the flag."""
    def _report(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return passed
    return _report


def make_text(codes, sigma):
    return text_from_codes(np.asarray(codes), default_alphabet(sigma))


def binary_texts(n):
    ab = Alphabet(("A", "B"))
    for v in range(1 << n):
        yield text_from_codes([((v >> (n - 1 - q)) & 1) + 1 for q in range(n)], ab)


def repetitive_text(rng, n, sigma):
    """Periodic text with a few point mutations; stresses long shared grams."""
    period = int(rng.integers(1, 6))
    codes = np.resize(rng.integers(1, sigma + 1, period), n)
    for _ in range(int(rng.integers(0, 3))):
        if n:
            codes[rng.integers(0, n)] = rng.integers(1, sigma + 1)
    return make_text(codes, sigma)


def hamming_witness_ok(text, plcp, wit, k):
    c = text.codes.tolist()
    for i, (v, p) in enumerate(zip(plcp, wit)):
        if p < 0:
            if v != 0:
                return False
            continue
        if p == i or i + v > len(c) or p + v > len(c):
            return False
        if sum(c[i + q] != c[p + q] for q in range(v)) > k:
            return False
    return True
