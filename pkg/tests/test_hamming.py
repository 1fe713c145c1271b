import numpy as np
import pytest

from conftest import binary_texts, hamming_witness_ok, make_text, repetitive_text
from kplcp import _kernels
from kplcp.hamming import (compute_plcp_hamming, count_long_pairs, enumerate_errors,
                           long_pairs_pass, query_best_neighbor)
from kplcp.index import build_index, plcp0_init
from kplcp.oracle import brute_plcp_hamming, random_text
from kplcp.predecessor import build_gram_set
from kplcp.text import encode_text, make_config, pack_codes, pack_gram

ENGINES = ["python", "numba"]


@pytest.mark.parametrize("engine", ENGINES)
def test_uniform_text(engine):
    t = encode_text("AAAA")
    res = compute_plcp_hamming(t, make_config(4, 1), engine=engine)
    assert res.plcp == [3, 3, 2, 1]


@pytest.mark.parametrize("engine", ENGINES)
def test_two_letters_one_error(engine):
    t = encode_text("AB")
    res = compute_plcp_hamming(t, make_config(2, 1), engine=engine)
    assert res.plcp == [1, 1]
    assert res.p == [1, 0]


def test_single_letter_text():
    res = compute_plcp_hamming(encode_text("A"), make_config(1, 0))
    assert res.plcp == [0] and res.p == [-1]


def test_long_pair_extension():
    t = encode_text("AAAAAAAA")
    cfg = make_config(8, 1, alpha=1.01, strict=False)
    idx = build_index(t)
    res = plcp0_init(idx)
    long_pairs_pass(t, idx, cfg, res)
    assert res.plcp[0] == 7


def test_long_pairs_beyond_sa_neighbours():
    # i's best partner under one substitution is not adjacent to i in SA order
    p = "DBCADBDC"
    t = encode_text(p + "ACCCC" + p + "ACDAB" + p + "BCCCC", )
    n = t.n
    cfg = make_config(n, 1, alpha=1.2, strict=False)
    assert cfg.lam <= len(p)
    ref, _ = brute_plcp_hamming(t, 1)
    for engine in ENGINES:
        assert compute_plcp_hamming(t, cfg, engine=engine).plcp == ref


def test_query_best_neighbor():
    t = encode_text("ACGTACTTGA")
    idx = build_index(t)
    gset = build_gram_set(t, idx, 4)
    m, w = query_best_neighbor(pack_codes([1, 2, 3, 3], 4, 3), 0, gset, idx, t)
    assert m == 3 and str(t)[w:w + 3] == "ACG"
    z = pack_gram(t, 0, 4)
    m, w = query_best_neighbor(z, 0, gset, idx, t, k=0)
    assert w != 0 and m == 2


def test_enumeration_generates_each_substitution_set_once():
    rng = np.random.default_rng(11)
    for _ in range(20):
        t = random_text(rng, int(rng.integers(5, 60)), int(rng.choice([2, 4])))
        cfg = make_config(t.n, 2, strict=False)
        idx = build_index(t)
        gset = build_gram_set(t, idx, cfg.lam)
        res = plcp0_init(idx)
        audit = []
        for i in range(t.n):
            enumerate_errors(t, i, cfg, gset, idx, res, audit=audit)
        keys = [(i, tuple(sorted(subs))) for i, subs in audit]
        assert len(keys) == len(set(keys))
        for i, subs in audit:
            positions = [p for p, _ in subs]
            assert positions == sorted(set(positions))


def test_exhaustive_binary_small():
    for n in range(1, 9):
        for t in binary_texts(n):
            for k in (0, 1, 2):
                ref, _ = brute_plcp_hamming(t, k)
                res = compute_plcp_hamming(t, make_config(n, k, strict=False), engine="python")
                assert res.plcp == ref, (str(t), k)
                assert hamming_witness_ok(t, res.plcp, res.p, k)


@pytest.mark.parametrize("engine", ENGINES)
def test_random_and_repetitive_texts(engine):
    rng = np.random.default_rng(21)
    for trial in range(120):
        n = int(rng.integers(1, 90))
        sigma = int(rng.choice([2, 3, 4, 20]))
        k = int(rng.integers(0, 4))
        alpha = float(rng.choice([1.1, 2.0, 4.0]))
        t = repetitive_text(rng, n, sigma) if trial % 3 == 0 else random_text(rng, n, sigma)
        ref, _ = brute_plcp_hamming(t, k)
        res = compute_plcp_hamming(t, make_config(n, k, alpha, strict=False), engine=engine)
        assert res.plcp == ref
        assert hamming_witness_ok(t, res.plcp, res.p, k)


@pytest.mark.parametrize("backend", ["yfast", "sorted"])
def test_backends_agree(backend):
    rng = np.random.default_rng(5)
    t = random_text(rng, 200, 2)
    cfg = make_config(t.n, 2, alpha=2.0)
    res = compute_plcp_hamming(t, cfg, engine="python", backend=backend)
    assert res.plcp == brute_plcp_hamming(t, 2)[0]


def test_engines_agree_on_larger_text():
    rng = np.random.default_rng(8)
    t = random_text(rng, 3000, 4)
    cfg = make_config(t.n, 2)
    a = compute_plcp_hamming(t, cfg, engine="python")
    b = compute_plcp_hamming(t, cfg, engine="numba")
    assert a.plcp == b.plcp
    assert hamming_witness_ok(t, b.plcp, b.p, 2)


def test_long_pair_count():
    idx = build_index(encode_text("ABCABCABC"))
    assert count_long_pairs(idx, 3) == 4


def test_word_layout_tables():
    t = make_text([1, 2, 3, 4] * 10, 4)
    gw = _kernels.word_grams(t.codes, 25, 3)
    assert gw.shape == (40, 2)
    for i in (0, 7, 39):
        assert tuple(int(w) for w in gw[i]) == pack_gram(t, i, 25).words


def test_unknown_engine():
    with pytest.raises(ValueError):
        compute_plcp_hamming(encode_text("ACGT"), make_config(4, 1), engine="gpu")
