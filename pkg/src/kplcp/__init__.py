"""k-error longest previous factor arrays and their applications."""
from .text import (Alphabet, Config, ConfigError, InputError, PackedGram, Text, encode_text,
                   make_config, pack_gram, xor_lcp)
from .result import EDIT, HAMMING, PlcpResult
from .index import SuffixIndex, build_index, kangaroo, lce, plcp0_init
from .predecessor import GramSet, build_gram_set, query_exact, query_pred, query_succ
from .hamming import InvariantError, compute_plcp_hamming
from .edit import compute_plcp_edit, lv_extend


def compute_plcp(text, cfg, model=HAMMING, **kw):
    if model == HAMMING:
        return compute_plcp_hamming(text, cfg, **kw)
    if model == EDIT:
        return compute_plcp_edit(text, cfg, **kw)
    raise ValueError(f"unknown model {model!r}")
