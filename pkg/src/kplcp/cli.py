"""Command-line interface.

TSV output has no header unless ``--header`` is given.  Column orders:

  plcp          i  plcp  p
  mappability   mu  m            (m is NA when no length qualifies)
  acs           record  a  b  c, one of:
                  dist  <value>  <formula id>
                  lcs   <length>  <i in x>  <j in y>
                  xy    <i>  <Lambda_xy[i]>  <witness in y>
                  yx    <j>  <Lambda_yx[j]>  <witness in x>
  overlaps      s  t  length     (0-based record indices, every ordered pair)
  experiment    n  sigma  k  trial  max_plcp  ratio  long_pairs
  verify        trial  model  n  k  status

Exit codes: 0 success, 1 usage, 2 input error, 3 internal check failed.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from . import _kernels, oracle
from .applications import (DIST_FORMULA, LambdaArrays, all_pairs_overlaps, build_mappability,
                           compute_lambda, dist_from_lambda, query_mappability)
from .edit import compute_plcp_edit
from .hamming import InvariantError, compute_plcp_hamming
from .result import EDIT, HAMMING, PlcpResult
from .text import Alphabet, ConfigError, InputError, Text, encode_text, make_config

log = logging.getLogger("kplcp")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


# --- ingestion ------------------------------------------------------------------

def parse_fasta(data: str) -> List[tuple]:
    records = []
    name, chunks = None, []
    for lineno, line in enumerate(data.splitlines(), start=1):
        line = line.strip()
        if line.startswith(">"):
            if name is not None:
                records.append((name, "".join(chunks)))
            name = line[1:].strip()
            if not name:
                raise InputError(f"malformed FASTA header at line {lineno}: empty name")
            chunks = []
        elif line:
            if name is None:
                raise InputError(f"malformed FASTA: sequence before any header at line {lineno}")
            chunks.append(line)
    if name is not None:
        records.append((name, "".join(chunks)))
    if not records:
        raise InputError("empty input")
    for rec_name, seq in records:
        if not seq:
            raise InputError(f"record {rec_name!r} has an empty sequence")
    return records


def read_records(path: Optional[str], fmt: str = "auto") -> List[tuple]:
    if path is None or path == "-":
        data = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                data = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if fmt == "auto":
        fmt = "fasta" if data.lstrip().startswith(">") else "raw"
    if fmt == "fasta":
        return parse_fasta(data)
    if data.endswith("\r\n"):
        data = data[:-2]
    elif data.endswith("\n"):
        data = data[:-1]
    if not data:
        raise InputError("empty input")
    return [(path or "stdin", data)]


def ingest(paths, fmt="auto", alphabet: Optional[Alphabet] = None) -> List[Text]:
    """Texts from one or more files, all encoded over one shared alphabet."""
    records = [r for p in paths for r in read_records(p, fmt)]
    if alphabet is None:
        alphabet = Alphabet.infer("".join(seq for _, seq in records))
    return [encode_text(seq, alphabet, name) for name, seq in records]


def single(texts: List[Text], what: str) -> Text:
    if len(texts) != 1:
        raise InputError(f"{what} expects exactly one record, got {len(texts)}")
    return texts[0]


# --- output ---------------------------------------------------------------------

def emit(args, columns, rows, meta):
    out = sys.stdout
    if args.json:
        json.dump({**meta, "columns": list(columns), "rows": [list(r) for r in rows]}, out)
        out.write("\n")
        return
    if args.header:
        out.write("\t".join(columns) + "\n")
    for r in rows:
        out.write("\t".join("NA" if v is None else str(v) for v in r) + "\n")


def config_for(args, n):
    return make_config(n, args.k, args.alpha, strict=not args.no_strict)


def plcp_of(text: Text, args) -> PlcpResult:
    cfg = config_for(args, text.n)
    if args.model == HAMMING:
        return compute_plcp_hamming(text, cfg, engine=args.engine)
    return compute_plcp_edit(text, cfg)


def brute_result(text: Text, k: int, model: str) -> PlcpResult:
    fn = oracle.brute_plcp_hamming if model == HAMMING else oracle.brute_plcp_edit
    vals, wit = fn(text, k)
    return PlcpResult(vals, wit, model, k)


def _meta(args, command, **extra):
    meta = {"command": command, "k": args.k, "alpha": args.alpha, "model": args.model}
    meta.update(extra)
    return meta


# --- commands -------------------------------------------------------------------

def cmd_plcp(args, brute=False):
    text = single(ingest([args.input], args.format), "plcp")
    cfg = config_for(args, text.n)
    res = brute_result(text, args.k, args.model) if brute else plcp_of(text, args)
    rows = [(i, v, p) for i, (v, p) in enumerate(zip(res.plcp, res.p))]
    emit(args, ("i", "plcp", "p"), rows, _meta(args, "plcp", **{"lambda": cfg.lam, "oracle": brute}))


def cmd_mappability(args, brute=False):
    text = single(ingest([args.input], args.format), "mappability")
    cfg = config_for(args, text.n)
    res = brute_result(text, args.k, args.model) if brute else plcp_of(text, args)
    if brute:
        counts = oracle.brute_mappability_counts(res.plcp)
        answer = {}
        for mu in args.mu:
            answer[mu] = next((m for m in range(1, text.n + 1) if counts[m] >= mu), None)
    midx = build_mappability(res, text.n)
    rows = []
    for mu in args.mu:
        if not 1 <= mu <= text.n:
            raise UsageError(f"--mu must lie in [1, {text.n}], got {mu}")
        rows.append((mu, answer[mu] if brute else query_mappability(midx, mu)))
    emit(args, ("mu", "m"), rows, _meta(args, "mappability", **{"lambda": cfg.lam, "oracle": brute}))


def cmd_acs(args, brute=False):
    texts = ingest([args.x, args.y], args.format)
    if len(texts) != 2:
        raise InputError(f"acs expects one record per file, got {len(texts)} records")
    x, y = texts
    cfg = config_for(args, x.n + y.n)
    if brute:
        xy = oracle.brute_lambda(x, y, args.k, args.model)
        yx = oracle.brute_lambda(y, x, args.k, args.model)
        arrays = LambdaArrays(xy, yx, args.k, args.model, [-1] * x.n, [-1] * y.n)
    else:
        arrays = compute_lambda(x, y, cfg, args.model, engine=args.engine)
    dist = dist_from_lambda(arrays)
    length, i, j = arrays.lcs_k()
    rows = [("dist", repr(dist), DIST_FORMULA, ""), ("lcs", length, i, j)]
    rows += [("xy", a, v, w) for a, (v, w) in enumerate(zip(arrays.lambda_xy, arrays.witness_xy))]
    rows += [("yx", a, v, w) for a, (v, w) in enumerate(zip(arrays.lambda_yx, arrays.witness_yx))]
    if args.json:
        meta = _meta(args, "acs", formula=DIST_FORMULA, oracle=brute)
        json.dump({**meta, "dist": dist, "lcs": {"length": length, "i": i, "j": j},
                   "lambda_xy": arrays.lambda_xy, "lambda_yx": arrays.lambda_yx,
                   "witness_xy": arrays.witness_xy, "witness_yx": arrays.witness_yx}, sys.stdout)
        sys.stdout.write("\n")
        return
    emit(args, ("record", "a", "b", "c"), rows, {})


def cmd_overlaps(args, brute=False):
    texts = ingest([args.input], args.format)
    if len(texts) < 2:
        raise InputError("overlaps need at least two records")
    if brute:
        table = oracle.brute_overlaps(texts, args.k, args.model)
        rows = [(s, t, table[s, t]) for s in range(len(texts)) for t in range(len(texts)) if s != t]
    else:
        cfg = config_for(args, sum(t.n for t in texts))
        rows = list(all_pairs_overlaps(texts, cfg, args.model).pairs())
    names = [t.name for t in texts]
    emit(args, ("s", "t", "length"), rows, _meta(args, "overlaps", names=names, oracle=brute))


def _witness_ok(text: Text, res: PlcpResult, k: int) -> bool:
    c = text.codes.tolist()
    n = len(c)
    for i, (v, p) in enumerate(zip(res.plcp, res.p)):
        if p < 0:
            if v != 0:
                return False
            continue
        if res.model == HAMMING:
            if p == i or sum(c[i + q] != c[p + q] for q in range(v)) > k:
                return False
        elif abs(p - i) <= k or oracle.full_edit_prefix(c[i:i + v], c[p:], k) < v:
            return False
    return True


def cmd_verify(args):
    models = [HAMMING, EDIT] if args.model == "all" else [args.model]
    if args.inputs:
        texts = ingest(args.inputs, args.format)
    else:
        if args.n < 1:
            raise UsageError("-n must be positive")
        if not 2 <= args.sigma <= 52:
            raise UsageError("--sigma must lie in [2, 52]")
        rngs = oracle.rng_streams(args.seed, args.trials)
        texts = [oracle.random_text(r, args.n, args.sigma) for r in rngs]
    rows, failures = [], 0
    for trial, text in enumerate(texts):
        cfg = config_for(args, text.n)
        for model in models:
            if model == HAMMING:
                fast = compute_plcp_hamming(text, cfg, engine=args.engine)
            else:
                fast = compute_plcp_edit(text, cfg)
            ref = brute_result(text, args.k, model)
            ok = fast.plcp == ref.plcp and _witness_ok(text, fast, args.k)
            failures += not ok
            rows.append((trial, model, text.n, args.k, "ok" if ok else "MISMATCH"))
            if not ok:
                log.error("mismatch on trial %d (%s): %s", trial, model, text)
    emit(args, ("trial", "model", "n", "k", "status"), rows, _meta(args, "verify", failures=failures))
    if failures:
        raise InvariantError(f"{failures} fast-vs-oracle mismatches")


def cmd_experiment(args):
    rows = oracle.experiment_expected_length(args.sigma, args.k, args.sizes, args.trials, args.seed,
                                             args.alpha, args.engine, args.threads)
    emit(args, oracle.TrialRow.COLUMNS, [r.tsv().split("\t") for r in rows],
         {"command": "experiment", "sigma": args.sigma, "k": args.k, "alpha": args.alpha,
          "seed": args.seed, "summary": oracle.summarize(rows)})
    for s in oracle.summarize(rows):
        log.info("n=%d mean max plcp %.3f, mean ratio %.3f, mean long pairs %.2f",
                 s["n"], s["mean_max_plcp"], s["mean_ratio"], s["mean_long_pairs"])


# --- parser ---------------------------------------------------------------------

def _int_list(value: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {value!r}")


def _globals(p, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=default(0), help="seed for random texts")
    p.add_argument("--threads", type=int, default=default(1),
                   help="worker processes for experiment trials; 1 runs sequentially")
    p.add_argument("--header", action="store_true", default=default(False),
                   help="print a TSV header line")
    p.add_argument("-v", "--verbose", action="count", default=default(0))


def _common(p, with_model=True):
    _globals(p, suppress=True)
    p.add_argument("-k", type=int, required=True, help="error budget")
    p.add_argument("--alpha", type=float, default=4.0, help="gram length factor (default 4.0)")
    if with_model:
        p.add_argument("--model", choices=[HAMMING, EDIT], default=HAMMING)
    p.add_argument("--format", choices=["auto", "fasta", "raw"], default="auto")
    p.add_argument("--engine", choices=list(_kernels.ENGINES), default="auto",
                   help="Hamming search engine")
    p.add_argument("--no-strict", action="store_true",
                   help="allow k above log n / log log n")
    out = p.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="JSON with metadata")
    out.add_argument("--tsv", action="store_true", help="TSV rows (default)")


def _add_query_commands(sub):
    p = sub.add_parser("plcp", help="PLCP_k and P_k of one text")
    p.add_argument("input", nargs="?", default="-")
    _common(p)
    p.set_defaults(func=cmd_plcp)

    p = sub.add_parser("mappability", help="least length m with at least mu unique substrings")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--mu", type=_int_list, action="extend", required=True,
                   help="thresholds, comma separated or repeated")
    _common(p)
    p.set_defaults(func=cmd_mappability)

    p = sub.add_parser("acs", help="Lambda arrays, Dist_k and the longest k-error common substring")
    p.add_argument("x")
    p.add_argument("y")
    _common(p)
    p.set_defaults(func=cmd_acs)

    p = sub.add_parser("overlaps", help="all-pairs suffix/prefix overlaps of the records")
    p.add_argument("input", nargs="?", default="-")
    _common(p)
    p.set_defaults(func=cmd_overlaps)


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="kplcp", description="Longest prefixes with k errors and applications.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True
    _add_query_commands(sub)

    p = sub.add_parser("oracle", help="run the brute-force version of a command")
    osub = p.add_subparsers(dest="oracle_command", parser_class=Parser)
    osub.required = True
    _add_query_commands(osub)
    p.set_defaults(brute=True)

    p = sub.add_parser("verify", help="compare fast paths with the oracles")
    p.add_argument("inputs", nargs="*")
    p.add_argument("-n", type=int, default=100, help="random text length")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--sigma", type=int, default=4)
    _common(p, with_model=False)
    p.add_argument("--model", choices=[HAMMING, EDIT, "all"], default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="expected maximal k-error prefix on random texts")
    p.add_argument("--sigma", type=int, default=4)
    p.add_argument("--sizes", type=int, nargs="+", default=[1 << 10, 1 << 12, 1 << 14])
    p.add_argument("--trials", type=int, default=50)
    _common(p, with_model=False)
    p.set_defaults(func=cmd_experiment, model=HAMMING)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        if getattr(args, "brute", False):
            args.func(args, brute=True)
        else:
            args.func(args)
    except (UsageError, ConfigError) as exc:
        sys.stderr.write(f"kplcp: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        sys.stderr.write(f"kplcp: input error: {exc}\n")
        return EXIT_INPUT
    except InvariantError as exc:
        sys.stderr.write(f"kplcp: internal check failed: {exc}\n")
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
