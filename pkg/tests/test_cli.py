import json

import pytest

from kplcp import cli
from kplcp.result import PlcpResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def make(name, content):
        p = tmp_path / name
        p.write_text(content)
        return str(p)
    return make


def rows(out):
    return [line.split("\t") for line in out.splitlines()]


def test_plcp_tsv_uniform(capsys, files):
    code, out, _ = run(capsys, "plcp", "-k", "1", "--model", "hamming", "--tsv",
                       files("a.txt", "AAAA\n"))
    assert code == 0
    assert [r[1] for r in rows(out)] == ["3", "3", "2", "1"]


def test_plcp_json_matches_tsv(capsys, files):
    path = files("a.fa", ">s\nACGTTGCAACGT\n")
    for model in ("hamming", "edit"):
        _, tsv, _ = run(capsys, "plcp", "-k", "1", "--model", model, path)
        _, js, _ = run(capsys, "plcp", "-k", "1", "--model", model, "--json", path)
        doc = json.loads(js)
        assert doc["model"] == model and doc["k"] == 1 and "lambda" in doc
        assert [[str(v) for v in r] for r in doc["rows"]] == rows(tsv)


def test_header_flag(capsys, files):
    _, out, _ = run(capsys, "--header", "plcp", "-k", "0", files("a.txt", "ABAB"))
    assert out.splitlines()[0] == "i\tplcp\tp"
    _, out2, _ = run(capsys, "plcp", "-k", "0", "--header", files("b.txt", "ABAB"))
    assert out2 == out


def test_mappability(capsys, files):
    path = files("a.txt", "AAAA\n")
    code, out, _ = run(capsys, "mappability", "-k", "0", "--mu", "1", path)
    assert code == 0 and out == "1\t4\n"
    _, out, _ = run(capsys, "mappability", "-k", "0", "--mu", "1,2", path)
    assert out == "1\t4\n2\tNA\n"
    _, brute, _ = run(capsys, "oracle", "mappability", "-k", "0", "--mu", "1,2", path)
    assert brute == out
    code, _, _ = run(capsys, "mappability", "-k", "0", "--mu", "9", path)
    assert code == 1


def test_oracle_plcp_agrees(capsys, files):
    path = files("a.txt", "GATTACAGATTTACA")
    for model in ("hamming", "edit"):
        _, fast, _ = run(capsys, "plcp", "-k", "1", "--model", model, path)
        _, slow, _ = run(capsys, "oracle", "plcp", "-k", "1", "--model", model, path)
        assert [r[1] for r in rows(fast)] == [r[1] for r in rows(slow)]


def test_acs(capsys, files):
    x, y = files("x.fa", ">x\nACGTACGT\n"), files("y.fa", ">y\nACGTTCGA\n")
    code, out, _ = run(capsys, "acs", "-k", "1", x, y)
    assert code == 0
    table = rows(out)
    assert table[0][0] == "dist" and table[0][2] == "acs-selfnorm"
    assert table[1][0] == "lcs"
    assert sum(r[0] == "xy" for r in table) == 8 and sum(r[0] == "yx" for r in table) == 8
    _, js, _ = run(capsys, "acs", "-k", "1", "--json", x, y)
    doc = json.loads(js)
    assert doc["formula"] == "acs-selfnorm"
    assert doc["lambda_xy"] == [int(r[2]) for r in table if r[0] == "xy"]
    assert repr(doc["dist"]) == table[0][1]
    _, brute, _ = run(capsys, "oracle", "acs", "-k", "1", "--json", x, y)
    assert json.loads(brute)["lambda_xy"] == doc["lambda_xy"]
    _, self_out, _ = run(capsys, "acs", "-k", "1", x, x)
    assert float(rows(self_out)[0][1]) == 0.0


def test_overlaps(capsys, files):
    path = files("r.fa", ">a\nABC\n>b\nBCD\n")
    code, out, _ = run(capsys, "overlaps", "-k", "0", path)
    assert code == 0
    assert rows(out) == [["0", "1", "2"], ["1", "0", "0"]]
    _, brute, _ = run(capsys, "oracle", "overlaps", "-k", "0", path)
    assert brute == out


def test_verify_random(capsys):
    code, out, _ = run(capsys, "verify", "-k", "2", "-n", "100", "--trials", "50", "--seed", "7")
    assert code == 0
    assert all(r[4] == "ok" for r in rows(out))
    assert len(rows(out)) == 100


def test_verify_reports_mismatch(capsys, monkeypatch, files):
    def broken(text, cfg, **kw):
        return PlcpResult([0] * text.n, [-1] * text.n, "hamming", cfg.k)
    monkeypatch.setattr(cli, "compute_plcp_hamming", broken)
    code, out, err = run(capsys, "verify", "-k", "0", "--model", "hamming",
                         files("a.txt", "AAAA"))
    assert code == 3
    assert "MISMATCH" in out and "internal check failed" in err


def test_experiment_reproducible(capsys):
    args = ["experiment", "-k", "1", "--sizes", "64", "128", "--trials", "10", "--seed", "2"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    _, c, _ = run(capsys, "--threads", "2", *args)
    assert a == b == c
    assert len(rows(a)) == 20 and len(rows(a)[0]) == 7


def test_usage_errors(capsys, files):
    with pytest.raises(SystemExit) as exc:
        cli.main(["plcp"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 1
    code, _, _ = run(capsys, "plcp", "-k", "9", files("a.txt", "ACGTACGT"))
    assert code == 1


@pytest.mark.parametrize("content", ["", "ACXT>", ">\nACGT\n", "ACGT\n>x\n", ">a\n\n"])
def test_input_errors(capsys, files, content):
    code, _, err = run(capsys, "plcp", "-k", "0", "--format", "fasta" if ">" in content else "auto",
                       files("bad.txt", content))
    assert code == 2 and "input error" in err


def test_missing_file(capsys):
    code, _, _ = run(capsys, "plcp", "-k", "0", "/nonexistent/file.fa")
    assert code == 2


def test_plcp_needs_single_record(capsys, files):
    code, _, _ = run(capsys, "plcp", "-k", "0", files("two.fa", ">a\nAC\n>b\nGT\n"))
    assert code == 2


@pytest.mark.parametrize("content,expected", [
    (">s1\nACGT\n", [("s1", "ACGT")]),
    (">a\nAC\n>b\nGT\n", [("a", "AC"), ("b", "GT")]),
    (">a desc\nAC\nGT\n", [("a desc", "ACGT")]),
])
def test_fasta_ingestion(content, expected):
    assert cli.parse_fasta(content) == expected


def test_raw_ingestion(files):
    texts = cli.ingest([files("r.txt", "ACGT\n")])
    assert len(texts) == 1 and texts[0].n == 4
    both = cli.ingest([files("a.fa", ">a\nAC\n"), files("b.fa", ">b\nGGTT\n")])
    assert both[0].alphabet == both[1].alphabet
