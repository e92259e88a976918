import json

import pytest

from mtto.cli import main
from mtto.linalg import Conjugation
from mtto.serialize import conjugation_to_json, dump_json, operator_to_json, symbol_to_json
from mtto.model import ModelSpaceSpec, shift
from mtto.symbols import LaurentSymbol, sedlock_symbol


def write_symbol(tmp_path, name, s):
    path = tmp_path / f"{name}.json"
    dump_json(symbol_to_json(s), path)
    return str(path)


def test_check_product_circulant(tmp_path, capsys):
    phi = write_symbol(tmp_path, "phi", sedlock_symbol([1, 2], 1, Conjugation.identity(1)))
    gamma = tmp_path / "g.json"
    dump_json(conjugation_to_json(Conjugation.identity(1)), gamma)
    assert main(["check-product", "--phi", phi, "--psi", phi, "--gamma", str(gamma)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] is True and out["agree"] is True
    assert set(out["symbol_hashes"]) == {"phi", "psi"}


def test_check_product_negative_is_still_success(tmp_path):
    z = write_symbol(tmp_path, "z", LaurentSymbol.scalar(3, {1: 1}))
    zb = write_symbol(tmp_path, "zb", LaurentSymbol.scalar(3, {-1: 1}))
    report = tmp_path / "r.json"
    assert main(["check-product", "--phi", z, "--psi", zb, "--report", str(report), "--quiet"]) == 0
    out = json.loads(report.read_text())
    assert out["verdict"] is False and out["oracle_verdict"] is False


def test_check_product_hypothesis_failure(tmp_path, capsys):
    a = write_symbol(tmp_path, "a", LaurentSymbol(3, 2, {1: [[0, 1], [0, 0]]}))
    b = write_symbol(tmp_path, "b", LaurentSymbol(3, 2, {-1: [[1, 0], [0, 2]]}))
    assert main(["check-product", "--phi", a, "--psi", b]) == 2
    assert "symbols_commute" in capsys.readouterr().err


def test_check_difference(tmp_path):
    z = write_symbol(tmp_path, "z", LaurentSymbol.scalar(3, {1: 1}))
    zb = write_symbol(tmp_path, "zb", LaurentSymbol.scalar(3, {-1: 1}))
    args = ["check-difference", "--phi", z, "--psi", zb, "--chi", z, "--zeta", zb, "--quiet"]
    assert main(args) == 0


@pytest.mark.parametrize("content", ["not json", '{"N": 3}'])
def test_malformed_input(tmp_path, capsys, content):
    bad = tmp_path / "bad.json"
    bad.write_text(content)
    assert main(["build", "--phi", str(bad)]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["decompose", "--phi", str(tmp_path / "nope.json")]) == 1


def test_gamma_dimension_mismatch(tmp_path):
    z = write_symbol(tmp_path, "z", LaurentSymbol.scalar(3, {1: 1}))
    gamma = tmp_path / "g.json"
    dump_json(conjugation_to_json(Conjugation.identity(2)), gamma)
    assert main(["check-product", "--phi", z, "--psi", z, "--gamma", str(gamma)]) == 1


def test_decompose_build_extract(tmp_path, capsys):
    s = LaurentSymbol.scalar(3, {-2: 2, -1: 1, 1: 2, 2: 1})
    phi = write_symbol(tmp_path, "phi", s)
    assert main(["decompose", "--phi", phi]) == 0
    dec = json.loads(capsys.readouterr().out)["decomposition"]
    assert len(dec["plus"]) == 2
    op = tmp_path / "op.json"
    assert main(["build", "--phi", phi, "--report", str(op)]) == 0
    A = json.loads(op.read_text())["operator"]
    op2 = tmp_path / "op2.json"
    dump_json(A, op2)
    assert main(["extract", "--operator", str(op2)]) == 0
    sym = json.loads(capsys.readouterr().out)["symbol"]
    assert sorted(c["n"] for c in sym["coeffs"]) == [-2, -1, 1, 2]


def test_extract_non_toeplitz(tmp_path):
    S = shift(ModelSpaceSpec(3, 1))
    path = tmp_path / "op.json"
    dump_json(operator_to_json(S @ S.adjoint()), path)
    assert main(["extract", "--operator", str(path)]) == 1


def test_suite_default_run(tmp_path, capsys):
    args = ["suite", "--seed", "42", "--trials", "100", "--max-N", "6", "--max-d", "3"]
    assert main(args + ["--report", str(tmp_path / "a.json")]) == 0
    assert main(args + ["--report", str(tmp_path / "b.json")]) == 0
    a = json.loads((tmp_path / "a.json").read_text())
    b = json.loads((tmp_path / "b.json").read_text())
    assert a["failures"] == 0 and a["trials"] == 100
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b


@pytest.mark.parametrize("extra", [["--trials", "0"], ["--max-N", "1"], ["--max-d", "0"]])
def test_suite_bad_config(extra):
    assert main(["suite", "--quiet"] + extra) == 1


def test_bench(capsys):
    assert main(["bench", "--N", "16", "--d", "1", "--reps", "3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "N,d,reps,dense_ns,fast_ns,max_rel_err"
    assert len(lines) == 2
    assert float(lines[1].split(",")[-1]) <= 1e-10


def test_bench_bad_size():
    assert main(["bench", "--N", "16", "--d", "0"]) == 1
