import io
import json
import subprocess
import sys

import pytest

from tensorcert import MPoly, QQ, TensorSpace
from tensorcert.cli import (ParseError, parse_document, parse_polynomial,
                            render_decomposition_document, render_tensor_document,
                            run)
from tensorcert.randgen import RandomConfig, random_tensor


def run_cli(*args):
    out = io.StringIO()
    code = run(list(args), out=out)
    return code, out.getvalue()


# ---------------------------------------------------------------------------
# polynomial parsing


def test_parse_binary_cubic():
    space = TensorSpace((2,), (3,))
    F = parse_polynomial("x1_0^3 + 2*x1_1^3", space)
    assert F.terms == {(3, 0): QQ(1), (0, 3): QQ(2)}


def test_parse_homogeneity_error_names_monomial():
    space = TensorSpace((2,), (3,))
    with pytest.raises(ParseError, match="x1_0\\^2"):
        parse_polynomial("x1_0^2", space)


def test_parse_power_of_sum():
    space = TensorSpace((2,), (5,))
    F = parse_polynomial("(x1_0+x1_1)^5", space)
    assert len(F) == 6
    assert F.terms[(3, 2)] == QQ(10)


def test_parse_rational_coefficient_and_signs():
    space = TensorSpace((2,), (2,))
    F = parse_polynomial("-3/4*x1_0^2 + x1_0*x1_1 - x1_1^2", space)
    assert F.terms[(2, 0)] == QQ("-3/4")
    assert F.terms[(1, 1)] == QQ(1)
    assert F.terms[(0, 2)] == QQ(-1)


def test_parse_unknown_variable():
    space = TensorSpace((2,), (1,))
    with pytest.raises(ParseError, match="x2_0"):
        parse_polynomial("x2_0", space)


def test_parse_syntax_error_position():
    space = TensorSpace((2,), (1,))
    with pytest.raises(ParseError, match="position"):
        parse_polynomial("x1_0 + $", space)


def test_parse_mixed_variables():
    space = TensorSpace((2, 3), (1, 1))
    F = parse_polynomial("x1_0*x2_2 - x1_1*x2_0", space)
    assert F.terms == {(1, 0, 0, 0, 1): QQ(1), (0, 1, 1, 0, 0): QQ(-1)}


# ---------------------------------------------------------------------------
# documents


def test_tensor_document_roundtrip():
    space = TensorSpace((2, 3), (2, 1))
    T, _ = random_tensor(space, 2, RandomConfig(seed=1))
    doc = parse_document(render_tensor_document(T, seed=1))
    assert doc.payload == T
    assert doc.seed == 1


def test_decomposition_document_roundtrip():
    space = TensorSpace((2, 5, 4), (3, 2, 3))
    _, dec = random_tensor(space, 4, RandomConfig(seed=2))
    doc = parse_document(render_decomposition_document(dec))
    assert doc.payload.terms == dec.terms


def test_document_requires_header():
    with pytest.raises(ParseError):
        parse_document("tensor: x1_0")
    with pytest.raises(ParseError):
        parse_document("sizes: 2\ndegrees: 1\n")


def test_document_comments_ignored_in_header():
    doc = parse_document("# top\nsizes: 2  # binary\ndegrees: 2\ntensor: x1_0^2\n")
    assert doc.payload.terms == {(2, 0): QQ(1)}


def test_certify_h_mismatch_with_decomposition(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("sizes: 2\ndegrees: 3\ndecomposition:\n1,0\n0,1\n",
                    encoding="utf-8")
    code, _ = run_cli("certify", "--input", str(path), "--h", "3")
    assert code == 1
    code, _ = run_cli("certify", "--input", str(path), "--h", "2")
    assert code == 0


# ---------------------------------------------------------------------------
# subcommands


def test_random_then_certify_tensor(tmp_path):
    code, text = run_cli("random", "--sizes", "3", "--degrees", "5",
                         "--h", "7", "--seed", "1", "--emit", "tensor")
    assert code == 0
    path = tmp_path / "t.txt"
    path.write_text(text, encoding="utf-8")
    code, report = run_cli("certify", "--input", str(path), "--h", "7")
    assert code == 0
    assert "Theorem 3.7" in report
    assert "7-identifiability certified" in report


def test_certify_decomposition_prop33(tmp_path):
    code, text = run_cli("random", "--sizes", "3", "--degrees", "6",
                         "--h", "8", "--seed", "2", "--emit", "decomposition")
    assert code == 0
    path = tmp_path / "d.txt"
    path.write_text(text, encoding="utf-8")
    code, report = run_cli("certify", "--input", str(path))
    assert code == 0
    assert "Proposition 3.3" in report
    assert "8-identifiability certified" in report


def test_certify_inconclusive_exit_code(tmp_path):
    code, text = run_cli("random", "--sizes", "3", "--degrees", "4",
                         "--h", "5", "--seed", "3", "--emit", "tensor")
    path = tmp_path / "q.txt"
    path.write_text(text, encoding="utf-8")
    code, report = run_cli("certify", "--input", str(path), "--h", "5")
    assert code == 2
    assert "not certified" in report


def test_certify_usage_errors(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("sizes: 2\ndegrees: 3\ntensor: x1_0^3\n", encoding="utf-8")
    code, _ = run_cli("certify", "--input", str(path), "--h", "0")
    assert code == 1
    code, _ = run_cli("certify", "--input", str(tmp_path / "missing.txt"), "--h", "1")
    assert code == 1
    code, _ = run_cli("certify", "--input", str(path))   # tensor without --h
    assert code == 1
    code, _ = run_cli("nonsense")
    assert code == 1


def test_certify_json_roundtrip(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("sizes: 2\ndegrees: 3\ntensor: x1_0^3 + x1_1^3\n", encoding="utf-8")
    code, text = run_cli("certify", "--input", str(path), "--h", "2",
                         "--report", "json")
    assert code == 0
    parsed = json.loads(text)
    again = json.dumps(parsed, indent=2, sort_keys=True) + "\n"
    assert again == text
    assert parsed["criterion"] == "Thm37"
    assert parsed["verdict"] == "Certified"
    assert parsed["schema_version"] == 1


def test_certify_forced_split(tmp_path):
    code, text = run_cli("random", "--sizes", "3", "--degrees", "5",
                         "--h", "6", "--seed", "4", "--emit", "tensor")
    path = tmp_path / "t.txt"
    path.write_text(text, encoding="utf-8")
    code, report = run_cli("certify", "--input", str(path), "--h", "6",
                           "--split", "2", "--report", "json")
    assert code == 0
    assert json.loads(report)["split"]["a"] == [2]


def test_certify_prime_field(tmp_path):
    code, text = run_cli("random", "--sizes", "3", "--degrees", "5",
                         "--h", "6", "--seed", "5", "--emit", "tensor")
    path = tmp_path / "t.txt"
    path.write_text(text, encoding="utf-8")
    code, report = run_cli("certify", "--input", str(path), "--h", "6",
                           "--field", "fp:1073741789", "--report", "json")
    assert code == 0
    doc = json.loads(report)
    assert doc["field"] == {"mode": "probabilistic", "prime": 1073741789}


def test_random_determinism_and_seed_header():
    code1, text1 = run_cli("random", "--sizes", "2,5,4", "--degrees", "3,2,3",
                           "--h", "5", "--seed", "6")
    code2, text2 = run_cli("random", "--sizes", "2,5,4", "--degrees", "3,2,3",
                           "--h", "5", "--seed", "6")
    assert code1 == code2 == 0
    assert text1 == text2
    assert "seed: 6" in text1


@pytest.mark.parametrize("sizes, degrees, h, label", [
    ("3", "5", 7, "Theorem 3.7"),
    ("3", "5", 6, "Proposition 3.1"),
    ("2,5,4", "3,2,3", 5, "Proposition 3.1"),
    ("4", "4", 7, "Proposition 3.3"),
    ("3", "6", 8, "Proposition 3.3"),
    ("4", "3", 5, "Theorem 3.7"),
])
def test_pipeline_certifies_in_range_regimes(monkeypatch, sizes, degrees, h, label):
    _, doc = run_cli("random", "--sizes", sizes, "--degrees", degrees,
                     "--h", str(h), "--seed", "7", "--emit", "decomposition")
    monkeypatch.setattr(sys, "stdin", io.StringIO(doc))
    code, report = run_cli("certify", "--input", "-", "--report", "json")
    assert code == 0
    parsed = json.loads(report)
    assert parsed["verdict"] == "Certified"
    assert parsed["label"].startswith(label)


def test_bounds_subcommand():
    code, text = run_cli("bounds", "--family", "segre", "--n", "3",
                         "--factors", "4", "--h", "4")
    assert code == 0 and "h < 5" in text
    code, _ = run_cli("bounds", "--family", "segre", "--n", "3",
                      "--factors", "4", "--h", "5")
    assert code == 2
    code, text = run_cli("bounds", "--family", "unbalanced-segre",
                         "--dims", "50,3,3", "--h", "4", "--report", "json")
    assert code == 0
    assert json.loads(text) == {"bound": 5, "effective": True,
                                "family": "unbalanced-segre", "h": 4}
    code, _ = run_cli("bounds", "--family", "unbalanced-segre",
                      "--dims", "3,3,3", "--h", "1")
    assert code == 1


def test_budget_env_override(tmp_path, monkeypatch):
    code, text = run_cli("random", "--sizes", "2,3", "--degrees", "2,2",
                         "--h", "2", "--seed", "8", "--emit", "tensor")
    path = tmp_path / "m.txt"
    path.write_text(text, encoding="utf-8")
    monkeypatch.setenv("TENSORCERT_BUDGET", "1")
    code, report = run_cli("certify", "--input", str(path), "--h", "2",
                           "--report", "json")
    assert code == 1  # resource exhaustion
    assert json.loads(report)["budget_exhausted"] is True
    monkeypatch.delenv("TENSORCERT_BUDGET")
    code, _ = run_cli("certify", "--input", str(path), "--h", "2")
    assert code == 0


def test_document_declared_field(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("sizes: 2\ndegrees: 3\nfield: fp:101\ntensor: x1_0^3 + x1_1^3\n",
                    encoding="utf-8")
    code, report = run_cli("certify", "--input", str(path), "--h", "2",
                           "--report", "json")
    assert code == 0
    assert json.loads(report)["field"] == {"mode": "probabilistic", "prime": 101}


def test_field_env_override(tmp_path, monkeypatch):
    path = tmp_path / "t.txt"
    path.write_text("sizes: 2\ndegrees: 3\ntensor: x1_0^3 + x1_1^3\n", encoding="utf-8")
    monkeypatch.setenv("TENSORCERT_FIELD", "fp:101")
    code, report = run_cli("certify", "--input", str(path), "--h", "2",
                           "--report", "json")
    assert code == 0
    assert json.loads(report)["field"] == {"mode": "probabilistic", "prime": 101}


def test_trace_flag(tmp_path):
    path = tmp_path / "t.txt"
    path.write_text("sizes: 3\ndegrees: 2\ntensor: x1_0^2 + x1_1^2 + x1_2^2\n",
                    encoding="utf-8")
    code, report = run_cli("certify", "--input", str(path), "--h", "1", "--trace")
    assert "hilbert[0] = 1" in report


def test_installed_entry_point():
    proc = subprocess.run(["tensorcert", "bounds", "--family", "segre",
                           "--n", "3", "--factors", "4", "--h", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "h < 5" in proc.stdout
