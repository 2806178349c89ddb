from __future__ import annotations

import json
import subprocess
import sys

import pytest

from entwined import corpus
from entwined.cli import main
from entwined.complexes import (
    Cochain,
    CochainSpace,
    cohomology,
    cohomology_dims,
    cyclic_basis,
    hochschild_delta,
)
from entwined.linalg import GF
from entwined.formats import save_cochain, structure_to_json


def data(name):
    return str(corpus.data_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cocycle_files(tmp_path):
    def make(name, n, k=0):
        s = corpus.load(name)
        z = cohomology(s, "cyclic", n).cocycle_basis[k]
        p = tmp_path / f"{name}_{n}_{k}.json"
        save_cochain(Cochain(CochainSpace(s, n), z), p)
        return str(p)

    return make


def test_validate_flip(capsys):
    code, out, _ = run(capsys, "validate", data("dual_flip"))
    assert code == 0
    assert "PASS associativity" in out


def test_validate_non_associative(capsys, tmp_path):
    d = structure_to_json(corpus.point())
    d["algebra"] = {"dim": 2, "unital": False, "mul": [[0, 0, 1, "1"], [0, 1, 0, "1"]]}
    d["psi"] = [[0, 0, 0, 0, "1"], [0, 1, 1, 0, "1"]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d), encoding="utf-8")
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1
    assert "FAIL associativity" in out
    assert "witness=" in out


def test_validate_non_prime_field(capsys, tmp_path):
    d = structure_to_json(corpus.point())
    d["field"] = "fp:6"
    p = tmp_path / "p6.json"
    p.write_text(json.dumps(d), encoding="utf-8")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2
    assert "$.field" in err


def test_malformed_json_position(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"field": "Q",\n "algebra": }', encoding="utf-8")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2
    assert ":2:" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["cohomology"])
    assert e.value.code == 2


def test_cohomology_tables(capsys):
    code, out, _ = run(capsys, "cohomology", data("point"), "--theory", "cyclic", "--max-degree", "4")
    assert code == 0
    assert "dims [1, 0, 1, 0, 1]" in out
    code, out, _ = run(capsys, "cohomology", data("point"), "--theory", "hochschild", "--max-degree", "4")
    assert "dims [1, 0, 0, 0, 0]" in out


def test_cohomology_json(capsys):
    code, out, _ = run(capsys, "--output", "json", "cohomology", data("dual_flip"), "--theory", "cyclic",
                       "--max-degree", "2")
    assert code == 0
    report = json.loads(out)
    assert report["dims"] == [2, 0, 2]
    deg2 = report["degrees"][2]
    assert len(deg2["cocycle_basis"]) == 3 and len(deg2["coboundary_basis"]) == 1
    assert all(isinstance(x[-1], str) for v in deg2["cocycle_basis"] for x in v)


def test_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, "cohomology", data("point"), "--max-degree", "1", "--output", "json")
    assert code == 0
    assert json.loads(out)["dims"] == [1, 0]


def test_field_override(capsys):
    code, out, _ = run(capsys, "--output", "json", "cohomology", data("dual_flip"), "--field", "fp:2",
                       "--max-degree", "2", "--theory", "cyclic")
    assert code == 0
    report = json.loads(out)
    assert report["field"] == "fp:2"
    assert report["dims"] == cohomology_dims(corpus.dual_flip(GF(2)), "cyclic", 2)
    assert report["dims"] != cohomology_dims(corpus.dual_flip(), "cyclic", 2)


def test_dimension_guard(capsys):
    code, _, err = run(capsys, "cohomology", data("dual_flip"), "--max-dim-guard", "10")
    assert code == 2
    assert "guard" in err


def test_cocyclic_check(capsys):
    code, out, _ = run(capsys, "cocyclic-check", data("dual_grouplike_twist"), "--max-degree", "2")
    assert code == 0
    assert out.count("PASS") == 8


def test_morita(capsys):
    code, out, _ = run(capsys, "morita", data("point"), "--r", "2", "--max-degree", "2")
    assert code == 0
    assert "all identities PASS; dims equal" in out


def test_morita_guard(capsys):
    code, _, err = run(capsys, "morita", data("dual_divided_flip"), "--max-degree", "3")
    assert code == 2
    assert "--max-dim-guard" in err


def test_trace_check(capsys, cocycle_files, tmp_path):
    code, out, _ = run(capsys, "trace-check", data("point"), cocycle_files("point", 2))
    assert code == 0
    assert "PASS character_round_trip" in out
    s = corpus.dual_flip()
    col = next(c for c in cyclic_basis(s, 1).cols if hochschild_delta(s, 1).apply(c))
    p = tmp_path / "open.json"
    save_cochain(Cochain(CochainSpace(s, 1), col), p)
    code, out, _ = run(capsys, "trace-check", data("dual_flip"), str(p))
    assert code == 1
    assert "FAIL cocycle" in out and "witness=" in out
    assert "FAIL trace_graded_trace" in out


def test_pair_degree_zero(capsys, cocycle_files):
    code, out, _ = run(capsys, "--output", "json", "pair", data("dual_flip"), cocycle_files("dual_flip", 0),
                       data("grouplike_flip"), cocycle_files("grouplike_flip", 0, 1))
    assert code == 0
    report = json.loads(out)
    assert report["passed"]
    assert [c["name"] for c in report["checks"]] == ["output_cyclic", "output_cocycle", "degree_zero_factorization"]
    assert len(report["inputs"]["left"]) == 64
    assert report["output"]["degree"] == 0


def test_pair_rejects_non_cocycle(capsys, tmp_path, cocycle_files):
    p = tmp_path / "bad.json"
    save_cochain(Cochain(CochainSpace(corpus.point(), 1), {0: 1}), p)
    code, out, _ = run(capsys, "pair", data("point"), str(p), data("point"), cocycle_files("point", 0))
    assert code == 1
    assert "not cyclic" in out


def test_conjugation_check(capsys):
    code, out, _ = run(capsys, "conjugation-check", data("matrix2_flip"), "--unit", "1,1,0,1",
                       "--inverse", "1,-1,0,1", "--max-degree", "2")
    assert code == 0
    assert "PASS pullback_fixes_classes" in out


def test_conjugation_check_rejects_non_invariant_unit(capsys):
    code, out, _ = run(capsys, "conjugation-check", data("dual_divided_twist"), "--unit", "1,1", "--inverse", "1,-1")
    assert code == 1
    assert "FAIL psi_invariant" in out


def test_thread_count_does_not_change_output(capsys):
    outs = []
    for threads in ("1", "8"):
        code, out, _ = run(capsys, "--output", "json", "--threads", threads, "cohomology", data("dual_divided_twist"),
                           "--theory", "invariant", "--max-degree", "3")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "entwined", "validate", data("point")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "PASS entwining_counit" in proc.stdout
