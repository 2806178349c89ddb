from __future__ import annotations

import pytest

from entwined import corpus
from entwined.complexes import CochainSpace, face_maps
from entwined.linalg import QQ, SparseMatrix
from entwined.morita import (
    SizeGuardError,
    chain_guard,
    homotopy_h,
    inclusion_chain,
    morita_report,
    trace_chain,
)
from entwined.structures import StructureError, matrix_extend, matrix_index


def test_inclusion_and_trace_for_r_one(small):
    for n in range(3):
        ident = SparseMatrix.identity(QQ, CochainSpace(small, n).dim)
        assert inclusion_chain(small, 1, 1, n) == ident
        assert trace_chain(small, 1, n) == ident


def test_trace_after_inclusion(small):
    for n in range(3):
        assert trace_chain(small, 2, n) @ inclusion_chain(small, 2, 1, n) == SparseMatrix.identity(
            QQ, CochainSpace(small, n).dim)


def test_inclusion_and_trace_commute_with_faces():
    s = corpus.dual_divided_twist()
    ms = matrix_extend(s, 2)
    for n in (1, 2):
        dA, dM = face_maps(s, n), face_maps(ms, n)
        for i in range(n + 1):
            assert dM[i] @ inclusion_chain(s, 2, 1, n) == inclusion_chain(s, 2, 1, n - 1) @ dA[i]
            assert dA[i] @ trace_chain(s, 2, n) == trace_chain(s, 2, n - 1) @ dM[i]


def test_trace_kills_broken_chain():
    s = corpus.point()
    ms = matrix_extend(s, 2)
    space = CochainSpace(ms, 1)
    # E_12 (x) E_12 does not chain back to its start
    k = space.index(0, (matrix_index(1, 2, 0, 0, 1), matrix_index(1, 2, 0, 0, 1)))
    assert trace_chain(s, 2, 1).apply({k: 1}) == {}
    # E_12 (x) E_21 does
    k = space.index(0, (matrix_index(1, 2, 0, 0, 1), matrix_index(1, 2, 0, 1, 0)))
    assert trace_chain(s, 2, 1).apply({k: 1}) == {0: 1}


def test_slot_range():
    with pytest.raises(StructureError):
        inclusion_chain(corpus.point(), 2, 3, 0)
    with pytest.raises(ValueError):
        homotopy_h(corpus.point(), 2, 1, 2)


def test_point_report():
    rep = morita_report(corpus.point(), 2, 2)
    assert rep.checks.passed
    assert rep.dims["cyclic"] == {"base": [1, 0, 1], "matrix": [1, 0, 1]}
    assert rep.dims_equal


def test_dual_numbers_report():
    rep = morita_report(corpus.dual_flip(), 2, 1)
    assert rep.passed
    assert rep.dims["hochschild"]["base"] == rep.dims["hochschild"]["matrix"] == [2, 1]


@pytest.mark.parametrize("name", ["dual_divided_twist", "z2_graded", "dual_grouplike_twist"])
def test_report_on_twisted_structures(name):
    rep = morita_report(corpus.load(name), 2, 2)
    assert rep.passed, rep.to_json()


def test_sign_error_in_h1_is_detected():
    def bad_h(s, r, n, i):
        h = homotopy_h(s, r, n, i)
        return -h if i == 1 else h

    rep = morita_report(corpus.point(), 2, 2, h=bad_h)
    v = rep.checks["chain_homotopy"]
    assert not v.passed
    assert "basis_element" in v.witness
    assert not rep.passed


def test_size_guard():
    s = corpus.dual_divided_flip()
    assert chain_guard(s, 2, 3) > 8192
    with pytest.raises(SizeGuardError):
        morita_report(s, 2, 3)


def test_report_json_shape():
    out = morita_report(corpus.point(), 2, 1).to_json()
    assert set(out) == {"r", "max_degree", "passed", "dims_equal", "dims", "checks", "note"}
    assert [c["name"] for c in out["checks"]][0] == "trace_after_inclusion"
