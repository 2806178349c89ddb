from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from entwined.linalg import (
    GF,
    QQ,
    DimensionError,
    ExactField,
    FieldError,
    Solver,
    SparseMatrix,
    get_threads,
    kernel_basis,
    kron,
    rank,
    same_span,
    set_threads,
    solve_membership,
    span_contains,
)

FIELDS = [QQ, GF(2), GF(7), GF(10007)]


def dense(draw, F, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))
    return SparseMatrix.from_dense(F, rows)


@st.composite
def matrices(draw):
    F = draw(st.sampled_from(FIELDS))
    return dense(draw, F)


@st.composite
def composable(draw):
    F = draw(st.sampled_from(FIELDS))
    a = dense(draw, F)
    k = draw(st.integers(1, 5))
    rows = draw(st.lists(st.lists(st.integers(-3, 3), min_size=k, max_size=k),
                         min_size=a.ncols, max_size=a.ncols))
    return a, SparseMatrix.from_dense(F, rows)


# -- fields -----------------------------------------------------------------------------

def test_rational_arithmetic_is_exact():
    assert QQ.reduce(Fraction(1, 3) + Fraction(2, 3)) == 1
    assert QQ.inv(Fraction(-2, 5)) == Fraction(-5, 2)
    assert QQ.parse("-1/2") == Fraction(-1, 2)
    assert QQ.format(Fraction(3, 4)) == "3/4"


def test_prime_field_reduces_and_inverts():
    F = GF(7)
    assert F.reduce(-1) == 6
    assert F.reduce(Fraction(1, 3)) == 5
    assert F.reduce(F.inv(3) * 3) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_non_prime_characteristic_rejected():
    with pytest.raises(FieldError):
        ExactField(4)
    with pytest.raises(FieldError):
        ExactField.from_descriptor("fp:9")


def test_descriptor_round_trip():
    for F in FIELDS:
        assert ExactField.from_descriptor(F.descriptor()) == F
    assert ExactField.from_descriptor("q") == QQ


# -- rank ------------------------------------------------------------------------------

def test_rank_of_zero_matrix():
    assert rank(SparseMatrix.zeros(QQ, 3, 3)) == 0


def test_rank_of_identity():
    assert rank(SparseMatrix.identity(QQ, 4)) == 4


def test_rank_of_equal_rows_over_f2():
    assert rank(SparseMatrix.from_dense(GF(2), [[1, 1], [1, 1]])) == 1


def test_rank_depends_on_characteristic():
    m = [[1, 1], [1, -1]]
    assert rank(SparseMatrix.from_dense(QQ, m)) == 2
    assert rank(SparseMatrix.from_dense(GF(2), m)) == 1


# -- kernels ------------------------------------------------------------------------------

def test_kernel_of_identity_is_empty():
    assert kernel_basis(SparseMatrix.identity(QQ, 5)) == []


def test_kernel_of_zero_row():
    ker = kernel_basis(SparseMatrix.zeros(QQ, 1, 3))
    assert len(ker) == 3
    assert rank(SparseMatrix(QQ, 3, 3, ker)) == 3


def test_kernel_of_single_row_is_proportional_to_two_minus_one():
    (v,) = kernel_basis(SparseMatrix.from_dense(QQ, [[1, 2]]))
    assert v.get(0, 0) * -1 == 2 * v.get(1, 0)
    assert v


# -- membership ---------------------------------------------------------------------------

def test_solve_identity():
    v = {0: Fraction(3, 2), 2: -1}
    assert solve_membership(SparseMatrix.identity(QQ, 3), v) == v


def test_solve_zero_matrix_rejects_nonzero():
    assert solve_membership(SparseMatrix.zeros(QQ, 2, 2), {1: 1}) is None


def test_solve_proportional_column():
    m = SparseMatrix.from_dense(QQ, [[1], [2]])
    assert solve_membership(m, {0: 3, 1: 6}) == {0: 3}
    assert solve_membership(m, {0: 3, 1: 5}) is None


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve_membership(SparseMatrix.identity(QQ, 2), {5: 1})


def test_matrix_shape_errors():
    a = SparseMatrix.identity(QQ, 2)
    b = SparseMatrix.identity(QQ, 3)
    with pytest.raises(DimensionError):
        a @ b
    with pytest.raises(DimensionError):
        a + b


# -- properties ---------------------------------------------------------------------------

@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert m.apply(v) == {}


@given(matrices(), st.lists(st.integers(-2, 2), min_size=5, max_size=5))
def test_solutions_are_exact(m, coeffs):
    F = m.field
    x = {j: F.reduce(coeffs[j]) for j in range(m.ncols) if F.reduce(coeffs[j])}
    v = m.apply(x)
    sol = solve_membership(m, v)
    assert sol is not None
    assert m.apply(sol) == v


@given(composable())
def test_rank_of_product_bounded(pair):
    a, b = pair
    assert rank(a @ b) <= min(rank(a), rank(b))


@given(matrices())
def test_transpose_preserves_rank(m):
    assert rank(m.T) == rank(m)
    assert m.T.T == m


@given(matrices())
def test_entries_are_canonical(m):
    entries = m.entries()
    assert entries == sorted(entries, key=lambda e: (e[0], e[1]))
    assert all(v != 0 for _, _, v in entries)
    assert SparseMatrix.from_entries(m.field, m.nrows, m.ncols, entries) == m


@given(matrices())
def test_column_space_spans(m):
    s = Solver(m)
    assert s.rank == rank(m)
    assert same_span(m, m.scale(2) if m.field.characteristic != 2 else m)
    assert span_contains(m, m.select_columns(range(min(2, m.ncols))))


def test_kron_shape_and_values():
    a = SparseMatrix.from_dense(QQ, [[1, 2], [0, 1]])
    b = SparseMatrix.from_dense(QQ, [[0, 1], [1, 0]])
    k = kron(a, b)
    assert k.shape == (4, 4)
    assert k.to_dense() == [[0, 1, 0, 2], [1, 0, 2, 0], [0, 0, 0, 1], [0, 0, 1, 0]]


def test_thread_setting_does_not_change_results():
    m = SparseMatrix.from_dense(QQ, [[i * j % 5 - 2 for j in range(9)] for i in range(7)])
    before = get_threads()
    try:
        set_threads(1)
        k1 = kernel_basis(m)
        set_threads(8)
        k8 = kernel_basis(m)
    finally:
        set_threads(before)
    assert k1 == k8
