"""Catalogue of small entwining structures used by the tests and shipped as JSON."""

from __future__ import annotations

import random
from pathlib import Path
from typing import Callable

from .linalg import QQ, ExactField, Solver, SparseMatrix
from .structures import (
    EntwiningMap,
    EntwiningStructure,
    FiniteAlgebra,
    FiniteCoalgebra,
    change_basis,
    flip_structure,
    ground_algebra,
    ground_coalgebra,
    grouplike_coalgebra,
    matrix_extend,
)


def dual_numbers(F: ExactField) -> FiniteAlgebra:
    """k[x]/(x^2) with basis (1, x)."""
    return FiniteAlgebra(F, 2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, {0: 1})


def cyclic_group_algebra(F: ExactField) -> FiniteAlgebra:
    """k[x]/(x^2 - 1) with basis (1, x)."""
    return FiniteAlgebra(F, 2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}}, {0: 1})


def diagonal_algebra(F: ExactField, n: int = 2) -> FiniteAlgebra:
    """k^n with orthogonal idempotents."""
    return FiniteAlgebra(F, n, {(i, i): {i: 1} for i in range(n)}, {i: 1 for i in range(n)})


def divided_power_coalgebra(F: ExactField) -> FiniteCoalgebra:
    """c0 grouplike, Delta(c1) = c0 (x) c1 + c1 (x) c0."""
    return FiniteCoalgebra(F, 2, {0: {(0, 0): 1}, 1: {(0, 1): 1, (1, 0): 1}}, {0: 1})


def matrix_coalgebra(F: ExactField, n: int = 2) -> FiniteCoalgebra:
    """Delta(e_ij) = sum_k e_ik (x) e_kj, basis index i*n + j."""
    comul = {i * n + j: {(i * n + k, k * n + j): 1 for k in range(n)} for i in range(n) for j in range(n)}
    return FiniteCoalgebra(F, n * n, comul, {i * n + i: 1 for i in range(n)})


def point(F: ExactField = QQ) -> EntwiningStructure:
    return flip_structure(ground_algebra(F), ground_coalgebra(F), "point")


def dual_flip(F: ExactField = QQ) -> EntwiningStructure:
    return flip_structure(dual_numbers(F), ground_coalgebra(F), "dual_flip")


def grouplike_flip(F: ExactField = QQ) -> EntwiningStructure:
    return flip_structure(ground_algebra(F), grouplike_coalgebra(F, 2), "grouplike_flip")


def _graded_swap(A: FiniteAlgebra, name: str) -> EntwiningStructure:
    # A graded by Z/2 with x odd; psi(g_i (x) a) = a (x) g_{i + deg a}
    F = A.field
    psi = {}
    for i in range(2):
        psi[(i, 0)] = {(0, i): 1}
        psi[(i, 1)] = {(1, 1 - i): 1}
    return EntwiningStructure(F, A, grouplike_coalgebra(F, 2), EntwiningMap(psi), name)


def dual_graded(F: ExactField = QQ) -> EntwiningStructure:
    return _graded_swap(dual_numbers(F), "dual_graded")


def z2_graded(F: ExactField = QQ) -> EntwiningStructure:
    return _graded_swap(cyclic_group_algebra(F), "z2_graded")


def dual_divided_flip(F: ExactField = QQ) -> EntwiningStructure:
    return flip_structure(dual_numbers(F), divided_power_coalgebra(F), "dual_divided_flip")


def _unit_fixing(A: FiniteAlgebra, C: FiniteCoalgebra, on_x: dict, name: str) -> EntwiningStructure:
    # psi(c (x) 1) = 1 (x) c and psi(c (x) x) given by on_x[c]
    psi = {}
    for c in range(C.dim):
        psi[(c, 0)] = {(0, c): 1}
        psi[(c, 1)] = on_x[c]
    return EntwiningStructure(A.field, A, C, EntwiningMap(psi), name)


def dual_divided_twist(F: ExactField = QQ) -> EntwiningStructure:
    """psi(c0 (x) x) = x (x) c0 - 1 (x) c1, psi(c1 (x) x) = -x (x) c1."""
    return _unit_fixing(dual_numbers(F), divided_power_coalgebra(F),
                        {0: {(1, 0): 1, (0, 1): -1}, 1: {(1, 1): -1}}, "dual_divided_twist")


def z2_divided_twist(F: ExactField = QQ) -> EntwiningStructure:
    """psi(c0 (x) x) = x (x) c0, psi(c1 (x) x) = 1 (x) c1."""
    return _unit_fixing(cyclic_group_algebra(F), divided_power_coalgebra(F),
                        {0: {(1, 0): 1}, 1: {(0, 1): 1}}, "z2_divided_twist")


def dual_grouplike_twist(F: ExactField = QQ) -> EntwiningStructure:
    """psi(g_i (x) x) = x (x) g_{1-i} + 1 (x) g_1 - 1 (x) g_0."""
    on_x = {i: {(1, 1 - i): 1, (0, 1): 1, (0, 0): -1} for i in range(2)}
    return _unit_fixing(dual_numbers(F), grouplike_coalgebra(F, 2), on_x, "dual_grouplike_twist")


def matrix2_flip(F: ExactField = QQ) -> EntwiningStructure:
    s = matrix_extend(point(F), 2)
    return EntwiningStructure(F, s.algebra, s.coalgebra, s.entwining, "matrix2_flip")


def matrix_coalgebra_flip(F: ExactField = QQ) -> EntwiningStructure:
    return flip_structure(ground_algebra(F), matrix_coalgebra(F, 2), "matrix_coalgebra_flip")


CATALOGUE: dict[str, Callable[[ExactField], EntwiningStructure]] = {
    "point": point,
    "dual_flip": dual_flip,
    "grouplike_flip": grouplike_flip,
    "dual_graded": dual_graded,
    "z2_graded": z2_graded,
    "dual_divided_flip": dual_divided_flip,
    "dual_divided_twist": dual_divided_twist,
    "z2_divided_twist": z2_divided_twist,
    "dual_grouplike_twist": dual_grouplike_twist,
    "matrix2_flip": matrix2_flip,
    "matrix_coalgebra_flip": matrix_coalgebra_flip,
}

SMALL = [name for name in CATALOGUE if name not in ("matrix2_flip", "matrix_coalgebra_flip")]


def load(name: str, F: ExactField = QQ) -> EntwiningStructure:
    return CATALOGUE[name](F)


DATA_DIR = Path(__file__).with_name("data")


def data_path(name: str) -> Path:
    """Path of the shipped JSON file for a catalogue entry."""
    if name not in CATALOGUE:
        raise KeyError(name)
    return DATA_DIR / f"{name}.json"


def small_structures(F: ExactField = QQ) -> list[EntwiningStructure]:
    """Corpus entries with dim A <= 2 and dim C <= 2."""
    return [CATALOGUE[name](F) for name in SMALL]


def _random_invertible(F: ExactField, n: int, rng: random.Random) -> SparseMatrix:
    while True:
        m = SparseMatrix.from_dense(F, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if Solver(m).rank == n:
            return m


def random_structure(rng: random.Random, F: ExactField = QQ, unit_first: bool = False) -> EntwiningStructure:
    """A catalogue entry (dims <= 2) in randomly chosen new bases.

    With ``unit_first`` the algebra basis change fixes e_0 = 1_A, which keeps the
    unit a basis vector.
    """
    name = rng.choice(SMALL)
    s = CATALOGUE[name](F)
    pa = _random_invertible(F, s.dim_a, rng)
    if unit_first:
        cols = [dict(s.algebra.one)] + [pa.cols[j] for j in range(1, s.dim_a)]
        pa = SparseMatrix(F, s.dim_a, s.dim_a, cols)
        if Solver(pa).rank != s.dim_a:
            pa = SparseMatrix.identity(F, s.dim_a)
    pc = _random_invertible(F, s.dim_c, rng)
    t = change_basis(s, pa, pc)
    return EntwiningStructure(F, t.algebra, t.coalgebra, t.entwining, f"{name}~")
