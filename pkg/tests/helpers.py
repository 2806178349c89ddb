"""Small builders shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from entwined.linalg import QQ, Solver, SparseMatrix
from entwined.structures import scalar_matrix_element


def random_invertible_rows(rng: random.Random, r: int) -> list[list[int]]:
    while True:
        rows = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(r)]
        if Solver(SparseMatrix.from_dense(QQ, rows)).rank == r:
            return rows


def inverse_rows(rows: list[list[int]]) -> list[list[Fraction]]:
    import sympy

    inv = sympy.Matrix(rows).inv()
    return [[Fraction(int(x.p), int(x.q)) for x in inv.row(i)] for i in range(len(rows))]


def random_scalar_unit(rng: random.Random, base, r: int) -> tuple[dict, dict]:
    """A random invertible scalar matrix in M_r(A) and its inverse, A the algebra of ``base``."""
    rows = random_invertible_rows(rng, r)
    return scalar_matrix_element(base, rows), scalar_matrix_element(base, inverse_rows(rows))
