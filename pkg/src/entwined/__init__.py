"""Hochschild and cyclic cohomology of finite-dimensional entwining structures over exact fields."""

from __future__ import annotations

from .complexes import Cochain, CochainSpace, cocyclic_check, cohomology, cohomology_dims
from .linalg import GF, QQ, ExactField, SparseMatrix
from .structures import (
    EntwiningStructure,
    FiniteAlgebra,
    FiniteCoalgebra,
    matrix_extend,
    tensor_product,
    validate,
)

__all__ = [
    "Cochain", "CochainSpace", "EntwiningStructure", "ExactField", "FiniteAlgebra",
    "FiniteCoalgebra", "GF", "QQ", "SparseMatrix", "cocyclic_check", "cohomology",
    "cohomology_dims", "matrix_extend", "tensor_product", "validate",
]
