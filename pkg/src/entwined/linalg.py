"""Exact fields and sparse linear algebra.

Scalars of Q are kept as ``int`` when integral and ``Fraction`` otherwise;
scalars of F_p are ints in ``range(p)``.  Matrices are column-major: each
column is a dict ``row -> nonzero scalar``.  Vectors are sparse dicts.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class ExactField:
    """Q when ``characteristic == 0``, otherwise the prime field F_p."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise FieldError(f"{self.characteristic} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def reduce(self, x):
        p = self.characteristic
        if p:
            if type(x) is not int:
                x = Fraction(x)
                return x.numerator * pow(x.denominator, -1, p) % p
            return x % p
        if type(x) is int:
            return x
        if x.denominator == 1:
            return int(x.numerator)
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p:
            return pow(x, -1, p)
        return self.reduce(Fraction(1) / x)

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def parse(self, s) -> int | Fraction:
        """Parse ``"p/q"``, ``"n"`` or an int into a reduced field element."""
        if isinstance(s, bool):
            raise FieldError(f"not a scalar: {s!r}")
        if isinstance(s, (int, Fraction)):
            return self.reduce(s)
        if not isinstance(s, str):
            raise FieldError(f"scalars must be strings or ints, got {s!r}")
        try:
            val = Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad scalar {s!r}") from exc
        if self.characteristic and val.denominator % self.characteristic == 0:
            raise FieldError(f"{s!r} has no image in F_{self.characteristic}")
        return self.reduce(val)

    def format(self, x) -> str:
        return str(x)

    def descriptor(self) -> str:
        return "Q" if self.characteristic == 0 else f"fp:{self.characteristic}"

    @classmethod
    def from_descriptor(cls, desc: str) -> ExactField:
        d = desc.strip()
        if d in ("Q", "q", "QQ"):
            return cls(0)
        if d.lower().startswith("fp:"):
            try:
                p = int(d[3:])
            except ValueError as exc:
                raise FieldError(f"bad field descriptor {desc!r}") from exc
            return cls(p)
        raise FieldError(f"bad field descriptor {desc!r}")

    def __str__(self):
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"


QQ = ExactField(0)


def GF(p: int) -> ExactField:
    return ExactField(p)


# -- parallelism -----------------------------------------------------------

_THREADS = 1


def set_threads(k: int) -> None:
    """Cap the worker count used by column-parallel kernels (output never depends on it)."""
    global _THREADS
    if k < 1:
        raise ValueError("thread count must be positive")
    _THREADS = k


def get_threads() -> int:
    return _THREADS


def parallel_columns(fn: Callable[[int], dict], n: int) -> list[dict]:
    """Evaluate ``fn(j)`` for ``j in range(n)``, returned in index order."""
    k = min(_THREADS, os.cpu_count() or 1, max(1, n // 64))
    if k <= 1:
        return [fn(j) for j in range(n)]
    chunk = (n + k - 1) // k

    def run(start):
        return [fn(j) for j in range(start, min(n, start + chunk))]

    out: list[dict] = []
    with ThreadPoolExecutor(max_workers=k) as ex:
        for part in ex.map(run, range(0, n, chunk)):
            out.extend(part)
    return out


# -- sparse vectors ----------------------------------------------------------

def vec_axpy(field: ExactField, y: dict, a, x: dict) -> dict:
    """Return ``y + a*x`` as a new sparse vector."""
    out = dict(y)
    red = field.reduce
    for k, v in x.items():
        s = red(out.get(k, 0) + a * v)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(field: ExactField, a, x: dict) -> dict:
    if a == 0:
        return {}
    red = field.reduce
    return {k: red(a * v) for k, v in x.items()}


def accumulate(field: ExactField, acc: dict, key, val) -> None:
    s = field.reduce(acc.get(key, 0) + val)
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


# -- matrices -----------------------------------------------------------------

class DimensionError(ValueError):
    pass


class SparseMatrix:
    """Exact sparse matrix stored column by column."""

    __slots__ = ("field", "nrows", "ncols", "cols")

    def __init__(self, field: ExactField, nrows: int, ncols: int, cols: Sequence[dict] | None = None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise DimensionError(f"expected {ncols} columns, got {len(cols)}")
        self.cols = list(cols)

    # construction
    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [{j: 1} for j in range(n)])

    @classmethod
    def from_dense(cls, field, rows: Sequence[Sequence]):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise DimensionError("ragged dense matrix")
            for j, x in enumerate(row):
                x = field.parse(x) if isinstance(x, str) else field.reduce(x)
                if x:
                    cols[j][i] = x
        return cls(field, nrows, ncols, cols)

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries: Iterable[tuple[int, int, object]]):
        cols = [{} for _ in range(ncols)]
        for i, j, x in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise DimensionError(f"entry ({i},{j}) out of range")
            accumulate(field, cols[j], i, x)
        return cls(field, nrows, ncols, cols)

    @classmethod
    def from_columns(cls, field, nrows, columns: Sequence[dict]):
        for c in columns:
            for i in c:
                if not 0 <= i < nrows:
                    raise DimensionError(f"row {i} out of range")
        return cls(field, nrows, len(columns), [dict(c) for c in columns])

    # views
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entries(self) -> list[tuple[int, int, object]]:
        """Nonzero entries ordered by (row, column)."""
        return sorted((i, j, v) for j, c in enumerate(self.cols) for i, v in c.items())

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def column(self, j) -> dict:
        return self.cols[j]

    def rows(self) -> list[dict]:
        rs = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                rs[i][j] = v
        return rs

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, 0)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()}, {self.field})"

    # algebra
    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    __hash__ = None

    def __add__(self, other):
        self._check_same(other)
        F = self.field
        return SparseMatrix(F, self.nrows, self.ncols,
                            [vec_axpy(F, a, 1, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other):
        self._check_same(other)
        F = self.field
        return SparseMatrix(F, self.nrows, self.ncols,
                            [vec_axpy(F, a, -1, b) for a, b in zip(self.cols, other.cols)])

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a):
        F = self.field
        return SparseMatrix(F, self.nrows, self.ncols, [vec_scale(F, a, c) for c in self.cols])

    def apply(self, v: dict) -> dict:
        """Matrix times sparse vector."""
        F = self.field
        out: dict = {}
        red = F.reduce
        for j, x in v.items():
            if j >= self.ncols or j < 0:
                raise DimensionError(f"vector index {j} out of range")
            for i, a in self.cols[j].items():
                s = red(out.get(i, 0) + a * x)
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot compose {self.shape} with {other.shape}")
        return SparseMatrix(self.field, self.nrows, other.ncols,
                            [self.apply(c) for c in other.cols])

    @property
    def T(self):
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return SparseMatrix(self.field, self.ncols, self.nrows, cols)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def select_columns(self, idx: Sequence[int]):
        return SparseMatrix(self.field, self.nrows, len(idx), [self.cols[j] for j in idx])

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise DimensionError("row mismatch in hstack")
        return SparseMatrix(self.field, self.nrows, self.ncols + other.ncols, self.cols + other.cols)

    def power(self, k: int):
        if self.nrows != self.ncols:
            raise DimensionError("power of a non-square matrix")
        out = SparseMatrix.identity(self.field, self.nrows)
        for _ in range(k):
            out = self @ out
        return out

    def first_nonzero(self):
        """Smallest (row, col) position with a nonzero entry, or None."""
        best = None
        for j, c in enumerate(self.cols):
            if c:
                i = min(c)
                if best is None or (i, j) < best:
                    best = (i, j)
        return best


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Kronecker product with row-major flattening of index pairs."""
    F = a.field
    cols = []
    for ja in range(a.ncols):
        ca = a.cols[ja]
        for jb in range(b.ncols):
            cb = b.cols[jb]
            col = {}
            for ia, x in ca.items():
                for ib, y in cb.items():
                    col[ia * b.nrows + ib] = F.reduce(x * y)
            cols.append(col)
    return SparseMatrix(F, a.nrows * b.nrows, a.ncols * b.ncols, cols)


# -- elimination --------------------------------------------------------------

class _Reducer:
    """Left-to-right column reduction keyed on each column's first nonzero row.

    Every stored pivot column is normalized to 1 at its key row; reducing a new
    column against the pivots strictly increases its first nonzero row, so the
    loop terminates and the outcome depends only on column order.
    """

    def __init__(self, field: ExactField, track: bool):
        self.field = field
        self.track = track
        self.pivots: dict[int, tuple[dict, dict]] = {}
        self.pivot_cols: list[int] = []
        self.kernel: list[dict] = []

    def reduce(self, v: dict, combo: dict | None):
        F = self.field
        pivots = self.pivots
        while v:
            r = min(v)
            piv = pivots.get(r)
            if piv is None:
                break
            f = -v[r]
            v = vec_axpy(F, v, f, piv[0])
            if combo is not None:
                combo = vec_axpy(F, combo, f, piv[1])
        return v, combo

    def add(self, j: int, col: dict) -> bool:
        F = self.field
        combo = {j: 1} if self.track else None
        v, combo = self.reduce(dict(col), combo)
        if not v:
            if self.track:
                self.kernel.append(combo)
            return False
        r = min(v)
        inv = F.inv(v[r])
        v = vec_scale(F, inv, v)
        if combo is not None:
            combo = vec_scale(F, inv, combo)
        self.pivots[r] = (v, combo)
        self.pivot_cols.append(j)
        return True


def _reduce_all(m: SparseMatrix, track: bool) -> _Reducer:
    red = _Reducer(m.field, track)
    for j, c in enumerate(m.cols):
        red.add(j, c)
    return red


def rank(m: SparseMatrix) -> int:
    """Rank over the matrix's exact field."""
    if m.ncols > m.nrows:
        m = m.T
    return len(_reduce_all(m, track=False).pivot_cols)


def kernel_basis(m: SparseMatrix) -> list[dict]:
    """Sparse vectors spanning ker(m); there are exactly ``ncols - rank`` of them."""
    return _reduce_all(m, track=True).kernel


def pivot_columns(m: SparseMatrix) -> list[int]:
    """Indices of the leftmost columns forming a basis of the column space."""
    return _reduce_all(m, track=False).pivot_cols


def column_space_basis(m: SparseMatrix) -> list[dict]:
    return [dict(m.cols[j]) for j in pivot_columns(m)]


def solve_membership(m: SparseMatrix, v: dict) -> dict | None:
    """Return some x with ``m @ x == v`` or None when v is not in the image."""
    for i in v:
        if not 0 <= i < m.nrows:
            raise DimensionError(f"vector index {i} outside {m.nrows} rows")
    return Solver(m).solve(v)


class Solver:
    """Reusable membership solver for a fixed matrix."""

    def __init__(self, m: SparseMatrix):
        self.matrix = m
        self._red = _reduce_all(m, track=True)

    @property
    def rank(self) -> int:
        return len(self._red.pivot_cols)

    def contains(self, v: dict) -> bool:
        rem, _ = self._red.reduce(dict(v), None)
        return not rem

    def solve(self, v: dict) -> dict | None:
        F = self.matrix.field
        rem, combo = self._red.reduce(dict(v), {})
        if rem:
            return None
        # v - sum(f_i pivot_i) = 0 was tracked as combo = -sum(f_i combo_i)
        return vec_scale(F, -1, combo)


def span_contains(basis: SparseMatrix, vectors: SparseMatrix) -> bool:
    """True when every column of ``vectors`` lies in the column span of ``basis``."""
    s = Solver(basis)
    return all(s.contains(c) for c in vectors.cols)


def same_span(a: SparseMatrix, b: SparseMatrix) -> bool:
    return rank(a) == rank(b) and span_contains(a, b)
