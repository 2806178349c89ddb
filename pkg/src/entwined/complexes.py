"""Hochschild cochains of an entwining structure, the invariant and cyclic subcomplexes,
and the cocyclic operators.

Cochains of degree n are functionals on C (x) A^(n+1).  Basis tuples
``(c; a_1, ..., a_{n+1})`` are enumerated lexicographically, so the index of a
tuple is its mixed-radix value with radices (dimC, dimA, ..., dimA).

Every cochain operator is built as the transpose of a chain map on
C (x) A^(n+1); chain maps are assembled column by column.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .linalg import (
    DimensionError,
    Solver,
    SparseMatrix,
    accumulate,
    kernel_basis,
    parallel_columns,
    pivot_columns,
)
from .structures import EntwiningStructure, Report, StructureError, Verdict

THEORIES = ("hochschild", "cyclic", "invariant")


class SubcomplexError(ValueError):
    pass


# -- spaces ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CochainSpace:
    """C (x) A^(n+1) and its dual; degree -1 is the zero space."""

    structure: EntwiningStructure
    degree: int

    def __post_init__(self):
        if self.degree < -1:
            raise DimensionError("degree must be at least -1")

    @property
    def letters(self) -> int:
        return self.degree + 1

    @property
    def dim(self) -> int:
        if self.degree < 0:
            return 0
        return self.structure.dim_c * self.structure.dim_a ** self.letters

    def index(self, c: int, letters: Sequence[int]) -> int:
        s = self.structure
        if len(letters) != self.letters:
            raise DimensionError(f"degree {self.degree} needs {self.letters} algebra indices")
        if not 0 <= c < s.dim_c:
            raise DimensionError(f"coalgebra index {c} out of range")
        idx = c
        for a in letters:
            if not 0 <= a < s.dim_a:
                raise DimensionError(f"algebra index {a} out of range")
            idx = idx * s.dim_a + a
        return idx

    def unindex(self, idx: int) -> tuple[int, tuple[int, ...]]:
        dA = self.structure.dim_a
        letters = []
        for _ in range(self.letters):
            idx, a = divmod(idx, dA)
            letters.append(a)
        return idx, tuple(reversed(letters))

    def tuples(self) -> Iterator[tuple[int, tuple[int, ...]]]:
        for idx in range(self.dim):
            yield self.unindex(idx)


ChainSpace = CochainSpace


@dataclass(frozen=True, eq=False)
class Cochain:
    space: CochainSpace
    values: dict

    def __post_init__(self):
        for k in self.values:
            if not 0 <= k < self.space.dim:
                raise DimensionError(f"cochain index {k} outside space of dim {self.space.dim}")

    @property
    def degree(self) -> int:
        return self.space.degree

    @property
    def structure(self) -> EntwiningStructure:
        return self.space.structure

    def __call__(self, c: int, *letters: int):
        return self.values.get(self.space.index(c, letters), 0)

    def entries(self) -> list[tuple[int, tuple[int, ...], object]]:
        return [(*self.space.unindex(k), v) for k, v in sorted(self.values.items())]

    def __add__(self, other: Cochain) -> Cochain:
        F = self.structure.field
        out = dict(self.values)
        for k, v in other.values.items():
            accumulate(F, out, k, v)
        return Cochain(self.space, out)

    def scale(self, a) -> Cochain:
        F = self.structure.field
        return Cochain(self.space, {k: F.reduce(a * v) for k, v in self.values.items() if F.reduce(a * v)})

    def is_zero(self) -> bool:
        return not self.values


def cochain(s: EntwiningStructure, n: int, values: dict) -> Cochain:
    return Cochain(CochainSpace(s, n), dict(values))


# -- chain maps -----------------------------------------------------------------

def _chain_map(s: EntwiningStructure, src_deg: int, dst_deg: int,
               fn: Callable[[int, tuple[int, ...]], dict]) -> SparseMatrix:
    """Matrix of a chain map; ``fn(c, letters)`` returns ``{(c', letters'): coeff}``."""
    src = CochainSpace(s, src_deg)
    dst = CochainSpace(s, dst_deg)
    F = s.field

    def column(j: int) -> dict:
        c, letters = src.unindex(j)
        out: dict = {}
        for (c2, l2), v in fn(c, letters).items():
            accumulate(F, out, dst.index(c2, l2), v)
        return out

    return SparseMatrix(F, dst.dim, src.dim, parallel_columns(column, src.dim))


def chain_face_fn(s: EntwiningStructure, i: int):
    """d_i on C (x) A^(m+1); d_0 moves a_1 through c and multiplies it onto the last slot."""
    F = s.field

    def d0(c, letters):
        out: dict = {}
        last = letters[-1]
        mid = letters[1:-1]
        for (p, q), v in s.psi_table[c][letters[0]]:
            for k, w in s.algebra.table[last][p]:
                accumulate(F, out, (q, mid + (k,)), v * w)
        return out

    def di(c, letters):
        out: dict = {}
        for k, w in s.algebra.table[letters[i - 1]][letters[i]]:
            out[(c, letters[:i - 1] + (k,) + letters[i + 1:])] = w
        return out

    return d0 if i == 0 else di


def face_maps(s: EntwiningStructure, m: int) -> list[SparseMatrix]:
    """Chain faces d_0..d_m : C (x) A^(m+1) -> C (x) A^m."""
    if m < 1:
        raise DimensionError("faces start in degree 1")
    return [_face(s, m, i) for i in range(m + 1)]


@lru_cache(maxsize=512)
def _face(s: EntwiningStructure, m: int, i: int) -> SparseMatrix:
    return _chain_map(s, m, m - 1, chain_face_fn(s, i))


@lru_cache(maxsize=512)
def _degeneracy(s: EntwiningStructure, m: int, j: int) -> SparseMatrix:
    """s_j : C (x) A^(m+1) -> C (x) A^(m+2), inserting 1_A after slot j."""
    if not s.algebra.unital:
        raise StructureError("degeneracies need a unital algebra")
    one = s.algebra.one

    def fn(c, letters):
        return {(c, letters[:j] + (k,) + letters[j:]): v for k, v in one.items()}

    return _chain_map(s, m, m + 1, fn)


@lru_cache(maxsize=512)
def _rotation(s: EntwiningStructure, m: int) -> SparseMatrix:
    """Unsigned r(c, a_1..a_{m+1}) = (c^psi, a_2..a_{m+1}, a_{1psi})."""
    def fn(c, letters):
        return {(q, letters[1:] + (p,)): v for (p, q), v in s.psi_table[c][letters[0]]}

    return _chain_map(s, m, m, fn)


@lru_cache(maxsize=512)
def _boundary(s: EntwiningStructure, m: int) -> SparseMatrix:
    faces = face_maps(s, m)
    out = faces[0]
    for i in range(1, m + 1):
        out = out + faces[i] if i % 2 == 0 else out - faces[i]
    return out


def chain_boundary(s: EntwiningStructure, m: int) -> SparseMatrix:
    """b = sum (-1)^i d_i : C (x) A^(m+1) -> C (x) A^m."""
    return _boundary(s, m)


# -- cochain operators -------------------------------------------------------------

def hochschild_delta(s: EntwiningStructure, n: int) -> SparseMatrix:
    """delta^n : C^n -> C^(n+1)."""
    if n < 0:
        raise DimensionError("degree must be non-negative")
    return _delta(s, n)


@lru_cache(maxsize=512)
def _delta(s: EntwiningStructure, n: int) -> SparseMatrix:
    return _boundary(s, n + 1).T


def coface(s: EntwiningStructure, n: int, i: int) -> SparseMatrix:
    """delta_i : C^(n-1) -> C^n, 0 <= i <= n."""
    if not 0 <= i <= n:
        raise DimensionError(f"coface index {i} outside 0..{n}")
    return _face(s, n, i).T


def codegeneracy(s: EntwiningStructure, n: int, j: int) -> SparseMatrix:
    """sigma_j : C^(n+1) -> C^n, 0 <= j <= n."""
    if not 0 <= j <= n:
        raise DimensionError(f"codegeneracy index {j} outside 0..{n}")
    return _degeneracy(s, n, j).T


def faces_and_degeneracies(s: EntwiningStructure, n: int) -> tuple[list[SparseMatrix], list[SparseMatrix]]:
    """Cofaces delta_0..delta_{n+1} : C^n -> C^(n+1) and codegeneracies sigma_0..sigma_n : C^(n+1) -> C^n."""
    deltas = [coface(s, n + 1, i) for i in range(n + 2)]
    sigmas = [codegeneracy(s, n, j) for j in range(n + 1)]
    return deltas, sigmas


def rotation_cochain(s: EntwiningStructure, n: int) -> SparseMatrix:
    return _rotation(s, n).T


def cyclic_tau(s: EntwiningStructure, n: int) -> SparseMatrix:
    """tau_n g(c, a_1..a_{n+1}) = (-1)^n g(c^psi, a_2..a_{n+1}, a_{1psi})."""
    if n < 0:
        raise DimensionError("degree must be non-negative")
    t = _rotation(s, n).T
    return t if n % 2 == 0 else -t


@lru_cache(maxsize=512)
def full_twist(s: EntwiningStructure, n: int) -> SparseMatrix:
    """Cochain-side U with (Ug)(c, a) = g(c^{psi^{n+1}}, a_{1psi}, ..., a_{n+1 psi})."""
    return _rotation(s, n).power(n + 1).T


# -- subcomplexes ----------------------------------------------------------------

def _as_matrix(s: EntwiningStructure, nrows: int, vectors: list[dict]) -> SparseMatrix:
    return SparseMatrix(s.field, nrows, len(vectors), vectors)


@lru_cache(maxsize=512)
def _invariant(s: EntwiningStructure, n: int) -> SparseMatrix:
    dim = CochainSpace(s, n).dim
    m = full_twist(s, n) - SparseMatrix.identity(s.field, dim)
    return _as_matrix(s, dim, kernel_basis(m))


@lru_cache(maxsize=512)
def _cyclic(s: EntwiningStructure, n: int) -> SparseMatrix:
    dim = CochainSpace(s, n).dim
    m = cyclic_tau(s, n) - SparseMatrix.identity(s.field, dim)
    return _as_matrix(s, dim, kernel_basis(m))


def invariant_basis(s: EntwiningStructure, n: int) -> SparseMatrix:
    """Columns span the cochains fixed by the full twist."""
    return _invariant(s, n)


def cyclic_basis(s: EntwiningStructure, n: int) -> SparseMatrix:
    """Columns span ker(tau_n - id)."""
    return _cyclic(s, n)


def subcomplex_basis(s: EntwiningStructure, theory: str, n: int) -> SparseMatrix:
    if theory not in THEORIES:
        raise ValueError(f"unknown theory {theory!r}")
    if n < 0:
        return SparseMatrix.zeros(s.field, 0, 0)
    if theory == "hochschild":
        return SparseMatrix.identity(s.field, CochainSpace(s, n).dim)
    if theory == "invariant":
        return _invariant(s, n)
    return _cyclic(s, n)


def in_subcomplex(s: EntwiningStructure, theory: str, g: Cochain) -> bool:
    n = g.degree
    if theory == "hochschild":
        return True
    op = full_twist(s, n) if theory == "invariant" else cyclic_tau(s, n)
    return op.apply(g.values) == g.values


def _image(s: EntwiningStructure, theory: str, n: int) -> SparseMatrix:
    """delta^(n-1) applied to the subcomplex basis in degree n-1, as ambient columns of C^n."""
    dim = CochainSpace(s, n).dim
    if n == 0:
        return SparseMatrix.zeros(s.field, dim, 0)
    return hochschild_delta(s, n - 1) @ subcomplex_basis(s, theory, n - 1)


@dataclass(frozen=True)
class CohomologyResult:
    theory: str
    degree: int
    dim: int
    cochain_dim: int
    cocycle_basis: list[dict]
    coboundary_basis: list[dict]

    @property
    def cocycle_dim(self) -> int:
        return len(self.cocycle_basis)

    @property
    def coboundary_dim(self) -> int:
        return len(self.coboundary_basis)


def cohomology(s: EntwiningStructure, theory: str, n: int) -> CohomologyResult:
    """dim H^n = dim ker(delta on V^n) - dim im(delta on V^(n-1)) for the chosen subcomplex V."""
    return _cohomology(s, theory, n)


@lru_cache(maxsize=256)
def _cohomology(s: EntwiningStructure, theory: str, n: int) -> CohomologyResult:
    if n < 0:
        raise DimensionError("degree must be non-negative")
    B = subcomplex_basis(s, theory, n)
    dB = hochschild_delta(s, n) @ B
    cocycles = [B.apply(k) for k in kernel_basis(dB)]
    img = _image(s, theory, n)
    cobound = [dict(img.cols[j]) for j in pivot_columns(img)]
    return CohomologyResult(theory, n, len(cocycles) - len(cobound), B.ncols, cocycles, cobound)


def cohomology_dims(s: EntwiningStructure, theory: str, max_n: int) -> list[int]:
    return [cohomology(s, theory, n).dim for n in range(max_n + 1)]


def is_coboundary(s: EntwiningStructure, theory: str, g: Cochain) -> Cochain | None:
    """Return g' in the subcomplex with delta(g') = g, or None."""
    if g.structure is not s:
        raise SubcomplexError("cochain belongs to a different structure")
    if not in_subcomplex(s, theory, g):
        raise SubcomplexError(f"cochain is not in the {theory} subcomplex")
    n = g.degree
    if n == 0:
        return Cochain(CochainSpace(s, -1), {}) if g.is_zero() else None
    x = _solver(s, theory, n).solve(g.values)
    if x is None:
        return None
    return Cochain(CochainSpace(s, n - 1), subcomplex_basis(s, theory, n - 1).apply(x))


@lru_cache(maxsize=256)
def _solver(s: EntwiningStructure, theory: str, n: int) -> Solver:
    return Solver(_image(s, theory, n))


def restricted_differential(s: EntwiningStructure, theory: str, n: int) -> SparseMatrix:
    """delta^n written in the subcomplex bases of degrees n and n+1 (coordinates solved exactly)."""
    B = subcomplex_basis(s, theory, n)
    B1 = subcomplex_basis(s, theory, n + 1)
    img = hochschild_delta(s, n) @ B
    solver = Solver(B1)
    cols = []
    for j, col in enumerate(img.cols):
        x = solver.solve(col)
        if x is None:
            raise SubcomplexError(f"delta leaves the {theory} subcomplex at basis vector {j}")
        cols.append(x)
    return SparseMatrix(s.field, B1.ncols, B.ncols, cols)


def maps_into(s: EntwiningStructure, op: SparseMatrix, src: SparseMatrix, dst: SparseMatrix) -> bool:
    """True when op(span src) is contained in span dst."""
    img = op @ src
    solver = Solver(dst)
    return all(solver.contains(c) for c in img.cols)


# -- cocyclic identities ------------------------------------------------------------

TauFn = Callable[[EntwiningStructure, int], SparseMatrix]


def _compare(name: str, left: SparseMatrix, right: SparseMatrix, basis: SparseMatrix,
             space: CochainSpace, degree: int) -> Verdict:
    diff = (left - right) @ basis
    for j, col in enumerate(diff.cols):
        if col:
            row = min(col)
            c, letters = space.unindex(row)
            return Verdict(name, False, {"degree": degree, "basis_vector": j, "row": [c, *letters]})
    return Verdict(name, True)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def cocyclic_check(s: EntwiningStructure, max_n: int, tau: TauFn | None = None) -> Report:
    """Check the cosimplicial and cyclic identities as matrix identities on the invariant subcomplex.

    ``tau`` replaces the cyclic operator (used to inject faults in tests).
    """
    if not s.algebra.unital:
        raise StructureError("cocyclic identities need a unital algebra")
    tau = tau or cyclic_tau
    F = s.field
    verdicts: list[Verdict] = []
    groups: dict[str, list[Verdict]] = {}

    def record(name, v):
        groups.setdefault(name, []).append(v)

    for n in range(max_n + 1):
        In = _invariant(s, n)
        sp = CochainSpace(s, n)
        t = tau(s, n)
        ident = SparseMatrix.identity(F, sp.dim)
        record("tau_power_identity", _compare("tau_power_identity", t.power(n + 1), ident, In, sp, n))
        if n >= 1:
            Iprev = _invariant(s, n - 1)
            tp = tau(s, n - 1)
            d = [coface(s, n, i) for i in range(n + 1)]
            for i in range(1, n + 1):
                record("coface_tau", _compare("coface_tau", d[i] @ tp, -(t @ d[i - 1]), Iprev, sp, n))
            record("coface_zero_tau", _compare("coface_zero_tau", d[0], (t @ d[n]).scale(_sign(n)), Iprev, sp, n))
            # delta_j delta_i = delta_i delta_{j-1} for i < j, C^(n-1) -> C^(n+1)
            d1 = [coface(s, n + 1, i) for i in range(n + 2)]
            sp1 = CochainSpace(s, n + 1)
            for j in range(n + 2):
                for i in range(j):
                    record("coface_coface", _compare("coface_coface", d1[j] @ d[i], d1[i] @ d[j - 1], Iprev, sp1, n + 1))
        In1 = _invariant(s, n + 1)
        t1 = tau(s, n + 1)
        sig = [codegeneracy(s, n, j) for j in range(n + 1)]
        for i in range(1, n + 1):
            record("codegeneracy_tau", _compare("codegeneracy_tau", sig[i] @ t1, -(t @ sig[i - 1]), In1, sp, n))
        record("codegeneracy_zero_tau",
               _compare("codegeneracy_zero_tau", sig[0] @ t1 @ t1, (t @ sig[n]).scale(_sign(n)), In1, sp, n))
        # sigma_j delta_i on C^n -> C^n with delta_i : C^n -> C^(n+1)
        d1 = [coface(s, n + 1, i) for i in range(n + 2)]
        for j in range(n + 1):
            for i in range(n + 2):
                if i < j:
                    right = d[i] @ codegeneracy(s, n - 1, j - 1) if n >= 1 else None
                elif i in (j, j + 1):
                    right = ident
                else:
                    right = d[i - 1] @ codegeneracy(s, n - 1, j) if n >= 1 else None
                if right is not None:
                    record("codegeneracy_coface", _compare("codegeneracy_coface", sig[j] @ d1[i], right, In, sp, n))
        if n >= 1:
            sig1 = [codegeneracy(s, n + 1, j) for j in range(n + 2)]
            In2 = _invariant(s, n + 2)
            for j in range(n + 1):
                for i in range(j + 1):
                    # sigma_j sigma_i = sigma_i sigma_{j+1}, i <= j, C^(n+2) -> C^n
                    record("codegeneracy_codegeneracy",
                           _compare("codegeneracy_codegeneracy", sig[j] @ sig1[i], sig[i] @ sig1[j + 1], In2, sp, n))
    for name in ("tau_power_identity", "coface_tau", "coface_zero_tau", "codegeneracy_tau",
                 "codegeneracy_zero_tau", "coface_coface", "codegeneracy_coface", "codegeneracy_codegeneracy"):
        vs = groups.get(name, [])
        bad = [v for v in vs if not v.passed]
        verdicts.append(bad[0] if bad else Verdict(name, True))
    return Report(tuple(verdicts))


def clear_caches() -> None:
    for f in (_face, _degeneracy, _rotation, _boundary, _delta, full_twist, _invariant, _cyclic,
              _cohomology, _solver):
        f.cache_clear()
