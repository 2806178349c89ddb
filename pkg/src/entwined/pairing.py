"""Koszul-signed tensor product of dg entwinings, tensor traces, and the cyclic cocycle pairing.

Degree p of the tensor algebra is the direct sum of R^i (x) R'^(p-i), laid out by
ascending i and row-major inside each block.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .complexes import Cochain, CochainSpace, cohomology, cyclic_tau, hochschild_delta, is_coboundary
from .linalg import accumulate, kron
from .omega import (
    DgEntwining,
    EntwinedTrace,
    TruncationError,
    character,
    omega_build,
    trace_from_cocycle,
)
from .structures import (
    EntwiningStructure,
    FiniteCoalgebra,
    Report,
    StructureError,
    Verdict,
    tensor_product,
)


class PairingError(ValueError):
    pass


def tensor_coalgebra(C: FiniteCoalgebra, D: FiniteCoalgebra) -> FiniteCoalgebra:
    F = C.field
    dD = D.dim
    comul: dict = {}
    for k1 in range(C.dim):
        for k2 in range(dD):
            row: dict = {}
            for (a1, b1), v in C.table[k1]:
                for (a2, b2), w in D.table[k2]:
                    accumulate(F, row, (a1 * dD + a2, b1 * dD + b2), v * w)
            if row:
                comul[k1 * dD + k2] = row
    counit = {}
    for k1 in range(C.dim):
        for k2 in range(dD):
            e = F.reduce(C.eps[k1] * D.eps[k2])
            if e:
                counit[k1 * dD + k2] = e
    return FiniteCoalgebra(F, C.dim * dD, comul, counit)


class GradedTensorDga(DgEntwining):
    """(R (x) R', D (x) id + (-1)^deg id (x) D', Psi (x) Psi') truncated at N."""

    def __init__(self, left: DgEntwining, right: DgEntwining, N: int,
                 base: EntwiningStructure | None = None):
        if left.field != right.field:
            raise StructureError("tensor factors over different fields")
        if N > min(left.N, right.N):
            raise TruncationError(f"tensor truncation {N} exceeds a factor's truncation")
        self.left = left
        self.right = right
        self.field = left.field
        self.N = N
        self.coalgebra = tensor_coalgebra(left.coalgebra, right.coalgebra)
        self._blocks = []
        for p in range(N + 1):
            offs, start = {}, 0
            for i in range(p + 1):
                offs[i] = start
                start += left.dim(i) * right.dim(p - i)
            self._blocks.append((offs, start))
        self.unit = None
        if left.unit is not None and right.unit is not None:
            self.unit = self._pack_pairs(0, 0, left.unit, right.unit)
        self.rho = None
        self.base = None
        if left.rho is not None and right.rho is not None:
            if base is None:
                base = tensor_product(left.base, right.base)
            self.base = base
            self.rho = kron(left.rho, right.rho)
        self._mul_cache: dict = {}

    def dim(self, p: int) -> int:
        self._check_degree(p)
        return self._blocks[p][1]

    def split(self, p: int, x: int) -> tuple[int, int, int]:
        offs, _ = self._blocks[p]
        for i in range(p, -1, -1):
            if x >= offs[i]:
                a, b = divmod(x - offs[i], self.right.dim(p - i))
                return i, a, b
        raise IndexError(x)

    def pack(self, p: int, i: int, a: int, b: int) -> int:
        return self._blocks[p][0][i] + a * self.right.dim(p - i) + b

    def _pack_pairs(self, p: int, i: int, u: dict, v: dict) -> dict:
        F = self.field
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                accumulate(F, out, self.pack(p, i, a, b), x * y)
        return out

    def mul_basis(self, p, x, q, y):
        key = (p, x, q, y)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        self._check_degree(p + q)
        i, a, b = self.split(p, x)
        k, a2, b2 = self.split(q, y)
        left = self.left.mul_basis(i, a, k, a2)
        right = self.right.mul_basis(p - i, b, q - k, b2)
        out = self._pack_pairs(p + q, i + k, left, right)
        if ((p - i) * k) % 2:
            out = {z: self.field.reduce(-v) for z, v in out.items()}
        self._mul_cache[key] = out
        return out

    def diff_basis(self, p, x):
        self._check_degree(p + 1)
        i, a, b = self.split(p, x)
        F = self.field
        out = self._pack_pairs(p + 1, i + 1, self.left.diff_basis(i, a), {b: 1})
        sign = -1 if i % 2 else 1
        for z, v in self._pack_pairs(p + 1, i, {a: 1}, self.right.diff_basis(p - i, b)).items():
            accumulate(F, out, z, sign * v)
        return out

    def psi_basis(self, p, c, x):
        i, a, b = self.split(p, x)
        dD = self.right.coalgebra.dim
        c1, c2 = divmod(c, dD)
        F = self.field
        out: dict = {}
        for (a2, d1), v in self.left.psi_basis(i, c1, a).items():
            for (b2, d2), w in self.right.psi_basis(p - i, c2, b).items():
                accumulate(F, out, (self.pack(p, i, a2, b2), d1 * dD + d2), v * w)
        return out


def tensor_trace(dga: GradedTensorDga, T: EntwinedTrace, T2: EntwinedTrace) -> EntwinedTrace:
    """(T (x) T')(c (x) c' (x) r (x) r') = T(c (x) r) T'(c' (x) r') on bidegree (m, n), zero elsewhere."""
    m, n = T.degree, T2.degree
    p = m + n
    if p > dga.N:
        raise TruncationError(f"tensor trace of degree {p} above truncation {dga.N}")
    F = dga.field
    wl, wr = dga.left.dim(m), dga.right.dim(n)
    width = dga.dim(p)
    dD = dga.right.coalgebra.dim
    vals = {}
    for k1, v in T.values.items():
        c1, a = divmod(k1, wl)
        for k2, w in T2.values.items():
            c2, b = divmod(k2, wr)
            val = F.reduce(v * w)
            if val:
                vals[(c1 * dD + c2) * width + dga.pack(p, m, a, b)] = val
    return EntwinedTrace(p, vals)


@lru_cache(maxsize=64)
def tensor_of(s: EntwiningStructure, s2: EntwiningStructure) -> EntwiningStructure:
    """Shared tensor-product instance, so cochains from repeated pairings live on one structure."""
    return tensor_product(s, s2)


def _require_cyclic_cocycle(g: Cochain, label: str) -> None:
    s, n = g.structure, g.degree
    if cyclic_tau(s, n).apply(g.values) != g.values:
        raise PairingError(f"{label} is not cyclic")
    if hochschild_delta(s, n).apply(g.values):
        raise PairingError(f"{label} is not a cocycle")


def tensor_cycle(s: EntwiningStructure, s2: EntwiningStructure, degree: int) -> GradedTensorDga:
    """Tensor of the universal calculi, truncated one above ``degree`` so Leibniz checks fit."""
    N = degree + 1
    return GradedTensorDga(omega_build(s, N), omega_build(s2, N), N, base=tensor_of(s, s2))


def pair_cocycles(g: Cochain, g2: Cochain, verify: bool = True) -> Cochain:
    """The cocycle g (x) g' over the tensor structure, as the character of T_g (x) T_g'."""
    _require_cyclic_cocycle(g, "left cochain")
    _require_cyclic_cocycle(g2, "right cochain")
    s, s2 = g.structure, g2.structure
    m, n = g.degree, g2.degree
    dga = tensor_cycle(s, s2, m + n)
    T = trace_from_cocycle(dga.left, g, check=False)
    T2 = trace_from_cocycle(dga.right, g2, check=False)
    out = character(dga, tensor_trace(dga, T, T2), check=False)
    if verify:
        _require_cyclic_cocycle(out, "pairing output")
    return out


@dataclass(frozen=True)
class PairVerdict:
    left_index: int
    right_index: int
    coboundary: bool

    def to_json(self) -> dict:
        return {"left": self.left_index, "right": self.right_index, "coboundary": self.coboundary}


@dataclass(frozen=True)
class PairingClassReport:
    m: int
    n: int
    coboundaries_left: int
    cocycles_right: int
    pairs: tuple[PairVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(p.coboundary for p in self.pairs)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "left_coboundary_basis": self.coboundaries_left,
            "right_cocycle_basis": self.cocycles_right,
            "passed": self.passed,
            "pairs": [p.to_json() for p in self.pairs],
        }


def pairing_class_check(s: EntwiningStructure, s2: EntwiningStructure, m: int, n: int) -> PairingClassReport:
    """Pairing a cyclic coboundary with a cyclic cocycle lands in the cyclic coboundaries."""
    Bm = cohomology(s, "cyclic", m).coboundary_basis
    Zn = cohomology(s2, "cyclic", n).cocycle_basis
    t = tensor_of(s, s2)
    sp, sp2 = CochainSpace(s, m), CochainSpace(s2, n)
    pairs = []
    for i, b in enumerate(Bm):
        for j, z in enumerate(Zn):
            out = pair_cocycles(Cochain(sp, b), Cochain(sp2, z))
            pairs.append(PairVerdict(i, j, is_coboundary(t, "cyclic", out) is not None))
    return PairingClassReport(m, n, len(Bm), len(Zn), tuple(pairs))


def pairing_report(g: Cochain, g2: Cochain) -> Report:
    """Checks on one pairing output: cyclicity and closedness."""
    out = pair_cocycles(g, g2, verify=False)
    t, p = out.structure, out.degree
    cyc = cyclic_tau(t, p).apply(out.values) == out.values
    closed = not hochschild_delta(t, p).apply(out.values)
    return Report((Verdict("cyclic", cyc), Verdict("cocycle", closed)))
