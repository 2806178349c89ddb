"""Independent dense oracles, written directly from the defining formulas.

Nothing here touches the sparse engine: the only inputs are the raw structure
constants of an entwining structure over Q, and all linear algebra is sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import sympy


def _raw(s):
    mul = {k: dict(v) for k, v in s.algebra.mul.items()}
    psi = {k: dict(v) for k, v in s.entwining.psi.items()}
    return s.dim_a, s.dim_c, mul, psi


def _tuples(dC, dA, n):
    """Basis of C (x) A^(n+1) in lexicographic order (c first, then letters)."""
    return [(c, letters) for c in range(dC) for letters in product(range(dA), repeat=n + 1)]


def _position(dC, dA, n):
    return {t: k for k, t in enumerate(_tuples(dC, dA, n))}


def dense_delta(s, n):
    """delta^n as a sympy matrix: rows index degree n+1 tuples, columns degree n tuples.

    (dg)(c, a_1..a_{n+2}) = g(c^psi, a_2..a_{n+1}, a_{n+2} a_{1psi})
                           + sum_{i=1}^{n+1} (-1)^i g(c, .., a_i a_{i+1}, ..)
    """
    dA, dC, mul, psi = _raw(s)
    rows = _tuples(dC, dA, n + 1)
    pos = _position(dC, dA, n)
    M = sympy.zeros(len(rows), len(pos))
    for r, (c, a) in enumerate(rows):
        for (p, q), v in psi.get((c, a[0]), {}).items():
            for k, w in mul.get((a[-1], p), {}).items():
                M[r, pos[(q, a[1:-1] + (k,))]] += sympy.Rational(v) * sympy.Rational(w)
        for i in range(1, n + 2):
            for k, w in mul.get((a[i - 1], a[i]), {}).items():
                M[r, pos[(c, a[:i - 1] + (k,) + a[i + 1:])]] += (-1) ** i * sympy.Rational(w)
    return M


def dense_tau(s, n):
    """(tau g)(c, a_1..a_{n+1}) = (-1)^n g(c^psi, a_2..a_{n+1}, a_{1psi})."""
    dA, dC, _, psi = _raw(s)
    rows = _tuples(dC, dA, n)
    pos = _position(dC, dA, n)
    M = sympy.zeros(len(rows), len(rows))
    for r, (c, a) in enumerate(rows):
        for (p, q), v in psi.get((c, a[0]), {}).items():
            M[r, pos[(q, a[1:] + (p,))]] += (-1) ** n * sympy.Rational(v)
    return M


def dense_twist(s, n):
    """(U g)(c, a_1..a_{n+1}) = g(c^{psi^{n+1}}, a_{1psi}, .., a_{n+1 psi}), c passed through each letter in turn."""
    dA, dC, _, psi = _raw(s)
    rows = _tuples(dC, dA, n)
    pos = _position(dC, dA, n)
    M = sympy.zeros(len(rows), len(rows))
    for r, (c, a) in enumerate(rows):
        states = {(c, ()): sympy.Integer(1)}
        for letter in a:
            nxt: dict = {}
            for (cc, done), v in states.items():
                for (p, q), w in psi.get((cc, letter), {}).items():
                    key = (q, done + (p,))
                    nxt[key] = nxt.get(key, 0) + v * sympy.Rational(w)
            states = nxt
        for (cc, letters), v in states.items():
            M[r, pos[(cc, letters)]] += v
    return M


def _basis_matrix(rows, vectors):
    if not vectors:
        return sympy.zeros(rows, 0)
    return sympy.Matrix.hstack(*vectors)


def subcomplex(s, theory, n):
    size = s.dim_c * s.dim_a ** (n + 1)
    if theory == "hochschild":
        return sympy.eye(size)
    op = dense_tau(s, n) if theory == "cyclic" else dense_twist(s, n)
    return _basis_matrix(size, (op - sympy.eye(size)).nullspace())


def cohomology_dims(s, theory, max_n):
    """dim Z^n - dim B^n with Z, B computed inside the chosen subcomplex."""
    dims = []
    for n in range(max_n + 1):
        V = subcomplex(s, theory, n)
        z = V.shape[1] - (dense_delta(s, n) * V).rank() if V.shape[1] else 0
        if n == 0:
            b = 0
        else:
            W = subcomplex(s, theory, n - 1)
            b = (dense_delta(s, n - 1) * W).rank() if W.shape[1] else 0
        dims.append(z - b)
    return dims


# -- classical Hochschild homology of an algebra through the bar complex ----------------------

def _rank(rows):
    """Rank of a list of Fraction rows by plain Gaussian elimination."""
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _bar_boundary(dim, mul, n):
    """b : A^(n+1) -> A^n for the Hochschild chain complex C_n(A, A) = A (x) A^n."""
    src = list(product(range(dim), repeat=n + 1))
    dst = {t: k for k, t in enumerate(product(range(dim), repeat=n))}
    rows = []
    for t in src:
        row = [Fraction(0)] * len(dst)
        for i in range(n):
            for k, w in mul.get((t[i], t[i + 1]), {}).items():
                row[dst[t[:i] + (k,) + t[i + 2:]]] += (-1) ** i * Fraction(w)
        for k, w in mul.get((t[n], t[0]), {}).items():
            row[dst[(k,) + t[1:n]]] += (-1) ** n * Fraction(w)
        rows.append(row)
    return rows


def classical_hochschild_homology(dim, mul, max_n):
    """dim HH_n(A, A) for n = 0..max_n from raw structure constants."""
    ranks = [0] + [_rank(_bar_boundary(dim, mul, n)) for n in range(1, max_n + 2)]
    return [dim ** (n + 1) - ranks[n] - ranks[n + 1] for n in range(max_n + 1)]
