"""Acceptance criteria, one test each, exact arithmetic, zero tolerance.

Every test prints a single ``ACCEPTANCE <k> PASS|FAIL <title>`` line.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
from contextlib import contextmanager
from itertools import product

import sympy

import oracles
from entwined import corpus
from entwined.complexes import (
    Cochain,
    CochainSpace,
    cocyclic_check,
    cohomology,
    cohomology_dims,
    hochschild_delta,
    in_subcomplex,
    is_coboundary,
    maps_into,
    subcomplex_basis,
)
from entwined.formats import save_cochain
from entwined.linalg import QQ, SparseMatrix, same_span
from entwined.morita import morita_report
from entwined.omega import character, omega_build, pullback_cochain, trace_admissible_basis, trace_from_cocycle
from entwined.pairing import pair_cocycles, pairing_class_check, tensor_of
from entwined.structures import (
    flip_structure,
    ground_algebra,
    ground_coalgebra,
    grouplike_coalgebra,
    inner_automorphism,
    matrix_extend,
    perturb_psi,
    tensor_product,
    unit_check,
    validate,
)

from helpers import random_scalar_unit

# corpus entries with no valid single-coefficient deformation of psi (see test_structures)
RIGID = ["point", "dual_flip", "grouplike_flip", "dual_graded", "z2_graded", "dual_grouplike_twist"]


@contextmanager
def criterion(capsys, k: int, title: str):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(f"\nACCEPTANCE {k} {'PASS' if ok else 'FAIL'} {title}")


def three_dim_algebra():
    from entwined.structures import FiniteAlgebra

    # k[x]/(x^3)
    mul = {(i, j): {i + j: 1} for i in range(3) for j in range(3) if i + j < 3}
    return FiniteAlgebra(QQ, 3, mul, {0: 1})


def test_axiom_suite(capsys):
    with criterion(capsys, 1, "axiom suite"):
        algebras = {1: [ground_algebra(QQ)],
                    2: [corpus.dual_numbers(QQ), corpus.cyclic_group_algebra(QQ), corpus.diagonal_algebra(QQ, 2)],
                    3: [three_dim_algebra(), corpus.diagonal_algebra(QQ, 3)]}
        coalgebras = {1: [ground_coalgebra(QQ)],
                      2: [grouplike_coalgebra(QQ, 2), corpus.divided_power_coalgebra(QQ)],
                      3: [grouplike_coalgebra(QQ, 3)]}
        for da, dc in product((1, 2, 3), repeat=2):
            for A, C in product(algebras[da], coalgebras[dc]):
                assert validate(flip_structure(A, C)).passed, (da, dc)
        structures = [corpus.load(n) for n in corpus.SMALL]
        for s in structures:
            for r in (1, 2, 3):
                assert validate(matrix_extend(s, r)).passed, (s.name, r)
        for s, s2 in product(structures, repeat=2):
            assert validate(tensor_product(s, s2)).passed, (s.name, s2.name)
        rng = random.Random(1)
        for _ in range(100):
            s = corpus.load(rng.choice(RIGID))
            key = (rng.randrange(s.dim_c), rng.randrange(s.dim_a), rng.randrange(s.dim_a), rng.randrange(s.dim_c))
            delta = rng.choice([d for d in range(-5, 6) if d])
            assert not validate(perturb_psi(s, key, delta)).passed, (s.name, key, delta)


def test_complex_suite(capsys):
    with criterion(capsys, 2, "complex suite"):
        rng = random.Random(2)
        for _ in range(50):
            s = corpus.random_structure(rng)
            assert validate(s).passed
            for n in range(4):
                assert (hochschild_delta(s, n + 1) @ hochschild_delta(s, n)).is_zero(), (s.name, n)
                for theory in ("cyclic", "invariant"):
                    assert maps_into(s, hochschild_delta(s, n), subcomplex_basis(s, theory, n),
                                     subcomplex_basis(s, theory, n + 1)), (s.name, theory, n)


def test_cocyclic_suite(capsys):
    with criterion(capsys, 3, "cocyclic suite"):
        for name in corpus.CATALOGUE:
            report = cocyclic_check(corpus.load(name), 3)
            assert report.passed, (name, report.failures())


def test_known_dims(capsys):
    with criterion(capsys, 4, "known dims"):
        s = corpus.point()
        assert cohomology_dims(s, "cyclic", 4) == [1, 0, 1, 0, 1]
        assert cohomology_dims(s, "hochschild", 4) == [1, 0, 0, 0, 0]
        assert oracles.cohomology_dims(s, "cyclic", 4) == [1, 0, 1, 0, 1]
        assert oracles.cohomology_dims(s, "hochschild", 4) == [1, 0, 0, 0, 0]
        for n in range(5):
            assert sympy.Matrix(hochschild_delta(s, n).to_dense()) == oracles.dense_delta(s, n)


def test_morita_suite(capsys):
    with criterion(capsys, 5, "morita suite"):
        for name in corpus.SMALL:
            rep = morita_report(corpus.load(name), 2, 2)
            assert rep.checks.passed, (name, rep.checks.failures())
            assert rep.dims_equal, (name, rep.dims)


def test_trace_suite(capsys):
    with criterion(capsys, 6, "cocycle and trace correspondence"):
        for name in corpus.SMALL:
            s = corpus.load(name)
            om = omega_build(s, 2)
            for n in range(3):
                res = cohomology(s, "cyclic", n)
                space = CochainSpace(s, n)
                Z = SparseMatrix(QQ, space.dim, len(res.cocycle_basis), res.cocycle_basis)
                assert same_span(trace_admissible_basis(om, n), Z), (name, n)
                for z in res.cocycle_basis:
                    g = Cochain(space, z)
                    assert character(om, trace_from_cocycle(om, g)).values == g.values, (name, n)


def test_units_and_conjugation(capsys):
    with criterion(capsys, 7, "units and conjugation"):
        rng = random.Random(7)
        for _ in range(50):
            base = corpus.load(rng.choice(corpus.SMALL))
            ms = matrix_extend(base, 2)
            x, y = random_scalar_unit(rng, base, 2)
            x2, y2 = random_scalar_unit(rng, base, 2)
            A = ms.algebra
            assert unit_check(ms, x, y).passed
            assert unit_check(ms, y, x).passed
            assert unit_check(ms, A.multiply(x, x2), A.multiply(y2, y)).passed
        for name in ("point", "dual_flip", "dual_divided_twist"):
            base = corpus.load(name)
            ms = matrix_extend(base, 2)
            x, y = random_scalar_unit(rng, base, 2)
            m = inner_automorphism(ms, x, y)
            assert m.alpha != SparseMatrix.identity(QQ, ms.dim_a)
            for n in range(3):
                space = CochainSpace(ms, n)
                for z in cohomology(ms, "cyclic", n).cocycle_basis:
                    g = Cochain(space, z)
                    diff = pullback_cochain(m, g) + g.scale(-1)
                    assert is_coboundary(ms, "cyclic", diff) is not None, (name, n)


def test_pairing_suite(capsys):
    with criterion(capsys, 8, "pairing suite"):
        structures = [corpus.load(n) for n in corpus.SMALL]
        rng = random.Random(8)
        for s, s2 in product(structures, repeat=2):
            t = tensor_of(s, s2)
            for m, n in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]:
                Zm = [Cochain(CochainSpace(s, m), z) for z in cohomology(s, "cyclic", m).cocycle_basis]
                Zn = [Cochain(CochainSpace(s2, n), z) for z in cohomology(s2, "cyclic", n).cocycle_basis]
                for g, g2 in product(Zm, Zn):
                    out = pair_cocycles(g, g2)
                    assert in_subcomplex(t, "cyclic", out)
                    assert hochschild_delta(t, m + n).apply(out.values) == {}
                    if m == n == 0:
                        for c, c2, a, a2 in product(range(s.dim_c), range(s2.dim_c), range(s.dim_a), range(s2.dim_a)):
                            assert out(c * s2.dim_c + c2, a * s2.dim_a + a2) == g(c, a) * g2(c2, a2)
                assert pairing_class_check(s, s2, m, n).passed, (s.name, s2.name, m, n)
                if len(Zm) >= 2 and Zn:
                    a, b = rng.randint(-3, 3), rng.randint(-3, 3)
                    combo = Zm[0].scale(a) + Zm[1].scale(b)
                    h = Zn[-1]
                    want = pair_cocycles(Zm[0], h).scale(a) + pair_cocycles(Zm[1], h).scale(b)
                    assert pair_cocycles(combo, h).values == want.values


def _cli(args, threads):
    env = dict(os.environ)
    env.pop("PYTHONHASHSEED", None)
    proc = subprocess.run([sys.executable, "-m", "entwined", "--output", "json", "--threads", str(threads), *args],
                          capture_output=True, check=False, env=env)
    return proc.returncode, proc.stdout


def test_determinism(capsys, tmp_path):
    with criterion(capsys, 9, "determinism"):
        data = {name: str(corpus.data_path(name)) for name in corpus.CATALOGUE}
        files = {}
        for name, n, k in [("point", 2, 0), ("dual_graded", 1, 0), ("dual_flip", 0, 1), ("z2_graded", 1, 0)]:
            s = corpus.load(name)
            p = tmp_path / f"{name}_{n}.json"
            save_cochain(Cochain(CochainSpace(s, n), cohomology(s, "cyclic", n).cocycle_basis[k]), p)
            files[name] = str(p)
        suites = [["validate", data["dual_divided_twist"]]]
        suites += [["cohomology", data[name], "--theory", th, "--max-degree", "3"]
                   for name in ("dual_divided_twist", "z2_graded") for th in ("hochschild", "cyclic", "invariant")]
        suites += [["cocyclic-check", data["dual_grouplike_twist"], "--max-degree", "2"],
                   ["morita", data["dual_divided_twist"], "--r", "2", "--max-degree", "2"],
                   ["trace-check", data["point"], files["point"]],
                   ["trace-check", data["dual_graded"], files["dual_graded"]],
                   ["pair", data["dual_graded"], files["dual_graded"], data["z2_graded"], files["z2_graded"]],
                   ["pair", data["dual_flip"], files["dual_flip"], data["dual_graded"], files["dual_graded"]],
                   ["conjugation-check", data["matrix2_flip"], "--unit", "1,1,0,1", "--inverse", "1,-1,0,1"]]
        for args in suites:
            runs = [_cli(args, threads) for threads in (1, 8, 1, 8)]
            assert runs[0][0] == 0, args
            assert all(r == runs[0] for r in runs), args
