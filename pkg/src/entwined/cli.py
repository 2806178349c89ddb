"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a mathematical failure, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import complexes, formats, linalg, morita, omega, pairing, structures
from .complexes import Cochain, CochainSpace
from .formats import ParseError, dumps
from .linalg import ExactField, FieldError

DEFAULT_DIM_GUARD = 2_000_000


class UsageError(Exception):
    pass


# -- output helpers ---------------------------------------------------------------------

class Emitter:
    def __init__(self, mode: str, stream=None):
        self.mode = mode
        self.stream = stream or sys.stdout
        self.lines: list[str] = []

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def checks(self, report: structures.Report, prefix: str = "") -> None:
        for v in report.verdicts:
            status = "PASS" if v.passed else "FAIL"
            extra = ""
            if not v.passed and v.witness is not None:
                extra = f"  witness={formats.json.dumps(structures._jsonable(v.witness), sort_keys=True)}"
            self.line(f"{status} {prefix}{v.name}{extra}")

    def finish(self, payload: dict) -> None:
        if self.mode == "json":
            self.stream.write(dumps(payload))
        else:
            self.stream.write("\n".join(self.lines) + "\n")


def _field(args) -> ExactField | None:
    if getattr(args, "field", None) is None:
        return None
    try:
        return ExactField.from_descriptor(args.field)
    except FieldError as e:
        raise UsageError(str(e)) from None


def _load(args, path: str):
    return formats.load_structure(path, _field(args))


def _guard(args, default: int) -> int:
    g = getattr(args, "max_dim_guard", None)
    return default if g is None else g


def _require_valid(s: structures.EntwiningStructure, out: Emitter, payload: dict) -> bool:
    report = structures.validate(s)
    if report.passed:
        return True
    out.line("structure is not a valid entwining structure")
    out.checks(report)
    payload["validation"] = report.to_json()
    return False


def _basis_entries(s, n: int, vectors: list[dict]) -> list:
    space = CochainSpace(s, n)
    return [formats.vector_entries(Cochain(space, v)) for v in vectors]


# -- commands ------------------------------------------------------------------------------

def cmd_validate(args, out: Emitter) -> int:
    s = _load(args, args.structure)
    report = structures.validate(s)
    out.line(f"structure {s.name or args.structure}: dimA={s.dim_a} dimC={s.dim_c} field={s.field}")
    out.checks(report)
    out.finish({"command": "validate", "field": s.field.descriptor(), "dim_a": s.dim_a,
                "dim_c": s.dim_c, **report.to_json()})
    return 0 if report.passed else 1


def cmd_cohomology(args, out: Emitter) -> int:
    s = _load(args, args.structure)
    payload = {"command": "cohomology", "theory": args.theory, "field": s.field.descriptor()}
    if not _require_valid(s, out, payload):
        payload["passed"] = False
        out.finish(payload)
        return 1
    top = CochainSpace(s, args.max_degree + 1).dim
    guard = _guard(args, DEFAULT_DIM_GUARD)
    if top > guard:
        raise UsageError(f"cochain space of dimension {top} exceeds --max-dim-guard {guard}")
    degrees = []
    for n in range(args.max_degree + 1):
        res = complexes.cohomology(s, args.theory, n)
        degrees.append({
            "degree": n,
            "dim": res.dim,
            "subcomplex_dim": res.cochain_dim,
            "cocycle_basis": _basis_entries(s, n, res.cocycle_basis),
            "coboundary_basis": _basis_entries(s, n, res.coboundary_basis),
        })
    dims = [d["dim"] for d in degrees]
    out.line(f"{args.theory} cohomology over {s.field}, degrees 0..{args.max_degree}")
    out.line("degree  dim  subcomplex")
    for d in degrees:
        out.line(f"{d['degree']:>6}  {d['dim']:>3}  {d['subcomplex_dim']:>10}")
    out.line(f"dims {dims}")
    payload.update({"dims": dims, "degrees": degrees, "passed": True})
    out.finish(payload)
    return 0


def cmd_cocyclic(args, out: Emitter) -> int:
    s = _load(args, args.structure)
    payload = {"command": "cocyclic-check", "max_degree": args.max_degree}
    if not _require_valid(s, out, payload):
        payload["passed"] = False
        out.finish(payload)
        return 1
    guard = _guard(args, DEFAULT_DIM_GUARD)
    top = CochainSpace(s, args.max_degree + 2).dim
    if top > guard:
        raise UsageError(f"cochain space of dimension {top} exceeds --max-dim-guard {guard}")
    report = complexes.cocyclic_check(s, args.max_degree)
    out.checks(report)
    payload.update(report.to_json())
    out.finish(payload)
    return 0 if report.passed else 1


def cmd_morita(args, out: Emitter) -> int:
    s = _load(args, args.structure)
    payload = {"command": "morita", "r": args.r, "max_degree": args.max_degree}
    if not _require_valid(s, out, payload):
        payload["passed"] = False
        out.finish(payload)
        return 1
    try:
        rep = morita.morita_report(s, args.r, args.max_degree, _guard(args, morita.DEFAULT_SIZE_GUARD))
    except morita.SizeGuardError as e:
        raise UsageError(f"{e}; raise --max-dim-guard to override") from None
    out.checks(rep.checks)
    for theory, row in rep.dims.items():
        out.line(f"{theory}: base {row['base']}  M_{args.r} {row['matrix']}")
    ok_ids = rep.checks.passed
    out.line(("all identities PASS" if ok_ids else "identity FAILURE") + "; "
             + ("dims equal" if rep.dims_equal else "dims DIFFER"))
    payload.update(rep.to_json())
    out.finish(payload)
    return 0 if rep.passed else 1


def cmd_trace_check(args, out: Emitter) -> int:
    s = _load(args, args.structure)
    g = formats.load_cochain(args.cochain, s)
    n = g.degree
    payload = {"command": "trace-check", "degree": n}
    if not _require_valid(s, out, payload):
        payload["passed"] = False
        out.finish(payload)
        return 1
    moved = complexes.cyclic_tau(s, n).apply(g.values)
    bad_tau = sorted(k for k in set(moved) | set(g.values) if moved.get(k, 0) != g.values.get(k, 0))
    dg = complexes.hochschild_delta(s, n).apply(g.values)
    cyclic, cocycle = not bad_tau, not dg
    checks = [
        structures.Verdict("cyclic", cyclic, None if cyclic else _entry_witness(s, n, bad_tau[0])),
        structures.Verdict("cocycle", cocycle, None if cocycle else _entry_witness(s, n + 1, min(dg))),
    ]
    if cyclic:
        om = omega.omega_build(s, n)
        t = omega.trace_from_cocycle(om, g)
        tr = omega.validate_trace(om, t)
        checks.extend(structures.Verdict(f"trace_{v.name}", v.passed, v.witness) for v in tr.verdicts)
        if tr.passed:
            back = omega.character(om, t)
            checks.append(structures.Verdict("character_round_trip", back.values == g.values))
    report = structures.Report(tuple(checks))
    out.checks(report)
    payload.update(report.to_json())
    out.finish(payload)
    return 0 if report.passed else 1


def _entry_witness(s, n: int, k: int) -> dict:
    c, letters = CochainSpace(s, n).unindex(k)
    return {"degree": n, "basis_element": [c, *letters]}


def cmd_pair(args, out: Emitter) -> int:
    s1 = _load(args, args.structure1)
    g1 = formats.load_cochain(args.cochain1, s1)
    s2 = _load(args, args.structure2)
    g2 = formats.load_cochain(args.cochain2, s2)
    if s1.field != s2.field:
        raise UsageError("the two structures are over different fields")
    payload = {"command": "pair",
               "inputs": {"left": formats.digest(formats.cochain_to_json(g1)),
                          "right": formats.digest(formats.cochain_to_json(g2))}}
    for s in (s1, s2):
        if not _require_valid(s, out, payload):
            payload["passed"] = False
            out.finish(payload)
            return 1
    try:
        prod = pairing.pair_cocycles(g1, g2, verify=False)
    except pairing.PairingError as e:
        out.line(f"FAIL input  {e}")
        payload.update({"passed": False, "error": str(e)})
        out.finish(payload)
        return 1
    t, p = prod.structure, prod.degree
    checks = [
        structures.Verdict("output_cyclic", complexes.in_subcomplex(t, "cyclic", prod)),
        structures.Verdict("output_cocycle", not complexes.hochschild_delta(t, p).apply(prod.values)),
    ]
    if g1.degree == 0 and g2.degree == 0:
        ok = True
        for c1, c2, a1, a2 in ((c1, c2, a1, a2) for c1 in range(s1.dim_c) for c2 in range(s2.dim_c)
                               for a1 in range(s1.dim_a) for a2 in range(s2.dim_a)):
            want = s1.field.reduce(g1(c1, a1) * g2(c2, a2))
            if prod(c1 * s2.dim_c + c2, a1 * s2.dim_a + a2) != want:
                ok = False
                break
        checks.append(structures.Verdict("degree_zero_factorization", ok))
    report = structures.Report(tuple(checks))
    out.checks(report)
    entries = formats.cochain_to_json(prod)
    out.line(f"output degree {p}, {len(entries['entries'])} nonzero entries")
    for e in entries["entries"]:
        out.line("  " + " ".join(str(x) for x in e))
    payload.update({"output": entries, **report.to_json()})
    out.finish(payload)
    return 0 if report.passed else 1


def cmd_conjugation(args, out: Emitter) -> int:
    s = _load(args, args.structure)
    payload = {"command": "conjugation-check", "max_degree": args.max_degree}
    if not _require_valid(s, out, payload):
        payload["passed"] = False
        out.finish(payload)
        return 1
    x = formats.parse_vector(args.unit, s.dim_a, s.field, "--unit")
    y = formats.parse_vector(args.inverse, s.dim_a, s.field, "--inverse")
    unit = structures.unit_check(s, x, y)
    out.checks(unit)
    checks = list(unit.verdicts)
    classes = []
    if unit.passed:
        m = structures.inner_automorphism(s, x, y)
        mr = structures.check_morphism(m)
        out.checks(mr, "inner_automorphism.")
        checks.extend(structures.Verdict(f"inner_automorphism.{v.name}", v.passed, v.witness) for v in mr.verdicts)
        witness = None
        for n in range(args.max_degree + 1):
            space = CochainSpace(s, n)
            for j, z in enumerate(complexes.cohomology(s, "cyclic", n).cocycle_basis):
                g = Cochain(space, z)
                diff = omega.pullback_cochain(m, g, check=False) + g.scale(-1)
                ok = complexes.is_coboundary(s, "cyclic", diff) is not None
                classes.append({"degree": n, "cocycle": j, "difference_is_coboundary": ok})
                if not ok and witness is None:
                    witness = {"degree": n, "cocycle": j}
        v = structures.Verdict("pullback_fixes_classes", witness is None, witness)
        checks.append(v)
        out.checks(structures.Report((v,)))
    report = structures.Report(tuple(checks))
    payload.update({**report.to_json(), "classes": classes})
    out.finish(payload)
    return 0 if report.passed else 1


# -- parser ------------------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--field", default=d, help="override the file's field: q or fp:P")
    p.add_argument("--output", choices=("text", "json"), default=d if suppress else "text")
    p.add_argument("--threads", type=_positive, default=d if suppress else 1,
                   help="worker cap for column-parallel kernels (output is identical for any value)")
    p.add_argument("--max-dim-guard", type=_positive, default=d,
                   help="refuse chain/cochain spaces larger than this")


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "cocyclic-check": cmd_cocyclic,
    "morita": cmd_morita,
    "trace-check": cmd_trace_check,
    "pair": cmd_pair,
    "conjugation-check": cmd_conjugation,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entwined",
        description="Hochschild and cyclic cohomology of finite-dimensional entwining structures.",
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the entwining axioms")
    p.add_argument("structure")
    _global_flags(p, suppress=True)

    p = sub.add_parser("cohomology", help="dimensions and bases of HH, HC-type or invariant cohomology")
    p.add_argument("structure")
    p.add_argument("--theory", choices=complexes.THEORIES, default="hochschild")
    p.add_argument("--max-degree", type=_nonneg, default=4)
    _global_flags(p, suppress=True)

    p = sub.add_parser("cocyclic-check", help="cosimplicial and cyclic identities on invariant cochains")
    p.add_argument("structure")
    p.add_argument("--max-degree", type=_nonneg, default=3)
    _global_flags(p, suppress=True)

    p = sub.add_parser("morita", help="matrix-ring homotopies and dimension comparison")
    p.add_argument("structure")
    p.add_argument("--r", type=_positive, default=2)
    p.add_argument("--max-degree", type=_nonneg, default=2)
    _global_flags(p, suppress=True)

    p = sub.add_parser("trace-check", help="entwined trace built from a cyclic cochain")
    p.add_argument("structure")
    p.add_argument("cochain")
    _global_flags(p, suppress=True)

    p = sub.add_parser("pair", help="pair two cyclic cocycles")
    p.add_argument("structure1")
    p.add_argument("cochain1")
    p.add_argument("structure2")
    p.add_argument("cochain2")
    _global_flags(p, suppress=True)

    p = sub.add_parser("conjugation-check", help="inner automorphisms act trivially on cyclic classes")
    p.add_argument("structure")
    p.add_argument("--unit", required=True, help="coordinates of x (comma list, JSON list, or file)")
    p.add_argument("--inverse", required=True, help="coordinates of the inverse of x")
    p.add_argument("--max-degree", type=_nonneg, default=2)
    _global_flags(p, suppress=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    linalg.set_threads(args.threads)
    out = Emitter(args.output)
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, UsageError, FieldError) as e:
        print(f"entwined: error: {e}", file=sys.stderr)
        return 2
    except (structures.StructureError, linalg.DimensionError, complexes.SubcomplexError,
            omega.TruncationError) as e:
        print(f"entwined: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
