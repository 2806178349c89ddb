"""JSON files for structures and cochains.

Scalars are strings ("3", "-1/2", or residues mod p); output is canonical
(sorted keys, sorted sparse entries) so equal objects serialize identically.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .complexes import Cochain, CochainSpace
from .linalg import QQ, DimensionError, ExactField, FieldError, accumulate
from .structures import (
    EntwiningMap,
    EntwiningStructure,
    FiniteAlgebra,
    FiniteCoalgebra,
    StructureError,
)


class ParseError(ValueError):
    """Malformed input; ``where`` is ``line:col`` for JSON syntax or a JSON path."""

    def __init__(self, message: str, where: str = "", source: str = ""):
        self.message = message
        self.where = where
        self.source = source
        loc = ":".join(x for x in (source, where) if x)
        super().__init__(f"{loc}: {message}" if loc else message)


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"{e.lineno}:{e.colno}", source) from None


def read_json(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read file ({e.strerror})", "", str(path)) from None
    return _load_json(text, str(path))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# -- scalars and small helpers -----------------------------------------------------------

def _obj(data, path, source) -> dict:
    if not isinstance(data, dict):
        raise ParseError("expected an object", path, source)
    return data


def _get(data: dict, key: str, path: str, source: str, kind=None):
    if key not in data:
        raise ParseError(f"missing key {key!r}", path, source)
    v = data[key]
    if kind is not None and (not isinstance(v, kind) or (kind is int and isinstance(v, bool))):
        raise ParseError(f"{key!r} has the wrong type", f"{path}.{key}", source)
    return v


def _scalar(raw, path: str, source: str):
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ParseError("scalars must be strings or integers", path, source)
    try:
        return Fraction(raw.strip() if isinstance(raw, str) else raw)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad scalar {raw!r}", path, source) from None


def _index(raw, bound: int, path: str, source: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError("indices must be integers", path, source)
    if not 0 <= raw < bound:
        raise ParseError(f"index {raw} outside 0..{bound - 1}", path, source)
    return raw


def _dim(data, key, path, source) -> int:
    d = _get(data, key, path, source, int)
    if d < 1:
        raise ParseError("dimension must be positive", f"{path}.{key}", source)
    return d


def _field_from(desc, path, source) -> ExactField:
    if not isinstance(desc, str):
        raise ParseError("field must be a string like 'Q' or 'fp:7'", path, source)
    try:
        return ExactField.from_descriptor(desc)
    except (FieldError, ValueError) as e:
        raise ParseError(str(e), path, source) from None


def _coerce(F: ExactField, x: Fraction, path: str, source: str, overridden: bool):
    if overridden and x.denominator != 1:
        raise ParseError("field override needs integral structure constants", path, source)
    if not F.is_rational and x.denominator % F.characteristic == 0:
        raise ParseError(f"denominator divisible by {F.characteristic}", path, source)
    return F.reduce(x)


# -- structures ---------------------------------------------------------------------------

def structure_from_json(data, field: ExactField | None = None, source: str = "") -> EntwiningStructure:
    data = _obj(data, "$", source)
    F = _field_from(_get(data, "field", "$", source), "$.field", source)
    overridden = field is not None and field != F
    if field is not None:
        F = field

    alg = _obj(_get(data, "algebra", "$", source), "$.algebra", source)
    dA = _dim(alg, "dim", "$.algebra", source)
    unital = alg.get("unital", True)
    if not isinstance(unital, bool):
        raise ParseError("'unital' must be a boolean", "$.algebra.unital", source)
    mul: dict = {}
    for t, entry in enumerate(_get(alg, "mul", "$.algebra", source, list)):
        p = f"$.algebra.mul[{t}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError("product entries are [i, j, k, value]", p, source)
        i, j, k = (_index(entry[q], dA, f"{p}[{q}]", source) for q in range(3))
        v = _coerce(F, _scalar(entry[3], f"{p}[3]", source), f"{p}[3]", source, overridden)
        accumulate(F, mul.setdefault((i, j), {}), k, v)
    unit = None
    if unital:
        raw = _get(alg, "unit", "$.algebra", source, list)
        if len(raw) != dA:
            raise ParseError(f"unit needs {dA} coordinates", "$.algebra.unit", source)
        unit = {}
        for k, x in enumerate(raw):
            v = _coerce(F, _scalar(x, f"$.algebra.unit[{k}]", source), f"$.algebra.unit[{k}]", source, overridden)
            if v:
                unit[k] = v

    co = _obj(_get(data, "coalgebra", "$", source), "$.coalgebra", source)
    dC = _dim(co, "dim", "$.coalgebra", source)
    comul: dict = {}
    for t, entry in enumerate(_get(co, "comul", "$.coalgebra", source, list)):
        p = f"$.coalgebra.comul[{t}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError("coproduct entries are [k, i, j, value]", p, source)
        k, i, j = (_index(entry[q], dC, f"{p}[{q}]", source) for q in range(3))
        v = _coerce(F, _scalar(entry[3], f"{p}[3]", source), f"{p}[3]", source, overridden)
        accumulate(F, comul.setdefault(k, {}), (i, j), v)
    raw = _get(co, "counit", "$.coalgebra", source, list)
    if len(raw) != dC:
        raise ParseError(f"counit needs {dC} coordinates", "$.coalgebra.counit", source)
    counit = {}
    for k, x in enumerate(raw):
        v = _coerce(F, _scalar(x, f"$.coalgebra.counit[{k}]", source), f"$.coalgebra.counit[{k}]", source, overridden)
        if v:
            counit[k] = v

    psi: dict = {}
    for t, entry in enumerate(_get(data, "psi", "$", source, list)):
        p = f"$.psi[{t}]"
        if not isinstance(entry, list) or len(entry) != 5:
            raise ParseError("psi entries are [c, a, a', c', value]", p, source)
        i = _index(entry[0], dC, f"{p}[0]", source)
        j = _index(entry[1], dA, f"{p}[1]", source)
        pp = _index(entry[2], dA, f"{p}[2]", source)
        q = _index(entry[3], dC, f"{p}[3]", source)
        v = _coerce(F, _scalar(entry[4], f"{p}[4]", source), f"{p}[4]", source, overridden)
        accumulate(F, psi.setdefault((i, j), {}), (pp, q), v)

    name = data.get("name", "")
    if not isinstance(name, str):
        raise ParseError("'name' must be a string", "$.name", source)
    try:
        return EntwiningStructure(
            F,
            FiniteAlgebra(F, dA, mul, unit, unital),
            FiniteCoalgebra(F, dC, comul, counit),
            EntwiningMap(psi),
            name,
        )
    except (StructureError, DimensionError) as e:
        raise ParseError(str(e), "$", source) from None


def structure_to_json(s: EntwiningStructure) -> dict:
    F = s.field
    fmt = F.format
    A, C = s.algebra, s.coalgebra
    mul = [[i, j, k, fmt(v)] for i in range(A.dim) for j in range(A.dim) for k, v in A.table[i][j]]
    alg = {"dim": A.dim, "unital": A.unital, "mul": mul}
    if A.unital:
        alg["unit"] = [fmt(A.one.get(k, 0)) for k in range(A.dim)]
    comul = [[k, i, j, fmt(v)] for k in range(C.dim) for (i, j), v in C.table[k]]
    co = {"dim": C.dim, "comul": comul, "counit": [fmt(e) for e in C.eps]}
    psi = [[c, a, p, q, fmt(v)] for c in range(s.dim_c) for a in range(s.dim_a) for (p, q), v in s.psi_table[c][a]]
    out = {"field": F.descriptor(), "algebra": alg, "coalgebra": co, "psi": psi}
    if s.name:
        out["name"] = s.name
    return out


def load_structure(path: str | Path, field: ExactField | None = None) -> EntwiningStructure:
    return structure_from_json(read_json(path), field, str(path))


def save_structure(s: EntwiningStructure, path: str | Path) -> None:
    Path(path).write_text(dumps(structure_to_json(s)), encoding="utf-8")


# -- cochains -----------------------------------------------------------------------------

def cochain_from_json(data, s: EntwiningStructure, source: str = "") -> Cochain:
    data = _obj(data, "$", source)
    n = _get(data, "degree", "$", source, int)
    if n < 0:
        raise ParseError("degree must be non-negative", "$.degree", source)
    space = CochainSpace(s, n)
    F = s.field
    vals: dict = {}
    for t, entry in enumerate(_get(data, "entries", "$", source, list)):
        p = f"$.entries[{t}]"
        if not isinstance(entry, list) or len(entry) != n + 3:
            raise ParseError(f"degree {n} entries are [c, a_1..a_{n + 1}, value]", p, source)
        c = _index(entry[0], s.dim_c, f"{p}[0]", source)
        letters = tuple(_index(entry[q], s.dim_a, f"{p}[{q}]", source) for q in range(1, n + 2))
        v = _coerce(F, _scalar(entry[-1], f"{p}[{n + 2}]", source), f"{p}[{n + 2}]", source, False)
        accumulate(F, vals, space.index(c, letters), v)
    return Cochain(space, vals)


def cochain_to_json(g: Cochain) -> dict:
    fmt = g.structure.field.format
    return {"degree": g.degree, "entries": [[c, *letters, fmt(v)] for c, letters, v in g.entries()]}


def vector_entries(g: Cochain) -> list:
    return cochain_to_json(g)["entries"]


def load_cochain(path: str | Path, s: EntwiningStructure) -> Cochain:
    return cochain_from_json(read_json(path), s, str(path))


def save_cochain(g: Cochain, path: str | Path) -> None:
    Path(path).write_text(dumps(cochain_to_json(g)), encoding="utf-8")


def parse_vector(text: str, dim: int, F: ExactField, source: str = "") -> dict:
    """Comma-separated scalars, a JSON list, or a path to a file holding a JSON list."""
    raw = text.strip()
    if raw.startswith("["):
        items = _load_json(raw, source)
    elif Path(raw).is_file():
        items = read_json(raw)
        source = raw
    else:
        items = [x.strip() for x in raw.split(",")]
    if not isinstance(items, list):
        raise ParseError("expected a list of scalars", "$", source)
    if len(items) != dim:
        raise ParseError(f"expected {dim} coordinates, got {len(items)}", "$", source)
    out = {}
    for k, x in enumerate(items):
        v = _coerce(F, _scalar(x, f"$[{k}]", source), f"$[{k}]", source, False)
        if v:
            out[k] = v
    return out


__all__ = [
    "ParseError", "QQ", "dumps", "digest", "read_json",
    "structure_from_json", "structure_to_json", "load_structure", "save_structure",
    "cochain_from_json", "cochain_to_json", "load_cochain", "save_cochain", "parse_vector",
]
