"""JSON matrix and problem files.

A matrix file holds ``m``, ``n`` and the row-major real arrays ``re1``,
``im1``, ``re2``, ``im2`` of ``X = (re1 + i im1) + (re2 + i im2) j``; all but
``re1`` may be omitted.  A problem file names an equation family, a
structure and the coefficient matrices (paths relative to the problem file,
or inline matrix objects).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .inverse import EigenData
from .rbme import CoupledProblem, MultiTermProblem, Term, TransposeProblem
from .rbq import RBQMatrix
from .structures import FieldMask, LStructure, StructureError, StructureKind, lift

FAMILIES = ("multi", "transpose", "coupled", "pdiep", "gpdiep")
_PARTS = ("re1", "im1", "re2", "im2")


class ValidationError(ValueError):
    """Bad input file; the message carries the file, line and key."""


def _line_of(text: str | None, key: str) -> int | None:
    if not text:
        return None
    leaf = re.split(r"[.\[]", key)[-1].rstrip("]")
    m = re.search(r'"%s"\s*:' % re.escape(leaf), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


class _Source:
    """Location context for diagnostics."""

    def __init__(self, path: Path | None, text: str | None):
        self.path = path
        self.text = text

    def error(self, key: str, msg: str) -> ValidationError:
        where = str(self.path) if self.path else "<inline>"
        line = _line_of(self.text, key)
        if line is not None:
            where += f":{line}"
        return ValidationError(f"{where}: key '{key}': {msg}")


def _load_json(path: Path) -> tuple[Any, str]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}:{exc.lineno}: malformed JSON: {exc.msg} (column {exc.colno})"
        ) from None


# -- matrices ---------------------------------------------------------------

def _part(doc: dict, name: str, m: int, n: int, src: _Source, key: str) -> np.ndarray:
    rows = doc.get(name)
    if rows is None:
        return np.zeros((m, n))
    if not isinstance(rows, list) or len(rows) != m:
        raise src.error(f"{key}.{name}", f"expected {m} rows")
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise src.error(f"{key}.{name}", f"row {r} has {got} entries, expected {n}")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise src.error(f"{key}.{name}", f"row {r} holds non-numeric value {v!r}")
    out = np.array(rows, dtype=float).reshape(m, n)
    if not np.all(np.isfinite(out)):
        raise src.error(f"{key}.{name}", "non-finite value")
    return out


def matrix_from_doc(doc: Any, src: _Source | None = None, key: str = "matrix") -> RBQMatrix:
    src = src or _Source(None, None)
    if not isinstance(doc, dict):
        raise src.error(key, "expected a matrix object")
    for dim in ("m", "n"):
        v = doc.get(dim)
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise src.error(f"{key}.{dim}", "expected a positive integer")
    if "re1" not in doc:
        raise src.error(f"{key}.re1", "missing")
    m, n = doc["m"], doc["n"]
    re1, im1, re2, im2 = (_part(doc, p, m, n, src, key) for p in _PARTS)
    return RBQMatrix(re1, im1, re2, im2)


def matrix_to_doc(X) -> dict:
    if not isinstance(X, RBQMatrix):
        X = RBQMatrix.from_complex(np.atleast_2d(X))
    doc: dict[str, Any] = {"m": X.m, "n": X.n}
    for name, comp in zip(_PARTS, X.components()):
        doc[name] = comp.tolist()
    return doc


def read_matrix(path) -> RBQMatrix:
    path = Path(path)
    doc, text = _load_json(path)
    return matrix_from_doc(doc, _Source(path, text))


def write_matrix(path, X) -> None:
    # json writes floats with repr, the shortest string that round-trips
    Path(path).write_text(json.dumps(matrix_to_doc(X), indent=1) + "\n")


# -- problems ---------------------------------------------------------------

@dataclass
class ProblemSpec:
    family: str
    problem: Any
    structure: LStructure | None
    source: Path


def _resolve_matrix(ref: Any, src: _Source, key: str) -> RBQMatrix:
    if isinstance(ref, dict):
        return matrix_from_doc(ref, src, key)
    if isinstance(ref, str):
        base = src.path.parent if src.path else Path(".")
        target = base / ref
        if not target.is_file():
            raise src.error(key, f"referenced file {ref!r} not found")
        return read_matrix(target)
    raise src.error(key, "expected a file name or an inline matrix object")


def _int(doc: dict, name: str, src: _Source, key: str) -> int:
    v = doc.get(name)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise src.error(f"{key}.{name}", "expected a positive integer")
    return v


def _structure(doc: Any, src: _Source, key: str, shape=None) -> LStructure:
    if not isinstance(doc, dict):
        raise src.error(key, "expected a structure object")
    try:
        kind = StructureKind.parse(str(doc.get("kind", "")))
        mask = FieldMask.parse(str(doc.get("field", "rbq")))
    except StructureError as exc:
        raise src.error(key, str(exc)) from None
    if "m" in doc or "n" in doc:
        n = _int(doc, "n", src, key)
        m = _int(doc, "m", src, key) if "m" in doc else n
    elif shape is not None:
        m, n = shape
    else:
        raise src.error(f"{key}.n", "missing")
    constraint = None
    if kind is StructureKind.CUSTOM:
        if "constraint" not in doc:
            raise src.error(f"{key}.constraint", "custom structure needs a constraint matrix")
        C = _resolve_matrix(doc["constraint"], src, f"{key}.constraint")
        if np.any(C.im1 != 0) or np.any(C.z2 != 0):
            raise src.error(f"{key}.constraint", "constraint matrix must be real")
        constraint = C.re1
    try:
        return lift(kind, mask, m, n, constraint)
    except StructureError as exc:
        raise src.error(key, str(exc)) from None


def _list(doc: dict, name: str, src: _Source) -> list:
    v = doc.get(name)
    if not isinstance(v, list) or not v:
        raise src.error(name, "expected a non-empty list")
    return v


def _eigendata(doc: Any, mask: FieldMask, src: _Source) -> EigenData:
    if not isinstance(doc, dict):
        raise src.error("eigendata", "expected an object with lambdas and vectors")
    lam = doc.get("lambdas")
    if not isinstance(lam, dict) or not isinstance(lam.get("re"), list):
        raise src.error("eigendata.lambdas", "expected {\"re\": [...], \"im\": [...]}")
    re_ = lam["re"]
    im_ = lam.get("im", [0.0] * len(re_))
    if not isinstance(im_, list) or len(im_) != len(re_):
        raise src.error("eigendata.lambdas", "re and im differ in length")
    try:
        lambdas = np.array(re_, dtype=float) + 1j * np.array(im_, dtype=float)
    except (TypeError, ValueError):
        raise src.error("eigendata.lambdas", "non-numeric value") from None
    if "vectors" not in doc:
        raise src.error("eigendata.vectors", "missing")
    V = _resolve_matrix(doc["vectors"], src, "eigendata.vectors")
    if np.any(V.z2 != 0):
        raise src.error("eigendata.vectors", "eigenvectors must be complex (no j part)")
    try:
        return EigenData(lambdas, V.z1, mask)
    except ValueError as exc:
        raise src.error("eigendata", str(exc)) from None


def problem_from_doc(doc: Any, src: _Source) -> ProblemSpec:
    if not isinstance(doc, dict):
        raise src.error("family", "problem file must hold a JSON object")
    family = doc.get("family")
    if family not in FAMILIES:
        raise src.error("family", f"expected one of {', '.join(FAMILIES)}, got {family!r}")
    path = src.path or Path("<inline>")
    try:
        if family in ("pdiep", "gpdiep"):
            L = _structure(doc.get("structure"), src, "structure")
            if L.m != L.n:
                raise src.error("structure", "eigenproblems need a square structure")
            data = _eigendata(doc.get("eigendata"), L.mask, src)
            if data.n != L.n:
                raise src.error("eigendata.vectors", f"{data.n} rows but structure has n = {L.n}")
            return ProblemSpec(family, (data, L), L, path)

        if family == "multi":
            E = _resolve_matrix(doc.get("E"), src, "E")
            default = doc.get("structure")
            terms = []
            for k, t in enumerate(_list(doc, "terms", src)):
                key = f"terms[{k}]"
                if not isinstance(t, dict):
                    raise src.error(key, "expected an object with A and B")
                A = _resolve_matrix(t.get("A"), src, f"{key}.A")
                B = _resolve_matrix(t.get("B"), src, f"{key}.B")
                sdoc = t.get("structure", default)
                if sdoc is None:
                    raise src.error(f"{key}.structure", "no structure given")
                L = _structure(sdoc, src, f"{key}.structure", shape=(A.n, B.m))
                terms.append(Term(A, B, L))
            return ProblemSpec(family, MultiTermProblem(terms, E), None, path)

        L = None
        if family == "transpose":
            E = _resolve_matrix(doc.get("E"), src, "E")
            direct = [
                (_resolve_matrix(t.get("A"), src, f"terms[{k}].A"),
                 _resolve_matrix(t.get("B"), src, f"terms[{k}].B"))
                for k, t in enumerate(doc.get("terms") or []) if isinstance(t, dict)
            ]
            transposed = [
                (_resolve_matrix(t.get("C"), src, f"transpose_terms[{k}].C"),
                 _resolve_matrix(t.get("D"), src, f"transpose_terms[{k}].D"))
                for k, t in enumerate(doc.get("transpose_terms") or []) if isinstance(t, dict)
            ]
            if not direct and not transposed:
                raise src.error("terms", "need at least one term or transpose term")
            shape = (direct[0][0].n, direct[0][1].m) if direct else (
                transposed[0][1].m, transposed[0][0].n)
            L = _structure(doc.get("structure"), src, "structure", shape=shape)
            return ProblemSpec(family, TransposeProblem(direct, transposed, L, E), L, path)

        eqs = []
        for k, t in enumerate(_list(doc, "equations", src)):
            key = f"equations[{k}]"
            if not isinstance(t, dict):
                raise src.error(key, "expected an object with A, B and E")
            eqs.append(tuple(_resolve_matrix(t.get(x), src, f"{key}.{x}") for x in "ABE"))
        L = _structure(doc.get("structure"), src, "structure", shape=(eqs[0][0].n, eqs[0][1].m))
        return ProblemSpec(family, CoupledProblem(eqs, L), L, path)
    except ValidationError:
        raise
    except (StructureError, ValueError) as exc:
        # shape chaining is checked by the problem constructors
        raise src.error("terms" if family != "coupled" else "equations", str(exc)) from None


def read_problem(path) -> ProblemSpec:
    path = Path(path)
    doc, text = _load_json(path)
    return problem_from_doc(doc, _Source(path, text))
