"""Command-line front end.

    rbqls solve problem.json [--tol T] [--out DIR] [--format json|text]
    rbqls repro 6.3 [--seed S]
    rbqls structure sym-toeplitz 6 [--field rbq|complex|real] [--full]

Exit codes: 0 ok, 2 invalid input, 3 numerical failure (or a failed repro check).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import lsq, repro
from .inverse import eigen_residuals, gpdiep, pdiep
from .io import ValidationError, read_matrix, read_problem, write_matrix
from .rbme import solve_coupled, solve_multi, solve_transpose
from .structures import FieldMask, StructureError, StructureKind, lift

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# -- solve ------------------------------------------------------------------

def _solve(spec, tol: float):
    """Returns ``(report dict, {file name: matrix})``."""
    fam = spec.family
    report: dict = {"family": fam, "tol": tol}
    if fam == "gpdiep":
        data, L = spec.problem
        sol = gpdiep(data, L)
        report["structure"] = L.describe()
        report.update(sol.as_dict())
        report["eigenpairs"] = _pair_rows(data, sol.residuals)
        return report, {"M.json": sol.M, "N.json": sol.N}

    if fam == "pdiep":
        data, L = spec.problem
        rep = pdiep(data, L, tol)
        files = {"M.json": rep.solutions[0]}
        report["eigenpairs"] = _pair_rows(data, eigen_residuals(rep.solutions[0], data))
    elif fam == "multi":
        rep = solve_multi(spec.problem, tol)
        files = {f"X{k + 1}.json": X for k, X in enumerate(rep.solutions)}
    elif fam == "transpose":
        rep = solve_transpose(spec.problem, tol)
        files = {"X.json": rep.solutions[0]}
    else:
        rep = solve_coupled(spec.problem, tol)
        files = {"X.json": rep.solutions[0]}
    report.update(rep.as_dict())
    return report, files


def _pair_rows(data, residuals) -> list[dict]:
    return [
        {"lambda_re": float(lam.real), "lambda_im": float(lam.imag), "residual": float(r)}
        for lam, r in zip(data.lambdas, residuals)
    ]


def format_text(report: dict) -> str:
    scalars = [(k, v) for k, v in report.items() if not isinstance(v, (list, dict))]
    width = max(len(k) for k, _ in scalars)
    lines = []
    for k, v in scalars:
        if isinstance(v, float):
            v = f"{v:.6e}"
        elif isinstance(v, bool):
            v = str(v).lower()
        lines.append(f"{k.ljust(width)}  {v}")
    if report.get("eigenpairs"):
        lines.append("")
        lines.append(f"{'i':>3}  {'lambda':>30}  {'residual':>12}")
        for i, row in enumerate(report["eigenpairs"], 1):
            lam = complex(row["lambda_re"], row["lambda_im"])
            lines.append(f"{i:>3}  {lam.real:>+14.6e} {lam.imag:>+14.6e}i  {row['residual']:>12.4e}")
    if report.get("outputs"):
        lines.append("")
        lines.append("outputs: " + ", ".join(report["outputs"]))
    return "\n".join(lines) + "\n"


def cmd_solve(args) -> int:
    if not args.tol > 0:
        return _fail(EXIT_INVALID, "--tol must be positive")
    try:
        spec = read_problem(args.problem)
    except (ValidationError, StructureError) as exc:
        return _fail(EXIT_INVALID, str(exc))
    try:
        report, files = _solve(spec, args.tol)
    except (lsq.NumericalError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, f"numerical failure: {exc}")
    except (StructureError, ValueError) as exc:
        return _fail(EXIT_INVALID, f"{spec.source}: {exc}")

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, X in files.items():
            write_matrix(out / name, X)
        report["outputs"] = list(files)
        (out / "report.json").write_text(json.dumps(report, indent=2) + "\n")
        (out / "report.txt").write_text(format_text(report))
    except OSError as exc:
        return _fail(EXIT_INVALID, f"cannot write to {out}: {exc.strerror}")
    sys.stdout.write(json.dumps(report, indent=2) + "\n" if args.format == "json"
                     else format_text(report))
    return EXIT_OK


# -- repro ------------------------------------------------------------------

def cmd_repro(args) -> int:
    if args.id not in repro.EXAMPLES:
        return _fail(EXIT_INVALID, f"unknown example {args.id!r} "
                                   f"(choose from {', '.join(repro.EXAMPLES)})")
    try:
        checks = repro.run(args.id, args.seed)
    except (lsq.NumericalError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, f"numerical failure: {exc}")
    sys.stdout.write(repro.format_report(args.id, args.seed, checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_NUMERICAL


# -- structure --------------------------------------------------------------

def _format_entry(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.6g}"


def cmd_structure(args) -> int:
    try:
        kind = StructureKind.parse(args.kind)
        if args.n < 1 or (args.m is not None and args.m < 1):
            raise StructureError("dimensions must be positive")
        constraint = None
        if kind is StructureKind.CUSTOM:
            if args.constraint is None:
                raise StructureError("custom structure needs --constraint FILE")
            C = read_matrix(args.constraint)
            if np.any(C.im1 != 0) or np.any(C.z2 != 0):
                raise StructureError("constraint matrix must be real")
            constraint = C.re1
        mask = FieldMask.parse(args.field) if args.field else FieldMask.REAL
        L = lift(kind, mask, args.m if args.m is not None else args.n, args.n, constraint)
    except (StructureError, ValidationError) as exc:
        return _fail(EXIT_INVALID, str(exc))

    K = L.basis if args.field else L.real_basis
    label = "M_L" if args.field else "K"
    rank = lsq.numerical_rank(K) if K.size else 0
    print(f"kind: {kind.value}")
    print(f"field: {mask.value if args.field else '-'}")
    print(f"unknown: {L.m} x {L.n}")
    print(f"{label}: {K.shape[0]} x {K.shape[1]}")
    print(f"rank: {rank}")
    if args.full:
        for row in K:
            print(" ".join(_format_entry(v) for v in row))
    return EXIT_OK


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rbqls",
        description="Structured least-squares solutions of reduced biquaternion matrix equations.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file")
    p.add_argument("problem")
    p.add_argument("--tol", type=float, default=lsq.DEFAULT_TOL,
                   help="relative tolerance for rank and consistency tests")
    p.add_argument("--out", default=".", help="directory for solution and report files")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("repro", help="re-run a published numerical example")
    p.add_argument("id", help=", ".join(repro.EXAMPLES))
    p.add_argument("--seed", type=int, default=repro.DEFAULT_SEED)
    p.set_defaults(func=cmd_repro)

    p = sub.add_parser("structure", help="print a structure basis matrix")
    p.add_argument("kind")
    p.add_argument("n", type=int)
    p.add_argument("--m", type=int, default=None, help="row count (full, diagonal, custom)")
    p.add_argument("--field", choices=("rbq", "complex", "real"), default=None,
                   help="print the lifted basis for this field instead of K")
    p.add_argument("--full", action="store_true", help="print every entry")
    p.add_argument("--constraint", default=None, help="constraint matrix file (custom kind)")
    p.set_defaults(func=cmd_structure)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
