"""Structured least-squares solutions of reduced biquaternion matrix equations."""

from .inverse import EigenData, PencilSolution, gpdiep, pdiep
from .lsq import NumericalError, StackedSystem
from .rbme import (
    CoupledProblem,
    MultiTermProblem,
    SolveReport,
    Term,
    TransposeProblem,
    solve_coupled,
    solve_multi,
    solve_transpose,
)
from .rbq import RBQMatrix, RBQScalar
from .structures import FieldMask, LStructure, StructureError, StructureKind, lift

__all__ = [
    "CoupledProblem",
    "EigenData",
    "FieldMask",
    "LStructure",
    "MultiTermProblem",
    "NumericalError",
    "PencilSolution",
    "RBQMatrix",
    "RBQScalar",
    "SolveReport",
    "StackedSystem",
    "StructureError",
    "StructureKind",
    "Term",
    "TransposeProblem",
    "gpdiep",
    "lift",
    "pdiep",
    "solve_coupled",
    "solve_multi",
    "solve_transpose",
]
