"""Structured least-squares solutions of reduced biquaternion matrix equations.

Three equation families reduce to one real system ``[Q1; Q2] x = e``:

* multi-term:  ``sum_l A_l X_l B_l = E`` with one structured unknown per term
* transpose:   ``sum_l A_l X B_l + sum_p C_p X^T D_p = E``
* coupled:     ``A_l X B_l = E_l`` for ``l = 1..r``

Each term contributes ``S = (h(B)^T (x) A1 + h(Bj)^T (x) A2) W M`` so that
``vec_psi(A X B) = S vec_L(X)``; ``Q1``/``Q2`` are the real and imaginary
parts and ``e`` stacks the real and imaginary parts of ``vec_psi(E)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import lsq
from .rbq import RBQMatrix, mat_mul, s_matrix, vec_psi, vec_psi_operator, w_matrix
from .structures import LStructure, unpack


@dataclass(frozen=True)
class Term:
    A: RBQMatrix
    B: RBQMatrix
    L: LStructure | None = None


@dataclass(frozen=True)
class MultiTermProblem:
    terms: Sequence[Term]
    E: RBQMatrix

    def __post_init__(self):
        if not self.terms:
            raise ValueError("at least one term is required")
        for k, t in enumerate(self.terms):
            if t.L is None:
                raise ValueError(f"term {k} has no structure")
            _check_chain(t.A, t.L.shape, t.B, self.E.shape, f"term {k}")


@dataclass(frozen=True)
class TransposeProblem:
    direct: Sequence[tuple[RBQMatrix, RBQMatrix]]
    transposed: Sequence[tuple[RBQMatrix, RBQMatrix]]
    L: LStructure
    E: RBQMatrix

    def __post_init__(self):
        if not self.direct and not self.transposed:
            raise ValueError("at least one term is required")
        n, s = self.L.shape
        for k, (A, B) in enumerate(self.direct):
            _check_chain(A, (n, s), B, self.E.shape, f"direct term {k}")
        for k, (C, D) in enumerate(self.transposed):
            _check_chain(C, (s, n), D, self.E.shape, f"transpose term {k}")


@dataclass(frozen=True)
class CoupledProblem:
    equations: Sequence[tuple[RBQMatrix, RBQMatrix, RBQMatrix]]
    L: LStructure

    def __post_init__(self):
        if not self.equations:
            raise ValueError("at least one equation is required")
        for k, (A, B, E) in enumerate(self.equations):
            _check_chain(A, self.L.shape, B, E.shape, f"equation {k}")


@dataclass
class SolveReport:
    solutions: list[RBQMatrix]
    params: np.ndarray
    residual: float
    stacked_residual: float
    consistent: bool
    unique: bool
    rank: int
    nullity: int
    system: lsq.StackedSystem = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "residual": self.residual,
            "stacked_residual": self.stacked_residual,
            "consistent": self.consistent,
            "unique": self.unique,
            "rank": self.rank,
            "parameters": int(self.params.size),
            "nullspace_dim": self.nullity,
        }


def _check_chain(A: RBQMatrix, x_shape, B: RBQMatrix, out_shape, where: str) -> None:
    n, s = x_shape
    m, t = out_shape
    if A.shape != (m, n) or B.shape != (s, t):
        raise ValueError(
            f"{where}: A{A.shape} X{(n, s)} B{B.shape} does not chain to {out_shape}"
        )


def build_term_matrix(A: RBQMatrix, B: RBQMatrix, L: LStructure) -> np.ndarray:
    """Complex ``2mt x p`` matrix ``S`` with ``vec_psi(A X B) = S pack(X)``."""
    n, s = L.shape
    if A.n != n or B.m != s:
        raise ValueError(f"A{A.shape} and B{B.shape} do not fit an unknown of shape {L.shape}")
    return vec_psi_operator(A, B) @ (w_matrix(n, s) @ L.basis)


def _transpose_term_matrix(C: RBQMatrix, D: RBQMatrix, L: LStructure) -> np.ndarray:
    n, s = L.shape
    return vec_psi_operator(C, D) @ (s_matrix(n, s) @ (w_matrix(n, s) @ L.basis))


def _split(S: np.ndarray, z: np.ndarray) -> lsq.StackedSystem:
    return lsq.StackedSystem(S.real.copy(), S.imag.copy(), np.concatenate([z.real, z.imag]))


def assemble_multi(prob: MultiTermProblem) -> lsq.StackedSystem:
    S = np.hstack([build_term_matrix(t.A, t.B, t.L) for t in prob.terms])
    return _split(S, vec_psi(prob.E))


def assemble_transpose(prob: TransposeProblem) -> lsq.StackedSystem:
    m, t = prob.E.shape
    L = prob.L
    S = np.zeros((2 * m * t, L.p), dtype=complex)
    for A, B in prob.direct:
        S += build_term_matrix(A, B, L)
    for C, D in prob.transposed:
        S += _transpose_term_matrix(C, D, L)
    return _split(S, vec_psi(prob.E))


def assemble_coupled(prob: CoupledProblem) -> lsq.StackedSystem:
    n, s = prob.L.shape
    ops = np.vstack([vec_psi_operator(A, B) for A, B, _ in prob.equations])
    T = ops @ (w_matrix(n, s) @ prob.L.basis)
    z = np.concatenate([vec_psi(E) for _, _, E in prob.equations])
    return _split(T, z)


def _solve(sys: lsq.StackedSystem, structures: Sequence[LStructure], tol: float):
    factors = lsq.partitioned_factors(sys.Q1, sys.Q2)
    x = lsq.solve_min_norm(sys, factors)
    rank = lsq.numerical_rank(sys.matrix, rtol=tol)
    mats = []
    offset = 0
    for L in structures:
        mats.append(unpack(x[offset:offset + L.p], L))
        offset += L.p
    return x, mats, factors, rank


def _report(sys, x, mats, factors, rank, residual, tol) -> SolveReport:
    stacked = sys.residual(x)
    scale = max(1.0, float(np.linalg.norm(sys.e)))
    # both residuals measure the same quantity in different coordinates
    if abs(stacked - residual) > 1e-8 * scale:
        raise lsq.NumericalError(
            f"stacked residual {stacked:.3e} disagrees with equation residual {residual:.3e}"
        )
    return SolveReport(
        solutions=mats,
        params=x,
        residual=residual,
        stacked_residual=stacked,
        consistent=lsq.is_consistent(sys, tol, factors),
        unique=rank == sys.p,
        rank=rank,
        nullity=sys.p - rank,
        system=sys,
    )


def multi_residual(prob: MultiTermProblem, mats: Sequence[RBQMatrix]) -> float:
    total = RBQMatrix.zeros(*prob.E.shape)
    for t, X in zip(prob.terms, mats):
        total = total + mat_mul(mat_mul(t.A, X), t.B)
    return (total - prob.E).frobenius()


def transpose_residual(prob: TransposeProblem, X: RBQMatrix) -> float:
    total = RBQMatrix.zeros(*prob.E.shape)
    for A, B in prob.direct:
        total = total + A @ X @ B
    for C, D in prob.transposed:
        total = total + C @ X.T @ D
    return (total - prob.E).frobenius()


def coupled_residual(prob: CoupledProblem, X: RBQMatrix) -> float:
    return float(np.sqrt(sum((A @ X @ B - E).frobenius() ** 2 for A, B, E in prob.equations)))


def solve_multi(prob: MultiTermProblem, tol: float = lsq.DEFAULT_TOL) -> SolveReport:
    """Min-norm least-squares structured solutions ``X_1, ..., X_r``."""
    sys = assemble_multi(prob)
    x, mats, factors, rank = _solve(sys, [t.L for t in prob.terms], tol)
    return _report(sys, x, mats, factors, rank, multi_residual(prob, mats), tol)


def solve_transpose(prob: TransposeProblem, tol: float = lsq.DEFAULT_TOL) -> SolveReport:
    sys = assemble_transpose(prob)
    x, mats, factors, rank = _solve(sys, [prob.L], tol)
    return _report(sys, x, mats, factors, rank, transpose_residual(prob, mats[0]), tol)


def solve_coupled(prob: CoupledProblem, tol: float = lsq.DEFAULT_TOL) -> SolveReport:
    sys = assemble_coupled(prob)
    x, mats, factors, rank = _solve(sys, [prob.L], tol)
    return _report(sys, x, mats, factors, rank, coupled_residual(prob, mats[0]), tol)
