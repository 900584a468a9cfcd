"""Structured matrices and pencils from partial eigendata.

``pdiep`` finds a structured ``M`` with ``M u_i = lambda_i u_i`` in the
least-squares sense by solving ``I M Phi = Phi Lambda``.  ``gpdiep`` finds a
structured pencil with ``M u_i = lambda_i N u_i``; the system
``I M Phi - I N Phi Lambda = 0`` is homogeneous, so a normalized element of
the nullspace is returned instead of the (zero) min-norm solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lsq
from .rbme import MultiTermProblem, SolveReport, Term, assemble_multi, solve_multi
from .rbq import RBQMatrix, vec_real
from .structures import (
    FieldMask,
    LStructure,
    StructureKind,
    basis_real,
    lift,
    unpack,
)

NO_PENCIL = "no nontrivial structured pencil"


@dataclass(frozen=True)
class EigenData:
    lambdas: np.ndarray
    vectors: np.ndarray
    field: FieldMask = FieldMask.COMPLEX

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lambdas, dtype=complex))
        vec = np.asarray(self.vectors, dtype=complex)
        if vec.ndim == 1:
            vec = vec[:, None]
        if lam.ndim != 1 or lam.size < 1:
            raise ValueError("eigendata needs at least one eigenvalue")
        n, k = vec.shape
        if k != lam.size:
            raise ValueError(f"{lam.size} eigenvalues but {k} eigenvectors")
        if k > n:
            raise ValueError(f"k = {k} eigenpairs exceeds the dimension n = {n}")
        if np.any(np.linalg.norm(vec, axis=0) == 0):
            raise ValueError("eigenvectors must be nonzero")
        if isinstance(self.field, str):
            object.__setattr__(self, "field", FieldMask.parse(self.field))
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "vectors", vec)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def k(self) -> int:
        return self.lambdas.size

    def subset(self, idx) -> EigenData:
        idx = list(idx)
        return EigenData(self.lambdas[idx], self.vectors[:, idx], self.field)


@dataclass
class PencilSolution:
    M: RBQMatrix
    N: RBQMatrix
    residuals: np.ndarray
    nontrivial: bool
    nullity: int
    normalization: str
    message: str = ""
    report_system: lsq.StackedSystem | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {
            "nontrivial": self.nontrivial,
            "nullspace_dim": self.nullity,
            "normalization": self.normalization,
            "message": self.message,
            "residuals": [float(r) for r in self.residuals],
        }


def _rbq(A) -> RBQMatrix:
    return A if isinstance(A, RBQMatrix) else RBQMatrix.from_complex(A)


def eigen_residuals(M, data: EigenData, N=None) -> np.ndarray:
    """``||M u_i - lambda_i N u_i||_2`` for every prescribed pair (``N = I`` if omitted)."""
    U = RBQMatrix.from_complex(data.vectors)
    NU = U if N is None else _rbq(N) @ U
    R = _rbq(M) @ U - NU @ RBQMatrix.from_complex(np.diag(data.lambdas))
    return np.sqrt(np.sum(np.abs(R.z1) ** 2 + np.abs(R.z2) ** 2, axis=0))


def _structure_for(data: EigenData, kind) -> LStructure:
    if isinstance(kind, LStructure):
        if kind.shape != (data.n, data.n):
            raise ValueError(f"structure {kind.describe()} does not fit n = {data.n}")
        return kind
    return lift(kind, data.field, data.n, data.n)


def pdiep(data: EigenData, kind: StructureKind | str | LStructure,
          tol: float = lsq.DEFAULT_TOL) -> SolveReport:
    """Structured ``M`` minimizing ``||M Phi - Phi Lambda||_F`` (min-norm among minimizers).

    ``kind`` may also be a ready-made :class:`LStructure` (e.g. a custom one).
    """
    n = data.n
    L = _structure_for(data, kind)
    Phi = RBQMatrix.from_complex(data.vectors)
    E = RBQMatrix.from_complex(data.vectors * data.lambdas)
    return solve_multi(MultiTermProblem([Term(RBQMatrix.identity(n), Phi, L)], E), tol)


def gpdiep_problem(data: EigenData, L: LStructure) -> MultiTermProblem:
    n = data.n
    Phi = RBQMatrix.from_complex(data.vectors)
    PhiLam = RBQMatrix.from_complex(data.vectors * data.lambdas)
    return MultiTermProblem(
        [Term(RBQMatrix.identity(n), Phi, L), Term(-RBQMatrix.identity(n), PhiLam, L)],
        RBQMatrix.zeros(n, data.k),
    )


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    big = np.flatnonzero(np.abs(v) > 1e-12 * np.max(np.abs(v)))
    return -v if big.size and v[big[0]] < 0 else v


def gpdiep(data: EigenData, kind: StructureKind | str | LStructure,
           tol: float | None = None) -> PencilSolution:
    """Structured pencil ``(M, N)`` with ``M u_i = lambda_i N u_i`` and ``||(M, N)||_F = 1``.

    The pencil is the first right singular vector of the stacked system that
    falls inside the numerical nullspace (singular values in LAPACK's
    descending order), with its first significant entry made positive.
    ``tol`` is the relative rank cutoff; ``None`` uses ``max(shape) * eps``.
    """
    n = data.n
    L = _structure_for(data, kind)
    sys = assemble_multi(gpdiep_problem(data, L))
    A = sys.matrix
    _, s, vt = np.linalg.svd(A, full_matrices=True)
    rtol = max(A.shape) * lsq.EPS if tol is None else tol
    rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    nullity = sys.p - rank
    if nullity == 0:
        zero = RBQMatrix.zeros(n, n)
        return PencilSolution(zero, zero, np.zeros(data.k), False, 0, "none", NO_PENCIL, sys)

    v = _canonical_sign(vt[rank])
    M = unpack(v[:L.p], L)
    N = unpack(v[L.p:], L)
    scale = np.hypot(M.frobenius(), N.frobenius())
    M, N = M * (1.0 / scale), N * (1.0 / scale)
    return PencilSolution(
        M, N, eigen_residuals(M, data, N), True, nullity, "||(M, N)||_F = 1", "", sys
    )


def _check_pair_shapes(A, B, C, D, E) -> int:
    n = A.shape[1]
    if C.shape[1] != n or B.shape[0] != n or D.shape[0] != n:
        raise ValueError(f"coefficient shapes do not fit square unknowns of order {n}")
    if A.shape[0] != E.shape[0] or C.shape[0] != E.shape[0] or B.shape[1] != E.shape[1] \
            or D.shape[1] != E.shape[1]:
        raise ValueError(f"products do not chain to E of shape {E.shape}")
    return n


def solve_complex_hankel_pair(A, B, C, D, E):
    """Complex Hankel ``X, Y`` minimizing ``||A X B + C Y D - E||_F`` (min-norm
    in the parameters ``[vec_H Re X; vec_H Im X; vec_H Re Y; vec_H Im Y]``)."""
    A, B, C, D, E = (np.atleast_2d(np.asarray(a, dtype=complex)) for a in (A, B, C, D, E))
    n = _check_pair_shapes(A, B, C, D, E)
    KH = basis_real(StructureKind.HANKEL, n)
    split = np.hstack([KH, 1j * KH])  # [I, iI] diag(K_H, K_H)
    W = np.kron(B.T, A) @ split
    J = np.kron(D.T, C) @ split
    sys = lsq.StackedSystem(
        np.hstack([W.real, J.real]),
        np.hstack([W.imag, J.imag]),
        np.concatenate([vec_real(E).real, vec_real(E).imag]),
    )
    x = lsq.solve_min_norm(sys)
    q = KH.shape[1]
    X = KH @ (x[:q] + 1j * x[q:2 * q])
    Y = KH @ (x[2 * q:3 * q] + 1j * x[3 * q:])
    return X.reshape(n, n, order="F"), Y.reshape(n, n, order="F")


def solve_real_symtoeplitz_pair(A, B, C, D, E):
    """Real symmetric Toeplitz ``X, Y`` minimizing ``||A X B + C Y D - E||_F``."""
    arrays = [np.atleast_2d(np.asarray(a)) for a in (A, B, C, D, E)]
    if any(np.iscomplexobj(a) and np.any(np.imag(a) != 0) for a in arrays):
        raise ValueError("symmetric Toeplitz pair solver takes real data only")
    A, B, C, D, E = (a.real.astype(float) for a in arrays)
    n = _check_pair_shapes(A, B, C, D, E)
    KST = basis_real(StructureKind.SYM_TOEPLITZ, n)
    Qt = np.hstack([np.kron(B.T, A) @ KST, np.kron(D.T, C) @ KST])
    sys = lsq.StackedSystem(Qt, np.zeros((0, Qt.shape[1])), vec_real(E))
    x = lsq.solve_min_norm(sys)
    X = (KST @ x[:n]).reshape(n, n, order="F")
    Y = (KST @ x[n:]).reshape(n, n, order="F")
    return X, Y
