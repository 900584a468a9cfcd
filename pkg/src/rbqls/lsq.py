"""Least-squares engine for stacked real systems ``[Q1; Q2] x = e``.

The public solver uses the partitioned Moore-Penrose formula

    [Q1; Q2]^+ = [Q1^+ - H^T Q2 Q1^+, H^T]

with

    R = (I - Q1^+ Q1) Q2^T
    Z = (I + (I - R^+ R) Q2 Q1^+ Q1^+T Q2^T (I - R^+ R))^-1
    H = R^+ + (I - R^+ R) Z Q2 Q1^+ Q1^+T (I - Q2^T R^+)

A plain SVD pseudoinverse of the stacked matrix is kept alongside as an
independent check (:func:`direct_pinv`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-10
EPS = np.finfo(float).eps


class NumericalError(RuntimeError):
    """A factorization failed or produced non-finite values."""


def _svd_cutoff(shape: tuple[int, int], smax: float) -> float:
    return max(shape) * EPS * smax


def _svd_kept(A: np.ndarray, atol: float | None = None):
    """Thin SVD factors restricted to singular values above the cutoff."""
    m, n = A.shape
    if A.size == 0:
        return np.zeros((m, 0)), np.zeros(0), np.zeros((0, n))
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    try:
        u, s, vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    cutoff = _svd_cutoff(A.shape, s[0] if s.size else 0.0)
    if atol is not None:
        cutoff = max(cutoff, atol)
    keep = s > cutoff
    return u[:, keep], s[keep], vt[keep]


def pinv(A, atol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the SVD.

    Singular values at or below ``max(m, n) * eps * sigma_max`` are treated as
    zero.  ``atol`` raises that floor to an absolute level, which matters when
    ``A`` is pure rounding noise and its own ``sigma_max`` is meaningless.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    u, s, vt = _svd_kept(A, atol)
    return (vt.T / s) @ u.T


def numerical_rank(A, rtol: float | None = None) -> int:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0:
        return 0
    cutoff = rtol * s[0] if rtol is not None else _svd_cutoff(A.shape, s[0])
    return int(np.sum(s > cutoff))


@dataclass(frozen=True)
class StackedSystem:
    Q1: np.ndarray
    Q2: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        Q1 = np.atleast_2d(np.asarray(self.Q1, dtype=float))
        Q2 = np.asarray(self.Q2, dtype=float)
        if Q2.ndim == 1 and Q2.size == 0:
            Q2 = np.zeros((0, Q1.shape[1]))
        Q2 = np.atleast_2d(Q2)
        e = np.asarray(self.e, dtype=float).reshape(-1)
        if Q1.shape[1] != Q2.shape[1]:
            raise ValueError(f"Q1 has {Q1.shape[1]} columns but Q2 has {Q2.shape[1]}")
        if e.size != Q1.shape[0] + Q2.shape[0]:
            raise ValueError(f"e has length {e.size}, expected {Q1.shape[0] + Q2.shape[0]}")
        object.__setattr__(self, "Q1", Q1)
        object.__setattr__(self, "Q2", Q2)
        object.__setattr__(self, "e", e)

    @property
    def p(self) -> int:
        return self.Q1.shape[1]

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.vstack([self.Q1, self.Q2])

    def residual(self, x) -> float:
        return float(np.linalg.norm(self.matrix @ x - self.e))


@dataclass(frozen=True)
class PartitionedFactors:
    Q1p: np.ndarray
    R: np.ndarray
    Rp: np.ndarray
    Z: np.ndarray
    H: np.ndarray
    P: np.ndarray
    stack_pinv: np.ndarray


def partitioned_factors(Q1, Q2) -> PartitionedFactors:
    Q1 = np.atleast_2d(np.asarray(Q1, dtype=float))
    Q2 = np.asarray(Q2, dtype=float).reshape(-1, Q1.shape[1])
    p = Q1.shape[1]
    b = Q2.shape[0]
    I_p = np.eye(p)

    u1, s1, v1t = _svd_kept(Q1)
    Q1p = (v1t.T / s1) @ u1.T
    # Q1^+ Q1 is the projector onto the row space of Q1
    R = Q2.T - v1t.T @ (v1t @ Q2.T)
    # R is a projected copy of Q2^T: its noise floor follows the input scale
    # times the conditioning of the projector, not the size of R itself.
    scale = max(s1[0] if s1.size else 0.0, np.linalg.norm(Q2, 2) if Q2.size else 0.0)
    kappa = s1[0] / s1[-1] if s1.size else 1.0
    ur, sr, vrt = _svd_kept(R, atol=_svd_cutoff((Q1.shape[0] + b, p), scale) * kappa)
    Rp = (vrt.T / sr) @ ur.T

    I_b = np.eye(b)
    F = I_b - vrt.T @ vrt  # I - R^+ R
    T = Q2 @ Q1p
    FT = F @ T
    # (I - R^+R) Q2 Q1^+ Q1^+T Q2^T (I - R^+R), grouped as (FT)(FT)^T
    inner = I_b + FT @ FT.T
    try:
        Z = scipy.linalg.solve(inner, I_b, assume_a="gen") if b else np.zeros((0, 0))
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalError(f"inner inverse failed: {exc}") from exc
    # F commutes with Z, and Q1^+T (I - Q2^T R^+) = Q1^+T - T^T R^+
    H = Rp + Z @ FT @ (Q1p.T - T.T @ Rp)
    stack_pinv = np.hstack([Q1p - H.T @ T, H.T])
    if not np.all(np.isfinite(stack_pinv)):
        raise NumericalError("partitioned pseudoinverse produced non-finite values")
    P = I_p - v1t.T @ v1t - ur @ ur.T
    return PartitionedFactors(Q1p, R, Rp, Z, H, P, stack_pinv)


def direct_pinv(sys: StackedSystem) -> np.ndarray:
    return pinv(sys.matrix)


def solve_min_norm(sys: StackedSystem, factors: PartitionedFactors | None = None) -> np.ndarray:
    """Least-squares solution of minimal 2-norm."""
    if factors is None:
        factors = partitioned_factors(sys.Q1, sys.Q2)
    return factors.stack_pinv @ sys.e


def general_solution(sys: StackedSystem, y, factors: PartitionedFactors | None = None) -> np.ndarray:
    """Min-norm solution plus the nullspace component ``P y``."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != sys.p:
        raise ValueError(f"y has length {y.size}, expected {sys.p}")
    if factors is None:
        factors = partitioned_factors(sys.Q1, sys.Q2)
    return factors.stack_pinv @ sys.e + factors.P @ y


def is_consistent(sys: StackedSystem, tol: float = DEFAULT_TOL,
                  factors: PartitionedFactors | None = None) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if factors is None:
        factors = partitioned_factors(sys.Q1, sys.Q2)
    gap = np.linalg.norm(sys.matrix @ (factors.stack_pinv @ sys.e) - sys.e)
    return bool(gap <= tol * max(1.0, float(np.linalg.norm(sys.e))))


def is_unique(sys: StackedSystem, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return numerical_rank(sys.matrix, rtol=tol) == sys.p
