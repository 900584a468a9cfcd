"""Reduced biquaternion (commutative quaternion) scalars and matrices.

A reduced biquaternion is ``r = r0 + r1 i + r2 j + r3 k`` with
``i^2 = k^2 = -1``, ``j^2 = 1`` and commutative multiplication.  Writing
``r = d1 + d2 j`` with complex ``d1 = r0 + r1 i`` and ``d2 = r2 + r3 i``
turns every product into complex arithmetic on the pair ``(d1, d2)``:

    (a1 + a2 j)(b1 + b2 j) = (a1 b1 + a2 b2) + (a1 b2 + a2 b1) j

Matrices are stored as the four real component arrays of ``Z = Z1 + Z2 j``.
All vectorizations are column-major.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RBQScalar:
    r0: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    r3: float = 0.0

    @classmethod
    def from_complex(cls, d1: complex, d2: complex = 0.0) -> RBQScalar:
        d1, d2 = complex(d1), complex(d2)
        return cls(d1.real, d1.imag, d2.real, d2.imag)

    @property
    def d1(self) -> complex:
        return complex(self.r0, self.r1)

    @property
    def d2(self) -> complex:
        return complex(self.r2, self.r3)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.r0, self.r1, self.r2, self.r3)

    def __add__(self, other: RBQScalar) -> RBQScalar:
        return RBQScalar(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __sub__(self, other: RBQScalar) -> RBQScalar:
        return RBQScalar(*(a - b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __mul__(self, other: RBQScalar) -> RBQScalar:
        return rbq_mul(self, other)


I = RBQScalar(0.0, 1.0, 0.0, 0.0)
J = RBQScalar(0.0, 0.0, 1.0, 0.0)
K = RBQScalar(0.0, 0.0, 0.0, 1.0)
ONE = RBQScalar(1.0, 0.0, 0.0, 0.0)


def rbq_mul(a: RBQScalar, b: RBQScalar) -> RBQScalar:
    """Commutative product of two reduced biquaternions."""
    a1, a2, b1, b2 = a.d1, a.d2, b.d1, b.d2
    return RBQScalar.from_complex(a1 * b1 + a2 * b2, a1 * b2 + a2 * b1)


def rbq_conj(a: RBQScalar) -> RBQScalar:
    return RBQScalar(a.r0, -a.r1, -a.r2, -a.r3)


def rbq_norm(a: RBQScalar) -> float:
    return math.hypot(a.r0, a.r1, a.r2, a.r3)


def _real(a, shape=None) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    if shape is not None and out.shape != shape:
        raise ValueError(f"component has shape {out.shape}, expected {shape}")
    if out.ndim != 2:
        raise ValueError(f"components must be 2-D, got ndim={out.ndim}")
    out.setflags(write=False)
    return out


class RBQMatrix:
    """An ``m x n`` reduced biquaternion matrix ``Z = Z1 + Z2 j``.

    Stored as ``re1, im1, re2, im2`` with ``Z1 = re1 + i im1`` and
    ``Z2 = re2 + i im2``.  Instances are immutable; the component arrays are
    read-only copies.
    """

    __slots__ = ("re1", "im1", "re2", "im2")

    def __init__(self, re1, im1=None, re2=None, im2=None):
        re1 = _real(re1)
        shape = re1.shape
        zeros = np.zeros(shape)
        object.__setattr__(self, "re1", re1)
        object.__setattr__(self, "im1", _real(zeros if im1 is None else im1, shape))
        object.__setattr__(self, "re2", _real(zeros if re2 is None else re2, shape))
        object.__setattr__(self, "im2", _real(zeros if im2 is None else im2, shape))

    def __setattr__(self, name, value):
        raise AttributeError("RBQMatrix is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_complex(cls, z1, z2=None) -> RBQMatrix:
        z1 = np.atleast_2d(np.asarray(z1, dtype=complex))
        z2 = np.zeros_like(z1) if z2 is None else np.atleast_2d(np.asarray(z2, dtype=complex))
        if z1.shape != z2.shape:
            raise ValueError(f"Z1 shape {z1.shape} != Z2 shape {z2.shape}")
        return cls(z1.real, z1.imag, z2.real, z2.imag)

    @classmethod
    def zeros(cls, m: int, n: int) -> RBQMatrix:
        return cls(np.zeros((m, n)))

    @classmethod
    def identity(cls, n: int) -> RBQMatrix:
        return cls(np.eye(n))

    @classmethod
    def from_scalars(cls, entries) -> RBQMatrix:
        """Build from a nested list of :class:`RBQScalar`."""
        arr = np.array([[s.as_tuple() for s in row] for row in entries], dtype=float)
        return cls(arr[..., 0], arr[..., 1], arr[..., 2], arr[..., 3])

    # -- views ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.re1.shape

    @property
    def m(self) -> int:
        return self.re1.shape[0]

    @property
    def n(self) -> int:
        return self.re1.shape[1]

    @property
    def z1(self) -> np.ndarray:
        return self.re1 + 1j * self.im1

    @property
    def z2(self) -> np.ndarray:
        return self.re2 + 1j * self.im2

    @property
    def T(self) -> RBQMatrix:
        return RBQMatrix(self.re1.T, self.im1.T, self.re2.T, self.im2.T)

    def components(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.re1, self.im1, self.re2, self.im2)

    def entry(self, i: int, j: int) -> RBQScalar:
        return RBQScalar(*(float(c[i, j]) for c in self.components()))

    def times_j(self) -> RBQMatrix:
        """``Z j``: swaps the two complex parts, ``(Z1, Z2) -> (Z2, Z1)``."""
        return RBQMatrix(self.re2, self.im2, self.re1, self.im1)

    def frobenius(self) -> float:
        return math.sqrt(sum(float(np.sum(c * c)) for c in self.components()))

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: RBQMatrix) -> RBQMatrix:
        _check_same_shape(self, other)
        return RBQMatrix(*(a + b for a, b in zip(self.components(), other.components())))

    def __sub__(self, other: RBQMatrix) -> RBQMatrix:
        _check_same_shape(self, other)
        return RBQMatrix(*(a - b for a, b in zip(self.components(), other.components())))

    def __neg__(self) -> RBQMatrix:
        return RBQMatrix(*(-c for c in self.components()))

    def __mul__(self, alpha) -> RBQMatrix:
        if isinstance(alpha, RBQScalar):
            return scalar_mul(alpha, self)
        alpha = float(alpha)
        return RBQMatrix(*(alpha * c for c in self.components()))

    __rmul__ = __mul__

    def __matmul__(self, other: RBQMatrix) -> RBQMatrix:
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RBQMatrix) or other.shape != self.shape:
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.components(), other.components()))

    __hash__ = None

    def __repr__(self) -> str:
        return f"RBQMatrix(shape={self.shape}, Z1={self.z1!r}, Z2={self.z2!r})"


def _check_same_shape(a: RBQMatrix, b: RBQMatrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def scalar_mul(q: RBQScalar, Y: RBQMatrix) -> RBQMatrix:
    q1, q2 = q.d1, q.d2
    return RBQMatrix.from_complex(q1 * Y.z1 + q2 * Y.z2, q1 * Y.z2 + q2 * Y.z1)


def mat_mul(Y: RBQMatrix, Z: RBQMatrix) -> RBQMatrix:
    """Matrix product ``(YZ)1 = Y1 Z1 + Y2 Z2``, ``(YZ)2 = Y1 Z2 + Y2 Z1``."""
    if Y.n != Z.m:
        raise ValueError(f"inner dimensions disagree: {Y.shape} @ {Z.shape}")
    y1, y2, z1, z2 = Y.z1, Y.z2, Z.z1, Z.z2
    return RBQMatrix.from_complex(y1 @ z1 + y2 @ z2, y1 @ z2 + y2 @ z1)


def psi(Z: RBQMatrix) -> np.ndarray:
    """Complex ``m x 2n`` representation ``[Z1, Z2]``."""
    return np.hstack([Z.z1, Z.z2])


def hrep(Z: RBQMatrix) -> np.ndarray:
    """Complex ``2m x 2n`` block representation ``[[Z1, Z2], [Z2, Z1]]``."""
    z1, z2 = Z.z1, Z.z2
    return np.block([[z1, z2], [z2, z1]])


def vec_real(A: np.ndarray) -> np.ndarray:
    """Column-major vectorization of an ordinary (real or complex) matrix."""
    return np.asarray(A).reshape(-1, order="F")


def unvec(v: np.ndarray, m: int, n: int) -> np.ndarray:
    return np.asarray(v).reshape((m, n), order="F")


def vec(Z: RBQMatrix) -> list[RBQScalar]:
    """Column-major list of the ``mn`` entries of ``Z``."""
    return [Z.entry(i, j) for j in range(Z.n) for i in range(Z.m)]


def vec_arrow(Z: RBQMatrix) -> np.ndarray:
    """Real vector of length ``4mn``: ``[vec Re Z1; vec Im Z1; vec Re Z2; vec Im Z2]``."""
    return np.concatenate([vec_real(c) for c in Z.components()])


def unvec_arrow(v: np.ndarray, m: int, n: int) -> RBQMatrix:
    v = np.asarray(v, dtype=float)
    if v.shape != (4 * m * n,):
        raise ValueError(f"expected vector of length {4 * m * n}, got {v.shape}")
    parts = v.reshape(4, m * n)
    return RBQMatrix(*(unvec(p, m, n) for p in parts))


def vec_psi(Z: RBQMatrix) -> np.ndarray:
    """Complex vector of length ``2mn``: ``vec([Z1, Z2]) = [vec Z1; vec Z2]``."""
    return np.concatenate([vec_real(Z.z1), vec_real(Z.z2)])


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A), np.asarray(B))


def commutation_matrix(n: int, s: int) -> np.ndarray:
    """Permutation ``Q`` with ``Q vec(X) = vec(X^T)`` for every ``n x s`` matrix ``X``."""
    if n < 1 or s < 1:
        raise ValueError("commutation matrix needs n, s >= 1")
    # vec(X)[i + j n] = X[i, j] = X^T[j, i] = vec(X^T)[j + i s]
    idx = np.arange(n * s)
    i, j = idx % n, idx // n
    Q = np.zeros((n * s, n * s))
    Q[j + i * s, idx] = 1.0
    return Q


def w_matrix(n: int, s: int) -> np.ndarray:
    """Complex ``2ns x 4ns`` map from ``vec_arrow(X)`` to ``vec_psi(X)``."""
    I_ = np.eye(n * s)
    O = np.zeros((n * s, n * s))
    return np.block([[I_, 1j * I_, O, O], [O, O, I_, 1j * I_]])


def s_matrix(n: int, s: int) -> np.ndarray:
    """Real ``2ns x 2ns`` map from ``vec_psi(X)`` to ``vec_psi(X^T)``."""
    Q = commutation_matrix(n, s)
    O = np.zeros_like(Q)
    return np.block([[Q, O], [O, Q]])


def vec_psi_operator(A: RBQMatrix, B: RBQMatrix) -> np.ndarray:
    """Complex matrix ``h(B)^T (x) A1 + h(Bj)^T (x) A2``.

    Applied to ``vec_psi(X)`` it yields ``vec_psi(A X B)``.
    """
    return kron(hrep(B).T, A.z1) + kron(hrep(B.times_j()).T, A.z2)
