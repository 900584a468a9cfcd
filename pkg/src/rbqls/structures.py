"""Linear structures (Toeplitz, Hankel, ...) on reduced biquaternion matrices.

A structure is described by a real basis matrix ``M`` with ``4mn`` rows:
a matrix ``X`` belongs to the structure iff ``vec_arrow(X) = M v`` for some
real parameter vector ``v``.  Built-in kinds replicate one real basis over
the active real components (see :class:`FieldMask`).

Parameter orders for the square kinds, with ``x_d`` the value on the
diagonal ``d = j - i`` (Toeplitz) or anti-diagonal (Hankel):

* Toeplitz:           ``x_{-(n-1)}, ..., x_0, ..., x_{n-1}``, ``X[i, j] = x_{j-i}``
* symmetric Toeplitz: ``x_0, ..., x_{n-1}``, ``X[i, j] = x_{|i-j|}``
* Hankel:             ``h_0, ..., h_{2n-2}``, ``X[i, j] = h_{i+j}`` (0-based)
* circulant:          ``x_0, ..., x_{n-1}``, ``X[i, j] = x_{(i-j) mod n}``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .rbq import RBQMatrix, unvec_arrow, vec_arrow

RANK_RTOL = 1e-10


class StructureError(ValueError):
    """A matrix or shape is incompatible with a structure."""


class StructureKind(enum.Enum):
    TOEPLITZ = "toeplitz"
    SYM_TOEPLITZ = "sym-toeplitz"
    HANKEL = "hankel"
    CIRCULANT = "circulant"
    DIAGONAL = "diagonal"
    FULL = "full"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, name: str) -> StructureKind:
        key = name.strip().lower().replace("_", "-")
        aliases = {"symtoeplitz": "sym-toeplitz", "symmetric-toeplitz": "sym-toeplitz"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise StructureError(f"unknown structure kind {name!r}") from None


SQUARE_KINDS = {
    StructureKind.TOEPLITZ,
    StructureKind.SYM_TOEPLITZ,
    StructureKind.HANKEL,
    StructureKind.CIRCULANT,
}


class FieldMask(enum.Enum):
    """Which real components ``(Re Z1, Im Z1, Re Z2, Im Z2)`` are free."""

    RBQ = "rbq"
    COMPLEX = "complex"
    REAL = "real"

    @property
    def active(self) -> tuple[bool, bool, bool, bool]:
        return {
            FieldMask.RBQ: (True, True, True, True),
            FieldMask.COMPLEX: (True, True, False, False),
            FieldMask.REAL: (True, False, False, False),
        }[self]

    @classmethod
    def parse(cls, name: str) -> FieldMask:
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise StructureError(f"unknown field {name!r} (expected rbq, complex or real)") from None


def _index_map(kind: StructureKind, n: int):
    """Yield ``(row, col, param)`` triples of an ``n x n`` structured matrix."""
    for j in range(n):
        for i in range(n):
            if kind is StructureKind.TOEPLITZ:
                q = j - i + n - 1
            elif kind is StructureKind.SYM_TOEPLITZ:
                q = abs(i - j)
            elif kind is StructureKind.HANKEL:
                q = i + j
            elif kind is StructureKind.CIRCULANT:
                q = (i - j) % n
            else:
                raise StructureError(f"{kind.value} has no index map")
            yield i, j, q


def n_params(kind: StructureKind, m: int, n: int) -> int:
    if kind in (StructureKind.TOEPLITZ, StructureKind.HANKEL):
        return 2 * n - 1
    if kind in (StructureKind.SYM_TOEPLITZ, StructureKind.CIRCULANT):
        return n
    if kind is StructureKind.DIAGONAL:
        return min(m, n)
    if kind is StructureKind.FULL:
        return m * n
    raise StructureError(f"parameter count of {kind.value} depends on its constraint matrix")


def basis_real(kind: StructureKind | str, n: int, m: int | None = None) -> np.ndarray:
    """Real 0/1 basis ``K`` with ``vec(X) = K v`` for the structured real matrix ``X``.

    ``m`` (rows) defaults to ``n`` and may differ only for ``FULL`` and
    ``DIAGONAL``.
    """
    if isinstance(kind, str):
        kind = StructureKind.parse(kind)
    m = n if m is None else m
    if n < 1 or m < 1:
        raise StructureError(f"dimensions must be positive, got {m}x{n}")
    if kind in SQUARE_KINDS and m != n:
        raise StructureError(f"{kind.value} structure needs a square shape, got {m}x{n}")
    if kind is StructureKind.CUSTOM:
        raise StructureError("custom structures are built with basis_custom")

    K = np.zeros((m * n, n_params(kind, m, n)))
    if kind is StructureKind.FULL:
        K[:] = np.eye(m * n)
    elif kind is StructureKind.DIAGONAL:
        for d in range(min(m, n)):
            K[d + d * m, d] = 1.0
    else:
        for i, j, q in _index_map(kind, n):
            K[i + j * n, q] = 1.0
    return K


def null_basis(C: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of the right kernel of ``C`` via the SVD."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    ncol = C.shape[1]
    if C.size == 0:
        return np.eye(ncol)
    _, s, vt = np.linalg.svd(C, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    return vt[rank:].T.copy()


def basis_custom(C, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of ``{vec(X) : C vec(X) = 0}``; ``C`` has ``mn`` columns."""
    return null_basis(C, rtol)


@dataclass(frozen=True, eq=False)
class LStructure:
    """A linear structure on ``m x n`` reduced biquaternion matrices."""

    m: int
    n: int
    kind: StructureKind
    mask: FieldMask
    basis: np.ndarray = field(repr=False)
    real_basis: np.ndarray = field(repr=False)
    constraint: np.ndarray | None = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.basis.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    def describe(self) -> str:
        return f"{self.kind.value}/{self.mask.value} {self.m}x{self.n} (p={self.p})"


def lift(
    kind: StructureKind | str,
    mask: FieldMask | str = FieldMask.RBQ,
    m: int | None = None,
    n: int | None = None,
    constraint=None,
) -> LStructure:
    """Build the ``4mn x p`` basis: block-diagonal copies of the real basis
    on the active components, zero rows on the inactive ones."""
    if isinstance(kind, str):
        kind = StructureKind.parse(kind)
    if isinstance(mask, str):
        mask = FieldMask.parse(mask)
    if m is None and n is None:
        raise StructureError("lift needs at least one dimension")
    m = n if m is None else m
    n = m if n is None else n

    if kind is StructureKind.CUSTOM:
        if constraint is None:
            raise StructureError("custom structure requires a constraint matrix")
        constraint = np.atleast_2d(np.asarray(constraint, dtype=float))
        if constraint.shape[1] != m * n:
            raise StructureError(
                f"constraint matrix has {constraint.shape[1]} columns, expected {m * n}"
            )
        K = basis_custom(constraint)
    else:
        K = basis_real(kind, n, m)

    mn, p = K.shape
    active = mask.active
    n_active = sum(active)
    M = np.zeros((4 * mn, n_active * p))
    col = 0
    for c, on in enumerate(active):
        if on:
            M[c * mn:(c + 1) * mn, col:col + p] = K
            col += p
    M.setflags(write=False)
    K.setflags(write=False)
    return LStructure(m, n, kind, mask, M, K, constraint)


def unpack(v, L: LStructure) -> RBQMatrix:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (L.p,):
        raise StructureError(f"parameter vector has length {v.size}, structure expects {L.p}")
    return unvec_arrow(L.basis @ v, L.m, L.n)


def pack(X: RBQMatrix, L: LStructure, tol: float = 1e-10) -> np.ndarray:
    """Parameters of ``X`` in the structure basis.

    Raises :class:`StructureError` when ``X`` is farther than
    ``tol * max(1, ||X||_F)`` from the structure.
    """
    if X.shape != L.shape:
        raise StructureError(f"matrix shape {X.shape} does not match structure {L.shape}")
    target = vec_arrow(X)
    if L.p == 0:
        v = np.zeros(0)
    else:
        v, *_ = np.linalg.lstsq(L.basis, target, rcond=None)
    violation = float(np.linalg.norm(L.basis @ v - target))
    if violation > tol * max(1.0, float(np.linalg.norm(target))):
        raise StructureError(
            f"matrix is not in the {L.describe()} structure: constraint violation {violation:.3e}"
        )
    return v


def project(X: RBQMatrix, L: LStructure) -> RBQMatrix:
    """Orthogonal (Frobenius) projection of ``X`` onto the structure."""
    if L.p == 0:
        return RBQMatrix.zeros(L.m, L.n)
    v, *_ = np.linalg.lstsq(L.basis, vec_arrow(X), rcond=None)
    return unpack(v, L)


def is_structured_real(A: np.ndarray, kind: StructureKind, atol: float = 0.0) -> bool:
    """Direct entry-equality scan of a real square matrix."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if kind is StructureKind.FULL:
        return True
    if kind is StructureKind.DIAGONAL:
        off = ~np.eye(*A.shape, dtype=bool)
        return bool(np.all(np.abs(A[off]) <= atol))
    if A.shape != (n, n):
        return False
    values: dict[int, float] = {}
    for i, j, q in _index_map(kind, n):
        ref = values.setdefault(q, A[i, j])
        if abs(A[i, j] - ref) > atol:
            return False
    return True


def is_structured(X: RBQMatrix, L: LStructure, atol: float = 1e-12) -> bool:
    """Membership check: structure on every component, inactive components zero."""
    if X.shape != L.shape:
        return False
    for comp, on in zip(X.components(), L.mask.active):
        if not on:
            if np.any(np.abs(comp) > atol):
                return False
        elif L.kind is StructureKind.CUSTOM:
            if np.linalg.norm(L.constraint @ comp.reshape(-1, order="F")) > atol * max(
                1.0, np.linalg.norm(comp)
            ):
                return False
        elif not is_structured_real(comp, L.kind, atol):
            return False
    return True


def toeplitz_params(first_col, first_row) -> np.ndarray:
    """Parameter vector (Toeplitz order) for the Toeplitz matrix with the given
    first column and first row (first entries must agree)."""
    c = np.asarray(first_col)
    r = np.asarray(first_row)
    return np.concatenate([c[:0:-1], r])


def hankel_params(first_col, last_row) -> np.ndarray:
    """Parameter vector (Hankel order) for the Hankel matrix with the given
    first column and last row (``last_row[0]`` must equal ``first_col[-1]``)."""
    c = np.asarray(first_col)
    r = np.asarray(last_row)
    return np.concatenate([c, r[1:]])


def complex_params(values, mask: FieldMask) -> np.ndarray:
    """Stack per-component real parameter blocks from complex parameter values."""
    values = np.asarray(values, dtype=complex)
    if mask is FieldMask.REAL:
        return values.real.copy()
    if mask is FieldMask.COMPLEX:
        return np.concatenate([values.real, values.imag])
    raise StructureError("use rbq_params for the full reduced biquaternion field")


def rbq_params(values1, values2) -> np.ndarray:
    """Parameter vector of ``X1 + X2 j`` from the complex parameters of ``X1`` and ``X2``."""
    a = np.asarray(values1, dtype=complex)
    b = np.asarray(values2, dtype=complex)
    return np.concatenate([a.real, a.imag, b.real, b.imag])
