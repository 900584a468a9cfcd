import itertools

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    ALL_KINDS,
    ALL_MASKS,
    CONSTRAINT_DIAGONAL,
    CONSTRAINT_RELATIONS,
    KST6_DISPLAY,
    KST7_DISPLAY,
    display_to_matrix,
    rand_rbq,
    rand_structured,
)
from rbqls.rbq import RBQMatrix, vec_arrow, vec_real
from rbqls.structures import (
    FieldMask,
    StructureError,
    StructureKind,
    basis_custom,
    basis_real,
    complex_params,
    hankel_params,
    is_structured,
    is_structured_real,
    lift,
    n_params,
    pack,
    project,
    rbq_params,
    toeplitz_params,
    unpack,
)


# -- real bases ------------------------------------------------------------

@pytest.mark.parametrize("n,display", [(6, KST6_DISPLAY), (7, KST7_DISPLAY)])
def test_sym_toeplitz_basis_matches_display(n, display):
    assert np.array_equal(basis_real("sym-toeplitz", n), display_to_matrix(display))


def test_sym_toeplitz_second_block_row():
    K = basis_real(StructureKind.SYM_TOEPLITZ, 6)
    e1_plus_e3 = np.zeros(6)
    e1_plus_e3[[0, 2]] = 1
    assert np.array_equal(K[6:12, 1], e1_plus_e3)


def test_circulant_two():
    K = basis_real("circulant", 2)
    assert np.array_equal(K @ np.array([3.0, 7.0]), [3.0, 7.0, 7.0, 3.0])


def _probe(K, n):
    """Each unit parameter vector must produce its index-map pattern."""
    return [K[:, q].reshape(n, n, order="F") for q in range(K.shape[1])]


@pytest.mark.parametrize("n", range(1, 9))
def test_toeplitz_probes(n):
    for q, X in enumerate(_probe(basis_real("toeplitz", n), n)):
        d = q - (n - 1)  # X[i, j] = x_{j - i}
        expect = np.array([[1.0 if j - i == d else 0.0 for j in range(n)] for i in range(n)])
        assert np.array_equal(X, expect)


@pytest.mark.parametrize("n", range(1, 9))
def test_hankel_probes(n):
    for q, X in enumerate(_probe(basis_real("hankel", n), n)):
        expect = np.array([[1.0 if i + j == q else 0.0 for j in range(n)] for i in range(n)])
        assert np.array_equal(X, expect)


@pytest.mark.parametrize("n", range(1, 9))
def test_circulant_probes(n):
    for q, X in enumerate(_probe(basis_real("circulant", n), n)):
        expect = np.array([[1.0 if (i - j) % n == q else 0.0 for j in range(n)] for i in range(n)])
        assert np.array_equal(X, expect)


def test_toeplitz_three_symbolic():
    K = basis_real("toeplitz", 3)
    assert K.shape == (9, 5)
    v = np.array([10.0, 11.0, 12.0, 13.0, 14.0])  # x_-2 .. x_2
    X = (K @ v).reshape(3, 3, order="F")
    assert np.array_equal(X, scipy.linalg.toeplitz([12.0, 11.0, 10.0], [12.0, 13.0, 14.0]))


def test_hankel_order_matches_constructor():
    c, r = [1.0, 2.0, 3.0, 4.0], [4.0, 5.0, 6.0, 7.0]
    H = scipy.linalg.hankel(c, r)
    K = basis_real("hankel", 4)
    assert np.array_equal(K @ hankel_params(c, r), vec_real(H))


def test_toeplitz_params_match_constructor():
    c, r = [1.0, 2.0, 3.0], [1.0, 5.0, 6.0]
    T = scipy.linalg.toeplitz(c, r)
    assert np.array_equal(basis_real("toeplitz", 3) @ toeplitz_params(c, r), vec_real(T))


def test_full_and_diagonal_rectangular():
    assert np.array_equal(basis_real("full", 3, m=2), np.eye(6))
    D = basis_real("diagonal", 3, m=2)
    assert D.shape == (6, 2)
    X = (D @ np.array([5.0, 6.0])).reshape(2, 3, order="F")
    assert np.array_equal(X, [[5, 0, 0], [0, 6, 0]])


def test_square_kinds_reject_rectangles():
    with pytest.raises(StructureError):
        basis_real("hankel", 3, m=2)
    with pytest.raises(StructureError):
        basis_real("toeplitz", 0)
    with pytest.raises(StructureError):
        basis_real("custom", 3)


def test_parse_kinds_and_masks():
    assert StructureKind.parse("SymToeplitz") is StructureKind.SYM_TOEPLITZ
    assert StructureKind.parse("sym_toeplitz") is StructureKind.SYM_TOEPLITZ
    assert FieldMask.parse("Complex") is FieldMask.COMPLEX
    with pytest.raises(StructureError):
        StructureKind.parse("banded")
    with pytest.raises(StructureError):
        FieldMask.parse("octonion")


@pytest.mark.parametrize("kind", [k for k in ALL_KINDS])
def test_parameter_counts(kind):
    for n in range(1, 6):
        assert basis_real(kind, n).shape == (n * n, n_params(kind, n, n))


# -- custom constraints -------------------------------------------------------

def test_custom_diagonal_constraint():
    K = basis_custom(CONSTRAINT_DIAGONAL)
    assert K.shape == (9, 3)
    support = np.flatnonzero(np.abs(K).sum(axis=1) > 1e-12)
    assert list(support) == [0, 4, 8]  # positions 1, 5, 9


def test_custom_relations_constraint():
    K = basis_custom(CONSTRAINT_RELATIONS)
    assert K.shape == (9, 6)
    assert np.linalg.norm(CONSTRAINT_RELATIONS @ K) < 1e-13
    for v in K.T:
        X = v.reshape(3, 3, order="F")
        # x11 + x31 = x21, x12 + x22 = x32, x13 + x33 = x23
        assert abs(X[0, 0] + X[2, 0] - X[1, 0]) < 1e-13
        assert abs(X[0, 1] + X[1, 1] - X[2, 1]) < 1e-13
        assert abs(X[0, 2] + X[2, 2] - X[1, 2]) < 1e-13


def test_custom_zero_constraint_is_unconstrained():
    K = basis_custom(np.zeros((1, 4)))
    assert K.shape == (4, 4)
    assert np.allclose(K.T @ K, np.eye(4))


def test_custom_lift_checks_columns():
    with pytest.raises(StructureError):
        lift("custom", "rbq", 3, 3, np.ones((2, 8)))
    with pytest.raises(StructureError):
        lift("custom", "rbq", 3, 3)


def test_custom_membership(rng):
    L = lift("custom", "rbq", 3, 3, CONSTRAINT_RELATIONS)
    assert L.p == 24
    X = rand_structured(rng, L)
    assert is_structured(X, L, atol=1e-12)
    assert not is_structured(rand_rbq(rng, 3, 3), L)


# -- lifted structures ---------------------------------------------------------

def test_lift_shapes():
    L = lift("toeplitz", "rbq", 5, 5)
    assert L.basis.shape == (100, 36)
    assert np.linalg.matrix_rank(L.basis) == 36
    L = lift("hankel", "complex", 4, 4)
    assert L.basis.shape == (64, 14)
    assert not L.basis[32:].any()
    L = lift("sym-toeplitz", "real", 5, 5)
    assert L.basis.shape == (100, 5)


def test_lift_basis_read_only():
    L = lift("hankel", "rbq", 3)
    with pytest.raises(ValueError):
        L.basis[0, 0] = 2.0


def test_lift_needs_dimensions():
    with pytest.raises(StructureError):
        lift("full")


@pytest.mark.parametrize("kind,mask", list(itertools.product(ALL_KINDS, ALL_MASKS)))
def test_full_rank_and_entry_scan(kind, mask, rng):
    for n in range(1, 9):
        L = lift(kind, mask, n, n)
        assert np.linalg.matrix_rank(L.basis) == L.p
        X = rand_structured(rng, L)
        assert is_structured(X, L)
        for comp, on in zip(X.components(), mask.active):
            if on:
                assert is_structured_real(comp, kind)
            else:
                assert not comp.any()


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(ALL_KINDS), st.sampled_from(ALL_MASKS), st.integers(1, 7),
       st.integers(0, 2**32 - 1))
def test_pack_unpack_round_trip(kind, mask, n, seed):
    rng = np.random.default_rng(seed)
    L = lift(kind, mask, n, n)
    v = rng.standard_normal(L.p)
    assert np.allclose(pack(unpack(v, L), L), v, atol=1e-12)


def test_unpack_zero_and_length_check():
    L = lift("toeplitz", "rbq", 3)
    assert unpack(np.zeros(L.p), L) == RBQMatrix.zeros(3, 3)
    with pytest.raises(StructureError):
        unpack(np.zeros(L.p + 1), L)


def test_pack_reads_toeplitz_parameters():
    i = 1j
    c1, r1 = [i, 2 + i, 0, 1, i], [i, 0, 2 * i, 1, 1 + i]
    X1 = scipy.linalg.toeplitz(np.array(c1), np.array(r1))
    L = lift("toeplitz", "complex", 5, 5)
    expect = complex_params(toeplitz_params(c1, r1), FieldMask.COMPLEX)
    assert expect.size == 18
    assert np.allclose(pack(RBQMatrix.from_complex(X1), L), expect, atol=1e-14)


def test_pack_rejects_unstructured(rng):
    L = lift("hankel", "rbq", 4)
    with pytest.raises(StructureError, match="constraint violation"):
        pack(rand_rbq(rng, 4, 4), L)
    with pytest.raises(StructureError):
        pack(rand_rbq(rng, 3, 4), L)


def test_mask_rejects_inactive_components(rng):
    L = lift("toeplitz", "real", 3)
    X = RBQMatrix(scipy.linalg.toeplitz([1.0, 2.0, 3.0]), np.eye(3) * 1e-3)
    assert not is_structured(X, L)
    with pytest.raises(StructureError):
        pack(X, L)


def test_membership_is_componentwise(rng):
    L = lift("circulant", "rbq", 4)
    X = rand_structured(rng, L)
    broken = [c.copy() for c in X.components()]
    broken[2][0, 1] += 1.0
    assert not is_structured(RBQMatrix(*broken), L)


def test_project_is_orthogonal(rng):
    L = lift("sym-toeplitz", "rbq", 4)
    X = rand_rbq(rng, 4, 4)
    P = project(X, L)
    assert is_structured(P, L, atol=1e-12)
    Y = rand_structured(rng, L)
    # residual X - P is orthogonal to the structure subspace
    assert abs(np.dot(vec_arrow(X - P), vec_arrow(Y))) < 1e-12


def test_rbq_params_layout():
    v = rbq_params([1 + 2j], [3 + 4j])
    assert np.array_equal(v, [1, 2, 3, 4])
    with pytest.raises(StructureError):
        complex_params([1j], FieldMask.RBQ)
