import numpy as np
import pytest
import scipy.linalg

from rbqls.inverse import (
    NO_PENCIL,
    EigenData,
    eigen_residuals,
    gpdiep,
    pdiep,
    solve_complex_hankel_pair,
    solve_real_symtoeplitz_pair,
)
from rbqls.rbme import MultiTermProblem, Term, solve_multi
from rbqls.rbq import RBQMatrix
from rbqls.repro import (
    EX63_CASE1,
    EX64_CASE2,
    EX66_CASE2,
    ex63_fixture,
    ex64_fixture,
    ex65_fixture,
    ex66_fixture,
    matlab_hankel,
    matlab_toeplitz,
    scaled_distance,
)
from rbqls.structures import is_structured, lift, unpack


def crand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_eigendata(rng, n, k, field="complex"):
    return EigenData(crand(rng, k), crand(rng, n, k), field)


# -- EigenData -----------------------------------------------------------------

def test_eigendata_validation():
    with pytest.raises(ValueError):
        EigenData([], np.zeros((3, 0)))
    with pytest.raises(ValueError):
        EigenData([1, 2, 3, 4], np.ones((3, 4)))
    with pytest.raises(ValueError):
        EigenData([1, 2], np.array([[1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(ValueError):
        EigenData([1, 2], np.ones((3, 3)))
    d = EigenData(2.0, np.array([1.0, 1.0]), "real")
    assert d.n == 2 and d.k == 1 and d.vectors.shape == (2, 1)


# -- pdiep ---------------------------------------------------------------------

def test_example_63():
    M, full = ex63_fixture()
    d1 = full.subset([2])
    M1 = pdiep(d1, "hankel").solutions[0]
    assert eigen_residuals(M1, d1).max() <= 1e-12
    assert np.abs(M1.z1 - EX63_CASE1).max() <= 1e-3
    d2 = full.subset([1, 2])
    rep = pdiep(d2, "hankel")
    M2 = rep.solutions[0]
    assert np.abs(M2.z1 - M).max() <= 1e-10
    assert not M2.z2.any()
    assert eigen_residuals(M2, d2).max() <= 1e-12


def test_example_64():
    T, full = ex64_fixture()
    T1 = pdiep(full.subset([0, 1]), "sym-toeplitz").solutions[0]
    assert np.abs(T1.re1[0] - [5.30, 2.50, 4.60, -3.70, 2.80]).max() <= 1e-10
    d2 = full.subset([0, 2])
    T2 = pdiep(d2, "sym-toeplitz").solutions[0]
    assert np.abs(T2.re1 - EX64_CASE2).max() <= 1e-3
    assert eigen_residuals(T2, d2).max() <= 1e-12
    assert not (T2.im1.any() or T2.z2.any())


def test_full_eigendata_recovers_exactly(rng):
    M = _hankel(rng, 4)
    w, V = np.linalg.eig(M)
    rep = pdiep(EigenData(w, V, "complex"), "hankel")
    assert np.abs(rep.solutions[0].z1 - M).max() <= 1e-10
    T = matlab_toeplitz(rng.standard_normal(5)).real
    w, V = np.linalg.eigh(T)
    rep = pdiep(EigenData(w, V, "real"), "sym-toeplitz")
    assert np.abs(rep.solutions[0].re1 - T).max() <= 1e-10


def test_pdiep_local_optimality(rng):
    data = random_eigendata(rng, 4, 2)
    L = lift("hankel", "complex", 4)
    rep = pdiep(data, L)
    Phi = RBQMatrix.from_complex(data.vectors)
    PhiLam = RBQMatrix.from_complex(data.vectors * data.lambdas)

    def objective(M):
        return (M @ Phi - PhiLam).frobenius()

    best = objective(rep.solutions[0])
    assert abs(best - rep.stacked_residual) <= 1e-12
    assert abs(best - rep.residual) <= 1e-12
    for _ in range(100):
        D = unpack(rng.standard_normal(L.p), L)
        D = D * (1.0 / D.frobenius())
        assert objective(rep.solutions[0] + D) >= best - 1e-12


def test_pdiep_shape_mismatch():
    data = EigenData([1.0], np.ones((3, 1)))
    with pytest.raises(ValueError):
        pdiep(data, lift("hankel", "complex", 4))


# -- gpdiep --------------------------------------------------------------------

@pytest.mark.parametrize("idx", [[0], [0, 2]])
def test_example_65(idx):
    _, full = ex65_fixture()
    d = full.subset(idx)
    sol = gpdiep(d, "hankel")
    assert sol.nontrivial
    assert sol.residuals.max() <= 1e-12
    assert np.hypot(sol.M.frobenius(), sol.N.frobenius()) == pytest.approx(1.0, abs=1e-14)
    L = lift("hankel", "complex", 4)
    assert is_structured(sol.M, L) and is_structured(sol.N, L)


@pytest.mark.parametrize("idx", [[0, 2], [0, 1, 2]])
def test_example_66(idx):
    _, full = ex66_fixture()
    d = full.subset(idx)
    sol = gpdiep(d, "sym-toeplitz")
    assert sol.residuals.max() <= 1e-12
    assert np.allclose(sol.residuals, eigen_residuals(sol.M, d, sol.N), atol=1e-12)


def test_planted_one_dimensional_nullspace():
    (M, N), full = ex66_fixture()
    sol = gpdiep(full.subset([0, 1, 2]), "sym-toeplitz")
    assert sol.nullity == 1
    planted = np.hypot(np.linalg.norm(M), np.linalg.norm(N))
    assert scaled_distance((sol.M.re1, sol.N.re1), (M / planted, N / planted)) <= 1e-8
    # also lands on the printed pencil to four decimals
    assert scaled_distance((sol.M.re1, sol.N.re1), EX66_CASE2) <= 1e-3


def test_gpdiep_scale_covariance():
    _, full = ex65_fixture()
    d = full.subset([0, 2])
    base = gpdiep(d, "hankel")
    c = 0.7 - 2.1j
    scaled = gpdiep(EigenData(d.lambdas, d.vectors * c, d.field), "hankel")
    assert np.allclose(scaled.residuals / abs(c), base.residuals, atol=1e-10)
    assert scaled.nullity == base.nullity


def test_gpdiep_is_deterministic():
    _, full = ex66_fixture()
    d = full.subset([0, 2])
    a, b = gpdiep(d, "sym-toeplitz"), gpdiep(d, "sym-toeplitz")
    assert a.M == b.M and a.N == b.N


def test_trivial_nullspace(rng):
    # 2nk = 24 real equations against 2n = 8 pencil parameters
    data = random_eigendata(rng, 4, 3, "real")
    sol = gpdiep(data, "sym-toeplitz")
    assert not sol.nontrivial
    assert sol.message == NO_PENCIL
    assert sol.M.frobenius() == 0.0 and sol.nullity == 0
    assert sol.as_dict()["message"] == NO_PENCIL


# -- specialized pair solvers --------------------------------------------------

def _hankel(rng, n):
    c = crand(rng, n)
    return matlab_hankel(c, np.concatenate([[c[-1]], crand(rng, n - 1)]))


def _symtoeplitz(rng, n):
    return scipy.linalg.toeplitz(rng.standard_normal(n))


def test_complex_hankel_pair_recovers_planted(rng):
    n = 4
    X, Y = _hankel(rng, n), _hankel(rng, n)
    A, B, C, D = crand(rng, 6, n), crand(rng, n, 5), crand(rng, 6, n), crand(rng, n, 5)
    Xs, Ys = solve_complex_hankel_pair(A, B, C, D, A @ X @ B + C @ Y @ D)
    assert np.linalg.norm(Xs - X) + np.linalg.norm(Ys - Y) <= 1e-10


def test_symtoeplitz_pair_recovers_planted(rng):
    n = 5
    X = _symtoeplitz(rng, n)
    Y = scipy.linalg.toeplitz([5.30, 2.50, 4.60, -3.70, 2.80])
    A, B, C, D = (rng.standard_normal(s) for s in [(6, n), (n, 6), (6, n), (n, 6)])
    Xs, Ys = solve_real_symtoeplitz_pair(A, B, C, D, A @ X @ B + C @ Y @ D)
    assert np.linalg.norm(Xs - X) + np.linalg.norm(Ys - Y) <= 1e-10


def test_pairs_with_zero_rhs(rng):
    A, B = crand(rng, 3, 3), crand(rng, 3, 3)
    for X in solve_complex_hankel_pair(A, B, A, B, np.zeros((3, 3))):
        assert not X.any()
    R = rng.standard_normal((3, 3))
    for X in solve_real_symtoeplitz_pair(R, R, R, R, np.zeros((3, 3))):
        assert not X.any()


def test_symtoeplitz_pair_identity_splits_evenly():
    n = 4
    I = np.eye(n)
    E = scipy.linalg.toeplitz([4.0, -1.0, 2.0, 0.5])
    X, Y = solve_real_symtoeplitz_pair(I, I, I, I, E)
    assert np.allclose(X, E / 2, atol=1e-12) and np.allclose(Y, E / 2, atol=1e-12)
    # direct pseudoinverse of [K_ST, K_ST] as an oracle
    K = lift("sym-toeplitz", "real", n).real_basis
    x = np.linalg.pinv(np.hstack([K, K])) @ E.ravel(order="F")
    assert np.allclose((K @ x[:n]).reshape(n, n, order="F"), X, atol=1e-12)


def test_pair_solvers_reject_bad_input(rng):
    with pytest.raises(ValueError):
        solve_complex_hankel_pair(np.eye(3), np.eye(3), np.eye(2), np.eye(3), np.eye(3))
    with pytest.raises(ValueError):
        solve_real_symtoeplitz_pair(np.eye(3), np.eye(3), np.eye(3), np.eye(3), np.eye(2))
    with pytest.raises(ValueError):
        solve_real_symtoeplitz_pair(np.eye(2) * 1j, np.eye(2), np.eye(2), np.eye(2), np.eye(2))


def _general(kind, field, A, B, C, D, E):
    n = A.shape[1]
    L = lift(kind, field, n)
    to = RBQMatrix.from_complex
    rep = solve_multi(MultiTermProblem([Term(to(A), to(B), L), Term(to(C), to(D), L)], to(E)))
    return rep.solutions[0].z1, rep.solutions[1].z1


@pytest.mark.parametrize("seed", range(20))
def test_hankel_pair_agrees_with_general_path(seed):
    rng = np.random.default_rng(seed)
    n, m, s = int(rng.integers(2, 5)), int(rng.integers(1, 6)), int(rng.integers(1, 6))
    A, B, C, D, E = crand(rng, m, n), crand(rng, n, s), crand(rng, m, n), crand(rng, n, s), crand(rng, m, s)
    X, Y = solve_complex_hankel_pair(A, B, C, D, E)
    Xg, Yg = _general("hankel", "complex", A, B, C, D, E)
    assert np.linalg.norm(X - Xg) + np.linalg.norm(Y - Yg) <= 1e-10 * max(1.0, np.linalg.norm(Xg))


@pytest.mark.parametrize("seed", range(20))
def test_symtoeplitz_pair_agrees_with_general_path(seed):
    rng = np.random.default_rng(seed)
    n, m, s = int(rng.integers(2, 6)), int(rng.integers(1, 6)), int(rng.integers(1, 6))
    A, B, C, D, E = (rng.standard_normal(sh) for sh in [(m, n), (n, s), (m, n), (n, s), (m, s)])
    X, Y = solve_real_symtoeplitz_pair(A, B, C, D, E)
    Xg, Yg = _general("sym-toeplitz", "real", A, B, C, D, E)
    assert np.linalg.norm(X - Xg) + np.linalg.norm(Y - Yg) <= 1e-10 * max(1.0, np.linalg.norm(Xg))
