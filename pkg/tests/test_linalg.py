import numpy as np
import pytest

from sphiso.errors import PreconditionError, RankDeficiencyError
from sphiso.linalg import CMatrix, herm_eig_pairs, herm_eigs, op_norm, solve_lsq


def random_complex(rng, shape):
    return rng.uniform(-1.0, 1.0, shape) + 1j * rng.uniform(-1.0, 1.0, shape)


def random_hermitian(rng, n):
    g = random_complex(rng, (n, n))
    return (g + g.conj().T) / 2.0


def charpoly_roots(a):
    """Independent eigenvalue oracle: Faddeev-LeVerrier coefficients, np.roots."""
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(a @ m) / k
    return np.sort(np.roots(coeffs).real)


class TestCMatrix:
    def test_identity_and_zeros(self):
        i3 = CMatrix.identity(3)
        z = CMatrix.zeros(2, 4)
        assert i3.rows == i3.cols == 3
        assert (z.rows, z.cols) == (2, 4)
        assert np.array_equal(i3.array, np.eye(3))
        assert not z.array.any()

    def test_rejects_nonfinite(self):
        with pytest.raises(PreconditionError):
            CMatrix([[1.0, np.inf]])
        with pytest.raises(PreconditionError):
            CMatrix([[np.nan + 0j]])
        with pytest.raises(PreconditionError):
            CMatrix([1.0, 2.0])  # 1-d

    def test_entries_read_only(self):
        m = CMatrix.identity(2)
        with pytest.raises(ValueError):
            m.array[0, 0] = 5.0

    def test_adjoint_and_matmul(self):
        rng = np.random.default_rng(3)
        a = CMatrix(random_complex(rng, (3, 2)))
        b = CMatrix(random_complex(rng, (2, 4)))
        assert np.array_equal(a.adjoint().array, a.array.conj().T)
        assert np.allclose((a @ b).array, a.array @ b.array)
        assert (a @ b).adjoint().allclose(b.adjoint() @ a.adjoint(), tol=1e-14)

    def test_allclose_shape_mismatch(self):
        assert not CMatrix.identity(2).allclose(CMatrix.identity(3))


class TestHermEigs:
    def test_identity(self):
        assert herm_eigs(CMatrix.identity(4)) == [1.0, 1.0, 1.0, 1.0]

    def test_diagonal_sorted(self):
        assert herm_eigs(np.diag([3.0, -1.0, 2.0])) == [-1.0, 2.0, 3.0]

    def test_against_charpoly_roots(self):
        # independent oracle: characteristic polynomial roots, 8x8
        rng = np.random.default_rng(101)
        a = random_hermitian(rng, 8)
        got = np.array(herm_eigs(a))
        want = charpoly_roots(a)
        assert np.max(np.abs(got - want)) <= 1e-9

    def test_trace_matches(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a = random_hermitian(rng, 6)
            w = herm_eigs(a)
            assert abs(sum(w) - np.trace(a).real) <= 1e-12 * 6

    def test_rejects_nonhermitian(self):
        with pytest.raises(PreconditionError):
            herm_eigs([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(PreconditionError):
            herm_eigs(np.ones((2, 3)))

    def test_eig_pairs_residual(self):
        rng = np.random.default_rng(11)
        a = random_hermitian(rng, 10)
        w, v = herm_eig_pairs(a)
        scale = op_norm(a)
        for k in range(10):
            assert np.linalg.norm(a @ v[:, k] - w[k] * v[:, k]) <= 1e-12 * scale * 10


class TestOpNorm:
    def test_zero_and_identity(self):
        assert op_norm(CMatrix.zeros(3, 3)) == 0.0
        assert abs(op_norm(CMatrix.identity(5)) - 1.0) <= 1e-14

    def test_unitary(self):
        rng = np.random.default_rng(13)
        q, _ = np.linalg.qr(random_complex(rng, (6, 6)))
        assert abs(op_norm(q) - 1.0) <= 1e-12

    def test_self_consistency(self):
        # ||A|| = sqrt(max eig A*A), computed through the other code path
        rng = np.random.default_rng(17)
        for _ in range(10):
            a = random_complex(rng, (7, 5))
            want = np.sqrt(max(herm_eigs(a.conj().T @ a, tol=1e-10)))
            assert abs(op_norm(a) - want) <= 1e-10

    def test_submultiplicative(self):
        rng = np.random.default_rng(19)
        for _ in range(25):
            a = random_complex(rng, (5, 6))
            b = random_complex(rng, (6, 4))
            assert op_norm(a @ b) <= op_norm(a) * op_norm(b) + 1e-10

    def test_adjoint_invariant(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            a = random_complex(rng, (6, 3))
            assert abs(op_norm(a) - op_norm(a.conj().T)) <= 1e-12


class TestSolveLsq:
    def test_identity_system(self):
        sol = solve_lsq(np.eye(4), [1.0, 2.0, 3.0, 4.0])
        assert np.allclose(sol.x, [1, 2, 3, 4])
        assert sol.residual <= 1e-14

    def test_plant_and_recover(self):
        rng = np.random.default_rng(29)
        a = random_complex(rng, (8, 4))
        x0 = random_complex(rng, 4)
        sol = solve_lsq(a, a @ x0)
        assert np.max(np.abs(sol.x - x0)) <= 1e-10
        assert sol.residual <= 1e-10

    def test_overdetermined_residual(self):
        # inconsistent system: residual equals the known projection defect
        a = np.array([[1.0], [1.0]])
        sol = solve_lsq(a, [0.0, 1.0])
        assert abs(sol.x[0] - 0.5) <= 1e-14
        assert abs(sol.residual - np.sqrt(0.5)) <= 1e-14

    def test_rank_deficiency_detected(self):
        rng = np.random.default_rng(31)
        c = random_complex(rng, (8, 3))
        a = np.column_stack([c, c[:, 1]])
        with pytest.raises(RankDeficiencyError) as exc:
            solve_lsq(a, np.zeros(8))
        assert exc.value.rank == 3
        assert exc.value.cols == 4

    def test_shape_checks(self):
        with pytest.raises(PreconditionError):
            solve_lsq(np.eye(3), [1.0, 2.0])
        with pytest.raises(PreconditionError):
            solve_lsq(np.zeros((3, 0)), [0.0, 0.0, 0.0])

    def test_solution_unpacks(self):
        x, res = solve_lsq(np.eye(2), [1.0, 0.0])
        assert np.allclose(x, [1.0, 0.0]) and res <= 1e-14
