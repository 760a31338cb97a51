import numpy as np
import pytest
from scipy.optimize import root

from biqspec import BiquadraticTensor, DimensionError, EigenClass, SolverConfig, solve_lambda_max
from biqspec.oracle import enumerate_m_eigenpairs_small, m_plus_pairs, sphere_grid
from oracles import brute_g, brute_h

R10 = np.sqrt(10)


def eigen_system(a, m):
    def F(z):
        x, y, lam, mu = z[:m], z[m:-2], z[-2], z[-1]
        return np.concatenate([brute_g(a, x, y) - lam * x, brute_h(a, x, y) - mu * y, [x @ x - 1, y @ y - 1]])

    return F


def scipy_roots(A, starts, rng):
    """Eigenpairs found by a general-purpose root finder on the loop-sum system."""
    a, m, n = A.entries, A.m, A.n
    F = eigen_system(a, m)
    roots = []
    for _ in range(starts):
        x, y = rng.standard_normal(m), rng.standard_normal(n)
        x, y = x / np.linalg.norm(x), y / np.linalg.norm(y)
        lam = x @ brute_g(a, x, y)
        sol = root(F, np.concatenate([x, y, [lam, lam]]), method="hybr", tol=1e-14)
        if sol.success and np.max(np.abs(F(sol.x))) < 1e-11:
            roots.append((sol.x[-2], sol.x[:m], sol.x[m:-2]))
    return roots


def covered(found, lam, x, y, tol=1e-6):
    for p in found:
        if abs(p.lam - lam) < tol:
            dx = min(np.linalg.norm(p.x - x), np.linalg.norm(p.x + x))
            dy = min(np.linalg.norm(p.y - y), np.linalg.norm(p.y + y))
            if dx < tol and dy < tol:
                return True
    return False


class TestExample:
    def test_full_list(self, worked):
        pairs = enumerate_m_eigenpairs_small(worked)
        lams = np.array([p.lam for p in pairs])
        expected = [(3 - R10) / 2, (3 - R10) / 2, 0, 1, 2, 3, (3 + R10) / 2, (3 + R10) / 2]
        assert np.allclose(lams, expected, atol=1e-12)
        assert all(p.residual <= 1e-12 for p in pairs)

    def test_plus_pairs(self, worked):
        plus = m_plus_pairs(enumerate_m_eigenpairs_small(worked))
        lams = [round(p.lam, 10) + 0.0 for p in plus]
        assert lams == [0.0, 1.0, 2.0, 3.0, round((3 + R10) / 2, 10)]
        assert EigenClass.PLUSPLUS in plus[-1].kind
        assert all(EigenClass.ZERO in p.kind for p in plus[:4])

    def test_top_pair_checked_by_loops(self, worked):
        top = enumerate_m_eigenpairs_small(worked)[-1]
        x, y = np.abs(top.x), np.abs(top.y)
        lam = (3 + R10) / 2
        assert np.allclose(brute_g(worked.entries, x, y), lam * x, atol=1e-12)
        assert np.allclose(brute_h(worked.entries, x, y), lam * y, atol=1e-12)

    def test_runtime(self, worked):
        import time

        t0 = time.perf_counter()
        enumerate_m_eigenpairs_small(worked)
        assert time.perf_counter() - t0 < 5.0


class TestDegenerate:
    def test_zero_tensor(self):
        pairs = enumerate_m_eigenpairs_small(BiquadraticTensor.zeros(2, 2))
        assert len({round(p.lam, 12) for p in pairs}) == 1
        assert pairs[0].lam == 0.0

    def test_isotropic(self):
        pairs = enumerate_m_eigenpairs_small(BiquadraticTensor.isotropic(2, 3, 0.9))
        assert {round(p.lam, 10) for p in pairs} == {0.9}

    def test_too_large(self):
        with pytest.raises(DimensionError, match="solve_lambda_max"):
            enumerate_m_eigenpairs_small(BiquadraticTensor.zeros(4, 2))


class TestCompleteness:
    @pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 3)])
    def test_root_finder_finds_nothing_new(self, m, n, rng):
        for _ in range(3):
            A = BiquadraticTensor(rng.random((m, n, m, n)))
            found = enumerate_m_eigenpairs_small(A)
            roots = scipy_roots(A, 150, rng)
            assert roots
            for lam, x, y in roots:
                assert covered(found, lam, x, y, tol=1e-5), (lam, x, y)

    def test_agrees_with_solver(self, rng):
        for _ in range(20):
            A = BiquadraticTensor(rng.random((2, 2, 2, 2)))
            top = max(p.lam for p in enumerate_m_eigenpairs_small(A))
            assert solve_lambda_max(A, SolverConfig(seed=3)).best.lam == pytest.approx(top, abs=1e-6)


class TestSphereGrid:
    @pytest.mark.parametrize("dim", [2, 3])
    def test_points_are_unit(self, dim):
        points, neighbours = sphere_grid(dim, 9)
        assert np.allclose(np.linalg.norm(points, axis=1), 1.0)
        assert neighbours.shape[0] == len(points)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_neighbours_are_close(self, dim):
        points, neighbours = sphere_grid(dim, 15)
        for i, nbrs in enumerate(neighbours):
            for j in nbrs:
                gap = min(np.linalg.norm(points[i] - points[j]), np.linalg.norm(points[i] + points[j]))
                assert gap < 0.5
