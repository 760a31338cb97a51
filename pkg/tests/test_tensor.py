import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from biqspec import (
    BiquadraticTensor,
    DimensionError,
    MEigenPair,
    check_m_eigenpair,
    contract_g,
    contract_h,
    eval_f,
    is_nonnegative,
    is_symmetric,
    is_weakly_symmetric,
)
from biqspec.graph import BipartiteTwoGraph, adjacency_tensor, random_graph
from oracles import brute_f, brute_f_transposed, brute_g, brute_h, quads

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


def single_entry(m, n, idx, value=1.0):
    return BiquadraticTensor.from_entries(m, n, [(*idx, value)])


@st.composite
def tensor_and_pair(draw, low=0.0, high=1.0):
    m = draw(st.integers(1, 3))
    n = draw(st.integers(1, 3))
    elems = st.floats(low, high, allow_nan=False)
    a = draw(arrays(float, (m, n, m, n), elements=elems))
    x = draw(arrays(float, (m,), elements=st.floats(-1, 1)))
    y = draw(arrays(float, (n,), elements=st.floats(-1, 1)))
    return BiquadraticTensor(a), x, y


class TestConstruction:
    def test_rejects_bad_shape(self):
        with pytest.raises(DimensionError):
            BiquadraticTensor(np.zeros((2, 3, 3, 2)))

    def test_rejects_nonfinite(self):
        a = np.zeros((2, 2, 2, 2))
        a[0, 0, 0, 0] = np.nan
        with pytest.raises(ValueError):
            BiquadraticTensor(a)

    def test_entries_are_read_only(self, worked):
        with pytest.raises(ValueError):
            worked.entries[0, 0, 0, 0] = 5.0

    def test_from_entries_range_check(self):
        with pytest.raises(DimensionError):
            BiquadraticTensor.from_entries(2, 2, [(2, 0, 0, 0, 1.0)])

    def test_arithmetic(self, worked):
        assert worked + worked == 2 * worked
        assert (worked - worked) == BiquadraticTensor.zeros(2, 2)


class TestForm:
    def test_example_coordinate_pair(self, worked):
        assert eval_f(worked, E1, E2) == 3.0

    def test_zero_tensor(self):
        x = np.array([0.6, 0.8])
        assert eval_f(BiquadraticTensor.zeros(2, 2), x, x) == 0.0

    def test_single_entry(self):
        assert eval_f(single_entry(2, 2, (0, 0, 0, 0)), E1, E1) == 1.0

    def test_dimension_mismatch(self, worked):
        with pytest.raises(DimensionError):
            eval_f(worked, np.ones(3), np.ones(2))
        with pytest.raises(DimensionError):
            contract_g(worked, np.ones(2), np.ones(3))

    def test_batched_matches_single(self, worked, rng):
        X = rng.standard_normal((5, 2))
        Y = rng.standard_normal((5, 2))
        batched = eval_f(worked, X, Y)
        assert np.allclose(batched, [eval_f(worked, x, y) for x, y in zip(X, Y)], rtol=1e-14)

    def test_matches_loops_on_random_tensors(self, rng):
        for m, n in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)]:
            a = rng.standard_normal((m, n, m, n))
            A = BiquadraticTensor(a)
            x, y = rng.standard_normal(m), rng.standard_normal(n)
            assert eval_f(A, x, y) == pytest.approx(brute_f(a, x, y), rel=1e-12)
            assert np.allclose(contract_g(A, x, y), brute_g(a, x, y), rtol=1e-12, atol=1e-13)
            assert np.allclose(contract_h(A, x, y), brute_h(a, x, y), rtol=1e-12, atol=1e-13)


class TestContractions:
    def test_example_g_h(self, worked):
        assert np.array_equal(contract_g(worked, E1, E2), [3.0, 0.0])
        assert np.array_equal(contract_h(worked, E1, E2), [0.0, 3.0])
        # same values from the loop reference
        assert np.array_equal(brute_g(worked.entries, E1, E2), [3.0, 0.0])
        assert np.array_equal(brute_h(worked.entries, E1, E2), [0.0, 3.0])

    def test_zero_tensor(self):
        Z = BiquadraticTensor.zeros(3, 2)
        x, y = np.ones(3), np.ones(2)
        assert not contract_g(Z, x, y).any()
        assert not contract_h(Z, x, y).any()

    @pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 3)])
    def test_isotropic(self, m, n, rng):
        c = 1.7
        A = BiquadraticTensor.isotropic(m, n, c)
        x = rng.standard_normal(m)
        x /= np.linalg.norm(x)
        y = rng.standard_normal(n)
        y /= np.linalg.norm(y)
        assert np.allclose(contract_g(A, x, y), c * x, atol=1e-14)
        assert np.allclose(contract_h(A, x, y), c * y, atol=1e-14)
        assert np.allclose(brute_g(A.entries, x, y), c * x, atol=1e-14)


class TestIdentities:
    @settings(max_examples=200, deadline=None)
    @given(tensor_and_pair(low=-1e3, high=1e3))
    def test_homogeneity(self, data):
        A, x, y = data
        f = eval_f(A, x, y)
        scale = np.sum(np.abs(A.entries)) * max(np.max(np.abs(x)), 1e-300) ** 2 * max(np.max(np.abs(y)), 1e-300) ** 2
        assert abs(contract_g(A, x, y) @ x - f) <= 1e-12 * max(scale, 1e-300) + 1e-300
        assert abs(contract_h(A, x, y) @ y - f) <= 1e-12 * max(scale, 1e-300) + 1e-300

    def test_gradient_matches_finite_differences(self, rng):
        step = 1e-6
        for _ in range(20):
            m, n = rng.integers(2, 5, size=2)
            A = BiquadraticTensor(rng.random((m, n, m, n)))
            x, y = rng.standard_normal(m), rng.standard_normal(n)
            fd_x = [(eval_f(A, x + step * e, y) - eval_f(A, x - step * e, y)) / (2 * step) for e in np.eye(m)]
            fd_y = [(eval_f(A, x, y + step * e) - eval_f(A, x, y - step * e)) / (2 * step) for e in np.eye(n)]
            assert np.max(np.abs(2 * contract_g(A, x, y) - fd_x)) <= 1e-5
            assert np.max(np.abs(2 * contract_h(A, x, y) - fd_y)) <= 1e-5

    def test_weakly_symmetric_slot_swap(self, rng):
        for _ in range(10):
            m, n = rng.integers(2, 4, size=2)
            a = rng.random((m, n, m, n))
            a = 0.5 * (a + a.transpose(2, 3, 0, 1))
            A = BiquadraticTensor(a)
            assert is_weakly_symmetric(A)
            x, y = rng.standard_normal(m), rng.standard_normal(n)
            assert brute_f_transposed(a, x, y) == pytest.approx(eval_f(A, x, y), rel=1e-12)


class TestEigenpairCheck:
    def test_example_top_pair(self, worked):
        pair = MEigenPair(3.0, E1, E2)
        assert check_m_eigenpair(worked, pair, 1e-10)
        assert pair.residual == 0.0

    def test_perturbed_eigenvalue_fails(self, worked):
        pair = MEigenPair(2.5, E1, E2)
        assert not check_m_eigenpair(worked, pair, 1e-10)
        assert pair.residual == pytest.approx(0.5)

    def test_zero_eigenvalue_pair(self, worked):
        assert check_m_eigenpair(worked, MEigenPair(0.0, E2, E1), 1e-10)

    def test_non_unit_vector_fails(self, worked):
        assert not check_m_eigenpair(worked, MEigenPair(12.0, 2 * E1, E2), 1e-10)

    def test_tol_must_be_positive(self, worked):
        with pytest.raises(ValueError):
            check_m_eigenpair(worked, MEigenPair(3.0, E1, E2), 0.0)

    @settings(max_examples=100, deadline=None)
    @given(tensor_and_pair(), st.floats(-5, 5), st.floats(1e-12, 1.0), st.floats(1.0, 1e3))
    def test_monotone_in_tol(self, data, lam, tol, factor):
        A, x, y = data
        if check_m_eigenpair(A, MEigenPair(lam, x, y), tol):
            assert check_m_eigenpair(A, MEigenPair(lam, x, y), tol * factor)


class TestSymmetryPredicates:
    def test_example_weakly_symmetric(self, worked):
        a = worked.entries
        # exhaustive index scan, independent of the transpose-based predicate
        assert all(a[i1, j1, i2, j2] == a[i2, j2, i1, j1] for i1, j1, i2, j2 in quads(2, 2))
        assert is_weakly_symmetric(worked)

    def test_example_fully_symmetric(self, worked):
        a = worked.entries
        assert all(a[i1, j1, i2, j2] == a[i2, j1, i1, j2] == a[i1, j2, i2, j1] for i1, j1, i2, j2 in quads(2, 2))
        assert is_symmetric(worked)

    def test_weak_but_not_full(self):
        # a_1122 = a_2211 satisfies the block swap; the i-swap partner a_2112 is missing
        A = BiquadraticTensor.from_entries(2, 2, [(0, 0, 1, 1, 1.0), (1, 1, 0, 0, 1.0)])
        assert is_weakly_symmetric(A)
        assert not is_symmetric(A)

    def test_adjacency_symmetric(self, rng):
        for _ in range(20):
            G = random_graph(int(rng.integers(2, 5)), int(rng.integers(2, 5)), 0.4, rng, weighted=True)
            A = adjacency_tensor(G)
            assert is_symmetric(A, 0.0)
            assert is_nonnegative(A)

    def test_negative_entry(self):
        assert not is_nonnegative(single_entry(2, 2, (0, 0, 0, 0), -1.0))

    def test_tolerance(self):
        a = np.zeros((2, 2, 2, 2))
        a[0, 0, 1, 1] = 1.0
        a[1, 1, 0, 0] = 1.0 + 1e-13
        A = BiquadraticTensor(a)
        assert not is_weakly_symmetric(A, 0.0)
        assert is_weakly_symmetric(A, 1e-12)

    def test_empty_graph_adjacency_is_zero(self):
        assert adjacency_tensor(BipartiteTwoGraph(2, 2)) == BiquadraticTensor.zeros(2, 2)
