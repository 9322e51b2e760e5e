"""Packed symmetric storage, Cholesky, SPD inverse, and Jacobi eigensolver.

Hand-sized cases are checked against frozen values worked out on paper;
randomised batteries are checked against numpy.linalg as an independent
oracle.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from impartial.errors import NoConvergence, NotPositiveDefinite
from impartial.linalg import EigenDecomposition, SquareSym, cholesky, jacobi_eigen, spd_inverse
from impartial.options import NumericOptions


def random_spd(rng, p, scale=1.0):
    a = rng.standard_normal((p, p))
    return scale * (a @ a.T + p * np.eye(p))


class TestSquareSym:
    def test_index_is_a_bijection_on_unordered_pairs(self):
        p = 7
        slots = {SquareSym.index(i, j) for i in range(p) for j in range(i + 1)}
        assert slots == set(range(p * (p + 1) // 2))

    def test_index_symmetric_in_arguments(self):
        assert SquareSym.index(2, 5) == SquareSym.index(5, 2)

    def test_round_trip_from_array(self):
        m = np.array([[2.0, -1.0, 0.5], [-1.0, 3.0, 0.0], [0.5, 0.0, 4.0]])
        s = SquareSym.from_array(m)
        assert np.array_equal(s.to_array(), m)
        assert s.entry(0, 2) == 0.5
        assert s.entry(2, 0) == 0.5
        assert np.array_equal(s.diagonal(), [2.0, 3.0, 4.0])

    def test_single_slot_per_pair(self):
        s = SquareSym.from_array([[1.0, 7.0], [7.0, 2.0]])
        assert s.packed.shape == (3,)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            SquareSym.from_array([[1.0, 2.0], [3.0, 4.0]])

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            SquareSym.from_array(np.ones((2, 3)))

    def test_rejects_wrong_packed_length(self):
        with pytest.raises(ValueError):
            SquareSym(3, np.zeros(5))

    def test_buffer_is_read_only(self):
        s = SquareSym.from_array([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            s.packed[0] = 9.0


class TestCholesky:
    def test_hand_factor(self):
        # [[4,2],[2,5]] factors as [[2,0],[1,2]]
        factor = cholesky(SquareSym.from_array([[4.0, 2.0], [2.0, 5.0]]))
        assert np.array_equal(factor.packed, [2.0, 1.0, 2.0])

    def test_identity_factor(self):
        eye = SquareSym.from_array(np.eye(4))
        assert np.array_equal(cholesky(eye).to_array(), np.eye(4))

    def test_reconstruction_random(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            p = int(rng.integers(1, 9))
            m = random_spd(rng, p)
            factor = cholesky(SquareSym.from_array(m)).to_array()
            low = np.tril(factor)
            assert np.allclose(low @ low.T, m, rtol=0, atol=1e-10 * np.abs(m).max())

    def test_not_positive_definite_reports_first_bad_pivot(self):
        singular = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(NotPositiveDefinite) as exc:
            cholesky(SquareSym.from_array(singular))
        assert exc.value.pivot == 1

    def test_negative_leading_entry_fails_at_pivot_zero(self):
        with pytest.raises(NotPositiveDefinite) as exc:
            cholesky(SquareSym.from_array([[-1.0, 0.0], [0.0, 1.0]]))
        assert exc.value.pivot == 0

    def test_zero_matrix_fails(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky(SquareSym.from_array(np.zeros((3, 3))))

    def test_pivot_threshold_scales_with_diagonal(self):
        # relative threshold: a matrix times 1e6 fails iff the original does
        near = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-17]])
        for scale in (1.0, 1e6):
            with pytest.raises(NotPositiveDefinite):
                cholesky(SquareSym.from_array(near * scale))

    def test_pivot_override(self):
        m = SquareSym.from_array([[1.0, 0.999], [0.999, 1.0]])
        cholesky(m)
        with pytest.raises(NotPositiveDefinite):
            cholesky(m, NumericOptions(pivot_rel=0.01))


class TestSpdInverse:
    def test_hand_inverse(self):
        # [[2,1],[1,2]] has inverse [[2/3,-1/3],[-1/3,2/3]]
        inv, cond = spd_inverse(SquareSym.from_array([[2.0, 1.0], [1.0, 2.0]]))
        expect = np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3.0
        assert np.allclose(inv.to_array(), expect, rtol=0, atol=1e-15)
        assert cond == pytest.approx(4.0 / 3.0, rel=1e-12)

    def test_identity_has_condition_one(self):
        inv, cond = spd_inverse(SquareSym.from_array(np.eye(5)))
        assert np.array_equal(inv.to_array(), np.eye(5))
        assert cond == 1.0

    def test_matches_numpy_on_random_spd(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            p = int(rng.integers(1, 9))
            m = random_spd(rng, p)
            inv, _ = spd_inverse(SquareSym.from_array(m))
            oracle = np.linalg.inv(m)
            assert np.allclose(inv.to_array(), oracle, rtol=0, atol=1e-9 * np.abs(oracle).max())

    def test_product_with_input_is_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            p = int(rng.integers(2, 7))
            m = random_spd(rng, p)
            inv, cond = spd_inverse(SquareSym.from_array(m))
            assert cond < 1e10
            assert np.allclose(inv.to_array() @ m, np.eye(p), rtol=0, atol=1e-8)

    def test_condition_estimate_grows_for_near_singular(self):
        base = np.array([[1.0, 0.0], [0.0, 1.0]])
        skew = np.array([[1.0, 0.0], [0.0, 1e-12]])
        _, cond_good = spd_inverse(SquareSym.from_array(base))
        _, cond_bad = spd_inverse(SquareSym.from_array(skew))
        assert cond_bad > 1e10 > cond_good


class TestJacobiEigen:
    def test_hand_eigenpairs(self):
        # [[2,1],[1,2]]: eigenvalues 1 and 3, eigenvectors (1,-1) and (1,1)
        eig = jacobi_eigen(SquareSym.from_array([[2.0, 1.0], [1.0, 2.0]]))
        assert np.allclose(eig.values, [1.0, 3.0], rtol=0, atol=1e-14)
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        v0 = eig.vectors[:, 0] * math.copysign(1.0, eig.vectors[0, 0])
        v1 = eig.vectors[:, 1] * math.copysign(1.0, eig.vectors[0, 1])
        assert np.allclose(v0, [inv_sqrt2, -inv_sqrt2], rtol=0, atol=1e-14)
        assert np.allclose(v1, [inv_sqrt2, inv_sqrt2], rtol=0, atol=1e-14)

    def test_diagonal_input_converges_immediately(self):
        eig = jacobi_eigen(SquareSym.from_array(np.diag([3.0, 1.0, 2.0])))
        assert eig.sweeps == 0
        assert np.array_equal(eig.values, [1.0, 2.0, 3.0])

    def test_values_ascending_and_vectors_orthonormal(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            p = int(rng.integers(2, 11))
            a = rng.standard_normal((p, p))
            m = a + a.T
            eig = jacobi_eigen(SquareSym.from_array(m))
            assert (np.diff(eig.values) >= 0).all()
            gram = eig.vectors.T @ eig.vectors
            assert np.abs(gram - np.eye(p)).max() < 1e-10

    def test_reconstruction(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            p = int(rng.integers(2, 11))
            a = rng.standard_normal((p, p))
            m = a + a.T
            eig = jacobi_eigen(SquareSym.from_array(m))
            rebuilt = eig.vectors @ np.diag(eig.values) @ eig.vectors.T
            assert np.abs(rebuilt - m).max() <= 1e-10 * np.abs(m).max()

    def test_matches_numpy_eigenvalues(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            p = int(rng.integers(2, 9))
            a = rng.standard_normal((p, p))
            m = a + a.T
            eig = jacobi_eigen(SquareSym.from_array(m))
            oracle = np.linalg.eigvalsh(m)
            assert np.allclose(eig.values, oracle, rtol=0, atol=1e-10 * np.abs(m).max())

    def test_input_not_mutated(self):
        m = SquareSym.from_array([[2.0, 1.0], [1.0, 2.0]])
        before = m.packed.copy()
        jacobi_eigen(m)
        assert np.array_equal(m.packed, before)

    def test_no_convergence_with_zero_sweep_budget(self):
        m = SquareSym.from_array([[2.0, 1.0], [1.0, 2.0]])
        with pytest.raises(NoConvergence) as exc:
            jacobi_eigen(m, NumericOptions(max_sweeps=0))
        assert exc.value.sweeps == 0

    def test_repeated_eigenvalues(self):
        eig = jacobi_eigen(SquareSym.from_array(np.eye(3) * 2.0))
        assert np.array_equal(eig.values, [2.0, 2.0, 2.0])

    def test_decomposition_is_frozen(self):
        eig = jacobi_eigen(SquareSym.from_array(np.eye(2)))
        assert isinstance(eig, EigenDecomposition)
        with pytest.raises(ValueError):
            eig.values[0] = 5.0


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=6),
    st.integers(min_value=0, max_value=2**32 - 1),
    st.floats(min_value=-6.0, max_value=6.0),
)
def test_inverse_round_trip_property(p, seed, log_scale):
    """spd_inverse(spd_inverse(m)) recovers m across sizes and scales."""
    rng = np.random.default_rng(seed)
    m = random_spd(rng, p, scale=10.0**log_scale)
    s = SquareSym.from_array(m)
    inv, _ = spd_inverse(s)
    back, _ = spd_inverse(inv)
    assert np.allclose(back.to_array(), m, rtol=1e-8, atol=0)
