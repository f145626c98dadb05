import unittest

import numpy as np
from numpy.testing import assert_allclose

from lutool.config import ConsistencyError, StateError
from lutool.linalg import (herm_eig, mat_pow_nat, polar_unitary, real_trace,
                           relative_gaps, trace_power, unitarity_residual)
from lutool.sampling import RandomStream, haar_unitary


def random_hermitian(side, stream):
    ginibre = stream.complex_normal((side, side))
    return (ginibre + ginibre.conj().T) / 2


class TestLinalgHermEig(unittest.TestCase):
    """
    Test-case for the ``lutool.linalg.herm_eig()`` Jacobi solver.
    """

    def test_diagonal_sorted_descending(self):
        decomposition = herm_eig(np.diag([1.0, 3.0, 2.0]))
        assert_allclose(decomposition.eigenvalues, [3, 2, 1])
        assert_allclose(decomposition.reconstruct(), np.diag([1, 3, 2]))

    def test_random_hermitian(self):
        """
        Reconstruction residual below 1e-10, unitary eigenvectors and the
        same eigenvalues as LAPACK, for sides 1 to 16.
        """
        stream = RandomStream(11, 'herm-eig')
        for side in range(1, 17):
            matrix = random_hermitian(side, stream.split(str(side)))
            decomposition = herm_eig(matrix)
            self.assertLess(
                np.max(np.abs(decomposition.reconstruct() - matrix)), 1e-10,
                'reconstruction failed at side %d' % side)
            self.assertLess(unitarity_residual(decomposition.eigenvectors),
                            1e-10)
            assert_allclose(decomposition.eigenvalues,
                            np.linalg.eigvalsh(matrix)[::-1], atol=1e-10)

    def test_tiny_entries(self):
        """
        Entries far below the square root of the smallest normal float are
        still diagonalized.
        """
        matrix = random_hermitian(16, RandomStream(13, 'tiny')) * 1e-200
        decomposition = herm_eig(matrix)
        residual = np.max(np.abs(decomposition.reconstruct() - matrix))
        self.assertLess(residual, 1e-10 * np.max(np.abs(matrix)))
        assert_allclose(decomposition.eigenvalues,
                        np.linalg.eigvalsh(matrix * 1e200)[::-1] * 1e-200,
                        rtol=0, atol=1e-210)

    def test_zero_matrix(self):
        decomposition = herm_eig(np.zeros((3, 3)))
        assert_allclose(decomposition.eigenvalues, [0, 0, 0])
        self.assertLess(unitarity_residual(decomposition.eigenvectors), 1e-15)

    def test_rejects_non_hermitian(self):
        with self.assertRaises(StateError):
            herm_eig([[1, 1], [0, 1]])
        with self.assertRaises(StateError):
            herm_eig(np.ones((2, 3)))

    def test_retained(self):
        retained = herm_eig(np.diag([0.5, 0.5, 0, 0])).retained(1e-10)
        self.assertEqual(len(retained), 2)
        self.assertEqual(retained.eigenvectors.shape, (4, 2))


class TestLinalgPowers(unittest.TestCase):

    def test_mat_pow_nat_matches_numpy(self):
        matrix = random_hermitian(5, RandomStream(12, 'powers'))
        matrix = matrix / np.linalg.norm(matrix, 2)
        for alpha in range(1, 8):
            assert_allclose(mat_pow_nat(matrix, alpha),
                            np.linalg.matrix_power(matrix, alpha),
                            rtol=0, atol=1e-13)

    def test_bad_exponents(self):
        for alpha in (0, -1, 1.5):
            with self.assertRaises(StateError):
                mat_pow_nat(np.eye(2), alpha)

    def test_trace_power_cross_check(self):
        matrix = np.diag([0.5, 0.25, 0.25])
        self.assertAlmostEqual(trace_power(matrix, 2, cross_check=True),
                               0.375, places=15)

    def test_real_trace_residue(self):
        with self.assertRaises(ConsistencyError):
            real_trace(np.array([[1j]]))
        self.assertEqual(real_trace(np.eye(3)), 3.0)


class TestLinalgPolar(unittest.TestCase):
    """
    Test-case for the ``lutool.linalg.polar_unitary()`` function.
    """

    def test_recovers_unitary_factor(self):
        stream = RandomStream(13, 'polar')
        unitary = haar_unitary(4, stream.split('u'))
        positive = random_hermitian(4, stream.split('p'))
        positive = positive @ positive + np.eye(4)
        assert_allclose(polar_unitary(unitary @ positive), unitary,
                        atol=1e-12)

    def test_maximizes_overlap(self):
        """
        ``Re Tr(U^dagger M)`` of the polar factor is not exceeded by random
        unitaries.
        """
        stream = RandomStream(14, 'polar-max')
        matrix = stream.complex_normal((3, 3))
        best = np.trace(polar_unitary(matrix).conj().T @ matrix).real
        for index in range(50):
            other = haar_unitary(3, stream.split(str(index)))
            self.assertLessEqual(np.trace(other.conj().T @ matrix).real,
                                 best + 1e-12)


class TestLinalgGaps(unittest.TestCase):

    def test_relative_gaps(self):
        assert_allclose(relative_gaps([1.0, 0.5, 0.5]), [0.5, 0.0])
        self.assertEqual(relative_gaps([1.0]).size, 0)

    def test_zero_values_are_not_separated(self):
        self.assertEqual(relative_gaps([0.0, 0.0])[0], 0.0)


if __name__ == '__main__':
    unittest.main()
