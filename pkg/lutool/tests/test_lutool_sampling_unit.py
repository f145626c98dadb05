import unittest
import warnings

import numpy as np
import scipy.stats
from numpy.testing import assert_allclose, assert_array_equal

from lutool.config import DimensionError
from lutool.invariants import i_alpha
from lutool.linalg import unitarity_residual
from lutool.sampling import (RandomStream, haar_unitary,
                             random_lu_pair, random_product_state,
                             random_pure_state)
from lutool.statespace import apply_local_unitaries


class TestSamplingRandomStream(unittest.TestCase):
    """
    Test-case for the ``lutool.sampling.RandomStream`` class.
    """

    def test_reproducible(self):
        assert_array_equal(RandomStream(1, 'x').uniform(5),
                           RandomStream(1, 'x').uniform(5))

    def test_labels_and_seeds_differ(self):
        base = RandomStream(1, 'x').uniform(5)
        self.assertFalse(np.array_equal(base, RandomStream(2, 'x').uniform(5)))
        self.assertFalse(np.array_equal(base, RandomStream(1, 'y').uniform(5)))

    def test_split_ignores_parent_consumption(self):
        """
        A child stream depends on its label path only, not on how much the
        parent has drawn.
        """
        used = RandomStream(3)
        used.uniform(100)
        assert_array_equal(used.split('child').uniform(4),
                           RandomStream(3).split('child').uniform(4))

    def test_complex_normal_moments(self):
        draws = RandomStream(4, 'gauss').complex_normal(20000)
        self.assertAlmostEqual(np.mean(np.abs(draws) ** 2), 1.0, delta=0.05)
        self.assertAlmostEqual(abs(np.mean(draws)), 0.0, delta=0.05)


class TestSamplingHaar(unittest.TestCase):
    """
    Test-case for ``haar_unitary()`` and the random states.
    """

    def test_unitarity(self):
        stream = RandomStream(5, 'haar')
        for size in range(1, 17):
            self.assertLess(unitarity_residual(haar_unitary(size, stream)),
                            1e-12)

    def test_bad_dimension(self):
        with self.assertRaises(DimensionError):
            haar_unitary(0, RandomStream(5))

    def test_first_entry_distribution(self):
        """
        ``|U_00|^2`` of a Haar unitary of size 3 follows Beta(1, 2).
        """
        stream = RandomStream(6, 'haar-entry')
        samples = [abs(haar_unitary(3, stream)[0, 0]) ** 2
                   for _ in range(2000)]
        statistic, p_value = scipy.stats.kstest(samples, 'beta', args=(1, 2))
        self.assertGreater(p_value, 1e-3)

    def test_pure_state_is_normalized_silently(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            state = random_pure_state((4, 2, 2), RandomStream(7, 'state'))
        self.assertEqual(caught, [])
        self.assertAlmostEqual(np.linalg.norm(state.amplitudes), 1.0,
                               delta=1e-14)

    def test_mean_purity(self):
        """
        The mean purity of a Haar state on 2 x 4 is (2 + 4) / (2 * 4 + 1).
        """
        stream = RandomStream(8, 'purity')
        purities = np.array([
            i_alpha(random_pure_state((2, 4), stream.split(str(index))), 1, 2)
            for index in range(1000)])
        error = scipy.stats.sem(purities)
        self.assertLess(abs(purities.mean() - 6 / 9), 3 * error)

    def test_product_state_has_pure_reductions(self):
        state = random_product_state((2, 3, 2), RandomStream(9, 'product'))
        for pivot in range(3):
            self.assertAlmostEqual(i_alpha(state, pivot, 2), 1.0, delta=1e-12)

    def test_random_lu_pair(self):
        stream = RandomStream(10, 'pair')
        state = random_pure_state((2, 3, 2), stream.split('state'))
        moved, unitaries = random_lu_pair(state, stream.split('unitaries'))
        assert_allclose(apply_local_unitaries(state, unitaries).amplitudes,
                        moved.amplitudes)


if __name__ == '__main__':
    unittest.main()
