import unittest
from unittest.mock import patch

import numpy as np

from lutool.config import DEFAULT_TOLERANCES, DimensionError, StateError
from lutool.equivalence import (DEGENERATE_SPECTRUM, GENERIC_MATCH,
                                NOT_GENERIC, PROFILE_MISMATCH,
                                RANK_DEFICIENT, GenericityReport, Outcome,
                                Verdict, Witness, compare_profiles,
                                decide_equivalence, differs, genericity,
                                round_significant)
from lutool.invariants import InvariantProfile, invariant_profile
from lutool.sampling import RandomStream, random_lu_pair, random_pure_state
from lutool.statespace import (DensityMatrix, basis_state, ghz_state,
                               partial_trace, w_state)


def generic_state(label):
    """First Haar state at dims (4,2,2) whose reduced state is generic."""
    stream = RandomStream(31, label)
    for index in range(20):
        state = random_pure_state((4, 2, 2), stream.split(str(index)))
        report = genericity(partial_trace(state, [0]))
        if report.is_generic and not report.spectrum_degenerate:
            return state
    raise AssertionError('no generic state in 20 draws')


class TestEquivalenceWitness(unittest.TestCase):

    def test_string_form(self):
        """Values are printed with 15 significant digits."""
        self.assertEqual(str(Witness('I[A;2]', 0.5, 5 / 9)),
                         'I[A;2]: 0.5 vs 0.555555555555556')
        self.assertEqual(
            str(Witness('I[A;2]', 0.5000000000000002, 0.5555555555555559)),
            'I[A;2]: 0.5 vs 0.555555555555556')
        self.assertEqual(str(Witness('n_eff', 4, 3)), 'n_eff: 4 vs 3')

    def test_round_significant(self):
        self.assertEqual(round_significant(0.49999999999999994), 0.5)
        self.assertEqual(round_significant(1 / 3), 0.333333333333333)
        self.assertEqual(round_significant(complex(0.5000000000000002, -1)),
                         complex(0.5, -1))
        self.assertIsInstance(round_significant(4), int)

    def test_verdict_invariants(self):
        """Inequivalent needs a witness and Equivalent must not have one."""
        with self.assertRaises(StateError):
            Verdict(Outcome.INEQUIVALENT, PROFILE_MISMATCH)
        with self.assertRaises(StateError):
            Verdict(Outcome.EQUIVALENT, GENERIC_MATCH,
                    Witness('I[A;1]', 1.0, 1.0))

    def test_differs(self):
        self.assertFalse(differs(1.0, 1.0 + 1e-12, 1e-8))
        self.assertTrue(differs(1.0, 1.0 + 1e-6, 1e-8))
        self.assertTrue(differs(1j, -1j, 1e-8))


class TestEquivalenceCompareProfiles(unittest.TestCase):
    """
    Test-case for ``compare_profiles()``.
    """

    def test_identical_and_close(self):
        profile = invariant_profile(ghz_state((2, 2, 2)))
        self.assertIsNone(compare_profiles(profile, profile, 1e-8))
        shifted = InvariantProfile(tuple(
            (label, value + 1e-12) for label, value in profile))
        self.assertIsNone(compare_profiles(profile, shifted, 1e-8))

    def test_ghz_vs_w(self):
        witness = compare_profiles(invariant_profile(ghz_state((2, 2, 2))),
                                   invariant_profile(w_state((2, 2, 2))),
                                   1e-8)
        self.assertEqual(witness.name, 'I[A;2]')
        self.assertAlmostEqual(witness.left, 0.5, delta=1e-12)
        self.assertAlmostEqual(witness.right, 5 / 9, delta=1e-12)

    def test_label_mismatch(self):
        with self.assertRaises(StateError):
            compare_profiles(invariant_profile(ghz_state((2, 2, 2))),
                             invariant_profile(basis_state((3, 2, 2))), 1e-8)


class TestEquivalenceGenericity(unittest.TestCase):
    """
    Test-case for ``genericity()``.
    """

    def test_pure_is_not_generic(self):
        report = genericity(partial_trace(basis_state((2, 2, 2)), [0]))
        self.assertFalse(report.is_generic)
        self.assertEqual(report.reason, RANK_DEFICIENT)
        self.assertEqual(report.n_eff, 1)

    def test_maximally_mixed_is_not_generic(self):
        """Theta and Omega of I/4 are singular block matrices."""
        rho = DensityMatrix((2, 2), (1, 2), np.eye(4) / 4)
        report = genericity(rho)
        self.assertFalse(report.is_generic)
        self.assertTrue(report.spectrum_degenerate)
        self.assertLess(report.omega_min_abs, 1e-10)

    def test_random_is_generic(self):
        """Random reduced states at dims (4,2,2) are generic."""
        stream = RandomStream(32, 'generic-rate')
        generic = 0
        for index in range(20):
            state = random_pure_state((4, 2, 2), stream.split(str(index)))
            report = genericity(partial_trace(state, [0]), source_dims=(4, 2, 2))
            self.assertTrue(report.dims_check)
            generic += report.is_generic
        self.assertGreaterEqual(generic, 18)

    def test_needs_two_subsystems(self):
        with self.assertRaises(DimensionError):
            genericity(partial_trace(basis_state((2, 2, 2)), [0, 1]))


class TestEquivalenceDecide(unittest.TestCase):
    """
    Test-case for ``decide_equivalence()``.
    """

    def test_ghz_vs_w(self):
        verdict = decide_equivalence(ghz_state((2, 2, 2)), w_state((2, 2, 2)))
        self.assertIs(verdict.outcome, Outcome.INEQUIVALENT)
        self.assertEqual(verdict.reason, PROFILE_MISMATCH)
        self.assertEqual(verdict.witness.name, 'I[A;2]')

    def test_ghz_vs_ghz(self):
        """Matching profiles but rank 2 < 4: the procedure declines."""
        verdict = decide_equivalence(ghz_state((2, 2, 2)),
                                     ghz_state((2, 2, 2)))
        self.assertIs(verdict.outcome, Outcome.INDETERMINATE)
        self.assertEqual(verdict.reason, NOT_GENERIC)
        self.assertIsNone(verdict.witness)
        self.assertEqual(verdict.genericity.n_eff, 2)

    def test_local_unitary_partner(self):
        state = generic_state('partner')
        partner, _ = random_lu_pair(state, RandomStream(33, 'partner'))
        verdict = decide_equivalence(state, partner)
        self.assertIs(verdict.outcome, Outcome.EQUIVALENT, str(verdict))
        self.assertEqual(verdict.reason, GENERIC_MATCH)
        self.assertTrue(verdict.genericity.is_generic)
        self.assertIs(decide_equivalence(partner, state).outcome,
                      Outcome.EQUIVALENT)

    def test_independent_states(self):
        state = generic_state('stranger')
        other = random_pure_state((4, 2, 2), RandomStream(34, 'stranger'))
        forward = decide_equivalence(state, other)
        self.assertIs(forward.outcome, Outcome.INEQUIVALENT)
        self.assertIsNotNone(forward.witness)
        self.assertIs(decide_equivalence(other, state).outcome,
                      Outcome.INEQUIVALENT)

    def test_looser_tolerance_keeps_equivalent(self):
        state = generic_state('loose')
        partner, _ = random_lu_pair(state, RandomStream(35, 'loose'))
        loose = DEFAULT_TOLERANCES.replace(profile=1e-6)
        self.assertIs(decide_equivalence(state, partner, loose).outcome,
                      Outcome.EQUIVALENT)

    def test_degenerate_spectrum(self):
        """
        A generic report flagging a degenerate spectrum stops the procedure
        before the Gram comparison.
        """
        report = GenericityReport(True, 1.0, 1.0, 1.0, 1.0, 4, 4, True, True)
        state = generic_state('degenerate')
        with patch('lutool.equivalence.genericity', return_value=report):
            verdict = decide_equivalence(state, state)
        self.assertIs(verdict.outcome, Outcome.INDETERMINATE)
        self.assertEqual(verdict.reason, DEGENERATE_SPECTRUM)

    def test_dims_errors(self):
        with self.assertRaises(DimensionError):
            decide_equivalence(ghz_state((2, 2, 2)), basis_state((2, 2, 3)))
        with self.assertRaises(DimensionError):
            decide_equivalence(ghz_state((2, 2, 2, 2)),
                               ghz_state((2, 2, 2, 2)))


if __name__ == '__main__':
    unittest.main()
