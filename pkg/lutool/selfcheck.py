"""
Self-check suites run by ``lutool selfcheck``.

Each suite checks one property of the package on freshly sampled states:
invariance of the profile, agreement of the two evaluation paths of the
nested invariants, GHZ/W discrimination, completeness of the decision
procedure on the generic class, agreement with the search oracle, invariance
of the Gram invariants, quality of the numerical kernels and safety of the
procedure on degenerate inputs.

Every suite draws from its own stream ``(seed, name)``, so the transcript is
a function of the mode and the seed only.
"""
import logging
import time
from dataclasses import dataclass

import numpy as np
import scipy.stats

from lutool.equivalence import (NOT_GENERIC, Outcome, compare_profiles,
                                decide_equivalence, differs, genericity)
from lutool.invariants import (gram_invariants, i_alpha, i_alpha_beta,
                               i_alpha_beta_slices, invariant_profile)
from lutool.linalg import herm_eig, relative_gaps, unitarity_residual
from lutool.lusearch import SearchConfig, alternating_search
from lutool.sampling import (RandomStream, haar_unitary, random_lu_pair,
                             random_pure_state)
from lutool.statespace import ghz_state, partial_trace, w_state

log = logging.getLogger(__name__)

QUICK, FULL = 'quick', 'full'

SAMPLE_COUNTS = {
    QUICK: dict(invariance=20, two_path=10, generic=8, oracle=4, restarts=5,
                gram=10, matrices=20, samples=200, symmetry=10),
    FULL: dict(invariance=200, two_path=50, generic=50, oracle=50,
               restarts=20, gram=50, matrices=100, samples=1000,
               symmetry=50),
}

INVARIANCE_DIMS = ((2, 2, 2), (3, 2, 2), (4, 2, 2), (2, 3, 4))
GENERIC_DIMS = (4, 2, 2)
# draws allowed per requested generic instance
MAX_DRAWS_FACTOR = 10


@dataclass(frozen=True)
class SuiteResult(object):
    name: str
    passed: bool
    elapsed: float
    detail: str = ''

    def __str__(self):
        return '%-12s %s %8.3fs  %s' % (self.name,
                                        'PASS' if self.passed else 'FAIL',
                                        self.elapsed, self.detail)


def check_invariance(stream, counts):
    """Profiles of ``psi`` and ``U psi`` agree within relative 1e-9."""
    for index in range(counts['invariance']):
        dims = INVARIANCE_DIMS[index % len(INVARIANCE_DIMS)]
        sample = stream.split('sample-%d' % index)
        psi = random_pure_state(dims, sample.split('state'))
        moved, _ = random_lu_pair(psi, sample.split('unitaries'))
        witness = compare_profiles(invariant_profile(psi),
                                   invariant_profile(moved), 1e-9)
        if witness is not None:
            return False, 'sample %d at dims %r: %s' % (index, dims, witness)
    return True, '%d states' % counts['invariance']


def check_two_paths(stream, counts):
    """Dense partial traces and slice matrices give the same nested values."""
    worst = 0.0
    for index in range(counts['two_path']):
        psi = random_pure_state((2, 2, 2), stream.split('state-%d' % index))
        for j in range(3):
            for k in range(3):
                if j == k:
                    continue
                for alpha in range(1, 4):
                    for beta in range(1, 4):
                        gap = abs(i_alpha_beta(psi, j, k, alpha, beta)
                                  - i_alpha_beta_slices(psi, j, k, alpha,
                                                        beta))
                        worst = max(worst, gap)
    return worst <= 1e-10, 'max deviation %.3e' % worst


def _brute_force_purity(state):
    """``Tr(Tr_A(|psi><psi|)^2)`` from the full projector."""
    rest = state.dims.size // state.dims[0]
    projector = state.projector().reshape(state.dims[0], rest,
                                          state.dims[0], rest)
    reduced = np.trace(projector, axis1=0, axis2=2)
    return float(np.trace(reduced @ reduced).real)


def check_ghz_w(stream, counts):
    """``I[A;2]`` of GHZ and W and the verdict between them."""
    ghz, w = ghz_state((2, 2, 2)), w_state((2, 2, 2))
    for name, state, expected in (('GHZ', ghz, 0.5), ('W', w, 5 / 9)):
        value = i_alpha(state, 0, 2)
        if abs(value - expected) > 1e-12:
            return False, 'I[A;2](%s) = %r' % (name, value)
        if abs(value - _brute_force_purity(state)) > 1e-12:
            return False, 'I[A;2](%s) disagrees with the projector' % name
    verdict = decide_equivalence(ghz, w)
    if (verdict.outcome is not Outcome.INEQUIVALENT
            or verdict.witness.name != 'I[A;2]'):
        return False, 'GHZ vs W: %s' % verdict
    return True, str(verdict.witness)


def generic_instances(stream, count):
    """
    ``count`` triples ``(psi, U psi, phi)`` at dims (4,2,2) where
    ``Tr_A |psi><psi|`` is generic with a non-degenerate spectrum and ``phi``
    is an independent Haar state.

    Draw ``i`` only depends on ``(stream, i)``, so shorter lists are prefixes
    of longer ones.
    """
    instances = []
    for index in range(count * MAX_DRAWS_FACTOR):
        if len(instances) == count:
            break
        draw = stream.split('draw-%d' % index)
        psi = random_pure_state(GENERIC_DIMS, draw.split('state'))
        report = genericity(partial_trace(psi, [0]),
                            source_dims=GENERIC_DIMS)
        if not report.is_generic or report.spectrum_degenerate:
            continue
        partner, _ = random_lu_pair(psi, draw.split('unitaries'))
        stranger = random_pure_state(GENERIC_DIMS, draw.split('stranger'))
        instances.append((psi, partner, stranger))
    return instances


def check_generic_class(stream, counts):
    """Partners decide Equivalent, independent pairs Inequivalent."""
    instances = generic_instances(stream, counts['generic'])
    if len(instances) < counts['generic']:
        return False, 'only %d generic states drawn' % len(instances)
    for index, (psi, partner, stranger) in enumerate(instances):
        verdict = decide_equivalence(psi, partner)
        if verdict.outcome is not Outcome.EQUIVALENT:
            return False, 'partner %d: %s' % (index, verdict)
        verdict = decide_equivalence(psi, stranger)
        if verdict.outcome is not Outcome.INEQUIVALENT:
            return False, 'stranger %d: %s' % (index, verdict)
    return True, '%d + %d pairs' % (len(instances), len(instances))


def check_oracle(stream, counts, seed):
    """Search fidelity matches the verdict on the generic instances."""
    config = SearchConfig(restarts=counts['restarts'], seed=seed)
    lowest, highest = 1.0, 0.0
    for index, (psi, partner, stranger) in enumerate(
            generic_instances(stream, counts['oracle'])):
        for other in (partner, stranger):
            verdict = decide_equivalence(psi, other)
            best = alternating_search(psi, other, config).best_fidelity
            if verdict.outcome is Outcome.EQUIVALENT:
                lowest = min(lowest, best)
                if best < 1 - 1e-6:
                    return False, ('pair %d decided Equivalent reaches only '
                                   '%.9f' % (index, best))
            elif verdict.outcome is Outcome.INEQUIVALENT:
                highest = max(highest, best)
                if best >= 1 - 1e-3:
                    return False, ('pair %d decided Inequivalent reaches '
                                   '%.9f' % (index, best))
    return True, ('equivalent >= %.9f, inequivalent <= %.6f'
                  % (lowest, highest))


def check_gram_invariance(stream, counts):
    """Gram invariants of ``rho`` survive ``U_B (x) U_C`` conjugation."""
    checked = 0
    for index in range(counts['gram'] * MAX_DRAWS_FACTOR):
        if checked == counts['gram']:
            break
        draw = stream.split('draw-%d' % index)
        psi = random_pure_state(GENERIC_DIMS, draw.split('state'))
        rho = partial_trace(psi, [0])
        spectrum = herm_eig(rho.entries)
        if np.min(relative_gaps(spectrum.eigenvalues)) < 1e-6:
            continue
        moved, _ = random_lu_pair(psi, draw.split('unitaries'))
        gram = gram_invariants(spectrum, rho.dims)
        other = gram_invariants(herm_eig(partial_trace(moved, [0]).entries),
                                rho.dims)
        for (name, entry, value), (_, _, moved_value) in zip(gram.items(),
                                                             other.items()):
            if differs(value, moved_value, 1e-9):
                return False, ('draw %d: %s%r %r vs %r'
                               % (index, name, entry, value, moved_value))
        checked += 1
    if checked < counts['gram']:
        return False, 'only %d non-degenerate spectra drawn' % checked
    return True, '%d mixed states' % checked


def check_kernels(stream, counts):
    """Jacobi reconstruction, Haar unitarity and the mean purity."""
    worst = 0.0
    for index in range(counts['matrices']):
        side = 1 + index % 16
        ginibre = stream.split('matrix-%d' % index).complex_normal(
            (side, side))
        hermitian = (ginibre + ginibre.conj().T) / 2
        residual = np.max(np.abs(herm_eig(hermitian).reconstruct()
                                 - hermitian))
        worst = max(worst, residual)
    if worst >= 1e-10:
        return False, 'Jacobi reconstruction residual %.3e' % worst

    unitary_worst = max(
        unitarity_residual(haar_unitary(size,
                                        stream.split('unitary-%d' % size)))
        for size in range(1, 17))
    if unitary_worst >= 1e-12:
        return False, 'Haar unitarity residual %.3e' % unitary_worst

    d_a, d_b = 2, 3
    purities = np.array([
        i_alpha(random_pure_state((d_a, d_b),
                                  stream.split('purity-%d' % index)), 1, 2)
        for index in range(counts['samples'])])
    expected = (d_a + d_b) / (d_a * d_b + 1)
    error = scipy.stats.sem(purities)
    deviation = abs(purities.mean() - expected)
    if deviation > 3 * error:
        return False, ('mean purity %.6f, expected %.6f +- %.6f'
                       % (purities.mean(), expected, 3 * error))
    return True, ('residuals %.1e / %.1e, purity %.5f vs %.5f'
                  % (worst, unitary_worst, purities.mean(), expected))


def check_degeneracy_safety(stream, counts):
    """GHZ against itself is Indeterminate; verdicts are symmetric."""
    ghz = ghz_state((2, 2, 2))
    verdict = decide_equivalence(ghz, ghz)
    if (verdict.outcome is not Outcome.INDETERMINATE
            or verdict.reason != NOT_GENERIC):
        return False, 'GHZ vs GHZ: %s' % verdict
    for index in range(counts['symmetry']):
        draw = stream.split('pair-%d' % index)
        dims = ((2, 2, 2), GENERIC_DIMS)[index % 2]
        psi = random_pure_state(dims, draw.split('state'))
        if index % 3 == 0:
            other = random_pure_state(dims, draw.split('other'))
        else:
            other, _ = random_lu_pair(psi, draw.split('unitaries'))
        forward = decide_equivalence(psi, other).outcome
        backward = decide_equivalence(other, psi).outcome
        if forward is not backward:
            return False, 'pair %d: %s one way, %s the other' % (
                index, forward, backward)
    return True, '%d pairs symmetric' % counts['symmetry']


SUITES = (
    ('invariance', check_invariance),
    ('two-path', check_two_paths),
    ('ghz-w', check_ghz_w),
    ('generic', check_generic_class),
    ('oracle', check_oracle),
    ('gram', check_gram_invariance),
    ('kernels', check_kernels),
    ('degeneracy', check_degeneracy_safety),
)


def run_suites(mode=QUICK, seed=0):
    """
    Run every suite in order.

    :param mode: ``'quick'`` or ``'full'``
    :param seed: root seed of the sample streams

    :returns: one result per suite
    :rtype: list of SuiteResult
    """
    if mode not in SAMPLE_COUNTS:
        raise ValueError('unknown selfcheck mode %r' % (mode,))
    counts = SAMPLE_COUNTS[mode]
    root = RandomStream(seed, 'selfcheck')
    results = []
    for name, check in SUITES:
        # the oracle reuses the generic instances
        stream = root.split('generic' if name == 'oracle' else name)
        started = time.perf_counter()
        try:
            if name == 'oracle':
                passed, detail = check(stream, counts, seed)
            else:
                passed, detail = check(stream, counts)
        except ArithmeticError as error:
            log.exception('suite %s raised', name)
            passed, detail = False, '%s: %s' % (type(error).__name__, error)
        result = SuiteResult(name, bool(passed),
                             time.perf_counter() - started, detail)
        log.info('%s', result)
        results.append(result)
    return results
