"""
Genericity test and the decision procedure for local unitary equivalence of
tripartite pure states.

:func:`decide_equivalence` runs the necessary checks first (invariant
profile, mixed state profile of ``rho = Tr_A |psi><psi|``, spectrum of
``rho``). On the generic class, where the Gram matrices ``Theta`` and
``Omega`` of ``rho`` are non-degenerate, equal Gram invariants are also
sufficient. Outside that class, or for a degenerate spectrum of ``rho``,
the answer is :attr:`Outcome.INDETERMINATE`; the procedure never guesses.
"""
import enum
import logging
from dataclasses import dataclass

import numpy as np

from lutool.config import (DEFAULT_TOLERANCES, DimensionError, PaddingError,
                           StateError)
from lutool.invariants import (gram_invariants, invariant_profile,
                               mixed_state_profile)
from lutool.linalg import herm_eig, relative_gaps
from lutool.statespace import partial_trace

log = logging.getLogger(__name__)

NOT_GENERIC = 'NOT_GENERIC'
DEGENERATE_SPECTRUM = 'DEGENERATE_SPECTRUM'
PADDING_IMPOSSIBLE = 'PADDING_IMPOSSIBLE'
PROFILE_MISMATCH = 'PROFILE_MISMATCH'
SPECTRUM_MISMATCH = 'SPECTRUM_MISMATCH'
GRAM_MISMATCH = 'GRAM_MISMATCH'
GENERIC_MATCH = 'GENERIC_MATCH'

# genericity failure details
RANK_DEFICIENT = 'RANK_DEFICIENT'
DEGENERATE_GRAM = 'DEGENERATE_GRAM'
SINGULAR_GRAM = 'SINGULAR_GRAM'

WITNESS_DIGITS = 15


class Outcome(enum.Enum):
    EQUIVALENT = 'Equivalent'
    INEQUIVALENT = 'Inequivalent'
    INDETERMINATE = 'Indeterminate'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Witness(object):
    """
    The first quantity found to differ between two states.

    :ivar name: invariant label (``'I[A;2]'``), spectrum entry
        (``'lambda[0]'``) or Gram entry (``'Omega[0,1]'``)
    :ivar left: value for the first state
    :ivar right: value for the second state
    """
    name: str
    left: object
    right: object

    def __str__(self):
        return '%s: %r vs %r' % (self.name, round_significant(self.left),
                                 round_significant(self.right))


def round_significant(value, digits=WITNESS_DIGITS):
    """
    ``value`` rounded to ``digits`` significant digits, so that ``repr``
    prints the short form (``0.5000000000000002 -> 0.5``). Integers and
    complex values keep their type.
    """
    if isinstance(value, (complex, np.complexfloating)):
        return complex(round_significant(value.real, digits),
                       round_significant(value.imag, digits))
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float('%.*g' % (digits, value))


@dataclass(frozen=True, eq=False)
class GenericityReport(object):
    """
    Outcome of :func:`genericity`.

    :ivar is_generic: ``Theta`` and ``Omega`` non-degenerate and nonsingular
        at full padded rank
    :ivar theta_min_gap: smallest relative gap between consecutive
        eigenvalues of ``Theta`` (``inf`` when undefined)
    :ivar omega_min_gap: same for ``Omega``
    :ivar theta_min_abs: smallest ``|eigenvalue|`` of ``Theta``
    :ivar omega_min_abs: same for ``Omega``
    :ivar n_eff: retained rank of ``rho``
    :ivar padded_side: ``N_B**2``, ``N_B`` the smaller local dimension
    :ivar dims_check: ``N_A >= N_B * N_C`` when the source dims are known,
        else ``None``
    :ivar spectrum_degenerate: two retained eigenvalues of ``rho`` closer
        than the gap threshold
    :ivar reason: ``None`` when generic, else the first failed condition
    :ivar gram: the Gram invariants in the caller's subsystem order,
        ``None`` when padding was impossible
    """
    is_generic: bool
    theta_min_gap: float
    omega_min_gap: float
    theta_min_abs: float
    omega_min_abs: float
    n_eff: int
    padded_side: int
    dims_check: object
    spectrum_degenerate: bool
    reason: object = None
    gram: object = None


@dataclass(frozen=True, eq=False)
class Verdict(object):
    """
    Answer of :func:`decide_equivalence`.

    ``INEQUIVALENT`` always carries a witness, ``EQUIVALENT`` never does.
    ``genericity`` is the report of the first state's ``rho`` and
    ``genericity_other`` that of the second; both are ``None`` when a
    necessary check already failed.
    """
    outcome: Outcome
    reason: str
    witness: object = None
    genericity: object = None
    genericity_other: object = None

    def __post_init__(self):
        if self.outcome is Outcome.INEQUIVALENT and self.witness is None:
            raise StateError('an Inequivalent verdict needs a witness')
        if self.outcome is Outcome.EQUIVALENT and self.witness is not None:
            raise StateError('an Equivalent verdict carries no witness')

    def __str__(self):
        text = '%s (%s)' % (self.outcome, self.reason)
        if self.witness is not None:
            text += ', witness %s' % self.witness
        return text


def differs(value, other, tolerance):
    """``|v - v'| > tolerance * max(1, |v|, |v'|)``; works for complex values."""
    return abs(value - other) > tolerance * max(1.0, abs(value), abs(other))


def _gap_stats(values, floor):
    gaps = relative_gaps(values, floor)
    min_gap = float(gaps.min()) if gaps.size else np.inf
    min_abs = float(np.min(np.abs(values))) if len(values) else 0.0
    return min_gap, min_abs


def genericity(rho, tolerances=DEFAULT_TOLERANCES, source_dims=None):
    """
    Decide whether a bipartite ``rho`` is generic: its Gram matrices
    ``Theta`` and ``Omega``, zero padded to ``N_B**2``, have pairwise
    separated eigenvalues (relative gap above ``tolerances.gap``) and none
    below ``tolerances.rank_cutoff`` in modulus.

    Zero padding puts repeated zero eigenvalues into both matrices whenever
    the retained rank is below ``N_B**2``, so such states are never generic.
    A rank above ``N_B**2`` cannot be padded at all and is reported with the
    ``PADDING_IMPOSSIBLE`` reason.

    :param rho: reduced state on two subsystems
    :type rho: DensityMatrix

    :param source_dims: dims of the tripartite state ``rho`` came from, to
        fill in ``dims_check``

        (optional, default: ``None``)
    :type source_dims: sequence of int

    :rtype: GenericityReport

    :raises DimensionError: ``rho`` is not bipartite
    """
    if len(rho.dims) != 2:
        raise DimensionError('genericity needs a bipartite density matrix, '
                             'got dims %r' % (rho.dims,))
    dims_check = None
    if source_dims is not None:
        source_dims = tuple(source_dims)
        dims_check = source_dims[0] >= int(np.prod(source_dims[1:]))

    spectrum = herm_eig(rho.entries)
    retained = spectrum.retained(tolerances.rank_cutoff)
    spectrum_degenerate = bool(np.any(
        relative_gaps(retained.eigenvalues, tolerances.rank_cutoff)
        < tolerances.gap))
    padded = min(rho.dims) ** 2
    try:
        gram = gram_invariants(spectrum, rho.dims, tolerances).unswapped()
    except PaddingError as error:
        log.debug('not generic: %s', error)
        return GenericityReport(False, 0.0, 0.0, 0.0, 0.0, len(retained),
                                padded, dims_check, spectrum_degenerate,
                                PADDING_IMPOSSIBLE)

    theta_gap, theta_abs = _gap_stats(herm_eig(gram.theta).eigenvalues,
                                      tolerances.rank_cutoff)
    omega_gap, omega_abs = _gap_stats(herm_eig(gram.omega).eigenvalues,
                                      tolerances.rank_cutoff)
    if gram.n_eff != gram.padded_side:
        reason = RANK_DEFICIENT
    elif min(theta_gap, omega_gap) <= tolerances.gap:
        reason = DEGENERATE_GRAM
    elif min(theta_abs, omega_abs) <= tolerances.rank_cutoff:
        reason = SINGULAR_GRAM
    else:
        reason = None
    log.debug('genericity: rank %d of %d, Theta gap %.3e, Omega gap %.3e, '
              'reason %s', gram.n_eff, gram.padded_side, theta_gap,
              omega_gap, reason)
    return GenericityReport(reason is None, theta_gap, omega_gap, theta_abs,
                            omega_abs, gram.n_eff, gram.padded_side,
                            dims_check, spectrum_degenerate, reason, gram)


def compare_profiles(profile, other, tolerance):
    """
    First entry where two profiles differ.

    :type profile: InvariantProfile
    :type other: InvariantProfile
    :param tolerance: relative tolerance

    :returns: witness naming the entry, or ``None`` when all entries agree
    :rtype: Witness or None

    :raises StateError: the label sequences differ
    """
    if profile.labels() != other.labels():
        raise StateError('profiles have different label sequences')
    for (label, value), (_, other_value) in zip(profile, other):
        if differs(value, other_value, tolerance):
            return Witness(str(label), value, other_value)
    return None


def _compare_spectra(values, other, tolerance):
    for index, (value, other_value) in enumerate(zip(values, other)):
        if differs(value, other_value, tolerance):
            return Witness('lambda[%d]' % index, float(value),
                           float(other_value))
    return None


def _compare_gram(gram, other, tolerance):
    if gram.n_eff != other.n_eff:
        return Witness('n_eff', gram.n_eff, other.n_eff)
    for (name, index, value), (_, _, other_value) in zip(gram.items(),
                                                         other.items()):
        if differs(value, other_value, tolerance):
            label = '%s%s[%s]' % (name[0].upper(), name[1:],
                                  ','.join(map(str, index)))
            return Witness(label, value.item(), other_value.item())
    return None


def _verdict(outcome, reason, witness=None, report=None, other_report=None):
    verdict = Verdict(outcome, reason, witness, report, other_report)
    log.info('verdict: %s', verdict)
    return verdict


def decide_equivalence(psi, other, tolerances=DEFAULT_TOLERANCES):
    """
    Decide local unitary equivalence of two tripartite pure states.

    1. invariant profiles, entrywise at ``tolerances.profile``;
    2. ``J`` profiles and spectra of ``rho = Tr_A |psi><psi|``;
    3. genericity of both reduced states, else ``NOT_GENERIC``;
    4. non-degenerate spectrum, else ``DEGENERATE_SPECTRUM``;
    5. ``Theta``, ``Omega``, ``X``, ``Y`` entrywise, eigenvectors aligned by
       descending eigenvalue.

    Any mismatch gives :attr:`Outcome.INEQUIVALENT` with the first differing
    quantity as witness; passing every check gives
    :attr:`Outcome.EQUIVALENT`.

    :type psi: PureState
    :type other: PureState

    :rtype: Verdict

    :raises DimensionError: different dims, or not tripartite
    """
    if psi.dims != other.dims:
        raise DimensionError('states have different dims %r and %r'
                             % (psi.dims.dims, other.dims.dims))
    if psi.n_parties != 3:
        raise DimensionError('the decision procedure needs tripartite states, '
                             'got dims %r' % (psi.dims.dims,))
    tolerance = tolerances.profile

    witness = compare_profiles(invariant_profile(psi, tolerances),
                               invariant_profile(other, tolerances),
                               tolerance)
    if witness is not None:
        return _verdict(Outcome.INEQUIVALENT, PROFILE_MISMATCH, witness)

    rho = partial_trace(psi, [0])
    other_rho = partial_trace(other, [0])
    witness = compare_profiles(mixed_state_profile(rho, tolerances),
                               mixed_state_profile(other_rho, tolerances),
                               tolerance)
    if witness is not None:
        return _verdict(Outcome.INEQUIVALENT, PROFILE_MISMATCH, witness)
    witness = _compare_spectra(herm_eig(rho.entries).eigenvalues,
                               herm_eig(other_rho.entries).eigenvalues,
                               tolerance)
    if witness is not None:
        return _verdict(Outcome.INEQUIVALENT, SPECTRUM_MISMATCH, witness)

    report = genericity(rho, tolerances, psi.dims.dims)
    other_report = genericity(other_rho, tolerances, other.dims.dims)
    if not (report.is_generic and other_report.is_generic):
        return _verdict(Outcome.INDETERMINATE, NOT_GENERIC, None, report,
                        other_report)
    if report.spectrum_degenerate or other_report.spectrum_degenerate:
        return _verdict(Outcome.INDETERMINATE, DEGENERATE_SPECTRUM, None,
                        report, other_report)

    witness = _compare_gram(report.gram, other_report.gram, tolerance)
    if witness is not None:
        return _verdict(Outcome.INEQUIVALENT, GRAM_MISMATCH, witness, report,
                        other_report)
    return _verdict(Outcome.EQUIVALENT, GENERIC_MATCH, None, report,
                    other_report)
