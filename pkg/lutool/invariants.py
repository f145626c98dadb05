"""
Invariants of multipartite pure states under local unitary
transformations.

The families computed here:

``I[p; alpha]``
    ``Tr(rho_p^alpha)`` with ``rho_p`` the partial trace over ``p``.
``I[j,k; alpha,beta]``
    ``Tr(Tr_k((Tr_j |psi><psi|)^alpha)^beta)``.
``I[j1,j2,...; a1,a2,...]``
    the nested generalization for any number of parties: trace out ``j1``,
    raise to ``a1``, trace out ``j2``, raise to ``a2``, ..., take the trace.
``J[j; alpha]``
    ``Tr(Tr_j(rho^alpha))`` for a bipartite mixed state ``rho``.
Gram invariants
    ``Theta``, ``Omega``, ``X`` and ``Y`` built from the reductions of the
    eigenprojectors of ``rho``, see :func:`gram_invariants`.

Dense partial traces are the primary evaluation path. The slice matrix
formula :func:`i_alpha_beta_slices` is an independent second path used to
cross-check it.
"""
import logging
from dataclasses import dataclass, replace

import numpy as np

from lutool.config import (ConsistencyError, DEFAULT_TOLERANCES,
                           DimensionError, PaddingError, StateError)
from lutool.linalg import (herm_eig, mat_pow_nat, real_trace, relative_gaps,
                           trace_power)
from lutool.statespace import (partial_trace, reduce_operator,
                               slice_matrices, subsystem_index,
                               subsystem_label)

log = logging.getLogger(__name__)

SIMPLE, NESTED, MIXED_J = 'simple', 'nested', 'mixed-J'


@dataclass(frozen=True)
class InvariantLabel(object):
    """
    Name of one invariant value.

    :ivar kind: ``'simple'``, ``'nested'`` or ``'mixed-J'``
    :ivar subsystems: traced subsystems, in tracing order
    :ivar exponents: matching exponents
    """
    kind: str
    subsystems: tuple
    exponents: tuple

    def __post_init__(self):
        subsystems = tuple(subsystem_index(s) for s in self.subsystems)
        exponents = tuple(self.exponents)
        if self.kind not in (SIMPLE, NESTED, MIXED_J):
            raise StateError('unknown invariant kind %r' % (self.kind,))
        if not subsystems or len(subsystems) != len(exponents):
            raise StateError('subsystems %r and exponents %r must be '
                             'nonempty and of equal length'
                             % (subsystems, exponents))
        if len(set(subsystems)) != len(subsystems):
            raise StateError('subsystems repeat in %r' % (subsystems,))
        if any(int(e) != e or e < 1 for e in exponents):
            raise StateError('exponents must be positive integers, got %r'
                             % (exponents,))
        object.__setattr__(self, 'subsystems', subsystems)
        object.__setattr__(self, 'exponents', tuple(int(e) for e in exponents))

    def __str__(self):
        head = 'J' if self.kind == MIXED_J else 'I'
        return '%s[%s;%s]' % (head,
                              ','.join(map(subsystem_label, self.subsystems)),
                              ','.join(map(str, self.exponents)))


@dataclass(frozen=True)
class InvariantProfile(object):
    """Ordered ``(label, value)`` pairs; the comparison fingerprint."""
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def labels(self):
        return tuple(label for label, _ in self.entries)

    def values(self):
        return np.array([value for _, value in self.entries])

    def __getitem__(self, label):
        for known, value in self.entries:
            if known == label or str(known) == label:
                return value
        raise KeyError(label)


@dataclass(frozen=True, eq=False)
class GramInvariants(object):
    """
    ``Theta`` and ``Omega`` (real, zero padded to ``padded_side``) and the
    triple-product tensors ``X`` and ``Y`` over the retained eigenvectors.

    ``X`` and ``Y`` are kept complex: the trace of a product of three
    Hermitian matrices is not real in general.

    ``swapped`` is true when the two subsystems were exchanged so that the
    first one is the smaller; :meth:`unswapped` maps the entries back to the
    caller's labels.
    """
    n_eff: int
    padded_side: int
    theta: np.ndarray
    omega: np.ndarray
    x: np.ndarray
    y: np.ndarray
    eigenvalues: np.ndarray
    swapped: bool = False

    def unswapped(self):
        """
        The same invariants with ``Theta``/``Y`` over the caller's second
        subsystem and ``Omega``/``X`` over the first.

        Exchanging the subsystems exchanges ``Theta`` with ``Omega`` and
        ``X`` with ``conj(Y)``.
        """
        if not self.swapped:
            return self
        return replace(self, theta=self.omega, omega=self.theta,
                       x=self.y.conj(), y=self.x.conj(), swapped=False)

    def items(self):
        """``(name, index, value)`` over every entry, for comparisons."""
        for name in ('theta', 'omega', 'x', 'y'):
            array = getattr(self, name)
            for index in np.ndindex(*array.shape):
                yield name, index, array[index]


@dataclass(frozen=True, eq=False)
class MultiplicityEntry(object):
    index: int
    eigenvalue: float
    rho_spectrum: np.ndarray
    theta_spectrum: np.ndarray
    rho_min_gap: float
    theta_min_gap: float
    rho_multiplicity_free: bool
    theta_multiplicity_free: bool


@dataclass(frozen=True, eq=False)
class MultiplicityReport(object):
    """Spectra of ``rho_l = A_l A_l^dagger`` and ``theta_l = A_l^dagger A_l``."""
    entries: tuple

    @property
    def multiplicity_free(self):
        """The classifier condition: ``rho_0`` and ``theta_0`` both free."""
        if not self.entries:
            return False
        first = self.entries[0]
        return first.rho_multiplicity_free and first.theta_multiplicity_free


def _check_exponent(value):
    if int(value) != value or value < 1:
        raise StateError('exponent must be a positive integer, got %r'
                         % (value,))
    return int(value)


def i_alpha(state, pivot, alpha, tolerances=DEFAULT_TOLERANCES):
    """
    ``I[p; alpha] = Tr(rho_p^alpha)``, ``rho_p`` the partial trace over
    ``pivot``. Cross-checked against the eigenvalue path.

    :type state: PureState
    :param pivot: subsystem index or label
    :param alpha: positive integer

    :rtype: float
    """
    alpha = _check_exponent(alpha)
    reduced = partial_trace(state, [pivot])
    return trace_power(reduced.entries, alpha, cross_check=True,
                       tolerances=tolerances)


def nested_invariant(state, order, exponents, tolerances=DEFAULT_TOLERANCES):
    """
    Nested invariant: trace out ``order[0]``, raise to ``exponents[0]``,
    trace out ``order[1]``, raise to ``exponents[1]`` and so on, then take
    the full trace.

    :param order: distinct subsystems; at least one subsystem must stay
        untraced
    :param exponents: positive integers, one per entry of ``order``

    :rtype: float

    :raises StateError: malformed sequences
    """
    order = tuple(state.dims.check_index(index) for index in order)
    exponents = tuple(_check_exponent(e) for e in exponents)
    if not order or len(order) != len(exponents):
        raise StateError('order %r and exponents %r must be nonempty and of '
                         'equal length' % (order, exponents))
    if len(set(order)) != len(order):
        raise StateError('order %r repeats a subsystem' % (order,))
    if len(order) >= state.n_parties:
        raise StateError('order %r leaves no subsystem untraced' % (order,))

    reduced = partial_trace(state, order[:1])
    dims, subsystems = list(reduced.dims), list(reduced.subsystems)
    matrix = mat_pow_nat(reduced.entries, exponents[0])
    for traced, exponent in zip(order[1:], exponents[1:]):
        position = subsystems.index(traced)
        matrix = reduce_operator(matrix, dims, [position])
        del dims[position], subsystems[position]
        matrix = mat_pow_nat(matrix, exponent)
    return real_trace(matrix, tolerances.imaginary)


def i_alpha_beta(state, j, k, alpha, beta, tolerances=DEFAULT_TOLERANCES):
    """
    ``I[j,k; alpha,beta] = Tr(Tr_k((Tr_j |psi><psi|)^alpha)^beta)``.

    For ``beta == 1`` the value must equal :func:`i_alpha`; the agreement of
    the two code paths is asserted.

    :rtype: float

    :raises StateError: ``j == k``
    :raises ConsistencyError: ``beta == 1`` disagreement beyond 1e-12
    """
    j, k = state.dims.check_index(j), state.dims.check_index(k)
    if j == k:
        raise StateError('the two traced subsystems must differ')
    value = nested_invariant(state, (j, k), (alpha, beta), tolerances)
    if beta == 1:
        simple = i_alpha(state, j, alpha, tolerances)
        if abs(simple - value) > 1e-12:
            raise ConsistencyError('I[%s,%s;%d,1] = %r but I[%s;%d] = %r'
                                   % (subsystem_label(j), subsystem_label(k),
                                      alpha, value, subsystem_label(j),
                                      alpha, simple))
    return value


def i_alpha_beta_slices(state, j, k, alpha, beta,
                        tolerances=DEFAULT_TOLERANCES):
    """
    ``I[j,k; alpha,beta]`` from the slice matrices ``A^(m)`` of pivot ``j``.

    With ``G[m, n] = Tr(A^(m)^dagger A^(n))`` the power of the reduced state
    is ``sum (G^(alpha-1))[m, n] |a_m><a_n|``, and tracing out ``k`` maps
    ``|a_m><a_n|`` to ``A^(m)^T A^(n)^*`` when ``k`` indexes the slice rows
    and to ``A^(m) A^(n)^dagger`` when it indexes the columns. Only the
    amplitudes and the Gram matrix enter, independently of the dense
    partial trace path.

    :raises DimensionError: the state is not tripartite
    """
    j, k = state.dims.check_index(j), state.dims.check_index(k)
    if j == k:
        raise StateError('the two traced subsystems must differ')
    alpha, beta = _check_exponent(alpha), _check_exponent(beta)
    family = slice_matrices(state, j)
    weights = np.linalg.matrix_power(family.gram(), alpha - 1)
    slices = family.matrices
    if k == state.dims.others(j)[0]:
        reduced = np.einsum('mn,mkl,nkq->lq', weights, slices, slices.conj())
    else:
        reduced = np.einsum('mn,mkl,npl->kp', weights, slices, slices.conj())
    return real_trace(mat_pow_nat(reduced, beta), tolerances.imaginary)


def j_alpha(rho, j, alpha, tolerances=DEFAULT_TOLERANCES):
    """
    ``J[j; alpha] = Tr(Tr_j(rho^alpha))`` of a reduced density matrix.

    :type rho: DensityMatrix
    :param j: one of the subsystems carried by ``rho``

    :rtype: float
    """
    alpha = _check_exponent(alpha)
    position = rho.position(j)
    power = mat_pow_nat(rho.entries, alpha)
    return real_trace(reduce_operator(power, rho.dims, [position]),
                      tolerances.imaginary)


def _bipartite_dims(dims):
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise DimensionError('expected two subsystems, got dims %r' % (dims,))
    return dims


def _reductions(vectors, first, second):
    """Reductions of each ``|v><v|`` onto the first and second factors."""
    shaped = vectors.T.reshape(-1, first, second)
    onto_first = np.einsum('nij,nkj->nik', shaped, shaped.conj())
    onto_second = np.einsum('nji,njk->nik', shaped, shaped.conj())
    return onto_first, onto_second


def gram_invariants(spectrum, dims, tolerances=DEFAULT_TOLERANCES):
    """
    ``Theta``, ``Omega``, ``X`` and ``Y`` of a bipartite mixed state given by
    its spectral decomposition.

    The subsystems are relabelled internally so that the first one (``B``)
    is not larger than the second (``C``). With ``R_B(m)`` and ``R_C(m)`` the
    reductions of ``|phi_m><phi_m|`` onto ``B`` and ``C``::

        Theta[j, k]  = Tr(R_C(j)^* R_C(k)^*)
        Omega[j, k]  = Tr(R_B(j) R_B(k))
        Y[j, k, l]   = Tr(R_C(j)^* R_C(k)^* R_C(l)^*)
        X[j, k, l]   = Tr(R_B(j) R_B(k) R_B(l))

    over the eigenvectors whose eigenvalue exceeds
    ``tolerances.rank_cutoff``, in descending eigenvalue order. ``Theta`` and
    ``Omega`` are zero padded to ``N_B**2 x N_B**2``.

    :type spectrum: lutool.linalg.SpectralDecomposition
    :param dims: ``(N_B, N_C)``

    :rtype: GramInvariants

    :raises PaddingError: more retained eigenvectors than ``N_B**2``
    :raises ConsistencyError: imaginary residue in ``Theta`` or ``Omega``
    """
    first, second = _bipartite_dims(dims)
    if spectrum.side != first * second:
        raise DimensionError('spectrum of side %d does not match dims %r'
                             % (spectrum.side, (first, second)))
    retained = spectrum.retained(tolerances.rank_cutoff)
    n_eff = len(retained)
    swapped = first > second
    small = min(first, second)
    padded = small ** 2
    if n_eff > padded:
        raise PaddingError('rank %d exceeds the padded side %d = %d**2'
                           % (n_eff, padded, small))

    onto_first, onto_second = _reductions(retained.eigenvectors,
                                             first, second)
    if swapped:
        onto_first, onto_second = onto_second, onto_first
    on_b, on_c = onto_first, onto_second.conj()

    matrices = {}
    for name, reductions in (('theta', on_c), ('omega', on_b)):
        values = np.einsum('jab,kba->jk', reductions, reductions)
        if values.size and np.max(np.abs(values.imag)) > tolerances.imaginary:
            raise ConsistencyError('%s has an imaginary residue' % name)
        padded_values = np.zeros((padded, padded))
        padded_values[:n_eff, :n_eff] = values.real
        matrices[name] = padded_values
    y = np.einsum('jab,kbc,lca->jkl', on_c, on_c, on_c)
    x = np.einsum('jab,kbc,lca->jkl', on_b, on_b, on_b)
    return GramInvariants(n_eff, padded, matrices['theta'], matrices['omega'],
                          x, y, retained.eigenvalues, swapped)


def multiplicity_report(spectrum, dims, tolerances=DEFAULT_TOLERANCES):
    """
    For every retained eigenvector ``xi_l`` reshaped to ``A_l``, the spectra
    of ``rho_l = A_l A_l^dagger`` and ``theta_l = A_l^dagger A_l`` and whether
    each is multiplicity free (all relative gaps above ``tolerances.gap``).

    :rtype: MultiplicityReport

    :raises ConsistencyError: ``rho_l`` and ``theta_l`` disagree on their
        nonzero spectrum
    """
    first, second = _bipartite_dims(dims)
    retained = spectrum.retained(tolerances.rank_cutoff)
    shaped = retained.eigenvectors.T.reshape(-1, first, second)
    entries = []
    shared = min(first, second)
    for index in range(len(retained)):
        a = shaped[index]
        rho_l = herm_eig(a @ a.conj().T).eigenvalues
        theta_l = herm_eig(a.conj().T @ a).eigenvalues
        if np.max(np.abs(rho_l[:shared] - theta_l[:shared])) > 1e-9:
            raise ConsistencyError('A A^dagger and A^dagger A of eigenvector '
                                   '%d have different spectra' % index)
        rho_gaps = relative_gaps(rho_l, tolerances.rank_cutoff)
        theta_gaps = relative_gaps(theta_l, tolerances.rank_cutoff)
        entries.append(MultiplicityEntry(
            index=index,
            eigenvalue=float(retained.eigenvalues[index]),
            rho_spectrum=rho_l,
            theta_spectrum=theta_l,
            rho_min_gap=float(rho_gaps.min()) if rho_gaps.size else np.inf,
            theta_min_gap=(float(theta_gaps.min()) if theta_gaps.size
                           else np.inf),
            rho_multiplicity_free=bool(np.all(rho_gaps > tolerances.gap)),
            theta_multiplicity_free=bool(np.all(theta_gaps > tolerances.gap)),
        ))
    return MultiplicityReport(tuple(entries))


def _pair_ranges(dims, j, k):
    """Exponent ranges of ``I[j,k; alpha,beta]`` in the profile."""
    r = 3 - j - k
    if j == 0:
        return min(dims[1] ** 2, dims[2] ** 2), dims[r]
    return dims[k] * dims[r], dims[r]


def invariant_profile(state, tolerances=DEFAULT_TOLERANCES):
    """
    The full invariant fingerprint of a tripartite state.

    Order: ``I[p; alpha]`` for ``p = A, B, C`` with
    ``alpha = 1..min(N_p, product of the others)``; then the pairs ``(j, k)``
    in lexicographic order with ``(alpha, beta)`` lexicographic. Pairs
    starting with ``A`` use ``alpha <= min(N_B**2, N_C**2)``,
    ``beta <= N_r``; the other pairs use ``alpha <= N_k * N_r``,
    ``beta <= N_r``, ``r`` being the third subsystem.

    :rtype: InvariantProfile

    :raises DimensionError: the state is not tripartite
    """
    if state.n_parties != 3:
        raise DimensionError('the invariant profile needs a tripartite '
                             'state, got dims %r' % (state.dims.dims,))
    dims = state.dims.dims
    reduced = [partial_trace(state, [p]) for p in range(3)]
    entries = []

    for pivot, rho in enumerate(reduced):
        alpha_max = min(dims[pivot], state.dims.size // dims[pivot])
        spectrum = herm_eig(rho.entries).eigenvalues
        for alpha in range(1, alpha_max + 1):
            value = real_trace(mat_pow_nat(rho.entries, alpha),
                               tolerances.imaginary)
            spectral = float(np.sum(spectrum ** alpha))
            if abs(value - spectral) > 1e-10 * max(1.0, abs(value)):
                raise ConsistencyError('Tr(rho_%s^%d): %r vs eigenvalues %r'
                                       % (subsystem_label(pivot), alpha,
                                          value, spectral))
            entries.append((InvariantLabel(SIMPLE, (pivot,), (alpha,)),
                            value))

    for j in range(3):
        rho = reduced[j]
        for k in range(3):
            if k == j:
                continue
            alpha_max, beta_max = _pair_ranges(dims, j, k)
            position = rho.position(k)
            for alpha in range(1, alpha_max + 1):
                traced = reduce_operator(mat_pow_nat(rho.entries, alpha),
                                         rho.dims, [position])
                for beta in range(1, beta_max + 1):
                    value = real_trace(mat_pow_nat(traced, beta),
                                       tolerances.imaginary)
                    entries.append((InvariantLabel(NESTED, (j, k),
                                                   (alpha, beta)), value))
    log.debug('profile of %d entries for dims %r', len(entries), dims)
    return InvariantProfile(tuple(entries))


def mixed_state_profile(rho, tolerances=DEFAULT_TOLERANCES):
    """
    ``J[j; alpha]`` for every subsystem ``j`` of ``rho`` and
    ``alpha = 1..side``.

    :type rho: DensityMatrix
    :rtype: InvariantProfile
    """
    entries = []
    for j in rho.subsystems:
        for alpha in range(1, rho.side + 1):
            entries.append((InvariantLabel(MIXED_J, (j,), (alpha,)),
                            j_alpha(rho, j, alpha, tolerances)))
    return InvariantProfile(tuple(entries))
