"""
Dense complex linear algebra kernels used by the invariants: a cyclic
Jacobi eigensolver for Hermitian matrices, matrix powers by binary
exponentiation, traces of powers with an eigenvalue cross-check and the
unitary polar factor used by the search oracle.

Matrices here are small (side <= 64), so the Jacobi solver favours
robustness and accuracy of the eigenvectors over speed.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from lutool.config import ConsistencyError, DEFAULT_TOLERANCES, StateError

log = logging.getLogger(__name__)

MAX_SWEEPS = 60


@dataclass(frozen=True, eq=False)
class SpectralDecomposition(object):
    """
    Eigenvalues in descending order with matching eigenvector columns.

    :ivar eigenvalues: real vector, descending
    :ivar eigenvectors: unitary matrix, column ``m`` belongs to
        ``eigenvalues[m]``
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def side(self):
        return self.eigenvalues.shape[0]

    def __len__(self):
        return self.side

    def reconstruct(self):
        vectors = self.eigenvectors
        return (vectors * self.eigenvalues) @ vectors.conj().T

    def retained(self, cutoff):
        """Copy keeping only the eigenpairs with eigenvalue above ``cutoff``."""
        keep = self.eigenvalues > cutoff
        return SpectralDecomposition(self.eigenvalues[keep],
                                     self.eigenvectors[:, keep])


def check_hermitian(matrix, tolerance=DEFAULT_TOLERANCES.hermitian):
    """Return ``matrix`` as a complex square array or raise ``StateError``."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise StateError('expected a square matrix, got shape %r'
                         % (matrix.shape,))
    if matrix.size and np.max(np.abs(matrix - matrix.conj().T)) >= tolerance:
        raise StateError('matrix is not Hermitian within %g' % tolerance)
    return matrix


def _rotation(a_pp, a_qq, a_pq):
    """
    2x2 unitary ``G`` with ``(G^dagger A G)_pq = 0`` for the Hermitian block
    ``[[a_pp, a_pq], [conj(a_pq), a_qq]]``.
    """
    magnitude = abs(a_pq)
    phase = np.conj(a_pq) / magnitude
    theta = (a_qq - a_pp) / (2 * magnitude)
    if theta >= 0:
        t = 1 / (theta + np.sqrt(theta * theta + 1))
    else:
        t = -1 / (-theta + np.sqrt(theta * theta + 1))
    c = 1 / np.sqrt(t * t + 1)
    s = t * c
    return np.array([[c, s], [-s * phase, c * phase]])


def herm_eig(matrix, tolerance=DEFAULT_TOLERANCES.hermitian):
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot entry and then applies
    the classical real Jacobi rotation, so the iteration runs on the complex
    matrix directly. Sweeps stop when the off-diagonal mass is at the level
    of rounding. Eigenvalues are sorted descending with a stable sort, so ties
    keep the order the rotations produced them in.

    :param matrix: Hermitian matrix
    :type matrix: array-like

    :returns: the decomposition
    :rtype: SpectralDecomposition

    :raises StateError: the input is not square or not Hermitian
    """
    work = check_hermitian(matrix, tolerance).copy()
    side = work.shape[0]
    vectors = np.eye(side, dtype=complex)
    work = (work + work.conj().T) / 2
    # unit largest entry, so the norms below neither underflow nor overflow
    peak = np.max(np.abs(work)) if side else 0.0
    if peak > 0:
        work /= peak
    else:
        peak = 1.0
    scale = np.linalg.norm(work)
    threshold = np.finfo(float).eps * max(scale, np.finfo(float).tiny)
    stop = threshold * max(side, 1)

    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(work - np.diag(np.diag(work)))
        if off <= stop:
            break
        for p in range(side - 1):
            for q in range(p + 1, side):
                a_pq = work[p, q]
                if abs(a_pq) <= threshold / side:
                    continue
                rotation = _rotation(work[p, p].real, work[q, q].real, a_pq)
                pair = [p, q]
                work[:, pair] = work[:, pair] @ rotation
                work[pair, :] = rotation.conj().T @ work[pair, :]
                work[p, q] = work[q, p] = 0
                vectors[:, pair] = vectors[:, pair] @ rotation
    else:
        log.warning('Jacobi iteration stopped after %d sweeps', MAX_SWEEPS)

    eigenvalues = np.diag(work).real * peak
    order = np.argsort(-eigenvalues, kind='stable')
    return SpectralDecomposition(eigenvalues[order], vectors[:, order])


def mat_pow_nat(matrix, alpha):
    """
    Integer power ``H^alpha`` by binary exponentiation of the matrix.

    :param matrix: Hermitian matrix
    :param alpha: exponent >= 1

    :returns: Hermitian power (symmetrized against rounding)
    :rtype: numpy.ndarray

    :raises StateError: ``alpha`` is not a positive integer
    """
    if int(alpha) != alpha or alpha < 1:
        raise StateError('exponent must be a positive integer, got %r'
                         % (alpha,))
    alpha = int(alpha)
    base = np.asarray(matrix, dtype=complex)
    result = None
    while alpha:
        if alpha & 1:
            result = base if result is None else result @ base
        alpha >>= 1
        if alpha:
            base = base @ base
    return (result + result.conj().T) / 2


def real_trace(matrix, tolerance=DEFAULT_TOLERANCES.imaginary):
    """
    Trace of a matrix that is Hermitian in exact arithmetic.

    :raises ConsistencyError: imaginary part above ``tolerance``
    """
    trace = np.trace(matrix)
    if abs(trace.imag) > tolerance:
        raise ConsistencyError('trace %r of a Hermitian matrix has an '
                               'imaginary part' % (trace,))
    return float(trace.real)


def trace_power(matrix, alpha, cross_check=False,
                tolerances=DEFAULT_TOLERANCES):
    """
    ``Tr(H^alpha)`` through :func:`mat_pow_nat`.

    With ``cross_check`` the value is compared with the eigenvalue path
    ``sum(lambda ** alpha)``; the two paths have independent rounding.

    :rtype: float

    :raises ConsistencyError: imaginary residue or cross-check mismatch
    """
    value = real_trace(mat_pow_nat(matrix, alpha), tolerances.imaginary)
    if cross_check:
        spectral = float(np.sum(herm_eig(matrix).eigenvalues ** alpha))
        if abs(spectral - value) > 1e-10 * max(1.0, abs(value)):
            raise ConsistencyError('Tr(H^%d): matrix path %r, eigenvalue '
                                   'path %r' % (alpha, value, spectral))
    return value


def polar_unitary(matrix):
    """
    Unitary ``U`` maximizing ``Re Tr(U^dagger M)``.

    This is the unitary polar factor ``V W^dagger`` of ``M = V S W^dagger``;
    for singular ``M`` the completion is the one the SVD returns, which is
    deterministic for a given input.

    :rtype: numpy.ndarray
    """
    unitary, _ = scipy.linalg.polar(np.asarray(matrix, dtype=complex),
                                    side='right')
    return unitary


def unitarity_residual(matrix):
    """``max |U^dagger U - I|``."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix.conj().T @ matrix
                               - np.eye(matrix.shape[1]))))


def relative_gaps(values, floor=DEFAULT_TOLERANCES.rank_cutoff):
    """
    Relative gaps between consecutive entries of a descending vector:
    ``|v_i - v_{i+1}| / max(|v_i|, |v_{i+1}|, floor)``.

    ``floor`` keeps two numerically zero values from looking separated.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return np.zeros(0)
    left, right = values[:-1], values[1:]
    scale = np.maximum(np.maximum(np.abs(left), np.abs(right)), floor)
    return np.abs(left - right) / scale
