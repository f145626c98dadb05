"""
Representation of multipartite pure states and the index arithmetic around
them: partial traces, matricizations (unfoldings), slice matrices and the
action of local unitary tuples.

Amplitudes are stored as a flat complex vector in mixed-radix row-major
order with subsystem ``0`` most significant, i.e. for three subsystems the
amplitude of ``|j k l>`` sits at index ``(j * N_B + k) * N_C + l``. All
indices are zero-based; subsystem ``i`` is labelled with the ``i``-th upper
case letter (``A``, ``B``, ``C``, ...).

All value types are immutable: the numpy buffers they hold are flagged
read-only on construction.
"""
import string
import warnings
from dataclasses import dataclass

import numpy as np

from lutool.config import DEFAULT_TOLERANCES, DimensionError, StateError


def _frozen(array, dtype=complex):
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


def subsystem_label(index):
    """Upper case letter naming subsystem ``index`` (0 -> ``'A'``)."""
    if not 0 <= index < len(string.ascii_uppercase):
        raise StateError('no label for subsystem %r' % (index,))
    return string.ascii_uppercase[index]


def subsystem_index(label):
    """Inverse of :func:`subsystem_label`; integers pass through."""
    if isinstance(label, (int, np.integer)):
        return int(label)
    label = str(label).strip().upper()
    if len(label) != 1 or label not in string.ascii_uppercase:
        raise StateError('bad subsystem label %r' % (label,))
    return string.ascii_uppercase.index(label)


@dataclass(frozen=True)
class SubsystemDims(object):
    """Ordered local dimensions ``(N_1, ..., N_n)`` with ``n >= 2``."""
    dims: tuple

    def __post_init__(self):
        try:
            dims = tuple(int(value) for value in self.dims)
        except (TypeError, ValueError):
            raise StateError('dims must be a sequence of integers, got %r'
                             % (self.dims,))
        if len(dims) < 2:
            raise DimensionError('at least two subsystems are required, '
                                 'got %r' % (dims,))
        if any(value < 1 for value in dims):
            raise DimensionError('every local dimension must be >= 1, '
                                 'got %r' % (dims,))
        object.__setattr__(self, 'dims', dims)

    @classmethod
    def of(cls, dims):
        return dims if isinstance(dims, cls) else cls(tuple(dims))

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __getitem__(self, index):
        return self.dims[index]

    @property
    def size(self):
        """Length of the amplitude vector, the product of the dims."""
        return int(np.prod(self.dims))

    def labels(self):
        return tuple(subsystem_label(i) for i in range(len(self.dims)))

    def others(self, index):
        """Indices of every subsystem except ``index``, in order."""
        return tuple(i for i in range(len(self.dims)) if i != index)

    def check_index(self, index):
        index = subsystem_index(index)
        if not 0 <= index < len(self.dims):
            raise StateError('subsystem %r out of range for dims %r'
                             % (index, self.dims))
        return index


@dataclass(frozen=True, eq=False)
class PureState(object):
    """
    Unit-norm amplitude vector over ``dims``.

    ``renormalized`` records whether :func:`make_state` had to correct the
    norm by more than the warning slack.
    """
    dims: SubsystemDims
    amplitudes: np.ndarray
    renormalized: bool = False

    @property
    def tensor(self):
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amplitudes.reshape(self.dims.dims)

    @property
    def n_parties(self):
        return len(self.dims)

    def projector(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True, eq=False)
class DensityMatrix(object):
    """
    Hermitian, positive semidefinite, unit-trace matrix on a subset of the
    subsystems of some state.

    :ivar dims: local dimensions of the retained subsystems
    :ivar subsystems: original indices of the retained subsystems
    :ivar entries: square complex matrix of side ``dims.size``
    """
    dims: tuple
    subsystems: tuple
    entries: np.ndarray

    def __post_init__(self, tolerances=DEFAULT_TOLERANCES):
        object.__setattr__(self, 'dims', tuple(int(d) for d in self.dims))
        object.__setattr__(self, 'subsystems', tuple(self.subsystems))
        entries = _frozen(self.entries)
        object.__setattr__(self, 'entries', entries)
        side = int(np.prod(self.dims))
        if entries.shape != (side, side):
            raise DimensionError('density matrix of shape %r does not match '
                                 'dims %r' % (entries.shape, self.dims))
        if len(self.dims) != len(self.subsystems):
            raise StateError('dims %r and subsystems %r differ in length'
                             % (self.dims, self.subsystems))
        if np.max(np.abs(entries - entries.conj().T)) > tolerances.hermitian:
            raise StateError('density matrix is not Hermitian')
        trace = np.trace(entries)
        if abs(trace - 1) > 1e-12 * max(1, side):
            raise StateError('density matrix has trace %r' % (trace,))
        if side <= 64:
            smallest = np.linalg.eigvalsh(entries)[0]
            if smallest < tolerances.psd:
                raise StateError('density matrix has negative eigenvalue %r'
                                 % (smallest,))

    @property
    def side(self):
        return self.entries.shape[0]

    def position(self, subsystem):
        """Position of an original subsystem index inside this matrix."""
        subsystem = subsystem_index(subsystem)
        try:
            return self.subsystems.index(subsystem)
        except ValueError:
            raise StateError('subsystem %s is not carried by this density '
                             'matrix (carries %s)'
                             % (subsystem_label(subsystem),
                                ','.join(map(subsystem_label,
                                             self.subsystems))))


@dataclass(frozen=True, eq=False)
class SliceFamily(object):
    """
    Slice matrices ``A^(j)`` of a tripartite state: ``matrices[j]`` holds the
    amplitudes with the ``pivot`` index fixed to ``j``, rows and columns
    indexed by the two remaining subsystems in their original order.
    """
    pivot: int
    rows: int
    columns: int
    matrices: np.ndarray

    def __len__(self):
        return self.matrices.shape[0]

    def __getitem__(self, index):
        return self.matrices[index]

    def gram(self):
        """``G[m, n] = Tr(A^(m)^dagger A^(n))``."""
        flat = self.matrices.reshape(len(self), -1)
        return flat.conj() @ flat.T


@dataclass(frozen=True, eq=False)
class LocalUnitaryTuple(object):
    """One unitary per subsystem, ``unitaries[i]`` of side ``N_i``."""
    unitaries: tuple

    def __post_init__(self, tolerances=DEFAULT_TOLERANCES):
        unitaries = tuple(_frozen(matrix) for matrix in self.unitaries)
        for index, matrix in enumerate(unitaries):
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise DimensionError('local operator %d is not square: %r'
                                     % (index, matrix.shape))
            residual = np.max(np.abs(matrix.conj().T @ matrix
                                     - np.eye(matrix.shape[0])))
            if residual >= tolerances.unitary:
                raise StateError('local operator %d is not unitary '
                                 '(residual %.3e)' % (index, residual))
        object.__setattr__(self, 'unitaries', unitaries)

    @classmethod
    def identity(cls, dims):
        return cls(tuple(np.eye(size) for size in SubsystemDims.of(dims)))

    @property
    def dims(self):
        return SubsystemDims(tuple(u.shape[0] for u in self.unitaries))

    def __len__(self):
        return len(self.unitaries)

    def __getitem__(self, index):
        return self.unitaries[index]

    def inverse(self):
        return LocalUnitaryTuple(tuple(u.conj().T for u in self.unitaries))

    def compose(self, other):
        """Tuple acting as ``other`` first and ``self`` second."""
        if self.dims != other.dims:
            raise DimensionError('cannot compose tuples over %r and %r'
                                 % (self.dims.dims, other.dims.dims))
        return LocalUnitaryTuple(tuple(
            mine @ theirs for mine, theirs in zip(self.unitaries,
                                                  other.unitaries)))

    def replace(self, index, unitary):
        unitaries = list(self.unitaries)
        unitaries[index] = unitary
        return LocalUnitaryTuple(tuple(unitaries))


def make_state(dims, amplitudes, tolerances=DEFAULT_TOLERANCES):
    """
    Build a :class:`PureState`, dividing the amplitudes by their norm.

    A warning is issued when the norm deviates from one by more than
    ``tolerances.norm_warning`` (e.g. digits lost in a file round trip).

    :param dims: local dimensions
    :type dims: SubsystemDims or sequence of int

    :param amplitudes: mixed-radix amplitude vector (any array-like, flattened)
    :type amplitudes: array-like of complex

    :returns: normalized state
    :rtype: PureState

    :raises DimensionError: the vector length does not match the dims
    :raises StateError: the vector is zero or not finite
    """
    dims = SubsystemDims.of(dims)
    vector = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if vector.size != dims.size:
        raise DimensionError('amplitude vector of length %d does not match '
                             'dims %r (expected %d)'
                             % (vector.size, dims.dims, dims.size))
    if not np.all(np.isfinite(vector)):
        raise StateError('amplitudes must be finite')
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise StateError('the zero vector is not a state')
    renormalized = abs(norm - 1) > tolerances.norm_warning
    if renormalized:
        warnings.warn('state norm %.12g renormalized to 1' % norm,
                      RuntimeWarning, stacklevel=2)
    return PureState(dims, _frozen(vector / norm), renormalized)


def basis_state(dims, index=0):
    """Computational basis vector ``|index>`` (mixed-radix flat index)."""
    dims = SubsystemDims.of(dims)
    vector = np.zeros(dims.size, dtype=complex)
    vector[index] = 1
    return make_state(dims, vector)


def product_state(vectors):
    """Tensor product of local vectors, subsystem 0 first."""
    vectors = [np.asarray(vector, dtype=complex).reshape(-1)
               for vector in vectors]
    norms = [np.linalg.norm(vector) for vector in vectors]
    if not all(norms):
        raise StateError('local vectors must be nonzero')
    vectors = [vector / norm for vector, norm in zip(vectors, norms)]
    amplitudes = vectors[0]
    for vector in vectors[1:]:
        amplitudes = np.kron(amplitudes, vector)
    return make_state(tuple(vector.size for vector in vectors), amplitudes)


def ghz_state(dims):
    """
    Generalized GHZ state ``sum_i |i i ... i> / sqrt(d)``.

    :raises DimensionError: local dimensions differ or are below 2
    """
    dims = SubsystemDims.of(dims)
    local = dims[0]
    if local < 2 or any(size != local for size in dims):
        raise DimensionError('GHZ needs equal local dimensions >= 2, got %r'
                             % (dims.dims,))
    tensor = np.zeros(dims.dims, dtype=complex)
    for level in range(local):
        tensor[(level,) * len(dims)] = 1 / np.sqrt(local)
    return make_state(dims, tensor)


def w_state(dims):
    """
    W state: equal superposition of the single-excitation basis vectors.

    :raises DimensionError: some local dimension is not 2
    """
    dims = SubsystemDims.of(dims)
    if any(size != 2 for size in dims):
        raise DimensionError('W needs qubit subsystems, got %r'
                             % (dims.dims,))
    vector = np.zeros(dims.size, dtype=complex)
    for party in range(len(dims)):
        vector[1 << (len(dims) - 1 - party)] = 1 / np.sqrt(len(dims))
    return make_state(dims, vector)


def _check_traced(dims, traced):
    traced = sorted({dims.check_index(index) for index in traced})
    if not traced:
        raise StateError('nothing to trace out')
    if len(traced) == len(dims):
        raise StateError('cannot trace out every subsystem')
    return traced


def reduce_operator(matrix, dims, positions):
    """
    Partial trace of an arbitrary square operator.

    Unlike :func:`partial_trace` the operator need not be a density matrix,
    which is what nested invariants trace (powers of reduced states).

    :param matrix: operator on ``prod(dims)``
    :param dims: local dimensions of the operator's factors
    :param positions: positions (into ``dims``) of the factors to trace out

    :returns: reduced operator on the remaining factors, in order
    :rtype: numpy.ndarray
    """
    dims = tuple(dims)
    positions = sorted(set(positions))
    n_factors = len(dims)
    tensor = np.asarray(matrix).reshape(dims + dims)
    # trace the highest positions first so lower axis numbers stay valid
    for offset, position in enumerate(reversed(positions)):
        current = n_factors - offset
        tensor = np.trace(tensor, axis1=position, axis2=position + current)
    kept = [size for index, size in enumerate(dims) if index not in positions]
    side = int(np.prod(kept))
    return tensor.reshape(side, side)


def partial_trace(state, traced):
    """
    Reduced density matrix after discarding the ``traced`` subsystems.

    ``traced`` always refers to original subsystem indices (or labels), also
    when ``state`` is itself a reduced :class:`DensityMatrix`.

    :param state: pure state or reduced density matrix
    :type state: PureState or DensityMatrix

    :param traced: subsystems to discard
    :type traced: iterable of int or str

    :returns: density matrix on the retained subsystems in original order
    :rtype: DensityMatrix

    :raises StateError: empty traced set, or every subsystem traced
    """
    if isinstance(state, PureState):
        dims = state.dims
        traced = _check_traced(dims, traced)
        kept = tuple(i for i in range(len(dims)) if i not in traced)
        tensor = state.tensor
        reduced = np.tensordot(tensor, tensor.conj(), axes=(traced, traced))
        kept_dims = tuple(dims[i] for i in kept)
        side = int(np.prod(kept_dims))
        return DensityMatrix(kept_dims, kept,
                             _frozen(reduced.reshape(side, side)))

    positions = sorted({state.position(index) for index in traced})
    if not positions:
        raise StateError('nothing to trace out')
    if len(positions) == len(state.subsystems):
        raise StateError('cannot trace out every subsystem')
    reduced = reduce_operator(state.entries, state.dims, positions)
    kept = [index for index in range(len(state.dims))
            if index not in positions]
    return DensityMatrix(tuple(state.dims[i] for i in kept),
                         tuple(state.subsystems[i] for i in kept),
                         _frozen(reduced))


def unfold(state, pivot):
    """
    Matricization ``A_p``: rows indexed by the ``pivot`` subsystem, columns
    by the remaining subsystems in mixed-radix order.

    ``A_p^T A_p^*`` equals the partial trace over ``pivot``.

    :rtype: numpy.ndarray of shape ``(N_pivot, prod(others))``
    """
    pivot = state.dims.check_index(pivot)
    matrix = np.moveaxis(state.tensor, pivot, 0)
    return matrix.reshape(state.dims[pivot], -1)


def slice_matrices(state, pivot):
    """
    Slice matrices ``A^(j)`` of a tripartite state for the given pivot.

    :raises DimensionError: the state is not tripartite
    """
    if state.n_parties != 3:
        raise DimensionError('slice matrices need a tripartite state, got '
                             'dims %r' % (state.dims.dims,))
    pivot = state.dims.check_index(pivot)
    rows, columns = (state.dims[i] for i in state.dims.others(pivot))
    matrices = np.moveaxis(state.tensor, pivot, 0)
    return SliceFamily(pivot, rows, columns, _frozen(matrices))


def apply_local_unitaries(state, unitaries):
    """
    Apply ``U_1 (x) ... (x) U_n`` to ``state``.

    :type unitaries: LocalUnitaryTuple
    :rtype: PureState

    :raises DimensionError: a unitary does not match its subsystem
    """
    if len(unitaries) != state.n_parties or any(
            u.shape[0] != size for u, size in zip(unitaries, state.dims)):
        raise DimensionError(
            'local unitaries of sizes %r do not match dims %r'
            % (tuple(u.shape[0] for u in unitaries), state.dims.dims))
    tensor = state.tensor
    for axis, unitary in enumerate(unitaries):
        tensor = np.moveaxis(np.tensordot(unitary, tensor, axes=(1, axis)),
                             0, axis)
    return PureState(state.dims, _frozen(tensor.reshape(-1)))
