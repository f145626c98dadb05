"""
Random objects for tests and experiments: Haar unitaries, Haar random pure
states and pairs of states related by a known local unitary tuple.

Randomness comes from :class:`RandomStream`, a counter-based (Philox)
generator keyed by a seed and a label path. Splitting a stream by label
gives an independent stream whose draws do not depend on how many values
the parent or its siblings have consumed, so test order never changes the
samples. There is no hidden global generator.

Complex Gaussians are produced from uniform draws by the Box-Muller
transform: for ``u1`` in ``(0, 1]`` and ``u2`` in ``[0, 1)``,
``z = sqrt(-ln u1) * exp(2j * pi * u2)`` has ``E|z|^2 = 1``.
"""
import hashlib

import numpy as np

from lutool.config import DimensionError
from lutool.statespace import (LocalUnitaryTuple, SubsystemDims,
                               apply_local_unitaries, make_state,
                               product_state)


class RandomStream(object):
    """
    Reproducible random stream identified by ``(seed, label)``.

    :param seed: 64-bit seed
    :type seed: int

    :param label: path of split labels, ``'/'`` separated

        (optional, default: ``''``)
    :type label: string
    """

    def __init__(self, seed, label=''):
        self.seed = int(seed) % 2 ** 64
        self.label = label
        digest = hashlib.sha256(
            ('%d:%s' % (self.seed, label)).encode('utf-8')).digest()
        key = int.from_bytes(digest[:16], 'little')
        self._generator = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self):
        return 'RandomStream(seed=%d, label=%r)' % (self.seed, self.label)

    def split(self, label):
        """Independent child stream named ``label``."""
        return RandomStream(self.seed, '%s/%s' % (self.label, label))

    def uniform(self, size=None):
        """Uniform draws on ``[0, 1)``."""
        return self._generator.random(size)

    def integers(self, high, size=None):
        return self._generator.integers(high, size=size)

    def complex_normal(self, shape):
        """Standard complex Gaussians (``E|z|^2 = 1``) of the given shape."""
        count = int(np.prod(shape))
        radius = np.sqrt(-np.log(1.0 - self.uniform(count)))
        angle = 2 * np.pi * self.uniform(count)
        return (radius * np.exp(1j * angle)).reshape(shape)


def haar_unitary(dimension, stream):
    """
    Haar distributed ``d x d`` unitary.

    A Ginibre matrix of standard complex Gaussians is orthonormalized by QR
    and each column is rescaled by the phase of the matching diagonal entry
    of ``R``; without that correction the distribution is not Haar.

    :raises DimensionError: ``dimension < 1``
    """
    dimension = int(dimension)
    if dimension < 1:
        raise DimensionError('unitary dimension must be >= 1, got %d'
                             % dimension)
    ginibre = stream.complex_normal((dimension, dimension))
    q, r = np.linalg.qr(ginibre)
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def haar_local_unitaries(dims, stream):
    """Tuple of independent Haar unitaries, one per subsystem."""
    dims = SubsystemDims.of(dims)
    return LocalUnitaryTuple(tuple(
        haar_unitary(size, stream) for size in dims))


def random_pure_state(dims, stream):
    """
    Haar random pure state: a normalized complex Gaussian vector.

    :raises DimensionError: fewer than two subsystems
    """
    dims = SubsystemDims.of(dims)
    vector = stream.complex_normal(dims.size)
    return make_state(dims, vector / np.linalg.norm(vector))


def random_product_state(dims, stream):
    """Tensor product of independent Haar random local vectors."""
    dims = SubsystemDims.of(dims)
    return product_state([stream.complex_normal(size) for size in dims])


def random_lu_pair(state, stream):
    """
    A state locally unitarily equivalent to ``state`` by construction.

    :returns: ``(apply_local_unitaries(state, T), T)`` with ``T`` Haar per
        subsystem
    :rtype: tuple
    """
    unitaries = haar_local_unitaries(state.dims, stream)
    return apply_local_unitaries(state, unitaries), unitaries
