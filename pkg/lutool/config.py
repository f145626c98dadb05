"""
Settings shared by the whole ``lutool`` package: the numerical tolerances
record, the seed resolution used by the CLI and the exception classes raised
by the API modules.

Every threshold the decision procedure depends on lives in
:class:`Tolerances`, so a sensitivity study only has to build one modified
copy of it::

    >>> from lutool.config import Tolerances
    >>> Tolerances().replace(profile=1e-6).profile
    1e-06
"""
import os
from dataclasses import dataclass, replace as _replace

# Environment variable consulted when ``--seed`` is not given.
SEED_ENV_VARIABLE = 'LUTOOL_SEED'
DEFAULT_SEED = 20050101


class StateError(ValueError):
    """Malformed state, label, sequence or input value."""


class DimensionError(StateError):
    """Subsystem dimensions do not match or are not supported."""


class PaddingError(DimensionError):
    """Retained rank exceeds the padded side N_B**2 of the Gram matrices."""


class ConsistencyError(ArithmeticError):
    """An internal numerical cross-check failed."""


@dataclass(frozen=True)
class Tolerances(object):
    """
    All tolerances used by the invariants and the decision procedure.

    :param profile: relative tolerance of profile, spectrum and Gram
        comparisons
    :param gap: relative eigenvalue gap under which two eigenvalues count as
        degenerate
    :param rank_cutoff: eigenvalues below it are dropped from the Gram
        invariants; also the nonsingularity floor of Theta and Omega
    :param norm_warning: renormalization slack before a warning is issued
    :param hermitian: entrywise Hermiticity slack
    :param unitary: unitarity residual slack
    :param psd: lowest admissible eigenvalue of a density matrix
    :param imaginary: admissible imaginary residue of a real trace
    """
    profile: float = 1e-8
    gap: float = 1e-8
    rank_cutoff: float = 1e-10
    norm_warning: float = 1e-9
    hermitian: float = 1e-10
    unitary: float = 1e-10
    psd: float = -1e-10
    imaginary: float = 1e-10

    def __post_init__(self):
        for name in ('profile', 'gap', 'rank_cutoff', 'norm_warning',
                     'hermitian', 'unitary', 'imaginary'):
            if not getattr(self, name) > 0:
                raise StateError('tolerance %r must be positive' % name)

    def replace(self, **changes):
        """Return a copy with the given fields overridden, ``None`` skipped."""
        return _replace(self, **{key: value for key, value in changes.items()
                                 if value is not None})


DEFAULT_TOLERANCES = Tolerances()


def resolve_seed(flag_value=None, environ=None):
    """
    Pick the random seed: the ``--seed`` flag wins, then the
    ``LUTOOL_SEED`` environment variable, then :data:`DEFAULT_SEED`.

    :param flag_value: seed given on the command line or ``None``
    :type flag_value: int or None

    :param environ: mapping to read the variable from

        (optional, default: ``os.environ``)
    :type environ: dict

    :returns: the seed
    :rtype: int

    :raises StateError: the environment variable is not an integer
    """
    if flag_value is not None:
        return int(flag_value)
    environ = os.environ if environ is None else environ
    env_seed = environ.get(SEED_ENV_VARIABLE)
    if env_seed:
        try:
            return int(env_seed, 0)
        except ValueError:
            raise StateError('%s must be an integer, got %r'
                             % (SEED_ENV_VARIABLE, env_seed))
    return DEFAULT_SEED
