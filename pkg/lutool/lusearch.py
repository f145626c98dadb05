"""
Numerical oracle for local unitary equivalence: block-coordinate ascent of
``|<psi'| U_1 (x) ... (x) U_n |psi>|`` over the local unitaries.

One iteration is a sweep over the subsystems in ascending order. For
subsystem ``k`` the other unitaries are applied to ``psi`` and the result is
contracted with ``psi'`` over every index except ``k``, giving the overlap
matrix ``M_k[i, j] = sum psi'[.., i, ..] conj(phi[.., j, ..])``. The overlap
then equals ``conj(Tr(U_k^dagger M_k))``, which the polar factor of ``M_k``
maximizes in modulus, so no update can lower the fidelity.

The oracle corroborates verdicts; a fidelity below one after all restarts is
evidence of inequivalence, not a proof.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from lutool.config import (ConsistencyError, DEFAULT_SEED, DimensionError,
                           StateError)
from lutool.linalg import polar_unitary
from lutool.sampling import RandomStream, haar_local_unitaries
from lutool.statespace import LocalUnitaryTuple, apply_local_unitaries

log = logging.getLogger(__name__)

# slack of the per-step monotonicity assertion
MONOTONICITY_SLACK = 1e-12


@dataclass(frozen=True)
class SearchConfig(object):
    """
    Settings of :func:`alternating_search`.

    :ivar restarts: number of starting points; restart 0 is the identity
    :ivar max_iters: sweeps per restart
    :ivar tol: stop once a sweep gains less fidelity than this
    :ivar seed: seed of the Haar starting points
    :ivar workers: threads running restarts concurrently
    """
    restarts: int = 20
    max_iters: int = 500
    tol: float = 1e-12
    seed: int = DEFAULT_SEED
    workers: int = 1

    def __post_init__(self):
        for name in ('restarts', 'max_iters', 'workers'):
            if int(getattr(self, name)) < 1:
                raise StateError('%s must be positive' % name)
        if not self.tol > 0:
            raise StateError('tol must be positive')


@dataclass(frozen=True, eq=False)
class SearchResult(object):
    """
    Outcome of :func:`alternating_search`.

    :ivar best_fidelity: fidelity of ``best_unitaries``
    :ivar best_unitaries: the best tuple over all restarts
    :ivar best_restart: index of the restart that produced it
    :ivar iterations: sweeps used by that restart
    :ivar traces: per restart, fidelity before the first sweep and after each
        sweep
    """
    best_fidelity: float
    best_unitaries: LocalUnitaryTuple
    best_restart: int
    iterations: int
    traces: tuple


def _check_dims(psi, target):
    if psi.dims != target.dims:
        raise DimensionError('states have different dims %r and %r'
                             % (psi.dims.dims, target.dims.dims))


def fidelity(psi, target, unitaries):
    """
    ``|<target| U_1 (x) ... (x) U_n |psi>|``; global phases drop out.

    :type psi: PureState
    :type target: PureState
    :type unitaries: LocalUnitaryTuple

    :rtype: float

    :raises DimensionError: dims mismatch
    """
    _check_dims(psi, target)
    moved = apply_local_unitaries(psi, unitaries)
    return float(abs(np.vdot(target.amplitudes, moved.amplitudes)))


def _apply_except(tensor, unitaries, skipped):
    for axis, unitary in enumerate(unitaries):
        if axis != skipped:
            tensor = np.moveaxis(np.tensordot(unitary, tensor,
                                              axes=(1, axis)), 0, axis)
    return tensor


def overlap_matrix(psi_tensor, target_tensor, unitaries, k):
    """``M_k`` for the current ``unitaries`` (list of arrays)."""
    moved = _apply_except(psi_tensor, unitaries, k)
    others = [axis for axis in range(psi_tensor.ndim) if axis != k]
    return np.tensordot(target_tensor, moved.conj(), axes=(others, others))


def _run_restart(psi, target, start, config, restart):
    psi_tensor, target_tensor = psi.tensor, target.tensor
    unitaries = [np.array(u) for u in start]
    current = float(abs(np.vdot(
        target.amplitudes, apply_local_unitaries(psi, start).amplitudes)))
    trace = [current]
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        before = current
        for k in range(len(unitaries)):
            matrix = overlap_matrix(psi_tensor, target_tensor, unitaries, k)
            unitaries[k] = polar_unitary(matrix)
            step = float(abs(np.trace(unitaries[k].conj().T @ matrix)))
            if step < current - MONOTONICITY_SLACK:
                raise ConsistencyError('fidelity fell from %r to %r while '
                                       'updating subsystem %d'
                                       % (current, step, k))
            current = max(current, step)
        trace.append(current)
        if current - before < config.tol:
            break
    result = LocalUnitaryTuple(tuple(unitaries))
    log.debug('restart %d: fidelity %.15f after %d sweeps',
              restart, current, iterations)
    return fidelity(psi, target, result), result, iterations, tuple(trace)


def alternating_search(psi, target, config=None):
    """
    Maximize the fidelity between ``U psi`` and ``target`` over local
    unitaries ``U`` by alternating polar updates with restarts.

    Restart 0 starts at the identity, restart ``r`` at a Haar tuple drawn from
    the stream ``(config.seed, 'restart-r')``. The best restart wins; ties go
    to the lower restart index, so the result does not depend on
    ``config.workers``.

    :type psi: PureState
    :type target: PureState
    :type config: SearchConfig

    :rtype: SearchResult

    :raises DimensionError: dims mismatch
    """
    _check_dims(psi, target)
    config = config or SearchConfig()
    root = RandomStream(config.seed, 'lusearch')

    def run(restart):
        if restart == 0:
            start = LocalUnitaryTuple.identity(psi.dims)
        else:
            start = haar_local_unitaries(
                psi.dims, root.split('restart-%d' % restart))
        return _run_restart(psi, target, start, config, restart)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(run, range(config.restarts)))
    else:
        outcomes = [run(restart) for restart in range(config.restarts)]

    best = 0
    for restart, outcome in enumerate(outcomes):
        if outcome[0] > outcomes[best][0]:
            best = restart
    best_fidelity, unitaries, iterations, _ = outcomes[best]
    log.info('best fidelity %.15f from restart %d of %d',
             best_fidelity, best, config.restarts)
    return SearchResult(best_fidelity, unitaries, best, iterations,
                        tuple(outcome[3] for outcome in outcomes))
