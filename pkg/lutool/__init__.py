"""
**lutool** is a Python package for deciding whether two multipartite pure
quantum states are related by local unitary transformations. It computes
the polynomial invariants of a state (traces of powers of nested partial
traces), the Gram invariants of its reduced state ``rho = Tr_A |psi><psi|``
and decides equivalence on the class of states where those invariants are
complete. A numerical search over local unitaries corroborates the verdicts.
The package provides the ``lutool`` CLI built on this API.
"""

from . import (config, statespace, linalg, invariants, equivalence, lusearch,
               sampling, selfcheck, cli)
