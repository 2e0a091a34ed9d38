"""Central numerical tolerances and limits.

Every tolerance used by the library lives here so that verification sweeps
can audit or override them in one place.  Functions take an optional
``tol`` argument; ``None`` means "use the value from :data:`TOLS`".
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # structural checks
    hermitian: float = 1e-12        # max |A - A^dagger| entry for flagged-Hermitian data
    hermitian_eig: float = 1e-10    # Hermiticity required by the eigensolver
    trace_one: float = 1e-10        # |tr(rho) - 1| for density matrices
    psd: float = 1e-10              # tolerated negative eigenvalue magnitude
    state_norm: float = 1e-10       # | ||psi|| - 1 | for pure states
    unitary: float = 1e-11          # Frobenius ||U U^dagger - Id||
    # eigensolver quality
    eig_residual: float = 1e-9      # relative ||H V - V diag(w)||_F
    eig_clamp: float = 1e-10        # eigenvalues in [-eig_clamp, 0) clamp to 0 before sqrt
    # derived-quantity checks
    exact: float = 1e-12            # residual for identities that hold exactly
    reconstruction: float = 1e-11   # residual for decomposition reconstructions
    margin: float = 1e-9            # slack for inequality margins
    completeness: float = 1e-10     # POVM / measure sum-to-one
    trace_drift: float = 1e-8       # simulator abort threshold
    rank_one: float = 1e-12         # 1 - purity below which a state counts as pure


#: Hard cap on the dimension any constructor is allowed to produce.
DIM_CAP = 4096

#: Module-wide default tolerances.  Replaceable via :func:`set_tolerances`.
TOLS = Tolerances()


def set_tolerances(**overrides: float) -> Tolerances:
    """Replace selected default tolerances; returns the new active set."""
    global TOLS
    TOLS = replace(TOLS, **overrides)
    return TOLS


def thread_count() -> int:
    """Worker cap from the QBANDIT_THREADS environment variable (default 1)."""
    raw = os.environ.get("QBANDIT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def use_numba() -> bool:
    """Kernel backend selection: QBANDIT_NO_NUMBA=1 forces the numpy path."""
    return os.environ.get("QBANDIT_NO_NUMBA", "0") not in ("1", "true", "yes")
