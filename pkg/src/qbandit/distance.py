"""Distance measures for quantum states: fidelity, trace distance, purity.

Conventions: ``sqrt_fidelity`` is the trace norm of ``sqrt(rho) sqrt(sigma)``
and ``fidelity`` is its square, so a pure/pure pair gives the squared
overlap.  All inputs are dense complex numpy arrays.
"""

from __future__ import annotations

import numpy as np

from . import config
from .linalg import clamp_spectrum, hermitian_eig, psd_sqrt


def _check_same_dim(rho: np.ndarray, sigma: np.ndarray) -> None:
    if rho.shape != sigma.shape:
        raise ValueError("dim mismatch")


def purity(rho: np.ndarray) -> float:
    """tr(rho^2); equals 1 exactly on pure states."""
    return float(np.trace(rho @ rho).real)


def _dominant_vector(rho: np.ndarray) -> np.ndarray:
    w, v = hermitian_eig(rho)
    return v[:, -1]


def sqrt_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Trace norm of ``sqrt(rho) sqrt(sigma)``.

    When either argument is pure to within the rank-one tolerance the
    square-root route is skipped in favor of the overlap formula
    ``sqrt(<psi| other |psi>)``, which avoids square roots of nearly
    singular matrices.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    sigma = np.asarray(sigma, dtype=np.complex128)
    _check_same_dim(rho, sigma)
    rank_one = 1.0 - config.TOLS.rank_one
    if purity(rho) >= rank_one:
        psi = _dominant_vector(rho)
        val = np.vdot(psi, sigma @ psi).real
        return float(np.sqrt(max(val, 0.0)))
    if purity(sigma) >= rank_one:
        psi = _dominant_vector(sigma)
        val = np.vdot(psi, rho @ psi).real
        return float(np.sqrt(max(val, 0.0)))
    root = psd_sqrt(rho)
    inner = root @ sigma @ root
    w = hermitian_eig(0.5 * (inner + inner.conj().T))[0]
    w = clamp_spectrum(w)
    # floor eigenvalues at the numerical noise level of the product matrix:
    # an exact-zero eigenvalue computed as ~1e-16 would otherwise inject a
    # spurious ~1e-8 into the square-root sum
    floor = 64.0 * np.finfo(float).eps * max(float(w[-1]), 0.0)
    w = np.where(w < floor, 0.0, w)
    return float(np.sum(np.sqrt(w)))


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Squared fidelity in [0, 1]."""
    f = sqrt_fidelity(rho, sigma) ** 2
    return float(min(max(f, 0.0), 1.0))


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of ``rho - sigma``."""
    rho = np.asarray(rho, dtype=np.complex128)
    sigma = np.asarray(sigma, dtype=np.complex128)
    _check_same_dim(rho, sigma)
    diff = rho - sigma
    w = hermitian_eig(0.5 * (diff + diff.conj().T))[0]
    return float(0.5 * np.sum(np.abs(w)))


def helstrom_success(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Optimal two-state discrimination probability, 1/2 + T/2."""
    return 0.5 + 0.5 * trace_distance(rho, sigma)


def partial_trace(
    rho: np.ndarray, dims: tuple[int, ...] | list[int], keep: int | tuple[int, ...]
) -> np.ndarray:
    """Reduced state over the subsystems listed in ``keep``.

    ``dims`` factorizes the Hilbert space (slow index first); ``keep`` names
    the subsystem indices to retain, in their original order.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != rho.shape[0] or rho.shape[0] != rho.shape[1]:
        raise ValueError("bad subsystem spec")
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(sorted(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep) or len(set(keep)) != len(keep):
        raise ValueError("bad subsystem spec")
    n = len(dims)
    tensor = rho.reshape(dims + dims)
    # trace out every subsystem not kept, highest axis first
    for axis in reversed(range(n)):
        if axis in keep:
            continue
        tensor = np.trace(tensor, axis1=axis, axis2=axis + (tensor.ndim // 2))
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensor.reshape(d_keep, d_keep)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return float(0.5 * np.sum(np.abs(np.asarray(p) - np.asarray(q))))
