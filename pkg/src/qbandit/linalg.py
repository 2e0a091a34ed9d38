"""Dense complex linear algebra: tensor products, Hermitian eigensolver, state checks."""

from __future__ import annotations

import numpy as np

from . import config
from ._kernels import jacobi_eigh


class DimensionCapError(ValueError):
    """Raised when a constructor would exceed the configured dimension cap."""


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def is_hermitian(a: np.ndarray, tol: float | None = None) -> bool:
    tol = config.TOLS.hermitian if tol is None else tol
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(u: np.ndarray, tol: float | None = None) -> bool:
    tol = config.TOLS.unitary if tol is None else tol
    eye = np.eye(u.shape[0])
    return frob(u @ dagger(u) - eye) <= tol


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor on the slow index.

    Raises :class:`DimensionCapError` when the product dimension exceeds
    the configured cap (default 4096).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    out_rows = a.shape[0] * b.shape[0]
    out_cols = a.shape[-1] * b.shape[-1] if a.ndim == 2 else 1
    if max(out_rows, out_cols) > config.DIM_CAP:
        raise DimensionCapError("dimension cap exceeded")
    return np.kron(a, b)


def tensor_all(*factors: np.ndarray) -> np.ndarray:
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = tensor(out, f)
    return out


def basis_state(dim: int, index: int) -> np.ndarray:
    psi = np.zeros(dim, dtype=np.complex128)
    psi[index] = 1.0
    return psi


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def hermitian_eig(h: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition ``h = V diag(w) V^dagger`` with ascending eigenvalues.

    Uses the cyclic Jacobi kernel; no external solver.  Raises ``ValueError``
    if the input is not Hermitian to ``tol`` (default 1e-10).
    """
    h = np.asarray(h, dtype=np.complex128)
    tol = config.TOLS.hermitian_eig if tol is None else tol
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("hermitian check failed: not a square matrix")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > tol * scale:
        raise ValueError("hermitian check failed")
    # symmetrize to kill the tolerated asymmetry before iterating
    return jacobi_eigh(0.5 * (h + h.conj().T))


def eigvalsh(h: np.ndarray, tol: float | None = None) -> np.ndarray:
    return hermitian_eig(h, tol=tol)[0]


def clamp_spectrum(w: np.ndarray, clamp: float | None = None) -> np.ndarray:
    """Zero out eigenvalues in ``[-clamp, 0)``; fail loudly on anything lower."""
    clamp = config.TOLS.eig_clamp if clamp is None else clamp
    if np.min(w) < -clamp:
        raise ValueError(
            f"negative eigenvalue {np.min(w):.3e} beyond clamp tolerance {clamp:.1e}"
        )
    return np.where(w < 0.0, 0.0, w)


def psd_sqrt(rho: np.ndarray) -> np.ndarray:
    """Matrix square root of a positive semidefinite Hermitian matrix."""
    w, v = hermitian_eig(rho)
    w = clamp_spectrum(w)
    return (v * np.sqrt(w)) @ v.conj().T


def validate_density_matrix(rho: np.ndarray, tol: config.Tolerances | None = None) -> None:
    """Checks Hermiticity, unit trace and positivity; raises ``ValueError``."""
    t = config.TOLS if tol is None else tol
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > t.hermitian:
        raise ValueError("density matrix not Hermitian")
    if abs(np.trace(rho).real - 1.0) > t.trace_one:
        raise ValueError("density matrix trace differs from 1")
    w = jacobi_eigh(0.5 * (rho + rho.conj().T))[0]
    if np.min(w) < -t.psd:
        raise ValueError("density matrix has a negative eigenvalue")


def validate_pure_state(psi: np.ndarray, tol: float | None = None) -> None:
    tol = config.TOLS.state_norm if tol is None else tol
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > tol:
        raise ValueError("pure state is not normalized")
