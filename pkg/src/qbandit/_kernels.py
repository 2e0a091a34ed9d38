"""Hot numeric kernels: cyclic Jacobi eigensolver for complex Hermitian matrices.

Two interchangeable backends implement the same rotation sequence:

* a numba ``@njit`` version (default), and
* a pure-numpy version selected with ``QBANDIT_NO_NUMBA=1`` or used
  automatically when numba is unavailable.

Both walk the strict upper triangle cyclically, annihilating the pivot
``H[p, q]`` with the unitary plane rotation

    J[p,p] = c,  J[p,q] = s*e^{i phi},  J[q,p] = -s*e^{-i phi},  J[q,q] = c

where ``H[p,q] = r*e^{i phi}`` and ``t = s/c`` solves ``t^2 + 2*tau*t - 1 = 0``
with ``tau = (H[q,q] - H[p,p]) / (2r)``.  Sweeps stop once the off-diagonal
Frobenius mass falls below ``off_tol`` times the matrix norm.

``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

from __future__ import annotations

import math

import numpy as np

from .config import use_numba

_MAX_SWEEPS = 60
_OFF_TOL = 1e-14


def _jacobi_numpy(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = h.shape[0]
    a = h.astype(np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return a.real.diagonal().copy(), v

    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    stop = (_OFF_TOL * norm) ** 2

    for _ in range(_MAX_SWEEPS):
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        off_sq = np.sum(np.abs(off) ** 2)
        if off_sq <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= _OFF_TOL * norm / n:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(phase) * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real + 0.0j
                a[q, q] = a[q, q].real + 0.0j

                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p - s * np.conj(phase) * vcol_q
                v[:, q] = s * phase * vcol_p + c * vcol_q

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _jacobi_loops(a, v, norm, stop, max_sweeps, skip):  # pragma: no cover - numba twin
    n = a.shape[0]
    for _ in range(max_sweeps):
        off_sq = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    x = a[i, j]
                    off_sq += x.real * x.real + x.imag * x.imag
        if off_sq <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph_c = np.conj(phase)
                for k in range(n):
                    xp = a[k, p]
                    xq = a[k, q]
                    a[k, p] = c * xp - s * ph_c * xq
                    a[k, q] = s * phase * xp + c * xq
                for k in range(n):
                    xp = a[p, k]
                    xq = a[q, k]
                    a[p, k] = c * xp - s * phase * xq
                    a[q, k] = s * ph_c * xp + c * xq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = complex(a[p, p].real, 0.0)
                a[q, q] = complex(a[q, q].real, 0.0)
                for k in range(n):
                    xp = v[k, p]
                    xq = v[k, q]
                    v[k, p] = c * xp - s * ph_c * xq
                    v[k, q] = s * phase * xp + c * xq


_NUMBA_KERNEL = None
BACKEND = "numpy"

if use_numba():
    try:
        from numba import njit

        _NUMBA_KERNEL = njit(cache=True)(_jacobi_loops)
        BACKEND = "numba"
    except ImportError:
        _NUMBA_KERNEL = None
        BACKEND = "numpy"


def _jacobi_numba(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = h.shape[0]
    a = np.ascontiguousarray(h, dtype=np.complex128).copy()
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return a.real.diagonal().copy(), v
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    stop = (_OFF_TOL * norm) ** 2
    skip = _OFF_TOL * norm / n
    _NUMBA_KERNEL(a, v, norm, stop, _MAX_SWEEPS, skip)
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigh(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Returns ``(w, V)`` with ``h = V diag(w) V^dagger`` and unitary ``V``.
    The caller is responsible for the Hermiticity check.
    """
    if BACKEND == "numba":
        return _jacobi_numba(h)
    return _jacobi_numpy(h)
