"""Seeded random instance generators.

All randomness flows through numpy's PCG64 generator.  Independent streams
are derived with ``SeedSequence([seed, *key])`` so that sweeps can split one
base seed across instances or workers and stay reproducible bit for bit;
the numeric kernels themselves consume no randomness, so results are
identical on both kernel backends.
"""

from __future__ import annotations

import numpy as np


def spawn_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for stream ``(seed, *key)``; same inputs, same stream."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> np.ndarray:
    """Wishart-style state: G G^dagger normalized to unit trace."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase correction."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_involution(
    dim: int, rng: np.random.Generator, n_flipped: int | None = None
) -> np.ndarray:
    """Random self-adjoint unitary V diag(+-1) V^dagger."""
    if n_flipped is None:
        n_flipped = int(rng.integers(1, dim + 1))
    v = random_unitary(dim, rng)
    signs = np.ones(dim)
    signs[:n_flipped] = -1.0
    return (v * signs) @ v.conj().T


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (g + g.conj().T)


def random_traceless_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    h = random_hermitian(dim, rng, scale)
    return h - (np.trace(h).real / dim) * np.eye(dim)


def random_kraus_channel(
    dim: int, n_kraus: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Trace-preserving Kraus set from an orthonormalized random isometry."""
    g = rng.standard_normal((n_kraus * dim, dim)) + 1j * rng.standard_normal((n_kraus * dim, dim))
    q, _ = np.linalg.qr(g)
    return [q[k * dim : (k + 1) * dim, :] for k in range(n_kraus)]


def random_probability(rng: np.random.Generator, lo: float = 0.0, hi: float = 1.0) -> float:
    return float(rng.uniform(lo, hi))
