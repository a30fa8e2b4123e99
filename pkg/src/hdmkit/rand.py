"""Seeded random matrices, states, and unitaries used by tests and the optimizer."""

from __future__ import annotations

import numpy as np


def complex_normal(shape, rng: np.random.Generator) -> np.ndarray:
    """Standard complex normal samples."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector (normalized complex normal)."""
    v = complex_normal(n, rng)
    return v / np.linalg.norm(v)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with the R-diagonal phase fix."""
    q, r = np.linalg.qr(complex_normal((n, n), rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    g = complex_normal((n, n), rng)
    return (g + g.conj().T) / 2.0


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix of the given rank (full rank by default)."""
    g = complex_normal((n, rank or n), rng)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
