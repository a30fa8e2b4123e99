"""Half-density-matrix calculus.

A half density matrix (HDM) of a state ``rho`` is any s x L matrix T with
``rho = T @ T†``.  Flattened row-major, the same array is the coefficient
table of a pure bipartite state, so the calculus moves freely between mixed
states on one factor and pure states on two factors.  The reference vector
``sum_n |n,n>`` is kept unnormalized throughout (its squared norm is L);
normalized states divide explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    InvalidStateError,
    NotPSDError,
    NotRelatedError,
    RankExceedsWidthError,
    ShapeError,
)

#: trace slack accepted on (sub)normalized density-matrix input
TRACE_TOL = 1e-10


def maximally_entangled(L: int) -> np.ndarray:
    """Unnormalized vector sum_n |n,n> in the L x L bipartite space."""
    if L < 1:
        raise ShapeError("dimension must be positive")
    v = np.zeros(L * L, dtype=np.complex128)
    v[:: L + 1] = 1.0
    return v


def mirror_operator(L: int) -> np.ndarray:
    """Rank-one operator |Phi><Phi| on the unnormalized sum_n |n,n> vector.

    Has trace L and squares to L times itself.
    """
    v = maximally_entangled(L)
    return np.outer(v, v.conj())


def index_state(w) -> np.ndarray:
    """Componentwise conjugate of a vector in the fixed basis."""
    return np.conj(linalg.as_vector(w))


def pure_from_hdm(t) -> np.ndarray:
    """Bipartite pure-state vector with coefficient table ``t``.

    Component m*L + n equals t[m, n]; this is the row-major flattening.
    """
    return linalg.as_matrix(t).reshape(-1).copy()


def hdm_from_pure(phi, dims) -> np.ndarray:
    """Inverse of :func:`pure_from_hdm`: reshape a vector into its s x L table."""
    s, ell = int(dims[0]), int(dims[1])
    phi = linalg.as_vector(phi)
    if phi.size != s * ell:
        raise ShapeError(
            f"vector of length {phi.size} does not match dims ({s}, {ell})")
    return phi.reshape(s, ell).copy()


def is_normalized(t, tol: float = TRACE_TOL) -> bool:
    """True iff Tr(T†T) = 1, i.e. the carried pure state is normalized."""
    t = linalg.as_matrix(t)
    return bool(abs(np.trace(t.conj().T @ t).real - 1.0) <= tol)


def reduced_states(t) -> tuple[np.ndarray, np.ndarray]:
    """Both marginals of the pure state carried by an HDM.

    Returns ``(T @ T†, T^T @ T*)``: the first-factor and second-factor
    reduced states.  Their traces agree.
    """
    t = linalg.as_matrix(t)
    return t @ t.conj().T, t.T @ t.conj()


def schmidt_coefficients(t) -> np.ndarray:
    """Singular values of the HDM, descending; their squares sum to Tr(T†T)."""
    _, s_vals, _ = linalg.svd(t)
    return s_vals


def eigen_hdm(rho, L: int) -> np.ndarray:
    """Canonical HDM built from the eigendecomposition of ``rho``.

    Column k (k < s) is sqrt(lambda_k) times the k-th eigenvector with
    eigenvalues descending; columns s..L-1 are zero padding.  Accepts
    subnormalized input (trace below one); rejects trace above 1 + 1e-10.
    """
    spectrum = linalg.hermitian_eig(rho)
    s = spectrum.eigenvalues.size
    tol = linalg.psd_margin(spectrum.op_norm)
    if spectrum.eigenvalues[-1] < -tol:
        raise NotPSDError(
            f"state has eigenvalue {spectrum.eigenvalues[-1]:.3e}")
    trace = float(np.sum(spectrum.eigenvalues))
    if trace > 1.0 + TRACE_TOL:
        raise InvalidStateError(f"trace {trace} exceeds 1")
    rank = int(np.sum(spectrum.eigenvalues > tol))
    if L < rank:
        raise RankExceedsWidthError(f"rank {rank} exceeds width L={L}")
    if L < s:
        raise ShapeError(f"width L={L} must be at least the dimension s={s}")
    # zero out kernel noise so the HDM rank matches the state rank
    zero_tol = 1e-12 * max(1.0, spectrum.op_norm)
    roots = np.sqrt(np.where(spectrum.eigenvalues > zero_tol,
                             spectrum.eigenvalues, 0.0))
    t = np.zeros((s, L), dtype=np.complex128)
    t[:, :s] = spectrum.eigenvectors * roots[np.newaxis, :]
    return t


def connecting_unitary(t1, t2, tol: float = 1e-8) -> np.ndarray:
    """L x L unitary U with ``t2 = t1 @ U`` for HDMs of the same state.

    The two inputs must share a Gram matrix T T† within ``tol``; otherwise
    :class:`NotRelatedError` is raised.  U is assembled from the
    pseudoinverse on the row space plus an identity-style pairing of the
    kernels, then projected to the nearest unitary, which makes the kernel
    freedom deterministic.  Inputs that pass the Gram test but cannot be
    linked within ``tol`` (possible right at the tolerance boundary) are
    also reported as not related.
    """
    t1 = linalg.as_matrix(t1)
    t2 = linalg.as_matrix(t2)
    if t1.shape != t2.shape:
        raise ShapeError(f"shape mismatch: {t1.shape} vs {t2.shape}")
    g1 = t1 @ t1.conj().T
    g2 = t2 @ t2.conj().T
    scale = max(1.0, linalg.op_norm(g1))
    if linalg.op_norm(g1 - g2) > tol * scale:
        raise NotRelatedError("Gram matrices differ beyond tolerance")

    ell = t1.shape[1]
    u1, s1, v1h = np.linalg.svd(t1, full_matrices=True)
    _, _, v2h = np.linalg.svd(t2, full_matrices=True)
    smax = s1[0] if s1.size else 0.0
    rank = int(np.sum(s1 > 1e-12 * max(smax, 1e-300)))

    if rank:
        pinv = (v1h.conj().T[:, :rank] / s1[:rank]) @ u1[:, :rank].conj().T
        u0 = pinv @ t2
    else:
        u0 = np.zeros((ell, ell), dtype=np.complex128)
    k1 = v1h.conj().T[:, rank:]
    k2 = v2h.conj().T[:, rank:]
    u0 = u0 + k1 @ k2.conj().T

    uw, _, vwh = np.linalg.svd(u0)
    u = uw @ vwh

    if linalg.op_norm(t1 @ u - t2) > tol * max(1.0, linalg.op_norm(t2)):
        raise NotRelatedError("no unitary links the two HDMs within tolerance")
    return u


@dataclass
class Ensemble:
    """Weighted pure-state decomposition of a mixed state."""

    members: list[tuple[float, np.ndarray]]

    def __post_init__(self):
        if not self.members:
            raise InvalidStateError("ensemble needs at least one member")
        members = []
        total = 0.0
        for p, phi in self.members:
            p = float(p)
            if not 0.0 < p <= 1.0:
                raise InvalidStateError(f"weight {p} outside (0, 1]")
            phi = linalg.as_vector(phi)
            if abs(np.linalg.norm(phi) - 1.0) > TRACE_TOL:
                raise InvalidStateError("ensemble members must be unit vectors")
            total += p
            members.append((p, phi))
        if abs(total - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"weights sum to {total}, expected 1")
        self.members = members

    def density(self) -> np.ndarray:
        return sum(p * np.outer(phi, phi.conj()) for p, phi in self.members)

    def hdms(self, dims) -> list[np.ndarray]:
        """HDM family {sqrt(p_i) reshaped phi_i} carrying this ensemble."""
        return [np.sqrt(p) * hdm_from_pure(phi, dims) for p, phi in self.members]


def ensemble_state(family, dims) -> np.ndarray:
    """Bipartite density matrix assembled from an HDM family.

    Equals the sum of |phi_i><phi_i| with phi_i = pure_from_hdm(A_i), which
    is the family acting on the first factor of the mirror operator.
    """
    s, ell = int(dims[0]), int(dims[1])
    out = np.zeros((s * ell, s * ell), dtype=np.complex128)
    for a in family:
        a = linalg.as_matrix(a)
        if a.shape != (s, ell):
            raise ShapeError(
                f"family member of shape {a.shape}, expected ({s}, {ell})")
        v = a.reshape(-1)
        out += np.outer(v, v.conj())
    return out


def tilde(a) -> np.ndarray:
    """Anti-linear conjugation Tr(A†) I - A† of a square HDM.

    For 2 x 2 input this is the spin-flip construction and an involution;
    for larger sizes it satisfies tilde(tilde(A)) = A + (s - 2) Tr(A) I and
    is provided as a utility only.
    """
    a = linalg.as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"tilde needs a square matrix, got {a.shape}")
    adj = a.conj().T
    return np.trace(adj) * np.eye(a.shape[0], dtype=np.complex128) - adj
