"""Dense complex linear algebra substrate.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128.  The
composite index convention is fixed package-wide: an operator on the
bipartite space of dimensions (s, L) carries the row index ``m * L + n``
for the basis pair ``|m>|n>``, i.e. the first factor is the slow index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError, NumericalFailure, ShapeError

#: relative asymmetry accepted (and silently symmetrized) on Hermitian input
HERMITIAN_RTOL = 1e-10
#: default relative tolerance for positive-semidefiniteness verdicts
PSD_TOL = 1e-9
#: smallest component magnitude used to anchor eigenvector phases
PHASE_CUTOFF = 1e-12


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite, C-contiguous 2-D complex128 array."""
    m = np.ascontiguousarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got an array of ndim {m.ndim}")
    if m.size and not np.isfinite(m).all():
        raise ShapeError("matrix entries must be finite")
    return m


def as_vector(v) -> np.ndarray:
    """Coerce ``v`` to a finite 1-D complex128 array."""
    a = np.ascontiguousarray(v, dtype=np.complex128).reshape(-1)
    if a.size and not np.isfinite(a).all():
        raise ShapeError("vector entries must be finite")
    return a


def op_norm(m) -> float:
    """Spectral norm (largest singular value)."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def frob_norm(m) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(m)))


def ensure_hermitian(h, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return the symmetrized copy (H + H†)/2 of a square matrix.

    Asymmetry below ``rtol * ||H||_op`` is repaired silently; anything
    larger raises :class:`NotHermitianError`.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {h.shape}")
    asym = op_norm(h - h.conj().T)
    if asym > rtol * op_norm(h):
        raise NotHermitianError(
            f"asymmetry {asym:.3e} exceeds {rtol:g} * ||H||")
    return (h + h.conj().T) / 2.0


@dataclass
class Spectrum:
    """Hermitian eigendecomposition, eigenvalues sorted descending.

    Column k of ``eigenvectors`` pairs with ``eigenvalues[k]``.  Each
    column is unit norm with its first component of magnitude above
    ``PHASE_CUTOFF`` rotated to be real and nonnegative.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def op_norm(self) -> float:
        """Largest eigenvalue magnitude."""
        if self.eigenvalues.size == 0:
            return 0.0
        return float(np.max(np.abs(self.eigenvalues)))


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a vector so its first significant component is real >= 0."""
    idx = np.flatnonzero(np.abs(v) > PHASE_CUTOFF)
    if idx.size == 0:
        return v
    pivot = v[idx[0]]
    return v * (np.conj(pivot) / abs(pivot))


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    out = np.array(vectors, dtype=np.complex128)
    for k in range(out.shape[1]):
        out[:, k] = fix_phase(out[:, k])
    return out


def hermitian_eig(h) -> Spectrum:
    """Eigendecompose a Hermitian matrix.

    Input is symmetrized under the ``HERMITIAN_RTOL`` guard.  Raises
    ShapeError (not square), NotHermitianError (asymmetry beyond the
    guard) or NumericalFailure (iteration breakdown).
    """
    hs = ensure_hermitian(h)
    try:
        w, v = np.linalg.eigh(hs)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    return Spectrum(np.real(w[order]), _fix_phases(v[:, order]))


def svd(a):
    """Economy singular value decomposition.

    Returns ``(U, singulars, V)`` with ``A = U @ diag(singulars) @ V†``,
    singular values nonnegative and descending, and U, V carrying
    orthonormal columns.
    """
    a = as_matrix(a)
    try:
        u, s_vals, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD failed: {exc}") from exc
    return u, s_vals, vh.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def split_factors(m, dims) -> np.ndarray:
    """Reshape an (s*L, s*L) operator into the 4-index form [m, n, p, q]."""
    s, ell = int(dims[0]), int(dims[1])
    if s < 1 or ell < 1:
        raise ShapeError(f"factor dimensions must be positive, got {dims}")
    m = as_matrix(m)
    n = s * ell
    if m.shape != (n, n):
        raise ShapeError(
            f"operator shape {m.shape} does not match dims ({s}, {ell})")
    return m.reshape(s, ell, s, ell)


def partial_trace(m, dims, which: int) -> np.ndarray:
    """Trace out factor ``which`` (1 or 2) of a bipartite operator."""
    m4 = split_factors(m, dims)
    if which == 1:
        return np.einsum("mnmq->nq", m4)
    if which == 2:
        return np.einsum("mnpn->mp", m4)
    raise ShapeError(f"factor selector must be 1 or 2, got {which}")


def partial_transpose(m, dims, which: int) -> np.ndarray:
    """Transpose the selected factor (1 or 2) of a bipartite operator."""
    m4 = split_factors(m, dims)
    if which == 1:
        out = m4.transpose(2, 1, 0, 3)
    elif which == 2:
        out = m4.transpose(0, 3, 2, 1)
    else:
        raise ShapeError(f"factor selector must be 1 or 2, got {which}")
    n = int(dims[0]) * int(dims[1])
    return np.ascontiguousarray(out).reshape(n, n)


def is_psd(h, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Positive-semidefiniteness verdict plus the minimum eigenvalue.

    True iff ``lambda_min >= -tol * max(1, ||H||_op)``.  The relative
    floor keeps constructed integer-spectrum matrices exact while
    leaving headroom for optimizer noise.
    """
    hs = ensure_hermitian(h)
    try:
        w = np.linalg.eigvalsh(hs)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    lam_min = float(w[0])
    norm = float(max(abs(w[0]), abs(w[-1])))
    return lam_min >= -tol * max(1.0, norm), lam_min


def psd_margin(norm: float, tol: float = PSD_TOL) -> float:
    """Negative-eigenvalue threshold used for PSD verdicts at a given norm."""
    return tol * max(1.0, float(norm))
