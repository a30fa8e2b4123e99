"""Hermitian linear maps as Choi matrices and signed HDM families.

A Hermitian map from the L-dimensional space into the s-dimensional space is
encoded by its action on the mirror operator; the map output indexes the
FIRST tensor factor of the resulting (s*L) x (s*L) Hermitian matrix.  When a
map has to act on the second subsystem of a state instead (detection, the
duality identity), :func:`apply_on_second_factor` is the single adapter used
everywhere; there is no second Choi convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    NonHermitianImageError,
    NotCPError,
    NotPseudoUnitaryError,
    ShapeError,
    SignatureError,
)
from .rand import random_unitary

#: relative eigenvalue cutoff separating a Choi kernel from noise
RANK_TOL = 1e-9
#: tolerance on the pseudo-unitarity defect S eta S† - eta
PSEUDO_TOL = 1e-9


@dataclass
class Choi:
    """Hermitian (s*L) x (s*L) matrix encoding a map into the s-dim space.

    ``dims = (s, L)``: output dimension first, input dimension second.
    The matrix is symmetrized on construction under the usual guard.
    """

    mat: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        self.dims = (int(self.dims[0]), int(self.dims[1]))
        s, ell = self.dims
        if s < 1 or ell < 1:
            raise ShapeError(f"dims must be positive, got {self.dims}")
        self.mat = linalg.ensure_hermitian(self.mat)
        if self.mat.shape != (s * ell, s * ell):
            raise ShapeError(
                f"Choi matrix shape {self.mat.shape} does not match dims {self.dims}")

    @property
    def s(self) -> int:
        return self.dims[0]

    @property
    def L(self) -> int:
        return self.dims[1]


def choi_of_action(apply_map, dims) -> Choi:
    """Assemble the Choi matrix of a black-box map on L x L matrices.

    The box is probed exactly L^2 times on the matrix units |m><n|.  Images
    of the diagonal probes must be Hermitian within 1e-9 (relative), and the
    assembled matrix is symmetrized under the same guard; violations raise
    :class:`NonHermitianImageError`.
    """
    s, ell = int(dims[0]), int(dims[1])
    h4 = np.zeros((s, ell, s, ell), dtype=np.complex128)
    for m in range(ell):
        for n in range(ell):
            unit = np.zeros((ell, ell), dtype=np.complex128)
            unit[m, n] = 1.0
            img = linalg.as_matrix(apply_map(unit))
            if img.shape != (s, s):
                raise ShapeError(
                    f"map produced shape {img.shape}, expected ({s}, {s})")
            if m == n:
                asym = linalg.op_norm(img - img.conj().T)
                if asym > 1e-9 * max(1.0, linalg.op_norm(img)):
                    raise NonHermitianImageError(
                        f"image of unit ({m},{m}) is not Hermitian (defect {asym:.3e})")
            h4[:, m, :, n] = img
    h = h4.reshape(s * ell, s * ell)
    asym = linalg.op_norm(h - h.conj().T)
    if asym > 1e-9 * max(1.0, linalg.op_norm(h)):
        raise NonHermitianImageError(
            f"assembled Choi matrix is not Hermitian (defect {asym:.3e})")
    return Choi((h + h.conj().T) / 2.0, (s, ell))


def apply_choi(choi: Choi, rho) -> np.ndarray:
    """Act with the encoded map on an L x L input.

    Contraction of the Choi matrix with the input over the second-factor
    index pair; equals the partial trace of C (I ⊗ rho^T) over the second
    factor.  Hermitian input yields Hermitian output.
    """
    rho = linalg.as_matrix(rho)
    s, ell = choi.dims
    if rho.shape != (ell, ell):
        raise ShapeError(f"input shape {rho.shape}, expected ({ell}, {ell})")
    c4 = choi.mat.reshape(s, ell, s, ell)
    return np.einsum("mnpq,nq->mp", c4, rho)


def apply_on_second_factor(choi: Choi, sigma, k: int) -> np.ndarray:
    """Apply identity ⊗ map to an operator on the (k, L) bipartite space.

    This is the factor-swap adapter: the package's one bridge between the
    map-on-first-factor Choi convention and map-on-second-subsystem usage.
    Output lives on the (k, s) bipartite space.
    """
    s, ell = choi.dims
    k = int(k)
    sigma4 = linalg.split_factors(sigma, (k, ell))
    c4 = choi.mat.reshape(s, ell, s, ell)
    out4 = np.einsum("mnpq,anbq->ambp", c4, sigma4)
    return np.ascontiguousarray(out4).reshape(k * s, k * s)


def trace_identity(choi: Choi, sigma) -> tuple[complex, complex]:
    """Both sides of the Choi-state duality pairing, for comparison.

    Left: sandwich of (identity ⊗ map)(Sigma) between the unnormalized
    sum-basis vectors of the output double space, computed through the
    second-factor adapter.  Right: Tr(C Sigma^T).  The two agree for every
    Hermitian Sigma; the pair is returned so callers can check.
    """
    from .hdm import maximally_entangled

    s, ell = choi.dims
    sigma = linalg.ensure_hermitian(sigma)
    if sigma.shape != (s * ell, s * ell):
        raise ShapeError(
            f"Sigma shape {sigma.shape} does not match dims {choi.dims}")
    image = apply_on_second_factor(choi, sigma, k=s)
    phi = maximally_entangled(s)
    lhs = phi.conj() @ image @ phi
    rhs = np.trace(choi.mat @ sigma.T)
    return complex(lhs), complex(rhs)


@dataclass
class SignedRep:
    """Two HDM families realizing a map as sum_i A_i H A_i† - sum_j B_j H B_j†.

    Families produced by :func:`signed_rep` are mutually trace-orthogonal
    with squared norms equal to the eigenvalue magnitudes; transformed
    families (see :func:`pseudo_transform`) keep only the represented map.
    """

    positive: list[np.ndarray]
    negative: list[np.ndarray]
    dims: tuple[int, int]


def signed_rep(choi: Choi, rank_tol: float = RANK_TOL) -> SignedRep:
    """Eigen-split of a Choi matrix into signed HDM families.

    Every eigenpair with |eigenvalue| above ``rank_tol * ||C||_op`` becomes
    an s x L table: the eigenvector scaled by sqrt(|eigenvalue|), reshaped.
    Positive eigenvalues fill the positive family (descending), negative
    ones the negative family (most negative first).
    """
    spectrum = linalg.hermitian_eig(choi.mat)
    cutoff = rank_tol * spectrum.op_norm
    s, ell = choi.dims
    positive: list[np.ndarray] = []
    negative: list[np.ndarray] = []
    for lam, vec in zip(spectrum.eigenvalues, spectrum.eigenvectors.T):
        if lam > cutoff:
            positive.append(np.sqrt(lam) * vec.reshape(s, ell))
        elif lam < -cutoff:
            negative.append(np.sqrt(-lam) * vec.reshape(s, ell))
    negative.reverse()
    return SignedRep(positive, negative, choi.dims)


def apply_signed(rep: SignedRep, h) -> np.ndarray:
    """Evaluate the signed operator sum on an L x L input."""
    h = linalg.as_matrix(h)
    s, ell = rep.dims
    if h.shape != (ell, ell):
        raise ShapeError(f"input shape {h.shape}, expected ({ell}, {ell})")
    out = np.zeros((s, s), dtype=np.complex128)
    for a in rep.positive:
        out += a @ h @ a.conj().T
    for b in rep.negative:
        out -= b @ h @ b.conj().T
    return out


def choi_of_signed(rep: SignedRep) -> Choi:
    """Reassemble the Choi matrix carried by a signed representation."""
    s, ell = rep.dims
    n = s * ell
    out = np.zeros((n, n), dtype=np.complex128)
    for a in rep.positive:
        v = linalg.as_matrix(a).reshape(-1)
        out += np.outer(v, v.conj())
    for b in rep.negative:
        v = linalg.as_matrix(b).reshape(-1)
        out -= np.outer(v, v.conj())
    return Choi(out, rep.dims)


def kraus_of_cp(choi: Choi, tol: float = linalg.PSD_TOL) -> list[np.ndarray]:
    """Operator-sum family of a completely positive map.

    Requires the Choi matrix to be PSD within the standard tolerance,
    otherwise :class:`NotCPError` tells the caller to use the signed
    representation.  Negative eigenvalues inside the tolerance are dropped.
    """
    ok, lam_min = linalg.is_psd(choi.mat, tol)
    if not ok:
        raise NotCPError(
            f"Choi matrix has eigenvalue {lam_min:.3e}; use signed_rep")
    return signed_rep(choi).positive


def is_trace_preserving(kraus, tol: float = 1e-9) -> bool:
    """True iff the family sums to the identity: sum_i A_i† A_i = I."""
    kraus = [linalg.as_matrix(a) for a in kraus]
    if not kraus:
        return False
    ell = kraus[0].shape[1]
    acc = np.zeros((ell, ell), dtype=np.complex128)
    for a in kraus:
        if a.shape[1] != ell:
            raise ShapeError("family members have mismatched input dimension")
        acc += a.conj().T @ a
    defect = linalg.op_norm(acc - np.eye(ell))
    return defect <= tol * max(1.0, linalg.op_norm(acc))


def signature_metric(m: int, n: int) -> np.ndarray:
    """Diagonal metric with +1 on the first m slots and -1 on the last n."""
    return np.diag(np.concatenate([np.ones(m), -np.ones(n)]))


@dataclass
class PseudoUnitary:
    """(M+N) x (M+N) matrix S with S eta S† = eta, eta = diag(+1 x M, -1 x N)."""

    mat: np.ndarray
    signature: tuple[int, int]

    def __post_init__(self):
        self.signature = (int(self.signature[0]), int(self.signature[1]))
        m, n = self.signature
        if m < 0 or n < 0 or m + n < 1:
            raise SignatureError(f"bad signature {self.signature}")
        self.mat = linalg.as_matrix(self.mat)
        if self.mat.shape != (m + n, m + n):
            raise ShapeError(
                f"matrix shape {self.mat.shape} does not match signature {self.signature}")
        eta = signature_metric(m, n)
        defect = linalg.op_norm(self.mat @ eta @ self.mat.conj().T - eta)
        if defect > PSEUDO_TOL * max(1.0, linalg.op_norm(self.mat) ** 2):
            raise NotPseudoUnitaryError(
                f"S eta S† deviates from eta by {defect:.3e}")


def hyperbolic_rotation(total: int, i: int, j: int, t: float) -> np.ndarray:
    """Identity with a cosh/sinh boost coupling slots i and j."""
    a = np.eye(total, dtype=np.complex128)
    a[i, i] = a[j, j] = np.cosh(t)
    a[i, j] = a[j, i] = np.sinh(t)
    return a


def random_pseudo_unitary(m: int, n: int, rng: np.random.Generator,
                          boost: float = 1.0) -> PseudoUnitary:
    """Random signature-(m, n) pseudo-unitary.

    Built as K1 A K2 with block-diagonal unitaries K and one hyperbolic
    rotation per mixed slot pair; ``boost`` caps the rapidity.
    """
    total = m + n

    def block() -> np.ndarray:
        k = np.zeros((total, total), dtype=np.complex128)
        k[:m, :m] = random_unitary(m, rng) if m else 0
        k[m:, m:] = random_unitary(n, rng) if n else 0
        return k

    a = np.eye(total, dtype=np.complex128)
    for i in range(min(m, n)):
        a = a @ hyperbolic_rotation(total, i, m + i, boost * rng.uniform(0.0, 1.0))
    return PseudoUnitary(block() @ a @ block(), (m, n))


def embed_pseudo_unitary(small: PseudoUnitary, pos_slots, neg_slots,
                         signature: tuple[int, int]) -> PseudoUnitary:
    """Place a small pseudo-unitary on chosen slots of a larger signature.

    ``pos_slots`` picks which of the first M big slots carry the small
    matrix's positive directions, ``neg_slots`` which of the last N carry
    its negative ones; everything else stays identity.
    """
    m_small, n_small = small.signature
    m_big, n_big = int(signature[0]), int(signature[1])
    pos_slots = [int(i) for i in pos_slots]
    neg_slots = [int(i) for i in neg_slots]
    if len(pos_slots) != m_small or len(neg_slots) != n_small:
        raise SignatureError("slot lists do not match the small signature")
    if any(not 0 <= i < m_big for i in pos_slots) or len(set(pos_slots)) != m_small:
        raise SignatureError("positive slots out of range or repeated")
    if any(not 0 <= j < n_big for j in neg_slots) or len(set(neg_slots)) != n_small:
        raise SignatureError("negative slots out of range or repeated")
    where = pos_slots + [m_big + j for j in neg_slots]
    big = np.eye(m_big + n_big, dtype=np.complex128)
    for i, bi in enumerate(where):
        for j, bj in enumerate(where):
            big[bi, bj] = small.mat[i, j]
    return PseudoUnitary(big, (m_big, n_big))


def pseudo_transform(rep: SignedRep, pu: PseudoUnitary,
                     padding: tuple[int, int]) -> SignedRep:
    """Mix a zero-padded signed representation with a pseudo-unitary.

    Families are padded with zero HDMs to sizes (M, N) = ``padding``; the
    new member i is sum_j S[i, j] T_j with the first M members forming the
    positive family and the last N the negative one.  The represented map
    is unchanged.
    """
    m, n = int(padding[0]), int(padding[1])
    if pu.signature != (m, n):
        raise SignatureError(
            f"padding {padding} does not match signature {pu.signature}")
    if m < len(rep.positive) or n < len(rep.negative):
        raise SignatureError(
            f"padding {padding} smaller than family sizes "
            f"({len(rep.positive)}, {len(rep.negative)})")
    s, ell = rep.dims
    zero = np.zeros((s, ell), dtype=np.complex128)
    slots = (list(rep.positive) + [zero] * (m - len(rep.positive))
             + list(rep.negative) + [zero] * (n - len(rep.negative)))
    mixed = []
    for i in range(m + n):
        acc = np.zeros((s, ell), dtype=np.complex128)
        for j, t in enumerate(slots):
            acc += pu.mat[i, j] * t
        mixed.append(acc)
    return SignedRep(mixed[:m], mixed[m:], rep.dims)
