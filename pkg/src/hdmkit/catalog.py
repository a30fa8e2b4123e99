"""Constructors for the named maps and states used throughout the package.

Covers the antisymmetric-family decomposition of transposition, the swap
operator, the reduction and trace maps, unextendible product bases (the
3 x 3 five-member Tiles instance ships as the canonical one), the projector
and bound entangled state a UPB induces, and the indecomposable positive
map built from them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .chmap import Choi
from .errors import (
    BoundViolatedError,
    EpsTooLargeError,
    InvalidStateError,
    InvalidUPBError,
    ShapeError,
)
from .hdm import mirror_operator
from .positivity import SeeSawConfig, min_product_expectation

#: pairwise-orthogonality tolerance for product bases
UPB_TOL = 1e-10


def antisymmetric_basis(L: int) -> list[np.ndarray]:
    """Normalized antisymmetric generators (|m><n| - |n><m|)/sqrt(2), m > n.

    Ordered row-major by (m, n); each has unit Hilbert-Schmidt norm.  There
    are L(L-1)/2 of them.
    """
    if L < 2:
        raise ShapeError("antisymmetric generators need dimension at least 2")
    out = []
    root = 1.0 / np.sqrt(2.0)
    for m in range(1, L):
        for n in range(m):
            g = np.zeros((L, L), dtype=np.complex128)
            g[m, n] = root
            g[n, m] = -root
            out.append(g)
    return out


def transpose_via_difference(rho) -> np.ndarray:
    """Reconstruct rho^T as Tr(rho) I minus the antisymmetric conjugation sum.

    The conjugation runs over both index orders of each generator pair,
    i.e. twice the m > n family.  Exact for every complex square matrix.
    """
    rho = linalg.as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ShapeError("input must be square")
    ell = rho.shape[0]
    acc = np.zeros_like(rho)
    for g in antisymmetric_basis(ell):
        acc += g @ rho @ g.conj().T
    return np.trace(rho) * np.eye(ell, dtype=np.complex128) - 2.0 * acc


def swap_operator(L: int) -> Choi:
    """Choi matrix of transposition: X |m, n> = |n, m>.

    Equals the first-factor partial transpose of the mirror operator and
    squares to the identity; eigenvalues are +1 and -1 with multiplicities
    L(L+1)/2 and L(L-1)/2.
    """
    if L < 1:
        raise ShapeError("dimension must be positive")
    x = np.zeros((L * L, L * L), dtype=np.complex128)
    for m in range(L):
        for n in range(L):
            x[m * L + n, n * L + m] = 1.0
    return Choi(x, (L, L))


def reduction_choi(L: int) -> Choi:
    """Choi matrix of the reduction map rho -> Tr(rho) I - rho."""
    if L < 2:
        raise ShapeError("the reduction map needs dimension at least 2")
    return Choi(np.eye(L * L, dtype=np.complex128) - mirror_operator(L), (L, L))


def trace_choi(s: int, L: int) -> Choi:
    """Choi matrix (the identity) of the trace map rho -> Tr(rho) I_s."""
    return Choi(np.eye(int(s) * int(L), dtype=np.complex128), (int(s), int(L)))


def identity_choi(L: int) -> Choi:
    """Choi matrix (the mirror operator) of the identity map."""
    return Choi(mirror_operator(L), (L, L))


@dataclass
class UPB:
    """Orthonormal product vectors spanning a proper product-free complement.

    Pairwise orthogonality of the product vectors and size below s*L are
    checked on construction; unextendibility itself cannot be verified
    locally and is validated for shipped instances through the positive
    minimal product overlap of the projector.
    """

    dims: tuple[int, int]
    members: list[tuple[np.ndarray, np.ndarray]]

    def __post_init__(self):
        self.dims = (int(self.dims[0]), int(self.dims[1]))
        s, ell = self.dims
        if s < 1 or ell < 1:
            raise InvalidUPBError(f"bad dims {self.dims}")
        members = []
        for alpha, beta in self.members:
            alpha = linalg.as_vector(alpha)
            beta = linalg.as_vector(beta)
            if alpha.size != s or beta.size != ell:
                raise InvalidUPBError("member vector lengths do not match dims")
            members.append((alpha, beta))
        self.members = members
        if not 1 <= self.size < s * ell:
            raise InvalidUPBError(
                f"{self.size} members do not fit below the space dimension {s * ell}")
        prods = [np.kron(a, b) for a, b in self.members]
        gram = np.array([[x.conj() @ y for y in prods] for x in prods])
        if np.max(np.abs(gram - np.eye(self.size))) > UPB_TOL:
            raise InvalidUPBError("product vectors are not orthonormal")

    @property
    def size(self) -> int:
        return len(self.members)


def tiles_upb() -> UPB:
    """The five-member 3 x 3 Tiles basis, the canonical shipped instance."""
    e = np.eye(3, dtype=np.complex128)
    minus01 = (e[0] - e[1]) / np.sqrt(2.0)
    minus12 = (e[1] - e[2]) / np.sqrt(2.0)
    plus = (e[0] + e[1] + e[2]) / np.sqrt(3.0)
    members = [
        (e[0], minus01),
        (e[2], minus12),
        (minus01, e[2]),
        (minus12, e[0]),
        (plus, plus),
    ]
    return UPB((3, 3), members)


def upb_projector(u: UPB) -> np.ndarray:
    """Rank-S projector onto the span of the product members."""
    s, ell = u.dims
    p = np.zeros((s * ell, s * ell), dtype=np.complex128)
    for alpha, beta in u.members:
        v = np.kron(alpha, beta)
        p += np.outer(v, v.conj())
    return p


def upb_state(u: UPB) -> np.ndarray:
    """Normalized state on the complement: (I - P)/(sL - S).

    PPT by construction when the basis is a genuine UPB; the partial
    transpose is checked and a failure flags the basis as invalid.
    """
    s, ell = u.dims
    n = s * ell
    rho = (np.eye(n, dtype=np.complex128) - upb_projector(u)) / (n - u.size)
    ok, lam_min = linalg.is_psd(
        linalg.partial_transpose(rho, u.dims, 2))
    if not ok:
        raise InvalidUPBError(
            f"complement state is not PPT (eigenvalue {lam_min:.3e})")
    return rho


def min_product_overlap(u: UPB, cfg: SeeSawConfig | None = None) -> float:
    """Minimal product-state expectation of the UPB projector.

    Positive for a genuine UPB and at most S/(sL); values outside that
    interval beyond tolerance raise BoundViolatedError.  An extendible
    product basis legitimately yields zero.
    """
    s, ell = u.dims
    value, _, _ = min_product_expectation(upb_projector(u), u.dims, cfg)
    bound = u.size / (s * ell)
    if value < -1e-9 or value > bound + 1e-9:
        raise BoundViolatedError(
            f"minimal product overlap {value} outside [0, {bound}]")
    return value


def upb_positive_map(u: UPB, rho0, eps: float,
                     cfg: SeeSawConfig | None = None):
    """Indecomposable positive map attached to a UPB.

    Builds the Choi matrix P - eps * d * rho0, where 1/d is the maximal
    product expectation of the reference state ``rho0`` (recomputed by the
    optimizer except for the exact identity/(sL) fast path), together with
    the rank-one operator-sum family of the projector part.  ``eps`` must
    stay within the minimal product overlap of the projector, so the map
    remains positive while its Choi matrix is not PSD.
    """
    s, ell = u.dims
    n = s * ell
    rho0 = linalg.ensure_hermitian(rho0)
    if rho0.shape != (n, n):
        raise ShapeError(f"rho0 shape {rho0.shape} does not match dims {u.dims}")
    ok, lam_min = linalg.is_psd(rho0)
    if not ok or abs(np.trace(rho0).real - 1.0) > 1e-8:
        raise InvalidStateError("rho0 must be a PSD, trace-one state")
    if np.trace(rho0 @ upb_state(u)).real <= 1e-12:
        raise InvalidStateError("rho0 must overlap the complement state")
    eps = float(eps)
    if eps <= 0.0:
        raise EpsTooLargeError("eps must be positive")
    eps_max = min_product_overlap(u, cfg)
    if eps > eps_max + 1e-9:
        raise EpsTooLargeError(
            f"eps {eps} exceeds the minimal product overlap {eps_max}")

    if np.max(np.abs(rho0 - np.eye(n) / n)) < 1e-12:
        d = float(n)
    else:
        neg_max, _, _ = min_product_expectation(-rho0, u.dims, cfg)
        d = 1.0 / (-neg_max)

    choi = Choi(upb_projector(u) - eps * d * rho0, u.dims)
    kraus = [np.outer(alpha, beta) for alpha, beta in u.members]
    return choi, kraus
