"""Teleportation through half density matrices.

The joint state |phi>_12 |psi>_3 expands exactly over a complete orthonormal
measurement basis of systems 2 and 3 into conditional states of system 1:

    |phi>_12 |psi>_3 = sum_kl (T_phi conj(T_kl) |psi>)_1 |k;l>_23

where T_phi is the HDM of the resource and T_kl the HDMs of the measurement
basis.  When the resource and basis are maximally entangled, each outcome
has probability 1/s^2 and a unitary correction restores |psi> exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidStateError, ShapeError
from .hdm import pure_from_hdm

#: tolerance for resource/state normalization and basis checks
BASIS_TOL = 1e-9


def bell_basis() -> list[tuple[int, int, np.ndarray]]:
    """HDMs of the four Bell states, indexed (k, l): X^k Z^l / sqrt(2)."""
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    out = []
    for k in range(2):
        for l in range(2):
            t = np.linalg.matrix_power(x, k) @ np.linalg.matrix_power(z, l)
            out.append((k, l, t / np.sqrt(2.0)))
    return out


def check_measurement_basis(basis, s: int, tol: float = BASIS_TOL) -> None:
    """Verify orthonormality and completeness of a measurement-basis HDM family.

    Orthonormality: Tr(T_kl T_k'l'†) = delta delta.  Completeness: the
    conjugation sum sends every matrix unit |i><j| to delta_ij I, checked
    exactly on all s^2 units.  Raises InvalidStateError on failure.
    """
    mats = [linalg.as_matrix(t) for _, _, t in basis]
    if len(mats) != s * s or any(t.shape != (s, s) for t in mats):
        raise InvalidStateError(
            f"measurement basis must consist of {s * s} HDMs of shape ({s}, {s})")
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            want = 1.0 if i == j else 0.0
            if abs(np.trace(a @ b.conj().T) - want) > tol:
                raise InvalidStateError("measurement basis is not orthonormal")
    for i in range(s):
        for j in range(s):
            unit = np.zeros((s, s), dtype=np.complex128)
            unit[i, j] = 1.0
            acc = sum(t @ unit @ t.conj().T for t in mats)
            want = np.eye(s) if i == j else np.zeros((s, s))
            if linalg.op_norm(acc - want) > tol:
                raise InvalidStateError("measurement basis is not complete")


@dataclass
class TeleportOutcome:
    k: int
    l: int
    conditional: np.ndarray
    probability: float
    fidelity: float
    corrected: bool


@dataclass
class TeleportReport:
    outcomes: list[TeleportOutcome]
    residual: float
    maximally_entangled: bool


def teleport_expand(t_phi, psi, basis=None) -> TeleportReport:
    """Expand a resource + input state over a measurement basis.

    ``t_phi`` is the s x s HDM of the normalized resource state, ``psi`` a
    normalized s-vector.  The report carries, per outcome, the unnormalized
    conditional state of system 1, its squared norm (the outcome
    probability), and a fidelity to the input: after the unitary correction
    when the resource is maximally entangled, raw (uncorrected) otherwise.
    ``residual`` is the reassembly error of the expansion identity and is
    zero up to roundoff for any resource.
    """
    t_phi = linalg.as_matrix(t_phi)
    s = t_phi.shape[0]
    if t_phi.shape != (s, s):
        raise ShapeError(f"resource HDM must be square, got {t_phi.shape}")
    if abs(np.trace(t_phi.conj().T @ t_phi).real - 1.0) > 1e-8:
        raise InvalidStateError("resource HDM must satisfy Tr(T†T) = 1")
    psi = linalg.as_vector(psi)
    if psi.size != s:
        raise ShapeError(f"input state length {psi.size}, expected {s}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-8:
        raise InvalidStateError("input state must be normalized")
    if basis is None:
        if s != 2:
            raise ShapeError("the built-in Bell basis needs a two-level system")
        basis = bell_basis()
    check_measurement_basis(basis, s)

    singulars = linalg.svd(t_phi)[1]
    maximal = bool(np.max(np.abs(singulars - 1.0 / np.sqrt(s))) < 1e-10)

    lhs = np.kron(pure_from_hdm(t_phi), psi)
    rhs = np.zeros_like(lhs)
    outcomes = []
    for k, l, t_kl in basis:
        cond_map = t_phi @ np.conj(t_kl)
        chi = cond_map @ psi
        rhs += np.kron(chi, pure_from_hdm(t_kl))
        prob = float(np.linalg.norm(chi) ** 2)
        if maximal:
            # correction: adjoint of the conditional map, scaled to unitary
            top = linalg.svd(cond_map)[1][0]
            fixed = (cond_map.conj().T / top) @ chi
            reference = fixed
            corrected = True
        else:
            reference = chi
            corrected = False
        norm = np.linalg.norm(reference)
        if norm < 1e-300:
            fidelity = 0.0
        else:
            fidelity = float(abs(psi.conj() @ reference) ** 2 / norm**2)
        outcomes.append(TeleportOutcome(k, l, chi, prob, fidelity, corrected))

    residual = float(np.linalg.norm(lhs - rhs))
    return TeleportReport(outcomes, residual, maximal)
