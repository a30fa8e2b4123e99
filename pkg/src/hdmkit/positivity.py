"""Positive-map classification and entanglement detection.

The product-state minimum of a Hermitian form is estimated by alternating
eigenvector (see-saw) minimization with seeded restarts.  A value below the
tolerance comes with an explicit product-state witness and is exact; the
absence of a violation is a heuristic certificate and is labeled as such,
since positivity of a map is a global minimization statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend, linalg
from .chmap import Choi, apply_on_second_factor
from .errors import (
    InvalidStateError,
    NoNegativeEigenvalueError,
    NotPPTError,
    NumericalFailure,
    ShapeError,
)
from .rand import haar_state

CP = "CP"
POSITIVE_NOT_CP = "PositiveNotCP"
NOT_POSITIVE = "NotPositive"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class SeeSawConfig:
    """Optimizer budget; deterministic given ``seed`` (split per restart)."""

    restarts: int = 64
    max_iters: int = 500
    conv_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1 or self.conv_tol <= 0:
            raise ValueError("restarts, max_iters and conv_tol must be positive")


@dataclass
class SeeSawResult:
    value: float
    alpha: np.ndarray
    beta: np.ndarray
    restarts: int
    iterations: int
    converged: bool
    best_restart: int


def _as_form(h, dims) -> tuple[np.ndarray, int, int]:
    s, ell = int(dims[0]), int(dims[1])
    h = linalg.ensure_hermitian(h)
    if h.shape != (s * ell, s * ell):
        raise ShapeError(f"form shape {h.shape} does not match dims ({s}, {ell})")
    return np.ascontiguousarray(h.reshape(s, ell, s, ell)), s, ell


def seesaw_minimize(h, dims, cfg: SeeSawConfig | None = None) -> SeeSawResult:
    """Best product-state expectation found over seeded restarts.

    Restart r draws its starting direction from a generator seeded with
    ``seed + r``; the reported value is the minimum across restarts with
    ties broken by the lowest restart index.  The value is an achieved
    expectation, hence always an upper bound on the true product minimum.
    """
    cfg = cfg or SeeSawConfig()
    h4, s, ell = _as_form(h, dims)
    best: SeeSawResult | None = None
    total = 0
    any_conv = False
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + r)
        beta0 = haar_state(ell, rng)
        value, alpha, beta, sweeps, conv, _ = _backend.seesaw_run(
            h4, beta0, cfg.max_iters, cfg.conv_tol)
        total += sweeps
        any_conv = any_conv or conv
        if best is None or value < best.value:
            best = SeeSawResult(value, alpha, beta, cfg.restarts, 0, conv, r)
    assert best is not None
    best.iterations = total
    best.converged = any_conv
    return best


def min_product_expectation(h, dims, cfg: SeeSawConfig | None = None):
    """Heuristic product-state minimum of a Hermitian form.

    Returns ``(value, alpha, beta)`` with value = <alpha x beta|H|alpha x beta>
    for the returned unit vectors.
    """
    res = seesaw_minimize(h, dims, cfg)
    return res.value, res.alpha, res.beta


def product_expectation(h, dims, alpha, beta) -> float:
    """Expectation of the form on one product state (independent of the optimizer)."""
    h4, s, ell = _as_form(h, dims)
    alpha = linalg.as_vector(alpha)
    beta = linalg.as_vector(beta)
    if alpha.size != s or beta.size != ell:
        raise ShapeError("witness vector lengths do not match the factors")
    return float(np.real(np.einsum(
        "m,n,mnpq,p,q->", alpha.conj(), beta.conj(), h4, alpha, beta)))


@dataclass
class MapClass:
    """Classification verdict with numeric witnesses.

    ``NotPositive`` verdicts are exact (a violating product pair is
    attached); ``PositiveNotCP`` means no violating product state was found
    within the budget, which is heuristic.
    """

    verdict: str
    min_eigenvalue: float
    product_min: float | None
    tol: float
    witness_state: np.ndarray | None = None
    witness_product: tuple[np.ndarray, np.ndarray] | None = None
    restarts: int = 0
    iterations: int = 0
    converged: bool = field(default=False)


def classify_map(choi: Choi, cfg: SeeSawConfig | None = None) -> MapClass:
    """Sort a Hermitian map into CP / PositiveNotCP / NotPositive.

    CP iff the Choi matrix is PSD within tolerance.  Otherwise the see-saw
    searches for a negative product expectation: found means NotPositive
    (exact witness), not found with at least one converged restart means
    PositiveNotCP, and a fully unconverged search is left Undetermined.
    """
    cfg = cfg or SeeSawConfig()
    spectrum = linalg.hermitian_eig(choi.mat)
    min_eig = float(spectrum.eigenvalues[-1])
    tol = linalg.psd_margin(spectrum.op_norm)
    try:
        res = seesaw_minimize(choi.mat, choi.dims, cfg)
    except (NumericalFailure, np.linalg.LinAlgError):
        return MapClass(UNDETERMINED, min_eig, None, tol,
                        restarts=cfg.restarts)
    if min_eig >= -tol:
        return MapClass(CP, min_eig, res.value, tol,
                        restarts=cfg.restarts, iterations=res.iterations,
                        converged=res.converged)
    if res.value < -tol:
        return MapClass(NOT_POSITIVE, min_eig, res.value, tol,
                        witness_product=(res.alpha, res.beta),
                        restarts=cfg.restarts, iterations=res.iterations,
                        converged=res.converged)
    if not res.converged:
        return MapClass(UNDETERMINED, min_eig, res.value, tol,
                        restarts=cfg.restarts, iterations=res.iterations,
                        converged=False)
    return MapClass(POSITIVE_NOT_CP, min_eig, res.value, tol,
                    witness_state=spectrum.eigenvectors[:, -1],
                    restarts=cfg.restarts, iterations=res.iterations,
                    converged=True)


def cp_violation_witness(choi: Choi) -> tuple[np.ndarray, float]:
    """State whose image under identity ⊗ map loses positivity.

    Takes the eigenvector of the most negative Choi eigenvalue, transposes
    its projector, pushes it through the second-factor adapter and reports
    the minimum eigenvalue of the image, which is negative whenever the
    Choi matrix is not PSD.  Raises NoNegativeEigenvalueError for PSD input.
    """
    spectrum = linalg.hermitian_eig(choi.mat)
    tol = linalg.psd_margin(spectrum.op_norm)
    if spectrum.eigenvalues[-1] >= -tol:
        raise NoNegativeEigenvalueError(
            f"minimum eigenvalue {spectrum.eigenvalues[-1]:.3e} is not negative")
    psi = spectrum.eigenvectors[:, -1]
    proj = np.outer(psi, psi.conj())
    image = apply_on_second_factor(choi, proj.T, k=choi.s)
    image_min = float(np.linalg.eigvalsh((image + image.conj().T) / 2.0)[0])
    return psi, image_min


def detect_entanglement(rho, dims, choi: Choi) -> tuple[bool, float]:
    """Apply identity ⊗ map to a state and look for a negative eigenvalue.

    ``dims`` are the state's factor dimensions; the second factor must
    match the map input dimension.  Detection certifies entanglement when
    the map is positive.
    """
    k, ell = int(dims[0]), int(dims[1])
    if ell != choi.L:
        raise ShapeError(
            f"map input dimension {choi.L} does not match second factor {ell}")
    rho = linalg.ensure_hermitian(rho)
    if rho.shape != (k * ell, k * ell):
        raise ShapeError(f"state shape {rho.shape} does not match dims {dims}")
    ok, lam_min = linalg.is_psd(rho)
    if not ok or abs(np.trace(rho).real - 1.0) > 1e-8:
        raise InvalidStateError("input must be a PSD, trace-one state")
    image = apply_on_second_factor(choi, rho, k=k)
    w = np.linalg.eigvalsh((image + image.conj().T) / 2.0)
    min_eig = float(w[0])
    norm = float(max(abs(w[0]), abs(w[-1])))
    return min_eig < -linalg.psd_margin(norm), min_eig


def indecomposability_check(choi: Choi, rho_ppt, dims) -> bool:
    """Certify indecomposability by detecting a PPT state.

    The input must be PPT within tolerance (otherwise NotPPTError): a
    decomposable map can never detect such a state, so detection firing
    proves the map indecomposable.
    """
    pt = linalg.partial_transpose(rho_ppt, dims, 2)
    ok, lam_min = linalg.is_psd(pt)
    if not ok:
        raise NotPPTError(
            f"partial transpose has eigenvalue {lam_min:.3e}; state is not PPT")
    detected, _ = detect_entanglement(rho_ppt, dims, choi)
    return detected


def _qubit_states(n_theta: int, n_phi: int) -> np.ndarray:
    """(theta, phi) grid over single-qubit states, poles included."""
    thetas = np.linspace(0.0, np.pi / 2.0, n_theta)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    t = np.repeat(thetas, n_phi)
    p = np.tile(phis, n_theta)
    return np.stack([np.cos(t), np.exp(1j * p) * np.sin(t)], axis=1)


def _real_states(dim: int, n_u: int, n_v: int) -> np.ndarray:
    """Grid over real unit vectors of dimension 2 or 3."""
    if dim == 2:
        th = np.linspace(0.0, np.pi, n_u, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1).astype(np.complex128)
    if dim == 3:
        u = np.linspace(0.0, np.pi, n_u)
        v = np.linspace(0.0, 2.0 * np.pi, n_v, endpoint=False)
        uu = np.repeat(u, n_v)
        vv = np.tile(v, n_u)
        return np.stack(
            [np.sin(uu) * np.cos(vv), np.sin(uu) * np.sin(vv), np.cos(uu)],
            axis=1).astype(np.complex128)
    raise ShapeError(f"real grids cover factor dimensions 2 and 3, not {dim}")


def grid_min_qubit(h, n_theta: int = 60, n_phi: int = 60):
    """Exhaustive angle-grid product minimum for a two-qubit form.

    The (theta, phi) parameterization covers every qubit state up to a
    global phase, so this is a dense upper bound on the true product
    minimum, used as the optimizer's validation oracle.
    """
    h4, s, ell = _as_form(h, (2, 2))
    states = _qubit_states(n_theta, n_phi)
    value, ia, ib = _backend.pairwise_product_min(h4, states, states)
    return value, states[ia], states[ib]


def grid_min_real(h, dims, n: int = 60):
    """Grid product minimum over real unit vectors (factor dims 2 or 3)."""
    h4, s, ell = _as_form(h, dims)
    alphas = _real_states(s, n, n)
    betas = _real_states(ell, n, n)
    value, ia, ib = _backend.pairwise_product_min(h4, alphas, betas)
    return value, alphas[ia], betas[ib]
