"""Pure-numpy implementations of the hot kernels.

Mirrors ``_kernels_c`` function for function; ``hdmkit._backend`` selects
this module when the compiled extension is unavailable or disabled.
"""

from __future__ import annotations

import numpy as np

PHASE_CUTOFF = 1e-12


def _fix_phase(v: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > PHASE_CUTOFF)
    if idx.size == 0:
        return v
    pivot = v[idx[0]]
    return v * (np.conj(pivot) / abs(pivot))


def eigh_small(a) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenpairs of a small Hermitian matrix, phases anchored."""
    a = np.asarray(a, dtype=np.complex128)
    w, v = np.linalg.eigh(a)
    v = v.copy()
    for k in range(v.shape[1]):
        v[:, k] = _fix_phase(v[:, k])
    return w, v


def seesaw_run(h4, beta0, max_iters: int, conv_tol: float):
    """One alternating-minimization restart over product states.

    ``h4`` is the Hermitian form reshaped to (s, L, s, L); ``beta0`` the
    starting direction on the second factor.  Each half-sweep replaces one
    factor by the minimum eigenvector of the form contracted with the other
    factor, so the objective never increases.  Stops when the per-sweep
    improvement drops below ``conv_tol``.

    Returns (value, alpha, beta, sweeps, converged, trace) with ``trace``
    holding the objective after every half-sweep.
    """
    h4 = np.asarray(h4, dtype=np.complex128)
    beta = np.asarray(beta0, dtype=np.complex128)
    beta = beta / np.linalg.norm(beta)
    alpha = None
    trace = []
    v_prev = np.inf
    converged = False
    sweeps = 0
    for _ in range(max_iters):
        f = np.einsum("n,mnpq,q->mp", beta.conj(), h4, beta)
        w, vecs = np.linalg.eigh((f + f.conj().T) / 2.0)
        alpha = vecs[:, 0]
        trace.append(float(w[0]))
        g = np.einsum("m,mnpq,p->nq", alpha.conj(), h4, alpha)
        w2, vecs2 = np.linalg.eigh((g + g.conj().T) / 2.0)
        beta = vecs2[:, 0]
        trace.append(float(w2[0]))
        sweeps += 1
        if v_prev - w2[0] < conv_tol:
            converged = True
            break
        v_prev = float(w2[0])
    alpha = _fix_phase(alpha)
    beta = _fix_phase(beta)
    value = float(np.real(np.einsum(
        "m,n,mnpq,p,q->", alpha.conj(), beta.conj(), h4, alpha, beta)))
    return value, alpha, beta, sweeps, converged, np.asarray(trace)


def pairwise_product_min(h4, alphas, betas, chunk: int = 256):
    """Minimum of <a,b|H|a,b> over all rows a of ``alphas`` x rows b of ``betas``.

    Returns (value, alpha_index, beta_index); ties resolve to the first
    minimum in (beta, alpha) scan order.
    """
    h4 = np.asarray(h4, dtype=np.complex128)
    alphas = np.asarray(alphas, dtype=np.complex128)
    betas = np.asarray(betas, dtype=np.complex128)
    if alphas.shape[0] == 0 or betas.shape[0] == 0:
        raise ValueError("state arrays must be nonempty")
    if alphas.shape[1] != h4.shape[0] or betas.shape[1] != h4.shape[1]:
        raise ValueError("state arrays do not match the factor dimensions")
    best = np.inf
    best_a = 0
    best_b = 0
    for start in range(0, betas.shape[0], chunk):
        bb = betas[start:start + chunk]
        forms = np.einsum("bn,mnpq,bq->bmp", bb.conj(), h4, bb)
        mixed = forms @ alphas.T  # (b, m, a)
        vals = np.einsum("am,bma->ba", alphas.conj(), mixed).real
        flat = int(np.argmin(vals))
        b_loc, a_loc = divmod(flat, vals.shape[1])
        if vals[b_loc, a_loc] < best:
            best = float(vals[b_loc, a_loc])
            best_a = a_loc
            best_b = start + b_loc
    return best, int(best_a), int(best_b)
