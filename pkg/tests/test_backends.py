"""Cross-checks between the compiled kernels and the pure-numpy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest

from hdmkit import _kernels_py
from hdmkit.rand import haar_state, random_hermitian

try:
    from hdmkit import _kernels_c
except ImportError:
    _kernels_c = None

needs_compiled = pytest.mark.skipif(
    _kernels_c is None, reason="compiled kernels not built")


@needs_compiled
@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 12])
def test_eigh_small_matches_lapack(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        h = random_hermitian(n, rng)
        w_c, v_c = _kernels_c.eigh_small(h)
        w_p, v_p = _kernels_py.eigh_small(h)
        scale = max(1.0, np.max(np.abs(w_p)))
        assert np.max(np.abs(w_c - w_p)) < 1e-12 * scale
        # residuals and orthonormality of the compiled eigenvectors
        assert np.linalg.norm(h @ v_c - v_c @ np.diag(w_c)) < 1e-12 * scale * n
        assert np.max(np.abs(v_c.conj().T @ v_c - np.eye(n))) < 1e-12


@needs_compiled
def test_eigh_small_phase_convention_matches():
    rng = np.random.default_rng(77)
    h = random_hermitian(4, rng)
    _, v_c = _kernels_c.eigh_small(h)
    _, v_p = _kernels_py.eigh_small(h)
    # nondegenerate spectrum: the anchored phases make columns identical
    assert np.max(np.abs(v_c - v_p)) < 1e-10


@needs_compiled
@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3), (3, 4)])
def test_seesaw_run_agrees(dims):
    s, ell = dims
    rng = np.random.default_rng(10 * s + ell)
    for _ in range(5):
        h4 = random_hermitian(s * ell, rng).reshape(s, ell, s, ell)
        beta0 = haar_state(ell, rng)
        v_c = _kernels_c.seesaw_run(h4, beta0, 500, 1e-12)
        v_p = _kernels_py.seesaw_run(h4, beta0, 500, 1e-12)
        assert abs(v_c[0] - v_p[0]) < 1e-9
        assert v_c[4] and v_p[4]  # both converged


@needs_compiled
def test_pairwise_product_min_agrees():
    rng = np.random.default_rng(5)
    h4 = random_hermitian(6, rng).reshape(2, 3, 2, 3)
    alphas = np.array([haar_state(2, rng) for _ in range(40)])
    betas = np.array([haar_state(3, rng) for _ in range(55)])
    val_c, ia_c, ib_c = _kernels_c.pairwise_product_min(h4, alphas, betas)
    val_p, ia_p, ib_p = _kernels_py.pairwise_product_min(h4, alphas, betas)
    assert abs(val_c - val_p) < 1e-12
    assert (ia_c, ib_c) == (ia_p, ib_p)


@needs_compiled
def test_eigh_small_handles_degenerate_and_trivial_input():
    rng = np.random.default_rng(9)
    cases = [
        np.eye(5),
        np.zeros((4, 4)),
        np.diag([3.0, 3.0, 3.0, -1.0]),
        np.kron(np.eye(2), random_hermitian(3, rng)),
    ]
    for h in cases:
        w, v = _kernels_c.eigh_small(h)
        scale = max(1.0, float(np.max(np.abs(w))))
        assert np.linalg.norm(h @ v - v @ np.diag(w)) < 1e-12 * scale * h.shape[0]
        assert np.allclose(np.sort(w), np.linalg.eigvalsh(h), atol=1e-12 * scale)


@pytest.mark.parametrize("kernels", [_kernels_py] + ([_kernels_c] if _kernels_c else []))
def test_pairwise_product_min_matches_naive_reference(kernels):
    rng = np.random.default_rng(31)
    for _ in range(4):
        s, ell = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        h4 = random_hermitian(s * ell, rng).reshape(s, ell, s, ell)
        alphas = np.array([haar_state(s, rng) for _ in range(11)])
        betas = np.array([haar_state(ell, rng) for _ in range(9)])
        val, ia, ib = kernels.pairwise_product_min(h4, alphas, betas)
        naive = np.array([[np.real(np.einsum(
            "m,n,mnpq,p,q->", a.conj(), b.conj(), h4, a, b))
            for a in alphas] for b in betas])
        assert abs(val - naive.min()) < 1e-12
        assert abs(naive[ib, ia] - val) < 1e-12


@pytest.mark.parametrize("kernels", [_kernels_py] + ([_kernels_c] if _kernels_c else []))
def test_seesaw_one_dimensional_factor_hits_eigen_minimum(kernels):
    rng = np.random.default_rng(32)
    h = random_hermitian(3, rng)
    h4 = np.ascontiguousarray(h.reshape(1, 3, 1, 3))
    value, _, _, _, converged, _ = kernels.seesaw_run(h4, haar_state(3, rng), 100, 1e-12)
    assert converged
    assert abs(value - np.linalg.eigvalsh(h)[0]) < 1e-10


def test_env_var_forces_python_backend():
    env = dict(os.environ, HDMKIT_KERNELS="py")
    out = subprocess.run(
        [sys.executable, "-c",
         "import hdmkit; print(hdmkit.KERNEL_BACKEND)"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_pairwise_rejects_bad_shapes():
    h4 = np.zeros((2, 2, 2, 2), dtype=complex)
    with pytest.raises(ValueError):
        _kernels_py.pairwise_product_min(h4, np.zeros((0, 2), dtype=complex),
                                         np.zeros((3, 2), dtype=complex))
