import numpy as np
import pytest

from hdmkit import linalg
from hdmkit.errors import NotHermitianError, ShapeError
from hdmkit.hdm import maximally_entangled, mirror_operator
from hdmkit.rand import complex_normal, random_hermitian


def test_hermitian_eig_identity():
    spec = linalg.hermitian_eig(np.eye(2))
    assert np.allclose(spec.eigenvalues, [1.0, 1.0])


def test_hermitian_eig_diagonal_case():
    spec = linalg.hermitian_eig(np.diag([3.0, -1.0]))
    assert np.allclose(spec.eigenvalues, [3.0, -1.0])
    assert np.allclose(np.abs(spec.eigenvectors), np.eye(2))


def test_hermitian_eig_swap_spectrum():
    # 4x4 swap: symmetric/antisymmetric multiplicities L(L+1)/2 and L(L-1)/2
    x = mirror_operator(2).reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)
    spec = linalg.hermitian_eig(x)
    assert np.allclose(spec.eigenvalues, [1.0, 1.0, 1.0, -1.0])


@pytest.mark.parametrize("seed", range(8))
def test_hermitian_eig_roundtrip_and_residual(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    h = random_hermitian(n, rng)
    spec = linalg.hermitian_eig(h)
    norm = linalg.op_norm(h)
    rebuilt = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.conj().T
    assert linalg.frob_norm(rebuilt - h) < 1e-9 * norm
    for k in range(n):
        v = spec.eigenvectors[:, k]
        assert np.linalg.norm(h @ v - spec.eigenvalues[k] * v) < 1e-9 * norm
    gram = spec.eigenvectors.conj().T @ spec.eigenvectors
    assert np.max(np.abs(gram - np.eye(n))) < 1e-10
    assert np.all(np.diff(spec.eigenvalues) <= 1e-12)


def test_hermitian_eig_phase_convention():
    rng = np.random.default_rng(3)
    spec = linalg.hermitian_eig(random_hermitian(5, rng))
    for k in range(5):
        col = spec.eigenvectors[:, k]
        pivot = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(pivot.imag) < 1e-12 and pivot.real > 0


def test_hermitian_eig_rejects_non_square_and_asymmetric():
    with pytest.raises(ShapeError):
        linalg.hermitian_eig(np.ones((2, 3)))
    with pytest.raises(NotHermitianError):
        linalg.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_eig_symmetrizes_tiny_asymmetry():
    h = np.eye(2, dtype=complex)
    h[0, 1] = 1e-12  # below the relative guard
    spec = linalg.hermitian_eig(h)
    assert np.allclose(spec.eigenvalues, [1.0, 1.0], atol=1e-11)


def test_svd_identity_and_rank_one():
    _, s_vals, _ = linalg.svd(np.eye(3))
    assert np.allclose(s_vals, 1.0)
    proj = np.zeros((2, 2))
    proj[0, 0] = 1.0
    _, s_vals, _ = linalg.svd(proj)
    assert np.allclose(s_vals, [1.0, 0.0])


def test_svd_reconstruction():
    rng = np.random.default_rng(11)
    a = complex_normal((3, 5), rng)
    u, s_vals, v = linalg.svd(a)
    assert linalg.frob_norm(u @ np.diag(s_vals) @ v.conj().T - a) < 1e-10
    assert np.max(np.abs(u.conj().T @ u - np.eye(3))) < 1e-12
    assert np.max(np.abs(v.conj().T @ v - np.eye(3))) < 1e-12
    assert np.all(np.diff(s_vals) <= 0)


def test_kron_basics():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    a = np.zeros((2, 2))
    a[0, 0] = 1.0
    b = np.zeros((2, 2))
    b[1, 1] = 1.0
    out = linalg.kron(a, b)
    want = np.zeros((4, 4))
    want[1, 1] = 1.0
    assert np.array_equal(out, want)


def test_kron_flips_bell_state():
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    phi = maximally_entangled(2)
    assert np.allclose(linalg.kron(sx, sx) @ phi, phi)


def test_kron_associativity():
    rng = np.random.default_rng(1)
    a, b, c = (complex_normal((2, 2), rng) for _ in range(3))
    left = linalg.kron(linalg.kron(a, b), c)
    right = linalg.kron(a, linalg.kron(b, c))
    assert np.max(np.abs(left - right)) < 1e-12


def test_partial_trace_product_rule():
    rng = np.random.default_rng(2)
    a = complex_normal((2, 2), rng)
    b = complex_normal((3, 3), rng)
    m = linalg.kron(a, b)
    assert np.allclose(linalg.partial_trace(m, (2, 3), 2), a * np.trace(b))
    assert np.allclose(linalg.partial_trace(m, (2, 3), 1), b * np.trace(a))


def test_partial_trace_mirror_marginal():
    assert np.allclose(linalg.partial_trace(mirror_operator(2), (2, 2), 2), np.eye(2))


def test_partial_trace_of_purification():
    # second marginal of the pure state carried by T is T^T T*
    rng = np.random.default_rng(4)
    t = complex_normal((2, 3), rng)
    phi = t.reshape(-1)
    proj = np.outer(phi, phi.conj())
    assert np.allclose(linalg.partial_trace(proj, (2, 3), 1), t.T @ t.conj())
    assert np.allclose(linalg.partial_trace(proj, (2, 3), 2), t @ t.conj().T)


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(5)
    m = complex_normal((6, 6), rng)
    for which in (1, 2):
        out = linalg.partial_trace(m, (2, 3), which)
        assert abs(np.trace(out) - np.trace(m)) < 1e-12 * abs(np.trace(m))


def test_partial_transpose_product_rule():
    rng = np.random.default_rng(6)
    a = complex_normal((2, 2), rng)
    b = complex_normal((3, 3), rng)
    m = linalg.kron(a, b)
    assert np.allclose(linalg.partial_transpose(m, (2, 3), 2), linalg.kron(a, b.T))
    assert np.allclose(linalg.partial_transpose(m, (2, 3), 1), linalg.kron(a.T, b))


def test_partial_transpose_involution_exact():
    rng = np.random.default_rng(7)
    m = complex_normal((6, 6), rng)
    for which in (1, 2):
        twice = linalg.partial_transpose(
            linalg.partial_transpose(m, (2, 3), which), (2, 3), which)
        assert np.array_equal(twice, m)


def test_partial_transpose_of_bell_state():
    pt = linalg.partial_transpose(mirror_operator(2) / 2.0, (2, 2), 1)
    w = np.linalg.eigvalsh(pt)
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5])


def test_partial_ops_reject_bad_dims():
    with pytest.raises(ShapeError):
        linalg.partial_trace(np.eye(5), (2, 3), 2)
    with pytest.raises(ShapeError):
        linalg.partial_transpose(np.eye(6), (2, 3), 3)


def test_is_psd_basics():
    ok, lam = linalg.is_psd(np.eye(3))
    assert ok and abs(lam - 1.0) < 1e-12
    ok, lam = linalg.is_psd(np.diag([1.0, -0.5]))
    assert not ok and abs(lam + 0.5) < 1e-12


def test_is_psd_reduction_matrix():
    h = np.eye(9) - mirror_operator(3)
    ok, lam = linalg.is_psd(h)
    assert not ok and abs(lam + 2.0) < 1e-10


@pytest.mark.parametrize("seed", range(6))
def test_is_psd_matches_cholesky(seed):
    rng = np.random.default_rng(seed)
    a = complex_normal((4, 4), rng)
    gram = a @ a.conj().T
    ok, _ = linalg.is_psd(gram)
    np.linalg.cholesky(gram + 1e-12 * np.eye(4))  # must not raise
    assert ok
    bad = gram - 2.0 * linalg.op_norm(gram) * np.eye(4)
    ok_bad, _ = linalg.is_psd(bad)
    assert not ok_bad
    with pytest.raises(np.linalg.LinAlgError):
        np.linalg.cholesky(bad)


def test_as_matrix_rejects_non_finite():
    with pytest.raises(ShapeError):
        linalg.as_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))
