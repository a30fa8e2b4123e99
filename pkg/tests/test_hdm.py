import numpy as np
import pytest

from hdmkit import hdm, linalg
from hdmkit.errors import (
    InvalidStateError,
    NotPSDError,
    NotRelatedError,
    RankExceedsWidthError,
    ShapeError,
)
from hdmkit.rand import complex_normal, haar_state, random_density, random_unitary


def test_mirror_operator_identities():
    for ell in (2, 3, 4):
        m = hdm.mirror_operator(ell)
        assert abs(np.trace(m) - ell) < 1e-12
        assert np.allclose(m @ m, ell * m)
        assert abs(np.linalg.norm(hdm.maximally_entangled(ell)) ** 2 - ell) < 1e-12


def test_index_state_contraction():
    # <w*| M |w*> on the first factor reproduces |w><w| on the second
    rng = np.random.default_rng(0)
    for ell in (2, 3):
        m4 = hdm.mirror_operator(ell).reshape(ell, ell, ell, ell)
        for _ in range(25):
            w = haar_state(ell, rng)
            ws = hdm.index_state(w)
            out = np.einsum("m,mnpq,p->nq", ws.conj(), m4, ws)
            assert np.max(np.abs(out - np.outer(w, w.conj()))) < 1e-12


def test_pure_from_hdm_examples():
    assert np.array_equal(hdm.pure_from_hdm(np.eye(2)), hdm.maximally_entangled(2))
    t = np.zeros((2, 2))
    t[0, 1] = 1.0
    want = np.zeros(4)
    want[1] = 1.0  # |0>|1>
    assert np.array_equal(hdm.pure_from_hdm(t), want)


def test_hdm_pure_roundtrip_is_exact():
    rng = np.random.default_rng(1)
    t = complex_normal((3, 4), rng)
    assert np.array_equal(hdm.hdm_from_pure(hdm.pure_from_hdm(t), (3, 4)), t)
    phi = complex_normal(12, rng)
    assert np.array_equal(hdm.pure_from_hdm(hdm.hdm_from_pure(phi, (3, 4))), phi)


def test_hdm_of_product_state_is_rank_one_outer():
    rng = np.random.default_rng(2)
    v = haar_state(2, rng)
    w = haar_state(3, rng)
    t = hdm.hdm_from_pure(np.kron(v, w), (2, 3))
    # the table of |v>|w> is |v><w*|, whose entries are v_m w_n
    assert np.allclose(t, np.outer(v, w))
    assert np.linalg.matrix_rank(t) == 1


def test_hdm_from_pure_rejects_bad_length():
    with pytest.raises(ShapeError):
        hdm.hdm_from_pure(np.ones(5), (2, 3))


def test_eigen_hdm_maximally_mixed():
    t = hdm.eigen_hdm(np.eye(2) / 2, 2)
    assert np.allclose(t @ t.conj().T, np.eye(2) / 2, atol=1e-10)
    assert np.allclose(hdm.schmidt_coefficients(t), [1 / np.sqrt(2)] * 2)


def test_eigen_hdm_pure_state_padding():
    rho = np.zeros((2, 2))
    rho[0, 0] = 1.0
    t = hdm.eigen_hdm(rho, 3)
    want = np.zeros((2, 3))
    want[0, 0] = 1.0
    assert np.allclose(t, want, atol=1e-12)


def test_eigen_hdm_low_rank_reconstruction():
    rng = np.random.default_rng(3)
    rho = random_density(3, rng, rank=2)
    t = hdm.eigen_hdm(rho, 4)
    assert linalg.frob_norm(t @ t.conj().T - rho) < 1e-10
    assert np.allclose(t[:, 3], 0.0)


def test_eigen_hdm_errors():
    with pytest.raises(NotPSDError):
        hdm.eigen_hdm(np.diag([1.0, -0.5]), 2)
    with pytest.raises(InvalidStateError):
        hdm.eigen_hdm(np.eye(2), 2)  # trace 2
    rng = np.random.default_rng(4)
    with pytest.raises(RankExceedsWidthError):
        hdm.eigen_hdm(random_density(3, rng), 2)
    with pytest.raises(ShapeError):
        hdm.eigen_hdm(random_density(3, rng, rank=1), 2)  # rank fits, width does not


def test_eigen_hdm_accepts_subnormalized():
    rng = np.random.default_rng(5)
    rho = 0.3 * random_density(2, rng)
    t = hdm.eigen_hdm(rho, 2)
    assert linalg.frob_norm(t @ t.conj().T - rho) < 1e-10


def test_reduced_states_examples():
    t = np.eye(2) / np.sqrt(2)
    rho_s, rho_l = hdm.reduced_states(t)
    assert np.allclose(rho_s, np.eye(2) / 2)
    assert np.allclose(rho_l, np.eye(2) / 2)

    rng = np.random.default_rng(6)
    v = haar_state(2, rng)
    w = haar_state(3, rng)
    rho_s, rho_l = hdm.reduced_states(np.outer(v, w))
    assert np.allclose(rho_s, np.outer(v, v.conj()), atol=1e-12)
    assert np.allclose(rho_l, np.outer(w, w.conj()), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_reduced_states_match_partial_trace(seed):
    rng = np.random.default_rng(seed)
    t = complex_normal((3, 4), rng)
    phi = hdm.pure_from_hdm(t)
    proj = np.outer(phi, phi.conj())
    rho_s, rho_l = hdm.reduced_states(t)
    assert np.max(np.abs(rho_s - linalg.partial_trace(proj, (3, 4), 2))) < 1e-10
    assert np.max(np.abs(rho_l - linalg.partial_trace(proj, (3, 4), 1))) < 1e-10
    assert abs(np.trace(rho_s) - np.trace(rho_l)) < 1e-12


def test_rank_of_hdm_matches_state_rank():
    rng = np.random.default_rng(7)
    for rank in (1, 2, 3):
        rho = random_density(3, rng, rank=rank)
        t = hdm.eigen_hdm(rho, 3)
        by_svd = int(np.sum(hdm.schmidt_coefficients(t) > 1e-10))
        by_eig = int(np.sum(np.linalg.eigvalsh(t @ t.conj().T) > 1e-10))
        assert by_svd == by_eig == rank


def test_is_normalized_tag():
    assert hdm.is_normalized(np.eye(2) / np.sqrt(2.0))
    assert not hdm.is_normalized(np.eye(2))
    rng = np.random.default_rng(20)
    phi = haar_state(6, rng)
    assert hdm.is_normalized(hdm.hdm_from_pure(phi, (2, 3)))


def test_schmidt_product_state_is_rank_one():
    rng = np.random.default_rng(21)
    t = np.outer(haar_state(2, rng), haar_state(3, rng))
    coeffs = hdm.schmidt_coefficients(t)
    assert abs(coeffs[0] - 1.0) < 1e-12
    assert np.all(coeffs[1:] < 1e-12)


def test_schmidt_squares_sum_to_norm():
    rng = np.random.default_rng(8)
    t = complex_normal((3, 5), rng)
    coeffs = hdm.schmidt_coefficients(t)
    assert abs(np.sum(coeffs**2) - np.trace(t.conj().T @ t).real) < 1e-10
    w = np.linalg.eigvalsh(t @ t.conj().T)[::-1]
    assert np.allclose(coeffs**2, w, atol=1e-10)


def test_connecting_unitary_identity_case():
    rng = np.random.default_rng(9)
    t = hdm.eigen_hdm(random_density(2, rng), 3)
    u = hdm.connecting_unitary(t, t)
    assert linalg.frob_norm(t @ u - t) < 1e-8


@pytest.mark.parametrize("seed", range(6))
def test_connecting_unitary_forward(seed):
    rng = np.random.default_rng(seed)
    s, ell = (2, 3) if seed % 2 else (3, 4)
    t1 = hdm.eigen_hdm(random_density(s, rng, rank=min(s, 2)), ell)
    v = random_unitary(ell, rng)
    t2 = t1 @ v
    u = hdm.connecting_unitary(t1, t2)
    assert linalg.op_norm(u @ u.conj().T - np.eye(ell)) < 1e-8
    assert linalg.op_norm(t1 @ u - t2) < 1e-8


def test_connecting_unitary_rejects_unrelated():
    rng = np.random.default_rng(10)
    t1 = hdm.eigen_hdm(random_density(2, rng), 2)
    t2 = hdm.eigen_hdm(random_density(2, rng), 2)
    with pytest.raises(NotRelatedError):
        hdm.connecting_unitary(t1, t2)
    with pytest.raises(ShapeError):
        hdm.connecting_unitary(t1, np.zeros((2, 3)))


def test_ensemble_state_single_member():
    state = hdm.ensemble_state([np.eye(2) / np.sqrt(2)], (2, 2))
    assert np.allclose(state, hdm.mirror_operator(2) / 2)


def test_ensemble_state_matches_mirror_conjugation():
    rng = np.random.default_rng(11)
    family = [complex_normal((2, 3), rng) for _ in range(3)]
    direct = hdm.ensemble_state(family, (2, 3))
    m = hdm.mirror_operator(3)
    other = np.zeros((6, 6), dtype=complex)
    for a in family:
        big = np.kron(a, np.eye(3))
        other += big @ m @ big.conj().T
    assert np.max(np.abs(direct - other)) < 1e-10


def test_ensemble_state_reproduces_mixture():
    rng = np.random.default_rng(12)
    ens = hdm.Ensemble([(0.25, haar_state(6, rng)) for _ in range(4)])
    state = hdm.ensemble_state(ens.hdms((2, 3)), (2, 3))
    assert np.max(np.abs(state - ens.density())) < 1e-10


def test_ensemble_state_unitary_mixing_invariance():
    rng = np.random.default_rng(13)
    family = [complex_normal((2, 2), rng) / 2 for _ in range(3)]
    u = random_unitary(3, rng)
    mixed = [sum(u[i, j] * family[j] for j in range(3)) for i in range(3)]
    before = hdm.ensemble_state(family, (2, 2))
    after = hdm.ensemble_state(mixed, (2, 2))
    assert np.max(np.abs(before - after)) < 1e-10


def test_ensemble_state_local_operation_covariance():
    rng = np.random.default_rng(14)
    family = [complex_normal((2, 3), rng) for _ in range(2)]
    us = random_unitary(2, rng)
    ul = random_unitary(3, rng)
    moved = [us @ a @ ul.conj().T for a in family]
    big = np.kron(us, ul.conj())
    before = hdm.ensemble_state(family, (2, 3))
    after = hdm.ensemble_state(moved, (2, 3))
    assert np.max(np.abs(after - big @ before @ big.conj().T)) < 1e-10


def test_ensemble_validation():
    rng = np.random.default_rng(15)
    with pytest.raises(InvalidStateError):
        hdm.Ensemble([(0.5, haar_state(2, rng))])  # weights sum to 0.5
    with pytest.raises(InvalidStateError):
        hdm.Ensemble([(1.0, 2.0 * haar_state(2, rng))])  # not unit


def test_tilde_examples():
    assert np.allclose(hdm.tilde(np.eye(2)), np.eye(2))
    a = np.zeros((2, 2))
    a[0, 0] = 1.0
    want = np.zeros((2, 2))
    want[1, 1] = 1.0
    assert np.allclose(hdm.tilde(a), want)
    with pytest.raises(ShapeError):
        hdm.tilde(np.ones((2, 3)))


def test_tilde_involution_on_qubits():
    rng = np.random.default_rng(16)
    for _ in range(10):
        a = complex_normal((2, 2), rng)
        assert np.max(np.abs(hdm.tilde(hdm.tilde(a)) - a)) < 1e-12


def test_tilde_double_application_beyond_qubits():
    # tilde(tilde(A)) = A + (s - 2) Tr(A) I in general
    rng = np.random.default_rng(17)
    a = complex_normal((3, 3), rng)
    want = a + np.trace(a) * np.eye(3)
    assert np.max(np.abs(hdm.tilde(hdm.tilde(a)) - want)) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_gram_related_hdms_are_connected(seed):
    rng = np.random.default_rng(100 + seed)
    rho = random_density(2, rng)
    ell = 3
    t_e = hdm.eigen_hdm(rho, ell)
    u = random_unitary(ell, rng)
    w = hdm.connecting_unitary(t_e, t_e @ u)
    assert linalg.op_norm(t_e @ w - t_e @ u) < 1e-8
