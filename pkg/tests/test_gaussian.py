"""Circuit parameter and Gaussian state unit tests."""

import math

import numpy as np
import pytest

from heraldkit.gaussian import (CircuitError, CircuitParams, b_matrix,
                                make_state, mesh_unitary, purity,
                                relabel_modes, rotation_unitary, swap_matrix,
                                vacuum_overlap_sq)


def random_circuit(rng, N, displace=False):
    from scipy.stats import unitary_group
    if N == 1:
        U = np.array([[np.exp(1j * rng.uniform(-np.pi, np.pi))]])
    else:
        U = unitary_group.rvs(N, random_state=rng)
    al = (rng.standard_normal(N) + 1j * rng.standard_normal(N)) * 0.5 if displace else None
    return CircuitParams.build(squeeze=rng.uniform(-1.2, 1.2, N),
                               phase=rng.uniform(-np.pi, np.pi, N),
                               displace=al, unitary=U)


def test_build_folds_negative_squeeze():
    p = CircuitParams.build(squeeze=[-0.5], phase=[0.1])
    assert p.squeeze_mag[0] == pytest.approx(0.5)
    assert p.squeeze_phase[0] == pytest.approx(0.1 + math.pi)


def test_nonunitary_rejected():
    with pytest.raises(CircuitError):
        CircuitParams.build(squeeze=[0.1, 0.2], unitary=np.ones((2, 2)))


def test_rotation_unitary_composition():
    U = rotation_unitary(2, 0, 1, 0.3) @ rotation_unitary(2, 0, 1, 0.4)
    assert np.allclose(U, rotation_unitary(2, 0, 1, 0.7))


def test_mesh_matches_explicit_unitary():
    mesh = [{"i": 0, "j": 1, "theta": 0.4, "phi": 0.2},
            {"i": 1, "j": 2, "theta": -0.7, "phi": 0.0},
            {"i": 2, "j": 2, "theta": 0.0, "phi": 1.1}]
    U = mesh_unitary(3, mesh)
    assert np.allclose(U.conj().T @ U, np.eye(3), atol=1e-12)
    p1 = CircuitParams.build(squeeze=[0.3, 0.2, 0.1], mesh=mesh)
    p2 = CircuitParams.build(squeeze=[0.3, 0.2, 0.1], unitary=U)
    s1, s2 = make_state(p1), make_state(p2)
    assert np.allclose(s1.cov, s2.cov, atol=1e-12)


def test_json_roundtrip():
    rng = np.random.default_rng(0)
    p = random_circuit(rng, 3, displace=True)
    q = CircuitParams.from_json(p.to_json())
    assert np.allclose(p.unitary, q.unitary)
    assert np.allclose(p.squeeze_mag, q.squeeze_mag)
    assert np.allclose(p.displacements, q.displacements)


def test_json_roundtrip_mesh():
    mesh = [{"i": 0, "j": 1, "theta": -0.9686}]
    p = CircuitParams.build(squeeze=[1.3, -0.15], mesh=mesh)
    q = CircuitParams.from_json(p.to_json())
    assert np.allclose(p.unitary, q.unitary)


def test_states_are_pure():
    rng = np.random.default_rng(1)
    for N in (1, 2, 4):
        st = make_state(random_circuit(rng, N, displace=True))
        assert st.is_pure
        assert purity(st) == pytest.approx(1.0, abs=1e-8)


def test_vacuum_state():
    st = make_state(CircuitParams.build(squeeze=[0.0, 0.0]))
    assert np.allclose(st.cov, 0.5 * np.eye(4))
    assert vacuum_overlap_sq(st) == pytest.approx(1.0)


def test_vacuum_overlap_single_mode_squeezed():
    # |<0|S(r)|0>|^2 = 1/cosh r
    r = 0.8
    st = make_state(CircuitParams.build(squeeze=[r]))
    assert vacuum_overlap_sq(st) == pytest.approx(1.0 / math.cosh(r), rel=1e-10)


def test_b_matrix_roundtrip():
    rng = np.random.default_rng(2)
    p = random_circuit(rng, 3)
    B = b_matrix(p).entries
    t = np.exp(1j * p.squeeze_phase) * np.tanh(p.squeeze_mag)
    ref = p.unitary @ np.diag(t) @ p.unitary.T
    assert np.allclose(B, ref)
    sv = np.linalg.svd(B, compute_uv=False)
    assert np.allclose(np.sort(sv), np.sort(np.abs(t)))


def test_relabel_roundtrip():
    rng = np.random.default_rng(3)
    st = make_state(random_circuit(rng, 4, displace=True))
    perm = [2, 0, 3, 1]
    st2 = relabel_modes(st, perm)
    inv = np.argsort(perm)
    st3 = relabel_modes(st2, inv)
    assert np.allclose(st.cov, st3.cov)
    assert np.allclose(st.disp, st3.disp)


def test_permuted_params_matches_relabeled_state():
    rng = np.random.default_rng(4)
    p = random_circuit(rng, 3, displace=True)
    perm = [1, 2, 0]
    s1 = make_state(p.permuted(perm))
    s2 = relabel_modes(make_state(p), perm)
    assert np.allclose(s1.cov, s2.cov, atol=1e-12)
    assert np.allclose(s1.disp, s2.disp, atol=1e-12)


def test_swap_matrix_involution():
    X = swap_matrix(3)
    assert np.allclose(X @ X, np.eye(6))


def test_r_max_enforced():
    with pytest.raises(CircuitError):
        CircuitParams.build(squeeze=[3.0])
