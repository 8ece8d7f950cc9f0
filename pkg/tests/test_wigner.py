"""Wigner function unit tests."""

import math

import numpy as np
import pytest

from heraldkit.gaussian import CircuitParams, make_state, rotation_unitary
from heraldkit.herald import HeraldedState, herald
from heraldkit.pattern import HeraldPattern
from heraldkit.wigner import fock_wigner, gate_pullback, wigner_eval, wigner_grid


def test_vacuum_peak():
    W = fock_wigner([1.0], np.array([0.0j]))
    assert W[0] == pytest.approx(2.0 / math.pi)


def test_single_photon_negative_at_origin():
    W = fock_wigner([0.0, 1.0], np.array([0.0j]))
    assert W[0] == pytest.approx(-2.0 / math.pi)


def test_coherent_displacement():
    # coherent |alpha>: Gaussian peak at alpha with height 2/pi
    al = 0.7 + 0.4j
    n = np.arange(12)
    c = np.exp(-abs(al) ** 2 / 2) * al ** n / np.sqrt(
        np.array([math.factorial(int(k)) for k in n], dtype=float))
    W = fock_wigner(c, np.array([al, 0.0j]))
    assert W[0] == pytest.approx(2.0 / math.pi, rel=1e-8)
    assert W[1] == pytest.approx(2.0 / math.pi * math.exp(-2 * abs(al) ** 2), rel=1e-6)


def test_normalization_by_quadrature():
    rng = np.random.default_rng(0)
    c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    c /= np.linalg.norm(c)
    xs = np.linspace(-6, 6, 161)
    hs = HeraldedState(zeta=0.0, beta=0.0, coeffs=c, probability=1.0)
    W = wigner_grid(hs, xs, xs)
    dx = xs[1] - xs[0]
    # d^2alpha = dx dp / 2
    assert np.sum(W) * dx * dx / 2 == pytest.approx(1.0, abs=1e-6)


def test_gate_pullback_identity():
    pts = np.array([0.3 + 0.2j, -1.0j])
    assert np.allclose(gate_pullback(pts, 0.0, 0.0), pts)


def test_gate_pullback_displacement():
    pts = np.array([0.5 + 0.5j])
    out = gate_pullback(pts, 0.0, 0.5 + 0.5j)
    assert np.allclose(out, [0.0])


def test_squeezed_vacuum_wigner_matches_gate_route():
    # S(r)|0> via the gate pullback equals the direct Gaussian expression
    r = 0.4
    hs = HeraldedState(zeta=r, beta=0.0, coeffs=np.array([1.0 + 0j]),
                       probability=1.0)
    xs = np.array([0.8])
    ps = np.array([0.5])
    W = wigner_grid(hs, xs, ps)[0, 0]
    x, p = 0.8, 0.5
    ref = (2.0 / math.pi) * math.exp(-x ** 2 * math.exp(-2 * r)
                                     - p ** 2 * math.exp(2 * r))
    assert W == pytest.approx(ref, rel=1e-8)


def test_heralded_cat_parity_symmetry():
    # even-cat-like heralded state: Wigner symmetric under alpha -> -alpha
    params = CircuitParams.build(squeeze=[1.3073, -0.1474],
                                 unitary=rotation_unitary(2, 0, 1, -0.9686))
    hs = herald(make_state(params), HeraldPattern((1,), (2,)))
    pts = np.array([0.6 + 0.2j, -0.6 - 0.2j, 1.1j, -1.1j])
    W = wigner_eval(hs, pts)
    assert W[0] == pytest.approx(W[1], rel=1e-9)
    assert W[2] == pytest.approx(W[3], rel=1e-9)
