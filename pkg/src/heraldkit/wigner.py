"""Wigner function of heralded states.

Normalization: integral of W over the complex plane (d^2 alpha = dx dp / 2
with alpha = (x + i p)/sqrt(2)) equals 1; vacuum gives W(0) = 2/pi.
"""

import math

import numpy as np
from scipy.special import eval_genlaguerre

from .herald import HeraldedState


def fock_wigner(coeffs, alphas) -> np.ndarray:
    """Wigner function of sum_n coeffs[n] |n> at complex phase-space points."""
    c = np.asarray(coeffs, dtype=complex)
    al = np.asarray(alphas, dtype=complex)
    x = 4.0 * np.abs(al) ** 2
    out = np.zeros(al.shape, dtype=complex)
    nmax = len(c)
    for m in range(nmax):
        for n in range(nmax):
            if c[m] == 0 or c[n] == 0:
                continue
            lo, hi = min(m, n), max(m, n)
            base = (2.0 / math.pi) * (-1.0) ** lo * math.sqrt(
                math.factorial(lo) / math.factorial(hi))
            poly = eval_genlaguerre(lo, hi - lo, x)
            mono = (2.0 * al.conj()) ** (m - n) if m >= n else (2.0 * al) ** (n - m)
            out += c[m] * np.conj(c[n]) * base * mono * poly
    out = out * np.exp(-2.0 * np.abs(al) ** 2)
    return out.real


def gate_pullback(alphas, zeta: complex, beta: complex) -> np.ndarray:
    """Phase-space points at which the bare Fock superposition must be
    evaluated so that the result is the Wigner function of
    D(beta) S(zeta) |bare> at ``alphas``."""
    al = np.asarray(alphas, dtype=complex) - beta
    ch, sh = np.cosh(abs(zeta)), np.sinh(abs(zeta))
    phase = np.exp(1j * np.angle(zeta)) if zeta != 0 else 1.0
    return ch * al - phase * sh * al.conj()


def wigner_eval(hs: HeraldedState, points) -> np.ndarray:
    """Wigner values of the heralded state at complex points alpha."""
    return fock_wigner(hs.coeffs, gate_pullback(points, hs.zeta, hs.beta))


def wigner_grid(hs: HeraldedState, xs, ps) -> np.ndarray:
    """Wigner values on an (x, p) grid, alpha = (x + i p)/sqrt(2).
    Returns an array of shape (len(xs), len(ps))."""
    X, P = np.meshgrid(np.asarray(xs), np.asarray(ps), indexing="ij")
    return wigner_eval(hs, (X + 1j * P) / math.sqrt(2.0))
