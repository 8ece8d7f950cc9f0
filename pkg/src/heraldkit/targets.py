"""Target non-Gaussian states and gate-form approximation.

Single-mode targets are rendered as normalized Fock coefficient vectors;
multimode targets (W, NOON) as FockVector tables.  Quadrature wavefunctions
use x = (a + a^dag)/sqrt(2), so vacuum is pi^{-1/4} exp(-q^2/2).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from .fock import FockVector, squeeze_matrix, displace_matrix

NORM_TOL = 1e-10


@dataclass(frozen=True)
class TargetSpec:
    """Named target state with parameters.

    kinds: cat(alpha, parity), gkp(delta), cubic(a), w(M), noon(N),
    custom(coeffs).  W and NOON are multimode; the rest single-mode."""

    kind: str
    params: dict = field(default_factory=dict)

    KINDS = ("cat", "gkp", "cubic", "w", "noon", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown target kind {self.kind!r}")
        object.__setattr__(self, "params", dict(self.params))

    @property
    def is_multimode(self) -> bool:
        return self.kind in ("w", "noon")

    @property
    def num_modes(self) -> int:
        if self.kind == "w":
            return int(self.params["M"])
        if self.kind == "noon":
            return 2
        return 1

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params}

    @classmethod
    def from_json(cls, doc) -> "TargetSpec":
        return cls(doc["kind"], doc.get("params", {}))


def cat_coefficients(alpha: float, parity: str = "even", cutoff: int = 40) -> np.ndarray:
    """|alpha> + |-alpha> (even) or - (odd), normalized, real alpha."""
    n = np.arange(cutoff)
    with np.errstate(divide="ignore"):
        logs = n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1) if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    c = np.exp(logs).astype(complex)
    if alpha < 0:
        c *= (-1.0) ** n
    if parity == "even":
        c[1::2] = 0
    elif parity == "odd":
        c[0::2] = 0
    else:
        raise ValueError("parity must be 'even' or 'odd'")
    norm = np.linalg.norm(c)
    if norm == 0:
        raise ValueError("odd cat with alpha = 0 is the zero vector")
    return c / norm


def _hermite_basis(q: np.ndarray, nmax: int) -> np.ndarray:
    """Oscillator eigenfunctions phi_n(q) for n = 0..nmax-1, shape (nmax, len(q))."""
    out = np.zeros((nmax, q.size))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * q ** 2)
    if nmax > 1:
        out[1] = math.sqrt(2.0) * q * out[0]
    for n in range(1, nmax - 1):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * q * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def gkp_wavefunction(q: np.ndarray, delta: float, s_range: int = 10) -> np.ndarray:
    """Finite-energy GKP |0> wavefunction (unnormalized comb of Gaussians)."""
    psi = np.zeros_like(q, dtype=float)
    for s in range(-s_range, s_range + 1):
        psi += math.exp(-2.0 * math.pi * delta ** 2 * s ** 2) * np.exp(
            -(q - 2.0 * math.sqrt(math.pi) * s) ** 2 / (2.0 * delta ** 2))
    return psi


def gkp_coefficients(delta: float, cutoff: int = 30, tail_tol: float = 1e-3) -> np.ndarray:
    """Fock coefficients by quadrature projection.

    The s-sum is truncated where its terms drop below 1e-12 (double-
    exponential decay) and the projection is checked against a 40-level
    guard band; a truncation tail above ``tail_tol`` rejects the cutoff."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    s_range = max(10, int(math.ceil(math.sqrt(12.0 * math.log(10.0) / (2.0 * math.pi * delta ** 2)))))
    # grid step adaptive to the peak width delta
    qmax = 12.0
    step = min(delta / 8.0, 0.05)
    q = np.arange(-qmax, qmax + step, step)
    psi = gkp_wavefunction(q, delta, s_range)
    basis = _hermite_basis(q, cutoff + 40)
    coeff = basis @ psi * step
    norm2 = float(np.sum(coeff ** 2))
    tail = float(np.sum(coeff[cutoff:] ** 2)) / norm2
    if tail > tail_tol:
        raise ValueError(f"GKP cutoff {cutoff} too small: tail {tail:.2e}")
    c = coeff[:cutoff].astype(complex)
    return c / np.linalg.norm(c)


def cubic_coefficients(a: float, cutoff: int = 8) -> np.ndarray:
    """Weak cubic phase state (1, i a sqrt(3/2), 0, i a)/sqrt(1 + 5 a^2/2)."""
    c = np.zeros(max(cutoff, 4), dtype=complex)
    c[0] = 1.0
    c[1] = 1j * a * math.sqrt(1.5)
    c[3] = 1j * a
    return c / np.linalg.norm(c)


def w_state(M: int) -> FockVector:
    """Equal superposition of one photon in one of M modes."""
    if M < 2:
        raise ValueError("W state needs at least 2 modes")
    amps = np.zeros((2,) * M, dtype=complex)
    for k in range(M):
        idx = tuple(1 if i == k else 0 for i in range(M))
        amps[idx] = 1.0 / math.sqrt(M)
    return FockVector(M, (2,) * M, amps)


def noon_state(N: int) -> FockVector:
    """(|N,0> + |0,N>)/sqrt(2)."""
    if N < 1:
        raise ValueError("NOON N must be positive")
    amps = np.zeros((N + 1, N + 1), dtype=complex)
    amps[N, 0] = amps[0, N] = 1.0 / math.sqrt(2.0)
    return FockVector(2, (N + 1, N + 1), amps)


def render_target(spec: TargetSpec, cutoff: int = 30):
    """Normalized Fock rendering: an array for single-mode targets, a
    FockVector for multimode ones."""
    k, p = spec.kind, spec.params
    if k == "cat":
        return cat_coefficients(float(p["alpha"]), p.get("parity", "even"), cutoff)
    if k == "gkp":
        return gkp_coefficients(float(p["delta"]), cutoff)
    if k == "cubic":
        return cubic_coefficients(float(p["a"]), cutoff)
    if k == "w":
        return w_state(int(p["M"]))
    if k == "noon":
        return noon_state(int(p["N"]))
    if k == "custom":
        c = np.array([_as_complex(e) for e in p["coeffs"]])
        return c / np.linalg.norm(c)
    raise ValueError(k)


def _as_complex(entry) -> complex:
    """Coefficient entry as a scalar, an (re, im) pair, or a {re, im} dict."""
    if isinstance(entry, dict):
        return complex(entry.get("re", 0.0), entry.get("im", 0.0))
    if isinstance(entry, (list, tuple)):
        return complex(entry[0], entry[1] if len(entry) > 1 else 0.0)
    return complex(entry)


def fidelity(a, b) -> float:
    """|<a|b>|^2 on the common cutoff; inputs normalized."""
    if isinstance(a, FockVector) or isinstance(b, FockVector):
        return float(abs(a.overlap(b)) ** 2)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = min(a.size, b.size)
    return float(abs(np.vdot(a[:n], b[:n])) ** 2)


def gate_form_coefficients(target: np.ndarray, zeta: complex, beta: complex,
                           n_max: int) -> tuple[np.ndarray, float]:
    """Best c_0..c_{n_max} for fixed gate: projection of the gate-stripped
    target onto the first n_max+1 Fock states.  Returns (coeffs, fidelity)."""
    cut = target.size + 24
    v = np.zeros(cut, dtype=complex)
    v[:target.size] = target
    stripped = squeeze_matrix(zeta, cut).conj().T @ (displace_matrix(beta, cut).conj().T @ v)
    c = stripped[:n_max + 1]
    w = np.linalg.norm(c)
    if w == 0:
        return np.zeros(n_max + 1, dtype=complex), 0.0
    return c / w, float(w ** 2)


def approximate_gate_form(target: np.ndarray, n_max: int, restarts: int = 24,
                          seed: int = 7, allow_displacement: bool = True):
    """Fit D(beta) S(zeta) sum_{n<=n_max} c_n |n> to a single-mode target.

    Multi-start local maximization over (zeta, beta); the coefficients are a
    closed-form projection for each gate.  Returns
    (zeta, beta, coeffs, fidelity); the fidelity is a lower bound on the
    global optimum."""
    target = np.asarray(target, dtype=complex)
    rng = np.random.default_rng(seed)

    def loss(x):
        zeta = complex(x[0], x[1])
        beta = complex(x[2], x[3]) if allow_displacement else 0.0
        _, fid = gate_form_coefficients(target, zeta, beta, n_max)
        return -fid

    best = None
    starts = [np.zeros(4)]
    for _ in range(restarts - 1):
        starts.append(np.concatenate([rng.uniform(-1.0, 1.0, 2), rng.uniform(-1.5, 1.5, 2)]))
    for x0 in starts:
        res = minimize(loss, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
        if best is None or res.fun < best.fun:
            best = res
    zeta = complex(best.x[0], best.x[1])
    beta = complex(best.x[2], best.x[3]) if allow_displacement else 0.0
    coeffs, fid = gate_form_coefficients(target, zeta, beta, n_max)
    # canonical orientation: positive squeeze magnitude by folding sign into phase
    return zeta, beta, coeffs, fid
