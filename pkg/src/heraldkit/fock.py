"""Fock-basis amplitudes of pure Gaussian circuit states.

Independent route to heralded states: a pure N-mode Gaussian state can be
written |psi> = c0 exp(gamma^T a^dag + 1/2 a^dag^T B a^dag)|0>, so any Fock
amplitude is a loop hafnian of the pattern-expanded B with gamma on the
diagonal.  This is the general path for multimode outputs and the fallback
when the closed-form herald route is kappa-degenerate.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .gaussian import CircuitParams, GaussianState, make_state, b_matrix, swap_matrix, vacuum_overlap_sq
from .moments import multiset_loop_hafnian, DerivativeTooLargeError
from .pattern import HeraldPattern

# cap on the multiplicity-DP state space of one amplitude, prod_i (n_i + 1)
FOCK_SIZE_CAP = 500_000
TAIL_WARN = 1e-4


@dataclass
class FockVector:
    """Dense complex amplitude table of an M-mode state below a cutoff.

    ``amps[n1, ..., nM]`` is the amplitude of |n1 ... nM>.  ``tail_bound``
    reports 1 - (norm captured before normalization) for truncations of
    normalized states.
    """

    num_modes: int
    cutoff: tuple
    amps: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        self.cutoff = tuple(int(c) for c in self.cutoff)
        if self.amps.shape != self.cutoff:
            raise ValueError("amplitude table shape must equal the cutoff")

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def normalized(self) -> "FockVector":
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize a zero vector")
        return FockVector(self.num_modes, self.cutoff, self.amps / n, self.tail_bound)

    def overlap(self, other: "FockVector") -> complex:
        """<self|other> on the common cutoff."""
        cut = tuple(min(a, b) for a, b in zip(self.cutoff, other.cutoff))
        sl = tuple(slice(0, c) for c in cut)
        return complex(np.sum(self.amps[sl].conj() * other.amps[sl]))

    def to_json(self) -> dict:
        entries = []
        for idx in np.ndindex(*self.cutoff):
            a = self.amps[idx]
            if a != 0:
                entries.append({"idx": list(idx), "re": float(a.real), "im": float(a.imag)})
        return {"modes": self.num_modes, "cutoff": list(self.cutoff), "amps": entries}

    @classmethod
    def from_json(cls, doc: dict) -> "FockVector":
        cut = tuple(doc["cutoff"])
        amps = np.zeros(cut, dtype=complex)
        for e in doc["amps"]:
            amps[tuple(e["idx"])] = complex(e["re"], e.get("im", 0.0))
        return cls(int(doc["modes"]), cut, amps, float(doc.get("tail_bound", 0.0)))


def _pure_expansion(state: GaussianState):
    """(B, gamma, c0) of |psi> = c0 exp(gamma a^dag + 1/2 a^dag B a^dag)|0>."""
    N = state.num_modes
    V, Q = state.cov, state.disp
    X = swap_matrix(N)
    eye = np.eye(2 * N)
    Rt = X @ (2 * V - eye) @ np.linalg.inv(2 * V + eye)
    B = Rt[:N, :N]
    ab = state.alpha
    gamma = ab - B @ ab.conj()
    c0 = math.sqrt(vacuum_overlap_sq(state))  # global phase fixed: c0 real >= 0
    return B, gamma, c0


def _amplitude_from_expansion(B, gamma, c0, pattern, cap=FOCK_SIZE_CAP):
    n = np.asarray(pattern, dtype=int)
    if np.any(n < 0):
        raise ValueError("photon numbers must be nonnegative")
    space = int(np.prod(n + 1))
    if space > cap:
        raise DerivativeTooLargeError(f"pattern state space {space} exceeds cap {cap}")
    haf = multiset_loop_hafnian(B, gamma, tuple(int(k) for k in n))
    fact = 1.0
    for k in n:
        fact *= math.factorial(int(k))
    return complex(c0 * haf / math.sqrt(fact))


def fock_amplitude(params: CircuitParams, pattern) -> complex:
    """<n1 ... nN | psi> for the circuit's pure state."""
    state = make_state(params)
    B, gamma, c0 = _pure_expansion(state)
    return _amplitude_from_expansion(B, gamma, c0, pattern)


def heralded_fock(params: CircuitParams, pattern: HeraldPattern, cutoff=None):
    """Herald by brute-force amplitude tabulation.

    Returns (normalized FockVector over the unmeasured modes, probability).
    The probability is the squared norm of the unnormalized amplitude table;
    ``tail_bound`` on the result reports the mass that a larger cutoff could
    still add (estimated from the captured distribution decay).
    """
    state = make_state(params)
    return heralded_fock_from_state(state, pattern, cutoff)


def heralded_fock_from_state(state: GaussianState, pattern: HeraldPattern, cutoff=None):
    N = state.num_modes
    pattern.validate(N)
    B, gamma, c0 = _pure_expansion(state)
    out_modes = pattern.output_modes(N)
    M = len(out_modes)
    def tabulate(cuts):
        amps = np.zeros(cuts, dtype=complex)
        full = np.zeros(N, dtype=int)
        for d, c in zip(pattern.detected_modes, pattern.counts):
            full[d] = c
        for idx in product(*(range(c) for c in cuts)):
            for m, k in zip(out_modes, idx):
                full[m] = k
            amps[idx] = _amplitude_from_expansion(B, gamma, c0, full)
        return amps, float(np.sum(np.abs(amps) ** 2))

    if cutoff is None:
        # mean-photon-adaptive rule: n_T + 8 suffices after the gate strip,
        # but beta/zeta spread support before stripping
        cuts = []
        for m in out_modes:
            nbar = float(state.cov[m, m].real) - 0.5 + abs(state.alpha[m]) ** 2
            # photon distribution tails decay no slower than
            # (nbar/(nbar+1))^n; cut where that bound reaches 1e-12
            if nbar > 1e-6:
                c_tail = int(np.ceil(-12 * np.log(10) / np.log(nbar / (nbar + 1.0))))
            else:
                c_tail = 0
            cuts.append(max(pattern.n_total + 9, c_tail))
        cuts = tuple(cuts)
        # conditioning can push mass to higher photon numbers than the
        # unconditioned marginals suggest; grow until the edge shell carries
        # a negligible fraction of the heralded mass
        while True:
            amps, prob = tabulate(cuts)
            if prob == 0 or _tail_estimate(amps, prob) < 1e-13:
                break
            grown = tuple(min(c + 10, 60) for c in cuts)
            if grown == cuts:
                break
            cuts = grown
    else:
        cuts = (cutoff,) * M if np.isscalar(cutoff) else tuple(cutoff)
        amps, prob = tabulate(cuts)
    if prob == 0:
        raise ValueError("pattern has zero probability at this cutoff")
    fv = FockVector(M, cuts, amps / math.sqrt(prob))
    fv.tail_bound = _tail_estimate(amps, prob)
    return fv, prob


def _tail_estimate(amps, prob):
    """Crude truncation-tail bound: weight on the outermost two shells
    relative to the captured norm (two shells so parity-alternating supports
    cannot hide behind a single zero layer)."""
    mask = np.zeros(amps.shape, dtype=bool)
    for ax, c in enumerate(amps.shape):
        sl = [slice(None)] * amps.ndim
        sl[ax] = slice(max(c - 2, 0), c)
        mask[tuple(sl)] = True
    edge = float(np.sum(np.abs(amps[mask]) ** 2))
    return edge / prob


def squeeze_matrix(zeta: complex, cutoff: int) -> np.ndarray:
    """Fock matrix of S(z) = exp((z adag^2 - z* a^2)/2) to cutoff.

    Built with a guard band and truncated, so columns for indices well below
    the cutoff are accurate."""
    pad = cutoff + 20
    a = np.diag(np.sqrt(np.arange(1, pad)), 1)
    ad = a.T.conj()
    gen = 0.5 * (zeta * ad @ ad - np.conj(zeta) * a @ a)
    from scipy.linalg import expm
    return expm(gen)[:cutoff, :cutoff]


def displace_matrix(beta: complex, cutoff: int) -> np.ndarray:
    """Fock matrix of D(b) = exp(b adag - b* a) to cutoff."""
    pad = cutoff + 20
    a = np.diag(np.sqrt(np.arange(1, pad)), 1)
    ad = a.T.conj()
    from scipy.linalg import expm
    return expm(beta * ad - np.conj(beta) * a)[:cutoff, :cutoff]


def gate_strip(fv: FockVector, zeta: complex, beta: complex) -> FockVector:
    """Coefficients of S(zeta)^dag D(beta)^dag |fv> for a single-mode vector."""
    if fv.num_modes != 1:
        raise ValueError("gate_strip acts on single-mode vectors")
    cut = fv.cutoff[0]
    work = cut + 16
    vec = np.zeros(work, dtype=complex)
    vec[:cut] = fv.amps
    Sd = squeeze_matrix(zeta, work).conj().T
    Dd = displace_matrix(beta, work).conj().T
    out = Sd @ (Dd @ vec)
    tail = float(np.sum(np.abs(out[cut:]) ** 2))
    return FockVector(1, (cut,), out[:cut], tail_bound=tail)
