"""Closed-form heralding of a single unmeasured mode.

Pipeline: reduce the Gaussian state to (Rtilde, ytilde), permute the heralded
mode's two slots to the front, partition into heralded/detected blocks,
extract the Gaussian gate (S, d -> zeta, beta), then obtain the Fock
coefficients of the stripped state and the success probability from
Gaussian-moment derivatives.  When the unmeasured mode is decoupled from one
of the detectors (kappa-degenerate) the engine falls back to the Fock
amplitude route with an identical output contract.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .gaussian import GaussianState, relabel_modes, swap_matrix
from .moments import GaussianForm, DerivOrder, gaussian_derivative
from .pattern import HeraldPattern
from . import fock as _fock

KAPPA_TOL = 1e-10
COND_LIMIT = 1e12
B11_LIMIT = 1.0 - 1e-9


class ConditioningError(ValueError):
    """A required matrix inverse is too ill-conditioned to trust."""


class DegenerateKappaError(ValueError):
    """Some b_{1j} vanishes; the closed-form coefficient route is undefined."""


def _guarded_inv(mat, what):
    c = np.linalg.cond(mat)
    if not np.isfinite(c) or c > COND_LIMIT:
        raise ConditioningError(f"{what} has condition number {c:.3g} > {COND_LIMIT:.0e}")
    return np.linalg.inv(mat)


@dataclass
class ReducedForm:
    """(Rtilde, ytilde) of a state, plus heralded/detected blocks once
    partitioned.  The closed-form path handles one heralded mode, so the
    heralded block is 2 x 2."""

    num_modes: int
    Rt: np.ndarray
    yt: np.ndarray
    R: np.ndarray | None = None
    y: np.ndarray | None = None
    R_hh: np.ndarray | None = None
    R_hd: np.ndarray | None = None
    R_dh: np.ndarray | None = None
    R_dd: np.ndarray | None = None
    y_h: np.ndarray | None = None
    y_d: np.ndarray | None = None
    P0: float | None = None

    @property
    def b_block(self) -> np.ndarray:
        """Creation-creation block of Rtilde; equals B for pure states."""
        N = self.num_modes
        return self.Rt[:N, :N]


def reduced_form(state: GaussianState) -> ReducedForm:
    N = state.num_modes
    X = np.asarray(swap_matrix(N))
    eye = np.eye(2 * N)
    twoVI = 2 * state.cov + eye
    inv = _guarded_inv(twoVI, "2V + I")
    Rt = X @ (2 * state.cov - eye) @ inv
    yt = 2 * X @ inv @ state.disp
    P0 = 2.0 ** N / math.sqrt(abs(np.linalg.det(twoVI))) * math.exp(-0.5 * float((state.disp @ yt).real))
    return ReducedForm(N, Rt, yt, P0=P0)


def block_partition(rf: ReducedForm) -> ReducedForm:
    """Fill hh/hd/dh/dd blocks; assumes the heralded mode is mode 0.

    The permutation moves the heralded mode's annihilation slot (index N) to
    the second position, so the heralded block carries slots (a0^dag, a0) and
    the detected block keeps the ordering (creation..., annihilation...) that
    the derivative variables gamma_d = (beta*..., alpha...) use.
    """
    N = rf.num_modes
    perm = [0, N] + list(range(1, N)) + list(range(N + 1, 2 * N))
    R = rf.Rt[np.ix_(perm, perm)]
    y = rf.yt[perm]
    rf.R, rf.y = R, y
    rf.R_hh = R[:2, :2]
    rf.R_hd = R[:2, 2:]
    rf.R_dh = R[2:, :2]
    rf.R_dd = R[2:, 2:]
    rf.y_h = y[:2]
    rf.y_d = y[2:]
    return rf


X2 = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass
class GateParams:
    """Gaussian gate D(beta) S(zeta) of the heralded mode.

    S is the 2 x 2 complex symplectic of the output Wigner envelope and
    d = (beta*, beta).  In this package's squeeze convention
    S(z) = exp((z adag^2 - z* a^2)/2), the envelope parameter is b11 itself:
    zeta = artanh(|b11|) exp(i arg b11)."""

    S: np.ndarray
    d: np.ndarray
    zeta: complex
    beta: complex
    b11: complex


def gate_params(rf: ReducedForm) -> GateParams:
    if rf.R_hh is None:
        raise ValueError("blocks not filled; call block_partition first")
    b11 = complex(rf.R_hh[0, 0])
    if abs(b11) >= B11_LIMIT:
        raise ConditioningError(f"|b11| = {abs(b11):.12f} too close to 1 (squeezing divergence)")
    denom = math.sqrt(1.0 - abs(b11) ** 2)
    S = (np.eye(2) + X2 @ rf.R_hh) / denom
    d = _guarded_inv(np.eye(2) - X2 @ rf.R_hh, "I - X2 R_hh") @ (X2 @ rf.y_h)
    beta = complex(d[1])
    mag = 0.5 * math.log((1.0 + abs(b11)) / (1.0 - abs(b11)))
    zeta = mag * np.exp(1j * np.angle(b11)) if abs(b11) > 0 else 0.0 + 0.0j
    return GateParams(S=S, d=d, zeta=complex(zeta), beta=beta, b11=b11)


@dataclass
class CoreQuantities:
    """Matrices and vectors feeding the coefficient and probability formulas."""

    A: np.ndarray
    C: np.ndarray
    Y: np.ndarray
    A_p: np.ndarray
    z_p: np.ndarray
    P0: float
    kappa: np.ndarray
    mu: np.ndarray
    F: np.ndarray
    C_rn: np.ndarray
    kappa_degenerate: bool
    det_pref: float
    exp_pref: float


def core_quantities(rf: ReducedForm, gp: GateParams) -> CoreQuantities:
    N = rf.num_modes
    K = N - 1
    b11 = gp.b11
    one = 1.0 - abs(b11) ** 2
    inv_minus = _guarded_inv(np.eye(2) - X2 @ rf.R_hh, "I - X2 R_hh")
    inv_plus = _guarded_inv(np.eye(2) + X2 @ rf.R_hh, "I + X2 R_hh")
    A = rf.R_dd - rf.R_dh @ inv_plus @ X2 @ rf.R_hd
    C = A + rf.R_dh @ X2 @ rf.R_hd / one
    Y = rf.y_d + rf.R_dh @ inv_minus @ X2 @ rf.y_h
    A_p = rf.R_dd + rf.R_dh @ inv_minus @ X2 @ rf.R_hd
    z_p = rf.y_d + rf.R_dh @ gp.d
    kappa = rf.R[0, 2:2 + K] / math.sqrt(one)
    degenerate = bool(np.any(np.abs(kappa) < KAPPA_TOL))
    if degenerate:
        mu = np.full(K, np.nan, dtype=complex)
        F = np.full((K, K), np.nan, dtype=complex)
        C_rn = np.full((2 * K, 2 * K), np.nan, dtype=complex)
    else:
        # Y's annihilation (omega) half carries mu; the creation half is its
        # conjugate for pure states
        mu = Y[K:] / kappa.conj()
        F = np.conj(b11) + rf.R[2:2 + K, 2:2 + K] / np.outer(kappa, kappa)
        C_rn = np.zeros((2 * K, 2 * K), dtype=complex)
        C_rn[:K, :K] = F
        C_rn[K:, K:] = F.conj()
    det_pref = float(np.real(np.linalg.det(np.eye(2) - X2 @ rf.R_hh))) ** -0.5
    exp_pref = math.exp(0.5 * float((rf.y_h @ gp.d).real))
    return CoreQuantities(A=A, C=C, Y=Y, A_p=A_p, z_p=z_p, P0=rf.P0,
                          kappa=kappa, mu=mu, F=F, C_rn=C_rn,
                          kappa_degenerate=degenerate,
                          det_pref=det_pref, exp_pref=exp_pref)


def coefficient_ratios(counts, cq: CoreQuantities) -> np.ndarray:
    """Ratios c_n / c_{n_T} for n = 0..n_T (last entry 1 by construction)."""
    if cq.kappa_degenerate:
        raise DegenerateKappaError("some |kappa_j| < tolerance; use the Fock route")
    counts = tuple(int(c) for c in counts)
    nT = sum(counts)
    if nT < 1:
        return np.array([1.0 + 0.0j])
    # conjugate assignment (F* on the sigma* block, mu on its linear term):
    # the one of the two self-consistent phase conventions that matches this
    # package's squeezer, fixed against the Fock-amplitude route
    form = GaussianForm(cq.C_rn.conj(), np.concatenate([cq.mu, cq.mu.conj()]))
    out = np.zeros(nT + 1, dtype=complex)
    for n in range(nT + 1):
        order = DerivOrder(counts, power_x=n, power_y=nT)
        val = gaussian_derivative(form, order)
        out[n] = val / math.sqrt(math.factorial(n) * math.factorial(nT) ** 3)
    if out[nT] == 0:
        raise DegenerateKappaError("c_{n_T} vanished; ratio normalization undefined")
    return out / out[nT]


def coefficient_products(counts, cq: CoreQuantities) -> np.ndarray:
    """Hermitian (n_T+1)^2 table proportional to c_m c_n^*."""
    if cq.kappa_degenerate:
        raise DegenerateKappaError("some |kappa_j| < tolerance; use the Fock route")
    counts = tuple(int(c) for c in counts)
    nT = sum(counts)
    form = GaussianForm(cq.C, cq.Y)
    table = np.zeros((nT + 1, nT + 1), dtype=complex)
    wx = cq.kappa.conj()
    wy = cq.kappa
    for m in range(nT + 1):
        for n in range(m, nT + 1):
            order = DerivOrder(counts, power_x=m, power_y=n,
                               weights_x=tuple(wx), weights_y=tuple(wy))
            # the derivative evaluates to sqrt(m! n!) c_m^* c_n up to a
            # common positive prefactor; rescale and store the conjugate so
            # the table reads c_m c_n^*
            val = gaussian_derivative(form, order)
            val /= math.sqrt(math.factorial(m) * math.factorial(n))
            table[n, m] = val
            table[m, n] = np.conj(val)
    return table


@dataclass
class HeraldedState:
    """Gate decomposition + normalized Fock coefficients + success probability.

    The physical state is D(beta) S(zeta) sum_n coeffs[n] |n>.  Global phase:
    first nonzero coefficient real nonnegative.  ``path`` records whether the
    closed-form or the Fock fallback route produced it."""

    zeta: complex
    beta: complex
    coeffs: np.ndarray
    probability: float
    path: str = "closed"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        norm = np.linalg.norm(c)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError("coefficients must be normalized")
        self.coeffs = c

    @property
    def n_max(self) -> int:
        nz = np.nonzero(np.abs(self.coeffs) > 1e-9)[0]
        return int(nz[-1]) if nz.size else 0

    def to_json(self) -> dict:
        return {
            "zeta": {"re": float(self.zeta.real), "im": float(self.zeta.imag)},
            "beta": {"re": float(self.beta.real), "im": float(self.beta.imag)},
            "coeffs": [{"re": float(c.real), "im": float(c.imag)} for c in self.coeffs],
            "probability": float(self.probability),
            "n_max": self.n_max,
            "path": self.path,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "HeraldedState":
        return cls(
            zeta=complex(doc["zeta"]["re"], doc["zeta"]["im"]),
            beta=complex(doc["beta"]["re"], doc["beta"]["im"]),
            coeffs=np.array([complex(c["re"], c["im"]) for c in doc["coeffs"]]),
            probability=float(doc["probability"]),
            path=doc.get("path", "closed"),
        )


def fix_global_phase(coeffs: np.ndarray) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(np.abs(c) > 1e-12)[0]
    if nz.size:
        ph = c[nz[0]] / abs(c[nz[0]])
        c = c / ph
    return c


def herald_probability(state: GaussianState, pattern: HeraldPattern) -> float:
    """Success probability P(nbar) of the detection pattern (one unmeasured
    mode)."""
    st, counts = _front_relabeled(state, pattern)
    rf = block_partition(reduced_form(st))
    gp = gate_params(rf)
    cq = core_quantities(rf, gp)
    return _probability(counts, cq)


def _probability(counts, cq: CoreQuantities) -> float:
    counts = tuple(int(c) for c in counts)
    form = GaussianForm(cq.A_p, cq.z_p)
    val = gaussian_derivative(form, DerivOrder(counts))
    nfact = 1.0
    for c in counts:
        nfact *= math.factorial(c)
    p = cq.P0 / nfact * cq.det_pref * cq.exp_pref * val
    if abs(p.imag) > 1e-8 * max(1.0, abs(p.real)):
        raise ConditioningError(f"probability came out non-real: {p}")
    return float(p.real)


def detection_probability(state: GaussianState, pattern: HeraldPattern) -> float:
    """P(nbar) for any detected subset (any number of unmeasured modes).

    Photon statistics of a mode subset depend only on the reduced Gaussian
    state, so the probability is the standard derivative formula applied to
    the reduced (generally mixed) covariance block."""
    N = state.num_modes
    pattern.validate(N)
    det = list(pattern.detected_modes)
    idx = det + [N + d for d in det]
    V = state.cov[np.ix_(idx, idx)]
    Q = state.disp[idx]
    K = len(det)
    X = swap_matrix(K)
    eye = np.eye(2 * K)
    twoVI = 2 * V + eye
    inv = _guarded_inv(twoVI, "reduced 2V + I")
    Rt = X @ (2 * V - eye) @ inv
    yt = 2 * X @ inv @ Q
    P0 = 2.0 ** K / math.sqrt(abs(np.linalg.det(twoVI))) * math.exp(-0.5 * float((Q @ yt).real))
    val = gaussian_derivative(GaussianForm(Rt, yt), DerivOrder(pattern.counts))
    nfact = 1.0
    for c in pattern.counts:
        nfact *= math.factorial(c)
    p = P0 / nfact * val
    if abs(p.imag) > 1e-8 * max(1.0, abs(p.real)):
        raise ConditioningError(f"probability came out non-real: {p}")
    return float(p.real)


def _front_relabeled(state: GaussianState, pattern: HeraldPattern):
    """Relabel modes so the single unmeasured mode is first and detectors
    follow in pattern order."""
    N = state.num_modes
    pattern.validate(N)
    out = pattern.output_modes(N)
    if len(out) != 1:
        raise ValueError("closed-form herald requires exactly one unmeasured mode")
    perm = [out[0]] + list(pattern.detected_modes)
    return relabel_modes(state, perm), pattern.counts


def herald(state: GaussianState, pattern: HeraldPattern) -> HeraldedState:
    """Heralded single-mode state for the detection pattern.

    Closed-form route when all kappa_j are nonzero; otherwise falls back to
    Fock amplitude tabulation with the same output contract."""
    st, counts = _front_relabeled(state, pattern)
    rf = block_partition(reduced_form(st))
    gp = gate_params(rf)
    cq = core_quantities(rf, gp)
    nT = sum(counts)
    if cq.kappa_degenerate:
        return _herald_via_fock(st, counts, gp)
    ratios = coefficient_ratios(counts, cq)
    coeffs = fix_global_phase(ratios / np.linalg.norm(ratios))
    prob = _probability(counts, cq)
    return HeraldedState(zeta=gp.zeta, beta=gp.beta, coeffs=coeffs,
                         probability=prob, path="closed")


def _herald_via_fock(st: GaussianState, counts, gp: GateParams) -> HeraldedState:
    nT = sum(counts)
    front = HeraldPattern(tuple(range(1, st.num_modes)), tuple(counts))
    # adaptive cutoff: the dressed state can spread well past n_T even though
    # the bare coefficients terminate there
    fv, prob = _fock.heralded_fock_from_state(st, front)
    stripped = _fock.gate_strip(fv, gp.zeta, gp.beta)
    coeffs = stripped.amps[:nT + 1]
    # support beyond n_T is a numerical artifact of the strip cutoff
    coeffs = fix_global_phase(coeffs / np.linalg.norm(coeffs))
    return HeraldedState(zeta=gp.zeta, beta=gp.beta, coeffs=coeffs,
                         probability=prob, path="fock")
