"""Multimode pure Gaussian states in the coherent (a-dagger, a) basis.

Operator ordering is fixed throughout the package as
(a_1^dag, ..., a_N^dag, a_1, ..., a_N).  The covariance matrix is
V_jk = 1/2 <{xi_j, xi_k^dag}> - <xi_j><xi_k^dag> and the displacement vector
is Q = <xi>, so vacuum has V = I/2, Q = 0.  No hbar appears anywhere.

Conventions (documented once, asserted everywhere):
  * the single-mode squeezer is S(z) = exp((z a^dag^2 - z* a^2)/2); its
    squeezed vacuum satisfies <a a> = exp(i arg z) cosh|z| sinh|z| and
    S(r)|0> ~ exp(tanh(r)/2 a^dag^2)|0> for real r >= 0,
  * each input mode carries D(alpha) S(r e^{i phi}) |0>, squeezing phases are
    absorbed into the interferometer when forming the B matrix,
  * the two-mode rotation is exp(theta (a_i a_j^dag - a_i^dag a_j)), acting on
    annihilation operators as a_i -> a_i cos(theta) - a_j sin(theta).
"""

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10
PURITY_TOL = 1e-8
DEFAULT_R_MAX = 2.3  # about 20 dB


class CircuitError(ValueError):
    """Invalid circuit parameters."""


class StateError(ValueError):
    """Gaussian state violates a structural invariant."""


def swap_matrix(N: int) -> np.ndarray:
    """X_{2N} = X_2 tensor I_N: swaps the creation and annihilation halves."""
    X = np.zeros((2 * N, 2 * N))
    X[:N, N:] = np.eye(N)
    X[N:, :N] = np.eye(N)
    return X


def rotation_unitary(N: int, i: int, j: int, theta: float) -> np.ndarray:
    """Two-mode rotation exp(theta (a_i a_j^dag - a_i^dag a_j)) as an N x N
    mode unitary (a_i -> a_i cos - a_j sin, a_j -> a_j cos + a_i sin)."""
    U = np.eye(N, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    U[i, i] = c
    U[j, j] = c
    U[i, j] = -s
    U[j, i] = s
    return U


def phase_unitary(N: int, i: int, phi: float) -> np.ndarray:
    U = np.eye(N, dtype=complex)
    U[i, i] = np.exp(1j * phi)
    return U


def mesh_unitary(N: int, mesh) -> np.ndarray:
    """Compose a list of mesh elements into a mode unitary.

    Each element is a dict {"i", "j", "theta", "phi"}: a phase shift phi on
    mode i followed by the two-mode rotation by theta between modes i and j.
    Elements with i == j act as pure phase shifters.  Elements are applied in
    circuit order (first element acts first).
    """
    U = np.eye(N, dtype=complex)
    for el in mesh:
        i, j = int(el["i"]), int(el["j"])
        theta = float(el.get("theta", 0.0))
        phi = float(el.get("phi", 0.0))
        if not (0 <= i < N and 0 <= j < N):
            raise CircuitError(f"mesh element references mode outside 0..{N-1}")
        step = phase_unitary(N, i, phi)
        if i != j:
            step = rotation_unitary(N, i, j, theta) @ step
        U = step @ U
    return U


@dataclass(frozen=True)
class CircuitParams:
    """Squeezing, displacement and interferometer of the input circuit.

    ``squeeze_mag`` are the nonnegative r_j, ``squeeze_phase`` their phases
    (absorbed into the interferometer internally), ``displacements`` the
    complex alpha_j applied as D(alpha) S(z) |0>, and ``unitary`` the N x N
    interferometer.  ``mesh`` keeps the generating element list when the
    unitary was built from one.
    """

    squeeze_mag: np.ndarray
    squeeze_phase: np.ndarray
    displacements: np.ndarray
    unitary: np.ndarray
    mesh: tuple | None = None
    r_max: float = DEFAULT_R_MAX

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.squeeze_mag, dtype=float))
        ph = np.atleast_1d(np.asarray(self.squeeze_phase, dtype=float))
        al = np.atleast_1d(np.asarray(self.displacements, dtype=complex))
        U = np.asarray(self.unitary, dtype=complex)
        N = r.shape[0]
        if ph.shape != (N,) or al.shape != (N,) or U.shape != (N, N):
            raise CircuitError("inconsistent parameter shapes")
        if np.any(r < 0):
            raise CircuitError("squeezing magnitudes must be nonnegative")
        if np.any(r > self.r_max + 1e-12):
            raise CircuitError(f"squeezing beyond r_max={self.r_max}")
        if np.linalg.norm(U.conj().T @ U - np.eye(N)) > UNITARITY_TOL * N:
            raise CircuitError("interferometer matrix is not unitary")
        object.__setattr__(self, "squeeze_mag", r)
        object.__setattr__(self, "squeeze_phase", ph)
        object.__setattr__(self, "displacements", al)
        object.__setattr__(self, "unitary", U)

    @property
    def num_modes(self) -> int:
        return self.squeeze_mag.shape[0]

    @classmethod
    def build(cls, squeeze=None, phase=None, displace=None, unitary=None,
              mesh=None, num_modes=None, r_max=DEFAULT_R_MAX):
        """Convenience constructor filling defaults.

        Negative entries in ``squeeze`` are accepted and folded into a pi
        phase.  If neither ``unitary`` nor ``mesh`` is given the identity
        interferometer is used.
        """
        if num_modes is None:
            for arr in (squeeze, phase, displace):
                if arr is not None:
                    num_modes = len(arr)
                    break
            else:
                if unitary is not None:
                    num_modes = np.asarray(unitary).shape[0]
                else:
                    raise CircuitError("cannot infer mode count")
        N = num_modes
        r = np.zeros(N) if squeeze is None else np.asarray(squeeze, dtype=float).copy()
        ph = np.zeros(N) if phase is None else np.asarray(phase, dtype=float).copy()
        neg = r < 0
        r[neg] = -r[neg]
        ph[neg] += np.pi
        al = np.zeros(N, dtype=complex) if displace is None else np.asarray(displace, dtype=complex)
        if unitary is not None and mesh is not None:
            raise CircuitError("give either an explicit unitary or a mesh, not both")
        if unitary is None:
            U = mesh_unitary(N, mesh) if mesh is not None else np.eye(N, dtype=complex)
        else:
            U = np.asarray(unitary, dtype=complex)
        return cls(r, ph, al, U, mesh=tuple(tuple(sorted(el.items())) for el in mesh) if mesh else None,
                   r_max=r_max)

    def permuted(self, perm):
        """Same circuit with modes relabeled: new mode i is old mode perm[i]."""
        perm = _check_perm(perm, self.num_modes)
        return CircuitParams(self.squeeze_mag, self.squeeze_phase,
                             self.displacements, self.unitary[np.ix_(perm, range(self.num_modes))],
                             r_max=self.r_max)

    def to_json(self) -> dict:
        doc = {
            "modes": self.num_modes,
            "squeeze": [{"r": float(r), "phase": float(p)}
                        for r, p in zip(self.squeeze_mag, self.squeeze_phase)],
            "displace": [{"re": float(a.real), "im": float(a.imag)}
                         for a in self.displacements],
        }
        if self.mesh is not None:
            doc["interferometer"] = {"mesh": [dict(el) for el in self.mesh]}
        else:
            doc["interferometer"] = {"unitary": [[{"re": float(z.real), "im": float(z.imag)}
                                                  for z in row] for row in self.unitary]}
        return doc

    @classmethod
    def from_json(cls, doc: dict, r_max=DEFAULT_R_MAX):
        N = int(doc["modes"])
        sq = doc.get("squeeze", [])
        r = [s.get("r", 0.0) for s in sq] + [0.0] * (N - len(sq))
        ph = [s.get("phase", 0.0) for s in sq] + [0.0] * (N - len(sq))
        dp = doc.get("displace", [])
        al = [complex(d.get("re", 0.0), d.get("im", 0.0)) for d in dp] + [0j] * (N - len(dp))
        itf = doc.get("interferometer", {})
        if "mesh" in itf:
            return cls.build(squeeze=r, phase=ph, displace=al, mesh=itf["mesh"],
                             num_modes=N, r_max=r_max)
        if "unitary" in itf:
            U = np.array([[complex(z["re"], z.get("im", 0.0)) for z in row]
                          for row in itf["unitary"]])
            return cls.build(squeeze=r, phase=ph, displace=al, unitary=U,
                             num_modes=N, r_max=r_max)
        return cls.build(squeeze=r, phase=ph, displace=al, num_modes=N, r_max=r_max)


@dataclass(frozen=True)
class GaussianState:
    """Immutable N-mode Gaussian state: covariance V and displacement Q in
    (creation..., annihilation...) ordering."""

    num_modes: int
    cov: np.ndarray
    disp: np.ndarray

    def __post_init__(self):
        N = self.num_modes
        V = np.asarray(self.cov, dtype=complex)
        Q = np.asarray(self.disp, dtype=complex)
        if V.shape != (2 * N, 2 * N) or Q.shape != (2 * N,):
            raise StateError("covariance/displacement shape mismatch")
        if np.linalg.norm(V - V.conj().T) > HERMITICITY_TOL * 2 * N:
            raise StateError("covariance matrix is not Hermitian")
        X = swap_matrix(N)
        if np.linalg.norm(X @ V.conj() @ X - V) > HERMITICITY_TOL * 2 * N:
            raise StateError("covariance violates conjugate-swap symmetry")
        if np.linalg.norm(X @ Q.conj() - Q) > HERMITICITY_TOL * 2 * N:
            raise StateError("displacement violates conjugate-swap symmetry")
        twoVI = 2 * V + np.eye(2 * N)
        if not np.isfinite(np.linalg.cond(twoVI)):
            raise StateError("2V + I is singular")
        object.__setattr__(self, "cov", V)
        object.__setattr__(self, "disp", Q)

    @property
    def alpha(self) -> np.ndarray:
        """Mean annihilation-operator values <a_j>."""
        return self.disp[self.num_modes:]

    @property
    def is_pure(self) -> bool:
        return abs(np.linalg.det(2 * self.cov) - 1.0) < PURITY_TOL


def _check_perm(perm, N):
    perm = list(int(p) for p in perm)
    if sorted(perm) != list(range(N)):
        raise ValueError(f"not a permutation of 0..{N-1}: {perm}")
    return perm


def make_state(params: CircuitParams) -> GaussianState:
    """Pure Gaussian state from the circuit: interferometer applied to a
    product of squeezed displaced vacua."""
    N = params.num_modes
    r = params.squeeze_mag
    ph = params.squeeze_phase
    U = params.unitary
    n_in = np.diag(np.sinh(r) ** 2).astype(complex)
    m_in = np.diag(np.exp(1j * ph) * np.cosh(r) * np.sinh(r))
    n_out = U.conj() @ n_in @ U.T
    m_out = U @ m_in @ U.T
    alpha = U @ params.displacements
    V = np.zeros((2 * N, 2 * N), dtype=complex)
    V[:N, :N] = n_out + 0.5 * np.eye(N)
    V[:N, N:] = m_out.conj()
    V[N:, :N] = m_out
    V[N:, N:] = n_out.T + 0.5 * np.eye(N)
    Q = np.concatenate([alpha.conj(), alpha])
    return GaussianState(N, V, Q)


@dataclass(frozen=True)
class BMatrix:
    """Symmetric matrix B = U diag(tanh r_j) U^T (phases absorbed into U)
    encoding the pure circuit state; singular values are tanh(r_j) < 1."""

    entries: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.entries, dtype=complex)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise StateError("B must be square")
        if np.linalg.norm(B - B.T) > 1e-10 * B.shape[0]:
            raise StateError("B must be symmetric")
        if B.shape[0] and np.linalg.svd(B, compute_uv=False)[0] >= 1.0:
            raise StateError("largest singular value of B must be < 1")
        object.__setattr__(self, "entries", B)


def b_matrix(params: CircuitParams) -> BMatrix:
    """B matrix of the circuit's pure state."""
    t = np.exp(1j * params.squeeze_phase) * np.tanh(params.squeeze_mag)
    U = params.unitary
    return BMatrix(U @ np.diag(t) @ U.T)


def relabel_modes(state: GaussianState, perm) -> GaussianState:
    """Permute modes: new mode i is old mode perm[i], consistently in both
    operator halves."""
    N = state.num_modes
    perm = _check_perm(perm, N)
    idx = perm + [N + p for p in perm]
    return GaussianState(N, state.cov[np.ix_(idx, idx)], state.disp[idx])


def purity(state: GaussianState) -> float:
    """Tr(rho^2) = 1/sqrt(det(2V)); equals 1 for circuit-built states."""
    d = np.linalg.det(2 * state.cov)
    return float(1.0 / np.sqrt(abs(d)))


def vacuum_overlap_sq(state: GaussianState) -> float:
    """|<0...0|rho|0...0>| vacuum probability, the P0 prefactor:
    2^N det(2V+I)^{-1/2} exp(-1/2 Q^T ytilde)."""
    N = state.num_modes
    twoVI = 2 * state.cov + np.eye(2 * N)
    yt = 2 * swap_matrix(N) @ np.linalg.solve(twoVI, state.disp)
    val = 2.0 ** N / np.sqrt(abs(np.linalg.det(twoVI))) * np.exp(-0.5 * (state.disp @ yt).real)
    return float(val)
