"""Gaussian-moment derivative kernel.

Evaluates derivatives of the form

    prod_k (d^2 / dx_k dy_k)^{n_k}  [ exp(1/2 g^T M g + v^T g) * monomial ] | g=0

where g = (y_1..y_K, x_1..x_K) and the optional monomial is
(sum_j w_j x_j)^px * (sum_i u_i y_i)^py.  Such derivatives reduce to a loop
hafnian of the order-expanded matrix: each variable index is repeated as many
times as it is differentiated, pairings between copies are weighted by M
entries and unpaired copies by v entries.  Monomial factors are folded in as
extra indices coupled to their family through the weight vectors only.

Repetitions are exploited: the kernel works on (distinct index, multiplicity)
pairs, so cost scales with the product of (multiplicity+1) instead of with the
number of perfect matchings.  Reduction order is deterministic (lowest
remaining index first), so results are bitwise reproducible.
"""

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_ORDER_CAP = 24


class DerivativeTooLargeError(ValueError):
    """Total expanded differentiation order exceeds the configured cap."""


def multiset_loop_hafnian(adj, diag, counts, memo=None):
    """Loop hafnian of a matrix whose indices carry multiplicities.

    ``adj`` is a D x D symmetric pairing-weight matrix, ``diag`` the D loop
    (singleton) weights and ``counts`` the multiplicity of each index.  The
    result equals ``loop_hafnian`` of the expanded matrix in which index i is
    repeated counts[i] times.  Works for any scalar type supporting + and *
    (complex, numpy complex, sympy expressions).

    ``memo`` may be a dict shared between calls with the same (adj, diag) to
    reuse subproblems across related count tuples.
    """
    D = len(counts)
    counts = tuple(int(c) for c in counts)
    if any(c < 0 for c in counts):
        raise ValueError("multiplicities must be nonnegative")
    if memo is None:
        memo = {}

    def rec(state):
        val = memo.get(state)
        if val is not None:
            return val
        # first index with remaining copies; its first copy either loops,
        # pairs with a sibling copy, or pairs with a copy of a later index
        i = -1
        for k in range(D):
            if state[k]:
                i = k
                break
        if i < 0:
            return 1
        s = list(state)
        s[i] -= 1
        rest = tuple(s)
        total = diag[i] * rec(rest)
        if s[i]:
            s2 = list(rest)
            s2[i] -= 1
            total = total + s[i] * adj[i][i] * rec(tuple(s2))
        for j in range(i + 1, D):
            if s[j]:
                s2 = list(rest)
                s2[j] -= 1
                total = total + s[j] * adj[i][j] * rec(tuple(s2))
        memo[state] = total
        return total

    return rec(counts)


def loop_hafnian(mat, cap=DEFAULT_ORDER_CAP):
    """Loop hafnian: sum over perfect matchings with fixed points weighted by
    the diagonal.  Empty matrix gives 1."""
    mat = np.asarray(mat)
    n = mat.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if mat.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(mat, mat.T, atol=1e-10):
        raise ValueError("matrix must be symmetric")
    if n > cap:
        raise DerivativeTooLargeError(f"size {n} exceeds cap {cap}")
    return complex(multiset_loop_hafnian(mat, np.diag(mat), (1,) * n))


@dataclass(frozen=True)
class GaussianForm:
    """Quadratic-plus-linear exponent exp(1/2 g^T M g + v^T g) over 2K vars.

    Variable layout: first K components are the y-family (differentiated
    together with x_k via d^2/dx_k dy_k), last K the x-family.
    """

    M: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.M, dtype=complex)
        v = np.asarray(self.v, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise ValueError("M must be 2K x 2K")
        if v.shape != (M.shape[0],):
            raise ValueError("v must have length 2K")
        if not np.allclose(M, M.T, atol=1e-10):
            raise ValueError("M must be symmetric")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "v", v)

    @property
    def npairs(self):
        return self.M.shape[0] // 2


@dataclass(frozen=True)
class DerivOrder:
    """Per-pair derivative orders plus optional monomial powers.

    ``orders[k]`` is the order of (d^2/dx_k dy_k).  ``power_x``/``power_y``
    are the powers of the weighted-sum monomials over the x- and y-family;
    weights default to all ones.
    """

    orders: tuple
    power_x: int = 0
    power_y: int = 0
    weights_x: tuple | None = None
    weights_y: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if any(n < 0 for n in self.orders):
            raise ValueError("orders must be nonnegative")
        if self.power_x < 0 or self.power_y < 0:
            raise ValueError("monomial powers must be nonnegative")
        if self.power_x > sum(self.orders) or self.power_y > sum(self.orders):
            raise ValueError("monomial power exceeds total derivative order")

    def expanded_size(self):
        return 2 * sum(self.orders) + self.power_x + self.power_y


def _monomial_weights(order: DerivOrder, K: int):
    wx = np.ones(K, dtype=complex) if order.weights_x is None else np.asarray(order.weights_x, dtype=complex)
    wy = np.ones(K, dtype=complex) if order.weights_y is None else np.asarray(order.weights_y, dtype=complex)
    if wx.shape != (K,) or wy.shape != (K,):
        raise ValueError("monomial weight vectors must have length K")
    return wx, wy


def gaussian_derivative(form: GaussianForm, order: DerivOrder, cap=DEFAULT_ORDER_CAP):
    """Exact derivative value via the multiplicity-compressed loop hafnian."""
    K = form.npairs
    if len(order.orders) != K:
        raise ValueError("order count must match number of variable pairs")
    if order.expanded_size() > cap:
        raise DerivativeTooLargeError(
            f"expanded size {order.expanded_size()} exceeds cap {cap}")
    wx, wy = _monomial_weights(order, K)

    # distinct indices: the 2K variables, then one aux index per monomial
    # family (the aux couples through the weight vector only)
    D = 2 * K + 2
    adj = np.zeros((D, D), dtype=complex)
    adj[: 2 * K, : 2 * K] = form.M
    ax, ay = 2 * K, 2 * K + 1
    adj[ax, K: 2 * K] = wx
    adj[K: 2 * K, ax] = wx
    adj[ay, :K] = wy
    adj[:K, ay] = wy
    diag = np.zeros(D, dtype=complex)
    diag[: 2 * K] = form.v
    counts = list(order.orders) + list(order.orders) + [order.power_x, order.power_y]
    return complex(multiset_loop_hafnian(adj, diag, counts))


def taylor_oracle(form: GaussianForm, order: DerivOrder, cap=12):
    """Brute-force check via truncated multivariate power series.

    Expands exp(1/2 g^T M g + v^T g) as a series, multiplies by the monomial
    and reads off the coefficient of prod x_k^{n_k} y_k^{n_k}.  Exponential
    cost; intended for small instances only.
    """
    K = form.npairs
    if len(order.orders) != K:
        raise ValueError("order count must match number of variable pairs")
    if order.expanded_size() > cap:
        raise DerivativeTooLargeError(
            f"expanded size {order.expanded_size()} exceeds oracle cap {cap}")
    wx, wy = _monomial_weights(order, K)

    # per-variable degree caps: the target exponent of variable i
    target = tuple(order.orders) + tuple(order.orders)
    nvars = 2 * K

    def clip_ok(exp):
        return all(e <= t for e, t in zip(exp, target))

    def pmul(a, b):
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if clip_ok(e):
                    out[e] = out.get(e, 0.0) + ca * cb
        return out

    zero = (0,) * nvars
    # the exponent polynomial Q (no constant term)
    Q = {}
    for i in range(nvars):
        ei = tuple(1 if k == i else 0 for k in range(nvars))
        if form.v[i] != 0 and clip_ok(ei):
            Q[ei] = Q.get(ei, 0.0) + complex(form.v[i])
        for j in range(nvars):
            e = tuple((1 if k == i else 0) + (1 if k == j else 0) for k in range(nvars))
            if form.M[i, j] != 0 and clip_ok(e):
                Q[e] = Q.get(e, 0.0) + 0.5 * complex(form.M[i, j])
    # exp(Q) truncated: Q has minimum degree 1, so sum_{j<=total degree}
    total = sum(target)
    expQ = {zero: 1.0 + 0.0j}
    term = {zero: 1.0 + 0.0j}
    for j in range(1, total + 1):
        term = pmul(term, Q)
        if not term:
            break
        for e, c in term.items():
            expQ[e] = expQ.get(e, 0.0) + c * _inv_factorial(j)
    poly = expQ
    lin_x = {}
    for k in range(K):
        e = tuple(1 if i == K + k else 0 for i in range(nvars))
        if wx[k] != 0:
            lin_x[e] = complex(wx[k])
    lin_y = {}
    for k in range(K):
        e = tuple(1 if i == k else 0 for i in range(nvars))
        if wy[k] != 0:
            lin_y[e] = complex(wy[k])
    for _ in range(order.power_x):
        poly = pmul(poly, lin_x)
    for _ in range(order.power_y):
        poly = pmul(poly, lin_y)
    coeff = poly.get(target, 0.0 + 0.0j)
    scale = 1.0
    for n in order.orders:
        scale *= math.factorial(n) ** 2
    return complex(coeff * scale)


def _inv_factorial(j):
    out = 1.0
    for i in range(2, j + 1):
        out /= i
    return out


def expanded_term_count(order: DerivOrder):
    """Number of matchings the naive expansion would sum (diagnostics)."""
    n = order.expanded_size()
    # telephone number t(n): involutions of an n-set
    t0, t1 = 1, 1
    for i in range(2, n + 1):
        t0, t1 = t1, t1 + (i - 1) * t0
    return t1
