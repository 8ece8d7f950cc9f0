"""Acceptance gate: one test per headline capability, each printing a single
pass/fail line with the measured numbers.

Run with -s to see the lines; tolerances are pinned and must not be loosened.
"""

import math
import time

import numpy as np
import pytest
from scipy.stats import unitary_group

from heraldkit.cli import REFERENCE_CAT_ROWS, table1_circuit
from heraldkit.design import (conjecture_probe, design_seeds, evaluate_circuit,
                              optimize_circuit, realize_root, solve_inverse)
from heraldkit.fock import heralded_fock, squeeze_matrix
from heraldkit.gaussian import CircuitParams, make_state
from heraldkit.herald import (_front_relabeled, _herald_via_fock,
                              block_partition, gate_params, herald,
                              herald_probability, reduced_form)
from heraldkit.moments import (DerivOrder, GaussianForm, gaussian_derivative,
                               taylor_oracle)
from heraldkit.pattern import HeraldPattern
from heraldkit.targets import (TargetSpec, approximate_gate_form,
                               cat_coefficients, gkp_coefficients,
                               render_target)


def report(name, ok, detail):
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    return ok


def random_circuit(rng, N, displace=False):
    al = (0.4 * (rng.standard_normal(N) + 1j * rng.standard_normal(N))
          if displace else None)
    return CircuitParams.build(squeeze=rng.uniform(-1.0, 1.0, N),
                               phase=rng.uniform(-np.pi, np.pi, N),
                               displace=al,
                               unitary=unitary_group.rvs(N, random_state=rng))


def test_cat_table_forward():
    t0 = time.time()
    pattern = HeraldPattern((1,), (2,))
    worst_f = worst_p = 0.0
    for row in REFERENCE_CAT_ROWS:
        alpha, fid_ref, _, _, p_ref = row[:5]
        target = cat_coefficients(alpha, "even", cutoff=40)
        fid, prob = evaluate_circuit(table1_circuit(row), pattern, target)
        worst_f = max(worst_f, abs(fid - fid_ref))
        worst_p = max(worst_p, abs(prob - p_ref))
    dt = time.time() - t0
    ok = worst_f <= 0.003 and worst_p <= 0.003 and dt < 5.0
    assert report("cat table forward (8 rows)", ok,
                  f"max dF={worst_f:.5f}, max dP={worst_p:.5f}, {dt:.1f}s")


def test_cat_inverse_optimizer():
    t0 = time.time()
    res = optimize_circuit(TargetSpec("cat", {"alpha": 1.0, "parity": "even"}),
                           2, HeraldPattern((1,), (2,)),
                           fidelity_floor=0.999, restarts=64, rounds=1, seed=0)
    dt = time.time() - t0
    ok = res.feasible and res.probability >= 0.10 and dt < 60.0
    assert report("cat alpha=1.0 optimizer", ok,
                  f"F={res.fidelity:.5f}, P={res.probability:.5f}, {dt:.1f}s")


def test_w_state_success_probability():
    oks, details = [], []
    for M in (2, 3):
        spec = TargetSpec("w", {"M": M})
        pattern = HeraldPattern((M,), (1,))
        seeds = design_seeds(spec, M + 1, pattern)
        res = optimize_circuit(spec, M + 1, pattern, fidelity_floor=0.9999,
                               restarts=8, rounds=1, seed=0, seeds=seeds)
        oks.append(res.fidelity >= 0.9999 and abs(res.probability - 0.25) <= 0.005)
        details.append(f"M={M}: F={res.fidelity:.6f}, P={res.probability:.5f}")
    assert report("W states (P = 25%, M-independent)", all(oks),
                  "; ".join(details))


def test_noon_states():
    gates = {2: 0.06, 3: 0.012, 4: 0.003}
    oks, details = [], []
    for N, p_min in gates.items():
        spec = TargetSpec("noon", {"N": N})
        pattern = HeraldPattern(tuple(range(2, N + 2)), (1,) * N)
        seeds = design_seeds(spec, N + 2, pattern)
        res = optimize_circuit(spec, N + 2, pattern, fidelity_floor=0.999,
                               restarts=4, rounds=1, seed=0, seeds=seeds)
        oks.append(res.fidelity >= 0.999 and res.probability >= p_min)
        details.append(f"N={N}: F={res.fidelity:.5f}, P={res.probability:.5f}")
    assert report("NOON states", all(oks), "; ".join(details))


def test_gkp_gate_form_fit():
    target = gkp_coefficients(0.35, cutoff=30)
    zeta, _, coeffs, fid = approximate_gate_form(target, 4, restarts=24,
                                                 seed=7,
                                                 allow_displacement=False)
    if coeffs[0].real < 0:
        coeffs = -coeffs
    ok = (abs(fid - 0.818) <= 0.005 and abs(abs(zeta) - 0.294) <= 0.005
          and abs(coeffs[0].real - 0.669) <= 0.01
          and abs(coeffs[2].real + 0.216) <= 0.01
          and abs(coeffs[4].real - 0.711) <= 0.01)
    assert report("GKP gate-form fit (delta=0.35)", ok,
                  f"F={fid:.4f}, zeta={abs(zeta):.4f}, "
                  f"c=({coeffs[0].real:.3f},{coeffs[2].real:.3f},{coeffs[4].real:.3f})")


def test_gkp_design_probability():
    # the gate-form core of the delta=0.35 grid state as an explicit target
    cut = 30
    bare = np.zeros(cut, dtype=complex)
    bare[0], bare[2], bare[4] = 0.669, -0.216, 0.711
    bare /= np.linalg.norm(bare)
    dressed = squeeze_matrix(0.294, cut) @ bare
    spec = TargetSpec("custom", {"coeffs": [[float(c.real), float(c.imag)]
                                            for c in dressed]})
    res = optimize_circuit(spec, 3, HeraldPattern((1, 2), (2, 2)),
                           fidelity_floor=0.999, restarts=64, seed=0)
    ok = res.feasible and res.probability >= 0.008
    assert report("GKP 3-mode design", ok,
                  f"F={res.fidelity:.5f}, P={res.probability:.5f}")


def test_cubic_phase_representability():
    oks, details = [], []
    best_p = 0.0
    for a in (0.05, 0.1, 0.2):
        c = np.zeros(4, dtype=complex)
        c[0], c[1], c[3] = 1.0, 1j * a * math.sqrt(1.5), 1j * a
        c /= np.linalg.norm(c)
        roots = solve_inverse(c, 3, counts=(1, 2), starts=60, seed=3)
        prob = 0.0
        for root in roots[:20]:
            params = realize_root(root)
            hs = herald(make_state(params), HeraldPattern((1, 2), root.counts))
            prob = max(prob, hs.probability)
        best_p = max(best_p, prob)
        oks.append(len(roots) > 0)
        details.append(f"a={a}: {len(roots)} roots, P={prob:.4f}")
    ok = all(oks) and best_p >= 0.03
    assert report("cubic phase representability", ok, "; ".join(details))


def test_dual_path_equivalence():
    t0 = time.time()
    rng = np.random.default_rng(2024)
    done = 0
    worst_ov = worst_p = 0.0
    while done < 200:
        N = int(rng.integers(2, 5))
        params = random_circuit(rng, N, displace=bool(rng.integers(2)))
        counts = tuple(int(c) for c in rng.integers(0, 3, N - 1))
        if not 1 <= sum(counts) <= 4:
            continue
        pattern = HeraldPattern(tuple(range(1, N)), counts)
        state = make_state(params)
        hs = herald(state, pattern)
        if hs.path != "closed":
            continue
        st, cts = _front_relabeled(state, pattern)
        gp = gate_params(block_partition(reduced_form(st)))
        hs2 = _herald_via_fock(st, cts, gp)
        n = max(hs.coeffs.size, hs2.coeffs.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[:hs.coeffs.size] = hs.coeffs
        b[:hs2.coeffs.size] = hs2.coeffs
        worst_ov = max(worst_ov, 1.0 - abs(np.vdot(a, b)))
        _, p_ref = heralded_fock(params, pattern)
        worst_p = max(worst_p, abs(p_ref - hs.probability) / p_ref)
        done += 1
    dt = time.time() - t0
    ok = worst_ov <= 1e-8 and worst_p <= 1e-6 and dt < 120.0
    assert report("dual-path equivalence (200 circuits)", ok,
                  f"worst overlap deficit={worst_ov:.2e}, "
                  f"worst prob rel={worst_p:.2e}, {dt:.1f}s")


def test_derivative_kernel_against_oracle():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(500):
        K = int(rng.integers(1, 4))
        A = 0.35 * (rng.standard_normal((2 * K, 2 * K))
                    + 1j * rng.standard_normal((2 * K, 2 * K)))
        form = GaussianForm((A + A.T) / 2,
                            0.5 * (rng.standard_normal(2 * K)
                                   + 1j * rng.standard_normal(2 * K)))
        orders = tuple(int(o) for o in rng.integers(0, 3, K))
        total = sum(orders)
        px = int(rng.integers(0, min(total, max(0, 12 - 2 * total)) + 1))
        py = int(rng.integers(0, min(total, max(0, 12 - 2 * total - px)) + 1))
        order = DerivOrder(orders, power_x=px, power_y=py)
        a = gaussian_derivative(form, order)
        b = taylor_oracle(form, order)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-30))
    ok = worst <= 1e-9
    assert report("derivative kernel vs series oracle (500 instances)", ok,
                  f"worst rel err={worst:.2e}")


def test_probability_completeness():
    rng = np.random.default_rng(31)
    worst = 1.0
    for _ in range(20):
        params = CircuitParams.build(
            squeeze=rng.uniform(-0.6, 0.6, 2),
            displace=0.3 * (rng.standard_normal(2) + 1j * rng.standard_normal(2)),
            unitary=unitary_group.rvs(2, random_state=rng))
        state = make_state(params)
        total = sum(herald_probability(state, HeraldPattern((1,), (k,)))
                    for k in range(13))
        worst = min(worst, total)
    ok = worst >= 1.0 - 1e-3
    assert report("probability completeness (2-mode circuits)", ok,
                  f"min captured mass={worst:.8f}")


def test_conjecture_probe_rates():
    oks, details = [], []
    for N, dof in ((2, 2), (3, 5)):
        at = conjecture_probe(N, dof, trials=100, seed=1)
        above = conjecture_probe(N, dof + 1, trials=100, seed=2)
        oks.append(at["solve_rate"] >= 0.95 and above["solve_rate"] <= 0.05)
        details.append(f"N={N}: rate@{dof}={at['solve_rate']:.2f}, "
                       f"rate@{dof + 1}={above['solve_rate']:.2f}")
    assert report("inverse solvability rates", all(oks), "; ".join(details))
