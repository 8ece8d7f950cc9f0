#!/usr/bin/env python3
"""Exact circuit families for W and NOON states.

Both families couple the output modes only to the detectors, so every
detected photon has exactly one partner photon in the outputs.  For W states
one detector coupled equally to M outputs leaves the single-photon
superposition; for NOON states N detectors with coupling ratios at the N-th
roots of -1 cancel every mixed output pattern identically.  Fidelity is
exactly 1 at any admissible coupling; the coupling strength only trades off
success probability, which this script scans.
"""

import math

import numpy as np

from heraldkit import HeraldPattern, TargetSpec, render_target
from heraldkit.design import evaluate_circuit, noon_circuit, w_circuit

print("W states: one detector, M outputs (success probability -> 25%)")
for M in (2, 3, 4):
    pattern = HeraldPattern((M,), (1,))
    target = render_target(TargetSpec("w", {"M": M}))
    best = (0.0, 0.0, 0.0)
    for c in np.linspace(0.05, 0.97 / math.sqrt(M), 80):
        fid, prob = evaluate_circuit(w_circuit(M, c), pattern, target)
        if prob > best[2]:
            best = (c, fid, prob)
    print(f"  M={M}: coupling={best[0]:.3f}  F={best[1]:.10f}  P={best[2]:.5f}")

print()
print("NOON states: N detectors at one photon each, 2 outputs")
for N in (2, 3, 4):
    pattern = HeraldPattern(tuple(range(2, N + 2)), (1,) * N)
    target = render_target(TargetSpec("noon", {"N": N}))
    best = (0.0, 0.0, 0.0)
    for c in np.linspace(0.05, 0.97 / math.sqrt(N), 80):
        fid, prob = evaluate_circuit(noon_circuit(N, c), pattern, target)
        if prob > best[2]:
            best = (c, fid, prob)
    print(f"  N={N}: coupling={best[0]:.3f}  F={best[1]:.10f}  P={best[2]:.5f}")

print()
print("The W probability is independent of M; the NOON probability decays")
print("with N but the fidelity stays exact at every coupling.")
