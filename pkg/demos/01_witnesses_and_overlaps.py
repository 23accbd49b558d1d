"""Where the witness constants come from, and what the W2 witness sees.

Run: python3 demos/01_witnesses_and_overlaps.py
"""

import numpy as np

from triwit import (
    GHZ,
    W,
    OptimizerConfig,
    detection_interval,
    evaluate,
    family_state,
    max_bisep_overlap,
    max_w_overlap,
    perturbed_family,
    robustness_bound,
    std_witness,
    tangle,
)
from triwit.verdict import w1_analog

# A projector witness c*1 - |v><v| is safe on a class exactly when c is the
# largest squared overlap of |v> with the class's pure states.
print("bisep overlap of GHZ:", max_bisep_overlap(GHZ))
print("bisep overlap of W:  ", max_bisep_overlap(W))

value, w_best = max_w_overlap(GHZ, OptimizerConfig(starts=64, seed=42))
print(f"W overlap of GHZ:     {value:.10f}  (tangle of the maximizer {tangle(w_best):.1e})")

for name in ("GHZ", "W1", "W2"):
    w = std_witness(name)
    print(f"  {name:3s} witness: c = {w.c:.6f}, on its own vector {evaluate(w, np.outer(w.proj, w.proj.conj())):+.4f}")

# Noisy family: identity mixed with the W-type vector closest to GHZ.
# Tr(W2 rho(p)) = (3 - 5p)/8 changes sign at p = 3/5.
for p in (0.0, 0.5, 0.6, 0.7, 1.0):
    print(f"p = {p:.1f}: Tr(W2 rho) = {evaluate(std_witness('W2'), family_state(p)):+.5f}")

print("W2 detects on", detection_interval(std_witness("W2")))
print("W1 analog detects on", detection_interval(w1_analog()), "; 13/21 =", 13 / 21)
print("GHZ witness detects on", detection_interval(std_witness("GHZ")))

# Mixing in an arbitrary sigma with weight eps costs at most eps/2 of margin.
sigma = np.zeros((8, 8))
sigma[[0, 0, 7, 7], [0, 7, 0, 7]] = [0.5, -0.5, -0.5, 0.5]  # orthogonal to GHZ: the worst case
for p in (0.7, 0.8, 0.9, 1.0):
    eps = robustness_bound(p)
    below = evaluate(std_witness("W2"), perturbed_family(p, 0.99 * eps, sigma))
    above = evaluate(std_witness("W2"), perturbed_family(p, 1.01 * eps, sigma))
    print(f"p = {p}: eps* = {eps:.4f}, value just below {below:+.2e}, just above {above:+.2e}")
