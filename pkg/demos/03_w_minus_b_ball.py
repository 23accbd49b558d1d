"""Mixed W\\B states are not a measure-zero set: a whole ball of them.

Around family_state(p) every perturbation (1-eps) rho + eps sigma with eps
small enough is still caught by W2 (so it is outside B) and still has an
explicit decomposition into W-type, biseparable and product projectors (so it
is inside W).

Run: python3 demos/03_w_minus_b_ball.py
"""

from triwit import robustness_bound, w_ball_exhibit
from triwit.verdict import separability_floor

for p, delta in ((0.8, 0.1), (0.61, 0.005)):
    print(f"p = {p}: witness margin allows eps < {robustness_bound(p):.4f}, "
          f"separable noise needs eps <= {separability_floor(p):.4f}")
    rep = w_ball_exhibit(p, delta, n_samples=100, seed=42)
    worst = max(s.w2_value for s in rep.samples)
    print(f"  certified {rep.certified}/100 random directions, eps interval {rep.eps_interval}, "
          f"largest W2 value {worst:+.4f}")
