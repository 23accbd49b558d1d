"""A family of PPT entangled edge states and why it is still biseparable.

Run: python3 demos/02_edge_states.py
"""

import numpy as np

from triwit import (
    EdgeFamilyParams,
    MixedClass,
    OptimizerConfig,
    Partition,
    classify_mixed,
    edge_family,
    edge_family_bisep_decomposition,
    edge_family_is_edge,
    edge_family_kernels,
    partial_transpose,
    Party,
    ppt_signature,
    product_in_ranges_search,
    rank_signature,
    verify_decomposition,
)

np.set_printoptions(precision=4, suppress=True)

p = EdgeFamilyParams(2, 3, 7)
rho = edge_family(p)
print("diagonal * n:", np.diag(rho).real * p.n)
print("PPT on every cut:", ppt_signature(rho))
print("rank signature:", rank_signature(rho), "sum", rank_signature(rho).total)

# Each of rho and its three partial transposes has a one-dimensional kernel.
mats = [rho] + [partial_transpose(rho, x) for x in Party]
for label, m, k in zip(("rho", "T_A", "T_B", "T_C"), mats, edge_family_kernels(p)):
    print(f"  kernel of {label}: {np.round(k.real, 4)}  |M k| = {np.abs(m @ k).max():.1e}")

# Edge-ness: no product vector sits in all four ranges (with partial
# conjugation) unless ab = c.
for abc in ((2, 3, 7), (2, 3, 6)):
    q = EdgeFamilyParams(*abc)
    v = product_in_ranges_search(edge_family(q))
    print(f"a,b,c = {abc}: closed form edge {edge_family_is_edge(q)}, search residual {v.residual:.2e}")

# The state is nevertheless a mixture of biseparable projectors, for every cut.
for part in Partition:
    parts = edge_family_bisep_decomposition(p, part)
    cert = verify_decomposition(rho, parts, MixedClass.B)
    print(f"{part.value}: {len(parts)} components, reconstruction error {cert.payload['reconstruction_error']:.1e}")

verdict = classify_mixed(rho, OptimizerConfig(starts=8))
print("verdict:", verdict.describe())
for c in verdict.evidence:
    print("  ", c.kind.value, c.bound, c.cls.name)
