"""Acceptance suite: the ten quantitative claims, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py``; a summary line per criterion is
printed at the end of the session (and immediately with ``-s``).
"""

import math
import time

import numpy as np
import pytest

from triwit.qcore import (
    Party,
    Partition,
    Tolerances,
    basis_state,
    eig_hermitian,
    local_unitary,
    max_subtractable_weight,
    partial_transpose,
    projector,
    random_density,
    random_pure,
    random_unitary,
    rank_kernel,
    rank_signature,
)
from triwit.puretri import GHZ, W, GhzGenParams, PureKind, WGenParams, classify_pure, gen_ghz_type, gen_w_type, tangle, zero_tangle_mix
from triwit.overlap import OptimizerConfig, max_bisep_overlap, max_w_overlap
from triwit.witness import evaluate, random_b_state, random_w_state, std_witness
from triwit.pptedge import (
    EdgeFamilyParams,
    edge_family,
    edge_family_bisep_decomposition,
    edge_family_kernels,
    ppt_signature,
    product_in_ranges_search,
)
from triwit.verdict import detection_interval, perturbed_family, robustness_bound, w1_analog, w_ball_exhibit

from conftest import oracle_subtractable_weight, random_hermitian, record

SEED = 2024


def log_uniform(rng, size=3):
    return np.exp(rng.uniform(math.log(0.25), math.log(4.0), size))


def check(number, detail, passed):
    record(number, passed, detail)
    assert passed, detail


def test_criterion_01_overlap_constants():
    t0 = time.perf_counter()
    value, vec = max_w_overlap(GHZ, OptimizerConfig(starts=64, seed=42))
    elapsed = time.perf_counter() - t0
    bg = max_bisep_overlap(GHZ)[0]
    bw = max_bisep_overlap(W)[0]
    ok = abs(value - 0.75) <= 1e-6 and elapsed < 10 and abs(bg - 0.5) <= 1e-12 and abs(bw - 2 / 3) <= 1e-12
    ok = ok and tangle(vec) <= 1e-8
    check(1, f"W overlap {value:.12f} in {elapsed:.1f}s, bisep(GHZ) {bg:.15f}, bisep(W) {bw:.15f}", ok)


def test_criterion_02_detection_interval():
    lo2, hi2 = detection_interval(std_witness("W2"), steps=1001)
    lo1, hi1 = detection_interval(w1_analog(), steps=1001)
    ok = abs(lo2 - 0.6) <= 1e-9 and hi2 == 1.0 and abs(lo1 - 13 / 21) <= 1e-9 and hi1 == 1.0 and lo1 > lo2
    check(2, f"W2 negative on ({lo2:.12f}, {hi2}], W1-analog on ({lo1:.12f}, {hi1}] (13/21 = {13 / 21:.12f})", ok)


def test_criterion_03_robustness():
    w2 = std_witness("W2")
    sigma = projector((basis_state("000") - basis_state("111")) / math.sqrt(2))
    worst = []
    ok = True
    for p in (0.7, 0.8, 0.9, 1.0):
        eps_star = robustness_bound(p)
        inside = evaluate(w2, perturbed_family(p, 0.99 * eps_star, sigma))
        outside = evaluate(w2, perturbed_family(p, 1.01 * eps_star, sigma))
        ok = ok and inside < -1e-10 and outside > 1e-10
        worst.append(min(-inside, outside))
    check(3, f"detected below / lost above the bound for p in 0.7..1.0, smallest margin {min(worst):.3e}", ok)


def test_criterion_04_edge_family():
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    edge_ok = flat_ok = 0
    edge_min, flat_max = math.inf, 0.0
    drawn = 0
    while drawn < 100:
        a, b, c = log_uniform(rng)
        if abs(a * b - c) <= 0.1:
            continue
        drawn += 1
        rho = edge_family(EdgeFamilyParams(a, b, c))
        sig = rank_signature(rho)
        v = product_in_ranges_search(rho)
        edge_min = min(edge_min, v.residual)
        if ppt_signature(rho).all and sig == (7, 7, 7, 7) and sig.total <= 28 and v.residual > 1e-6:
            edge_ok += 1
    for _ in range(100):
        a, b = log_uniform(rng, 2)
        v = product_in_ranges_search(edge_family(EdgeFamilyParams(a, b, a * b)))
        flat_max = max(flat_max, v.residual)
        if v.residual < 1e-8 and classify_pure(v.witness_vector).kind is PureKind.PRODUCT:
            flat_ok += 1
    elapsed = time.perf_counter() - t0
    ok = edge_ok == 100 and flat_ok == 100 and elapsed < 120
    check(4, f"edge {edge_ok}/100 (min residual {edge_min:.2e}), ab=c {flat_ok}/100 (max residual {flat_max:.1e}), {elapsed:.0f}s", ok)


def test_criterion_05_kernel_formulas():
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(100):
        p = EdgeFamilyParams(*log_uniform(rng))
        rho = edge_family(p)
        mats = [rho] + [partial_transpose(rho, x) for x in Party]
        for m, k in zip(mats, edge_family_kernels(p)):
            worst = max(worst, float(np.max(np.abs(m @ k))))
    check(5, f"largest |M k| over 100 draws x 4 kernels = {worst:.2e}", worst <= 1e-10)


def test_criterion_06_tangle():
    rng = np.random.default_rng(SEED + 6)
    w_max = 0.0
    for _ in range(1000):
        lam = np.abs(rng.standard_normal(4))
        w_max = max(w_max, tangle(gen_w_type(WGenParams(tuple(lam / np.linalg.norm(lam))))))
    ghz_err = abs(tangle(GHZ) - 1.0)
    inv = 0.0
    for _ in range(200):
        v = random_pure(rng)
        u = local_unitary(*(random_unitary(rng) for _ in range(3)))
        inv = max(inv, abs(tangle(u @ v) - tangle(v)))
    mix_max = 0.0
    for _ in range(200):
        pair = []
        for _ in range(2):
            lam = np.abs(rng.standard_normal(5))
            psi = gen_ghz_type(GhzGenParams(tuple(lam / np.linalg.norm(lam)), float(rng.uniform(0, math.pi))))
            pair.append(local_unitary(*(random_unitary(rng) for _ in range(3))) @ psi)
        mix_max = max(mix_max, tangle(zero_tangle_mix(*pair)[2]))
    ok = w_max <= 1e-10 and ghz_err <= 1e-12 and inv <= 1e-9 and mix_max < 1e-9
    check(6, f"max tau(W gen) {w_max:.1e}, |tau(GHZ)-1| {ghz_err:.1e}, LU drift {inv:.1e}, max tau(mix) {mix_max:.1e}", ok)


def test_criterion_07_witness_nonnegativity():
    rng = np.random.default_rng(SEED + 7)
    w1, w2, wg = std_witness("W1"), std_witness("W2"), std_witness("GHZ")
    b_min = w_min = math.inf
    for _ in range(1000):
        rho = random_b_state(rng)
        b_min = min(b_min, evaluate(w1, rho), evaluate(w2, rho))
    for _ in range(1000):
        w_min = min(w_min, evaluate(wg, random_w_state(rng)))
    check(7, f"min W1/W2 on B mixtures {b_min:.4f}, min W_GHZ on W mixtures {w_min:.4f}", b_min >= -1e-9 and w_min >= -1e-9)


def test_criterion_08_w_ball():
    rep = w_ball_exhibit(0.8, 0.1, n_samples=100, seed=42)
    lo, hi = rep.eps_interval
    check(8, f"{rep.certified}/100 directions certified W\\B, eps in ({lo}, {hi:.6f})", rep.certified == 100 and hi > lo)


def test_criterion_09_decompositions():
    rng = np.random.default_rng(SEED + 9)
    worst = 0.0
    classes_ok = True
    for _ in range(50):
        p = EdgeFamilyParams(*log_uniform(rng))
        rho = edge_family(p)
        for part in Partition:
            parts = edge_family_bisep_decomposition(p, part)
            recon = sum(w * projector(v) for w, v in parts)
            worst = max(worst, float(np.max(np.abs(recon - rho))))
            for _, v in parts:
                pc = classify_pure(v)
                classes_ok &= pc.kind is PureKind.PRODUCT or (pc.kind is PureKind.BISEP and pc.partition is part)
    check(9, f"worst reconstruction error {worst:.1e} over 150 decompositions, component classes ok: {classes_ok}", worst <= 1e-10 and classes_ok)


def test_criterion_10_oracle_agreement():
    rng = np.random.default_rng(SEED + 10)
    tol = Tolerances()
    sub_err = 0.0
    for i in range(200):
        if i < 100:
            rho = random_density(rng)
            psi = random_pure(rng)
        else:
            rho = random_density(rng, rank=4)
            psi = random_pure(rng) if i % 2 else rho @ random_pure(rng)
            psi = psi / np.linalg.norm(psi)
        sub_err = max(sub_err, abs(max_subtractable_weight(rho, psi, tol) - oracle_subtractable_weight(rho, psi)))
    pt_ok = recon_ok = True
    for i in range(1000):
        if i % 2:
            m = random_hermitian(rng)
        else:
            rank = int(rng.integers(1, 8))
            q = np.linalg.qr(rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))[0][:, :rank]
            m = (q * rng.uniform(-1, 1, rank)) @ q.conj().T
        for x in Party:
            pt_ok &= np.array_equal(partial_transpose(partial_transpose(m, x), x), m)
        r, k = rank_kernel(m, tol)
        w, v = eig_hermitian(m)
        keep = np.abs(w) > tol.rank_rel_tol * np.abs(w).max()
        recon = (v[:, keep] * w[keep]) @ v[:, keep].conj().T
        recon_ok &= r + k.shape[1] == 8 and int(keep.sum()) == r
        recon_ok &= float(np.max(np.abs(recon - m))) <= 10 * tol.rank_rel_tol * np.linalg.norm(m)
        if k.shape[1]:
            recon_ok &= float(np.max(np.abs(m @ k))) <= 10 * tol.rank_rel_tol * np.linalg.norm(m)
    ok = sub_err <= 1e-8 and pt_ok and recon_ok
    check(10, f"subtractable weight vs bisection max diff {sub_err:.1e}; PT involution {pt_ok}; kernel reconstruction {recon_ok}", ok)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
