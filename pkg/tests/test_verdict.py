import math

import numpy as np
import pytest

from triwit.qcore import InvalidInputError, NumericalError, basis_state, projector, random_density
from triwit.puretri import GHZ, GhzGenParams, PureKind, classify_pure, gen_ghz_type, tangle
from triwit.overlap import OptimizerConfig
from triwit.witness import evaluate, random_s_state, std_witness
from triwit.pptedge import EdgeFamilyParams, edge_family, edge_family_bisep_decomposition, ppt_signature
from triwit.verdict import (
    W_MAX_GHZ,
    CertKind,
    Certificate,
    ClassVerdict,
    DecompositionError,
    MixedClass,
    classify_mixed,
    detection_interval,
    family_state,
    family_state_decomposition,
    pauli_separable_decomposition,
    perturbed_family,
    robustness_bound,
    separability_floor,
    verify_decomposition,
    w1_analog,
    w_ball_exhibit,
)

FAST = OptimizerConfig(starts=8)
GHZ_PERP = projector((basis_state("000") - basis_state("111")) / math.sqrt(2))


def test_family_examples():
    assert np.allclose(family_state(0), np.eye(8) / 8)
    assert np.allclose(family_state(1), projector(W_MAX_GHZ))
    assert classify_pure(W_MAX_GHZ).kind is PureKind.W
    assert abs(np.vdot(GHZ, W_MAX_GHZ)) ** 2 == pytest.approx(0.75, abs=1e-14)
    assert evaluate(std_witness("W2"), family_state(0.8)) == pytest.approx(-1 / 8, abs=1e-14)
    with pytest.raises(InvalidInputError):
        family_state(1.1)


def test_family_witness_values():
    for p in np.linspace(0, 1, 11):
        rho = family_state(p)
        assert evaluate(w1_analog(), rho) == pytest.approx((13 - 21 * p) / 24, abs=1e-14)
        assert evaluate(std_witness("GHZ"), rho) == pytest.approx((5 - 5 * p) / 8, abs=1e-14)


def test_detection_interval_examples():
    lo, hi = detection_interval(std_witness("W2"))
    assert lo == pytest.approx(0.6, abs=1e-9) and hi == 1.0
    lo, hi = detection_interval(w1_analog())
    assert lo == pytest.approx(13 / 21, abs=1e-9) and hi == 1.0
    assert detection_interval(std_witness("GHZ")) is None


def test_perturbed_family_examples():
    assert np.allclose(perturbed_family(0.7, 0.0, random_density(np.random.default_rng(1))), family_state(0.7))
    w2 = std_witness("W2")
    for p, eps in [(0.7, 0.05), (0.9, 0.3), (1.0, 0.5)]:
        expected = (1 - eps) * (3 - 5 * p) / 8 + eps / 2
        assert evaluate(w2, perturbed_family(p, eps, GHZ_PERP)) == pytest.approx(expected, abs=1e-12)
    assert evaluate(w2, perturbed_family(0.8, 0.2, GHZ_PERP)) == pytest.approx(0.0, abs=1e-15)


def test_robustness_bound_examples():
    assert robustness_bound(1.0) == pytest.approx(1 / 3)
    assert robustness_bound(0.8) == pytest.approx(0.2)
    assert robustness_bound(0.6 + 1e-12) < 1e-11
    with pytest.raises(InvalidInputError):
        robustness_bound(0.6)


def test_verify_decomposition_examples():
    parts = [(1 / 8, basis_state(format(k, "03b"))) for k in range(8)]
    assert verify_decomposition(np.eye(8) / 8, parts, MixedClass.S).cls is MixedClass.S
    p = EdgeFamilyParams(2, 3, 7)
    cert = verify_decomposition(edge_family(p), edge_family_bisep_decomposition(p), MixedClass.B)
    assert cert.kind is CertKind.EXPLICIT_DECOMPOSITION and cert.bound == "upper"
    with pytest.raises(DecompositionError) as err:
        verify_decomposition(family_state(1), [(1.0, W_MAX_GHZ)], MixedClass.B)
    assert err.value.index == 0


def test_verify_decomposition_reconstruction_failure():
    parts = [(1 / 8, basis_state(format(k, "03b"))) for k in range(8)]
    with pytest.raises(DecompositionError):
        verify_decomposition(family_state(0.1), parts, MixedClass.S)
    with pytest.raises(DecompositionError):
        verify_decomposition(np.eye(8) / 8, parts[:4], MixedClass.S)


def test_family_decomposition_is_w_class():
    for p in (0.0, 0.4, 1.0):
        verify_decomposition(family_state(p), family_state_decomposition(p), MixedClass.W)


def test_pauli_decomposition(rng):
    sigma = random_density(rng)
    m = 0.9 * np.eye(8) / 8 + 0.04 * sigma
    m = m / np.trace(m)
    parts = pauli_separable_decomposition(m)
    assert verify_decomposition(m, parts, MixedClass.S).cls is MixedClass.S
    with pytest.raises(DecompositionError):
        pauli_separable_decomposition(projector(GHZ))


def test_separability_floor_worst_case(rng):
    # the floor must hold for the most Pauli-heavy sigma, a pure stabilizer-like state
    p = 0.8
    eps = separability_floor(p)
    sigma = projector(GHZ)
    noise = (1 - eps) * (1 - p) / 8 * np.eye(8) + eps * sigma
    parts = pauli_separable_decomposition(noise / np.trace(noise))
    assert all(w >= 0 for w, _ in parts)


def test_class_verdict_rules():
    v = ClassVerdict()
    assert v.describe() == "between S and GHZ"
    v.add(Certificate(CertKind.WITNESS_VIOLATION, "lower", MixedClass.W))
    v.add(Certificate(CertKind.EXPLICIT_DECOMPOSITION, "upper", MixedClass.W))
    assert v.exact and v.describe() == "W\\B"
    # monotone: a weaker certificate never widens the interval
    v.add(Certificate(CertKind.PPT_SIGNATURE, "lower", MixedClass.B))
    assert (v.lower, v.upper) == (MixedClass.W, MixedClass.W)
    with pytest.raises(NumericalError):
        v.add(Certificate(CertKind.RANK_RULE, "upper", MixedClass.B))


def test_classify_family_with_decomposition():
    rho = family_state(0.8)
    v = classify_mixed(rho, FAST, decomposition=(family_state_decomposition(0.8), MixedClass.W))
    assert (v.lower, v.upper) == (MixedClass.W, MixedClass.W)
    w2 = [c for c in v.evidence if c.kind is CertKind.WITNESS_VIOLATION and c.payload["witness"] == "W2"]
    assert w2[0].payload["value"] == pytest.approx(-1 / 8, abs=1e-14)


def test_classify_ghz_projector():
    v = classify_mixed(projector(GHZ), FAST)
    assert (v.lower, v.upper) == (MixedClass.GHZ, MixedClass.GHZ)
    violated = {c.payload["witness"] for c in v.evidence if c.kind is CertKind.WITNESS_VIOLATION}
    assert {"W2", "GHZ"} <= violated


def test_classify_edge_state():
    v = classify_mixed(edge_family(EdgeFamilyParams(2, 3, 7)), FAST)
    assert (v.lower, v.upper) == (MixedClass.B, MixedClass.B)
    assert v.describe() == "B\\S"
    kinds = {c.kind for c in v.evidence}
    assert CertKind.EXPLICIT_DECOMPOSITION in kinds and CertKind.KNOWN_FAMILY in kinds
    assert CertKind.WITNESS_VIOLATION not in kinds


def test_classify_non_edge_member_stays_open():
    v = classify_mixed(edge_family(EdgeFamilyParams(2, 3, 6)), FAST)
    assert (v.lower, v.upper) == (MixedClass.S, MixedClass.B)


def test_classify_identity_is_separable():
    v = classify_mixed(np.eye(8) / 8, FAST)
    assert (v.lower, v.upper) == (MixedClass.S, MixedClass.S)


def test_classify_low_rank_ppt_rule():
    plus = np.array([1, 1]) / math.sqrt(2)
    e0 = np.array([1, 0])
    v1 = np.kron(np.kron(plus, e0), e0)
    v2 = np.kron(np.kron(e0, plus), plus)
    rho = 0.5 * projector(v1) + 0.5 * projector(v2)
    v = classify_mixed(rho, FAST)
    assert any(c.kind is CertKind.RANK_RULE for c in v.evidence)
    assert (v.lower, v.upper) == (MixedClass.S, MixedClass.B)


def test_classify_random_ghz_projectors(rng):
    n = 0
    while n < 20:
        lam = np.abs(rng.standard_normal(5))
        psi = gen_ghz_type(GhzGenParams(tuple(lam / np.linalg.norm(lam)), float(rng.uniform(0, math.pi))))
        if tangle(psi) <= 1e-3:
            continue
        n += 1
        assert classify_mixed(projector(psi), FAST).lower is MixedClass.GHZ


def test_separable_mixtures_quiet(rng):
    for _ in range(50):
        rho = random_s_state(rng)
        assert ppt_signature(rho).all
        for name in ("W1", "W2", "GHZ"):
            assert evaluate(std_witness(name), rho) >= -1e-9


def test_w_ball_small_interval():
    rep = w_ball_exhibit(0.61, 0.005, n_samples=20)
    lo, hi = rep.eps_interval
    assert lo == 0 < hi
    # near p = 3/5 the witness margin, not the separability floor, limits the ball
    assert hi == pytest.approx(robustness_bound(0.61)) and hi < separability_floor(0.61)
    assert rep.certified == 20
    assert all(lo < s.eps < hi for s in rep.samples)


def test_w_ball_reference_point():
    rep = w_ball_exhibit(0.8, 0.1, n_samples=10)
    assert rep.eps_interval[1] == pytest.approx(min(0.2, separability_floor(0.8)))
    assert rep.certified == 10 and all(s.w2_value < 0 for s in rep.samples)


def test_w_ball_negative_control():
    p = 0.8
    eps = 1.01 * robustness_bound(p)
    assert evaluate(std_witness("W2"), perturbed_family(p, eps, GHZ_PERP)) > 0


def test_w_ball_preconditions():
    with pytest.raises(InvalidInputError):
        w_ball_exhibit(0.62, 0.05)
    with pytest.raises(InvalidInputError):
        w_ball_exhibit(0.95, 0.1)
