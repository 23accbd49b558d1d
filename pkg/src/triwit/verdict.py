"""Certificate-based classification of mixed states into S < B < W < GHZ.

A verdict is an interval ``[lower, upper]``.  Lower-bound certificates are
exclusions (a violated witness shows the state lies outside a convex set);
upper-bound certificates are membership proofs (an explicit decomposition,
the low-rank PPT rule, or a pure-state class).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Sequence

import numpy as np

from triwit.qcore import (
    DEFAULT_TOL,
    DIM,
    InvalidInputError,
    NumericalError,
    Tolerances,
    basis_state,
    check_density,
    eig_hermitian,
    projector,
    random_density,
    rank_kernel,
    rank_signature,
)
from triwit.puretri import GHZ, PureKind, classify_pure
from triwit.overlap import OPTIMAL_SYMMETRIC_W, OptimizerConfig
from triwit.witness import Boundary, Witness, evaluate, optimize_violation, projector_witness, std_witness
from triwit.pptedge import (
    EdgeFamilyParams,
    edge_family_bisep_decomposition,
    edge_family_is_edge,
    ppt_signature,
    product_in_ranges_search,
    recognize_edge_family,
)

# W-type vector with the largest squared overlap (3/4) with GHZ; it generates the noisy family.
W_MAX_GHZ = OPTIMAL_SYMMETRIC_W.vector()
PURITY_THRESHOLD = 1 - 1e-10


class MixedClass(enum.IntEnum):
    S = 0
    B = 1
    W = 2
    GHZ = 3


_PURE_TO_MIXED = {
    PureKind.PRODUCT: MixedClass.S,
    PureKind.BISEP: MixedClass.B,
    PureKind.W: MixedClass.W,
    PureKind.GHZ: MixedClass.GHZ,
}


class CertKind(enum.Enum):
    WITNESS_VIOLATION = "WitnessViolation"
    PPT_SIGNATURE = "PptSignature"
    RANK_RULE = "RankRule"
    EXPLICIT_DECOMPOSITION = "ExplicitDecomposition"
    PURE_STATE_CLASS = "PureStateClass"
    KNOWN_FAMILY = "KnownFamily"
    RANGE_CRITERION = "RangeCriterion"


@dataclass
class Certificate:
    """One piece of evidence.

    ``bound == "lower"`` means the state is proven to lie outside every class
    below ``cls``; ``bound == "upper"`` means it is proven to lie inside ``cls``.
    """

    kind: CertKind
    bound: str
    cls: MixedClass
    payload: dict[str, Any] = field(default_factory=dict)


@dataclass
class ClassVerdict:
    lower: MixedClass = MixedClass.S
    upper: MixedClass = MixedClass.GHZ
    evidence: list[Certificate] = field(default_factory=list)

    def add(self, cert: Certificate) -> None:
        if cert.bound == "lower":
            self.lower = max(self.lower, cert.cls)
        elif cert.bound == "upper":
            self.upper = min(self.upper, cert.cls)
        else:
            raise ValueError(f"unknown bound {cert.bound!r}")
        self.evidence.append(cert)
        if self.lower > self.upper:
            raise NumericalError(
                f"contradictory certificates: lower bound {self.lower.name} exceeds upper bound {self.upper.name}"
            )

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def describe(self) -> str:
        if self.exact:
            if self.lower is MixedClass.S:
                return "S"
            return f"{self.lower.name}\\{MixedClass(self.lower - 1).name}"
        return f"between {self.lower.name} and {self.upper.name}"


class DecompositionError(InvalidInputError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


# ---------------------------------------------------------------------------
# the noisy W family and its perturbations


def family_state(p: float) -> np.ndarray:
    """``(1-p)/8 * 1 + p |w><w|`` with ``w`` the W-type vector closest to GHZ."""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError("family parameter p must lie in [0, 1]")
    return (1 - p) / DIM * np.eye(DIM, dtype=complex) + p * projector(W_MAX_GHZ)


def w1_analog() -> Witness:
    """``2/3 - |w><w|`` built on the family's W vector rather than the canonical one."""
    return projector_witness(2.0 / 3.0, W_MAX_GHZ, Boundary.B, name="W1*")


def perturbed_family(p: float, eps: float, sigma, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    if not 0.0 <= eps <= 1.0:
        raise InvalidInputError("perturbation weight eps must lie in [0, 1]")
    sigma = check_density(sigma, tol)
    return (1 - eps) * family_state(p) + eps * sigma


def robustness_bound(p: float) -> float:
    """Largest perturbation weight that keeps the W2 witness negative for any sigma."""
    if not 0.6 < p <= 1.0:
        raise InvalidInputError("robustness bound is defined for 3/5 < p <= 1")
    return (5 * p - 3) / (5 * p + 1)


def separability_floor(p: float) -> float:
    """Perturbation weight below which ``(1-eps)(1-p)/8 * 1 + eps*sigma`` is separable for any sigma.

    Expanding in Pauli strings, the state is separable when
    ``sum_P |Tr(M P)| <= Tr(M)``; since ``sum_P |Tr(sigma P)| <= 21``, the
    condition holds for ``eps <= (1-p)/(21-p)``.
    """
    if not 0.0 <= p < 1.0:
        raise InvalidInputError("separability floor needs 0 <= p < 1")
    return (1 - p) / (21 - p)


class Interval(NamedTuple):
    lo: float
    hi: float


def detection_interval(
    w: Witness,
    family: Callable[[float], np.ndarray] = family_state,
    p_min: float = 0.0,
    p_max: float = 1.0,
    steps: int = 1001,
    tol: Tolerances = DEFAULT_TOL,
) -> Interval | None:
    """Longest run of ``p`` on which ``Tr(w family(p)) < 0``, endpoints bisected to 1e-12.

    ``None`` when the witness never goes negative on the grid.
    """
    ps = np.linspace(p_min, p_max, steps)
    vals = np.array([evaluate(w, family(p)) for p in ps])
    neg = vals < -tol.zero_tol
    if not neg.any():
        return None
    runs = []
    for key, grp in itertools.groupby(range(steps), key=lambda i: bool(neg[i])):
        if key:
            idx = list(grp)
            runs.append((idx[0], idx[-1]))
    i0, i1 = max(runs, key=lambda r: (r[1] - r[0], -r[0]))

    def f(p):
        return evaluate(w, family(p))

    lo = ps[i0] if i0 == 0 else _bisect_sign(f, ps[i0 - 1], ps[i0])
    hi = ps[i1] if i1 == steps - 1 else _bisect_sign(f, ps[i1], ps[i1 + 1])
    return Interval(float(lo), float(hi))


def _bisect_sign(f, a: float, b: float, resolution: float = 1e-13) -> float:
    fa = f(a)
    while b - a > resolution:
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# decompositions

_ALLOWED = {
    MixedClass.S: {PureKind.PRODUCT},
    MixedClass.B: {PureKind.PRODUCT, PureKind.BISEP},
    MixedClass.W: {PureKind.PRODUCT, PureKind.BISEP, PureKind.W},
    MixedClass.GHZ: set(PureKind),
}


def verify_decomposition(
    rho, parts: Sequence[tuple[float, np.ndarray]], claimed: MixedClass, tol: Tolerances = DEFAULT_TOL
) -> Certificate:
    """Check that ``sum w_i |psi_i><psi_i|`` equals ``rho`` with every ``psi_i`` allowed in ``claimed``."""
    rho = np.asarray(rho, dtype=complex)
    claimed = MixedClass(claimed)
    weights = np.array([w for w, _ in parts], dtype=float)
    if weights.size == 0:
        raise DecompositionError("empty decomposition")
    if np.any(weights < 0):
        raise DecompositionError("negative weight", int(np.argmin(weights)))
    if abs(weights.sum() - 1.0) > 1e-9:
        raise DecompositionError(f"weights sum to {weights.sum()!r}, not 1")
    recon = np.zeros((DIM, DIM), dtype=complex)
    seen: dict[bytes, Any] = {}
    for i, (w, psi) in enumerate(parts):
        psi = np.asarray(psi, dtype=complex)
        if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
            raise DecompositionError("component is not normalized", i)
        if w == 0:
            continue
        key = psi.tobytes()
        if key not in seen:
            seen[key] = classify_pure(psi, tol)
        pc = seen[key]
        if pc.kind not in _ALLOWED[claimed]:
            raise DecompositionError(f"component {i} is {pc}, not allowed in class {claimed.name}", i)
        recon += w * projector(psi)
    err = float(np.max(np.abs(recon - rho)))
    if err > 1e-9:
        raise DecompositionError(f"reconstruction error {err:.3e} exceeds 1e-9")
    return Certificate(
        CertKind.EXPLICIT_DECOMPOSITION,
        "upper",
        claimed,
        {"components": len(parts), "reconstruction_error": err},
    )


_PAULI_EIGEN = {
    "I": ((np.array([1, 0], dtype=complex), 1), (np.array([0, 1], dtype=complex), 1)),
    "X": ((np.array([1, 1]) / math.sqrt(2), 1), (np.array([1, -1]) / math.sqrt(2), -1)),
    "Y": ((np.array([1, 1j]) / math.sqrt(2), 1), (np.array([1, -1j]) / math.sqrt(2), -1)),
    "Z": ((np.array([1, 0], dtype=complex), 1), (np.array([0, 1], dtype=complex), -1)),
}
_PAULI_MAT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_separable_decomposition(m) -> list[tuple[float, np.ndarray]]:
    """Product-vector decomposition of a Hermitian ``m`` close to the identity.

    Writes ``m = x*1 + sum_P c_P P`` over the 63 non-identity Pauli strings and
    uses ``|c_P| (1 + sign(c_P) P) = 2|c_P| Pi_+`` with ``Pi_+`` spanned by
    product eigenvectors.  Requires ``sum |c_P| <= x``.
    """
    m = np.asarray(m, dtype=complex)
    x = float(np.trace(m).real) / DIM
    parts: list[tuple[float, np.ndarray]] = []
    total = 0.0
    for labels in itertools.product("IXYZ", repeat=3):
        if labels == ("I", "I", "I"):
            continue
        op = np.kron(np.kron(_PAULI_MAT[labels[0]], _PAULI_MAT[labels[1]]), _PAULI_MAT[labels[2]])
        c = float(np.real(np.trace(m @ op))) / DIM
        if c == 0.0:
            continue
        total += abs(c)
        sign = 1 if c > 0 else -1
        for (va, la), (vb, lb), (vc, lc) in itertools.product(*(_PAULI_EIGEN[s] for s in labels)):
            if la * lb * lc == sign:
                parts.append((2 * abs(c), np.kron(np.kron(va, vb), vc)))
    rest = x - total
    if rest < -1e-15:
        raise DecompositionError(f"Pauli weight {total:.6g} exceeds identity weight {x:.6g}")
    for k in range(DIM):
        parts.append((max(rest, 0.0), basis_state(format(k, "03b"))))
    return parts


def family_state_decomposition(p: float) -> list[tuple[float, np.ndarray]]:
    parts = [((1 - p) / DIM, basis_state(format(k, "03b"))) for k in range(DIM)]
    parts.append((p, W_MAX_GHZ.copy()))
    return parts


def recognize_family_state(rho, atol: float = 1e-12) -> float | None:
    rho = np.asarray(rho, dtype=complex)
    overlap = float(np.real(np.vdot(W_MAX_GHZ, rho @ W_MAX_GHZ)))
    p = (DIM * overlap - 1) / (DIM - 1)
    if not -atol <= p <= 1 + atol:
        return None
    p = min(max(p, 0.0), 1.0)
    if np.max(np.abs(family_state(p) - rho)) > atol:
        return None
    return p


def _is_diagonal(rho, atol: float = 1e-14) -> bool:
    rho = np.asarray(rho)
    return float(np.max(np.abs(rho - np.diag(np.diag(rho))))) <= atol


# ---------------------------------------------------------------------------
# orchestration


def classify_mixed(
    rho,
    cfg: OptimizerConfig = OptimizerConfig(),
    tol: Tolerances = DEFAULT_TOL,
    decomposition: tuple[Sequence[tuple[float, np.ndarray]], MixedClass] | None = None,
) -> ClassVerdict:
    """Bracket the class of ``rho`` between proven lower and upper bounds.

    Evidence is gathered in a fixed order: pure-state class, PPT signature,
    witness battery, low-rank PPT rule, decompositions (caller-supplied or
    recognized families), and finally the range criterion for PPT states that
    are still possibly separable.
    """
    rho = check_density(rho, tol)
    verdict = ClassVerdict()
    ranks = rank_signature(rho, tol)
    ppt = ppt_signature(rho, tol)

    # upper bounds first so that the witness refinement can be skipped when pointless;
    # they are appended to the evidence in pipeline order below
    uppers: list[Certificate] = []
    if ppt.all and ranks.r <= 4:
        uppers.append(Certificate(CertKind.RANK_RULE, "upper", MixedClass.B, {"rank": ranks.r}))
    supplied = []
    if decomposition is not None:
        parts, claimed = decomposition
        supplied.append(verify_decomposition(rho, parts, claimed, tol))
    family: list[Certificate] = []
    edge_params = recognize_edge_family(rho)
    fam_p = recognize_family_state(rho)
    if _is_diagonal(rho):
        parts = [(float(rho[k, k].real), basis_state(format(k, "03b"))) for k in range(DIM)]
        cert = verify_decomposition(rho, parts, MixedClass.S, tol)
        cert.payload["family"] = "diagonal"
        family.append(cert)
    elif edge_params is not None:
        cert = verify_decomposition(rho, edge_family_bisep_decomposition(edge_params), MixedClass.B, tol)
        cert.payload["family"] = "edge"
        family.append(cert)
    elif fam_p is not None:
        cert = verify_decomposition(rho, family_state_decomposition(fam_p), MixedClass.W, tol)
        cert.payload["family"] = "noisy-W"
        family.append(cert)
    upper_hint = min([c.cls for c in uppers + supplied + family], default=MixedClass.GHZ)

    # (i) purity
    purity = float(np.real(np.trace(rho @ rho)))
    if purity > PURITY_THRESHOLD:
        w, v = eig_hermitian(rho)
        pc = classify_pure(v[:, -1], tol)
        cls = _PURE_TO_MIXED[pc.kind]
        payload = {"pure_class": str(pc), "purity": purity}
        verdict.add(Certificate(CertKind.PURE_STATE_CLASS, "lower", cls, payload))
        verdict.add(Certificate(CertKind.PURE_STATE_CLASS, "upper", cls, dict(payload)))

    # (ii) PPT signature
    if not ppt.all:
        verdict.add(Certificate(CertKind.PPT_SIGNATURE, "lower", MixedClass.B, {"ppt": list(ppt)}))

    # (iii) witness battery
    for name in ("W1", "W2", "GHZ"):
        wit = std_witness(name)
        target = MixedClass.W if wit.boundary is Boundary.B else MixedClass.GHZ
        value = evaluate(wit, rho)
        refined = False
        if value >= -tol.zero_tol and verdict.lower < target <= upper_hint:
            value, angles = optimize_violation(rho, wit, cfg)
            refined = True
        if value < -tol.zero_tol:
            payload = {"witness": name, "value": value, "refined": refined}
            verdict.add(Certificate(CertKind.WITNESS_VIOLATION, "lower", target, payload))

    # (iv) rank rule, (v) decompositions
    for cert in uppers + supplied + family:
        verdict.add(cert)

    # (vi) range criterion for PPT states not yet shown entangled
    if ppt.all and verdict.lower == MixedClass.S and verdict.upper > MixedClass.S:
        if edge_params is not None:
            analytic = edge_family_is_edge(edge_params, tol)
            search = product_in_ranges_search(rho, cfg, tol)
            payload = {
                "a": edge_params.a,
                "b": edge_params.b,
                "c": edge_params.c,
                "analytic_is_edge": analytic,
                "residual": search.residual,
                "search_is_edge": search.is_edge,
            }
            if analytic and search.is_edge:
                verdict.add(Certificate(CertKind.KNOWN_FAMILY, "lower", MixedClass.B, payload))
        elif ranks.r < DIM:
            search = product_in_ranges_search(rho, cfg, tol)
            if search.is_edge:
                verdict.add(
                    Certificate(CertKind.RANGE_CRITERION, "lower", MixedClass.B, {"residual": search.residual})
                )
    return verdict


# ---------------------------------------------------------------------------
# the W\B ball


@dataclass
class WBallSample:
    eps: float
    w2_value: float
    certified: bool


@dataclass
class WBallReport:
    p: float
    delta: float
    eps_interval: tuple[float, float]
    robustness: float
    separability: float
    samples: list[WBallSample]

    @property
    def certified(self) -> int:
        return sum(s.certified for s in self.samples)


def w_ball_exhibit(p: float, delta: float, n_samples: int = 100, seed: int = 42, tol: Tolerances = DEFAULT_TOL) -> WBallReport:
    """Random perturbations of ``family_state(p)`` shown to stay inside W\\B.

    Each sample draws a random density matrix ``sigma`` and a weight ``eps`` in
    the upper half of ``(0, min(robustness, separability floor))``; it counts as
    certified when the W2 witness is violated and the explicit W-class
    decomposition (W vector plus Pauli product decomposition) verifies.
    """
    if not (p - 0.6 > delta and 1 - p > delta and delta > 0):
        raise InvalidInputError("w_ball_exhibit needs p - 3/5 > delta and 1 - p > delta with delta > 0")
    rob = robustness_bound(p)
    sep = separability_floor(p)
    eps_hi = min(rob, sep)
    rng = np.random.default_rng(seed)
    w2 = std_witness("W2")
    samples = []
    for _ in range(n_samples):
        sigma = random_density(rng)
        eps = eps_hi * rng.uniform(0.5, 1.0)
        rho = perturbed_family(p, eps, sigma, tol)
        value = evaluate(w2, rho)
        noise = (1 - eps) * (1 - p) / DIM * np.eye(DIM) + eps * sigma
        parts = [((1 - eps) * p, W_MAX_GHZ.copy())] + pauli_separable_decomposition(noise)
        try:
            verify_decomposition(rho, parts, MixedClass.W, tol)
            ok = True
        except DecompositionError:
            ok = False
        samples.append(WBallSample(float(eps), value, bool(ok and value < 0)))
    return WBallReport(p, delta, (0.0, eps_hi), rob, sep, samples)
