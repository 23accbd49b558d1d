"""Projector witnesses ``c*1 - |v><v|`` for the B/W and W/GHZ boundaries."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from triwit.qcore import (
    DEFAULT_TOL,
    DIM,
    InvalidInputError,
    Partition,
    Party,
    Tolerances,
    check_hermitian,
    check_pure,
    eig_hermitian,
    local_unitary,
    normalize,
    projector,
    random_pure,
    random_unitary,
    rank_kernel,
    su2,
)
from triwit.puretri import GHZ, W, WGenParams, gen_w_type


class Boundary(enum.Enum):
    """Which convex set the witness is nonnegative on.

    ``B`` witnesses (W-witnesses) are nonnegative on all biseparable states;
    ``W`` witnesses (GHZ-witnesses) on the whole W class.
    """

    B = "B-boundary"
    W = "W-boundary"


@dataclass(frozen=True)
class Witness:
    op: np.ndarray = field(repr=False)
    boundary: Boundary
    c: float
    proj: np.ndarray = field(repr=False)
    name: str = "projector"

    def rotated(self, u: np.ndarray) -> "Witness":
        """Same witness with its generating vector moved by the unitary ``u``."""
        return projector_witness(self.c, u @ self.proj, self.boundary, name=f"{self.name}*U")


def projector_witness(c: float, psi, boundary: Boundary, name: str = "projector") -> Witness:
    if not 0.0 < c < 1.0:
        raise InvalidInputError("witness constant must lie in (0, 1)")
    psi = check_pure(psi, atol=1e-10)
    op = c * np.eye(DIM, dtype=complex) - projector(psi)
    return Witness(op, Boundary(boundary), float(c), psi.copy(), name)


def std_witness(kind: str) -> Witness:
    """One of the three textbook witnesses: ``"GHZ"``, ``"W1"`` or ``"W2"``.

    GHZ: 3/4 - P_GHZ, the top GHZ/W-vector overlap is 3/4.
    W1:  2/3 - P_W, the top W/B-vector overlap is 2/3.
    W2:  1/2 - P_GHZ, the top GHZ/B-vector overlap is 1/2.
    """
    kind = kind.upper()
    if kind == "GHZ":
        return projector_witness(0.75, GHZ, Boundary.W, name="GHZ")
    if kind == "W1":
        return projector_witness(2.0 / 3.0, W, Boundary.B, name="W1")
    if kind == "W2":
        return projector_witness(0.5, GHZ, Boundary.B, name="W2")
    raise InvalidInputError(f"unknown standard witness {kind!r}")


def evaluate(w: Witness, rho) -> float:
    """``Tr(W rho)``; negative values detect ``rho`` outside the witness's set."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.sum(w.op.T * rho)))


@dataclass(frozen=True)
class CanonicalWitnessParts:
    """Split ``W = Q - eps*1`` with ``Q`` positive semidefinite."""

    Q: np.ndarray
    eps: float


@dataclass
class CanonicalReport:
    checks: dict[str, bool]
    kernel_dim: int
    min_eigenvalue: float

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def validate_canonical(parts: CanonicalWitnessParts, boundary: Boundary, tol: Tolerances = DEFAULT_TOL) -> CanonicalReport:
    q = check_hermitian(parts.Q)
    lam_min = float(eig_hermitian(q)[0][0])
    rank, _ = rank_kernel(q, tol)
    k = q.shape[0] - rank
    checks = {
        "Q_psd": lam_min >= -tol.psd_tol,
        "eps_positive": parts.eps > 0,
    }
    if Boundary(boundary) is Boundary.W:
        checks["kernel_dim_is_1"] = k == 1
    else:
        checks["kernel_dim_below_4"] = k < 4
    return CanonicalReport(checks, k, lam_min)


def canonical_parts(w: Witness) -> CanonicalWitnessParts:
    """The natural split of a projector witness: ``Q = 1 - P``, ``eps = 1 - c``."""
    eps = 1.0 - w.c
    return CanonicalWitnessParts(w.op + eps * np.eye(DIM), eps)


def optimize_violation(rho, base: Witness, cfg=None) -> tuple[float, np.ndarray]:
    """Minimize ``Tr(W_U rho)`` over local unitaries applied to the generating vector.

    Every rotated witness separates the same convex set, so the minimum is a
    sharper test than ``base`` alone.  The identity rotation is always the first
    start, hence the result never exceeds ``evaluate(base, rho)``.  Returns the
    best value and the nine Euler angles that achieve it.
    """
    from triwit.overlap import OptimizerConfig, multistart_minimize

    cfg = cfg or OptimizerConfig()
    rho = np.asarray(rho, dtype=complex)
    v = base.proj

    def value(x):
        u = local_unitary(su2(x[0:3]), su2(x[3:6]), su2(x[6:9]))
        phi = u @ v
        return base.c - float(np.real(np.vdot(phi, rho @ phi)))

    def sample(rng):
        return rng.uniform(0.0, 2 * math.pi, size=9)

    x, f = multistart_minimize(value, sample, cfg, first_start=np.zeros(9))
    direct = evaluate(base, rho)
    if f > direct:
        return direct, np.zeros(9)
    return f, x


# ---------------------------------------------------------------------------
# samplers for the honest classes


def random_product(rng: np.random.Generator) -> np.ndarray:
    factors = [random_pure(rng, 2) for _ in range(3)]
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


def random_bisep(rng: np.random.Generator, partition: Partition | None = None) -> np.ndarray:
    """Random vector that factorizes across ``partition`` (random cut if None)."""
    if partition is None:
        partition = list(Partition)[rng.integers(3)]
    single = random_pure(rng, 2)
    pair = random_pure(rng, 4)
    t = np.multiply.outer(single, pair.reshape(2, 2))
    x = int(partition.party)
    return np.moveaxis(t, 0, x).reshape(DIM)


def random_w_type(rng: np.random.Generator) -> np.ndarray:
    lam = np.abs(rng.standard_normal(4))
    lam /= np.linalg.norm(lam)
    psi = gen_w_type(WGenParams(tuple(lam)))
    u = local_unitary(random_unitary(rng), random_unitary(rng), random_unitary(rng))
    return normalize(u @ psi)


def random_mixture(rng: np.random.Generator, samplers, max_terms: int = 8) -> np.ndarray:
    """Convex mixture of 1..max_terms random projectors with Dirichlet(1) weights."""
    n = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(n))
    rho = np.zeros((DIM, DIM), dtype=complex)
    for w in weights:
        sampler = samplers[rng.integers(len(samplers))]
        rho += w * projector(sampler(rng))
    return rho


def random_s_state(rng: np.random.Generator) -> np.ndarray:
    return random_mixture(rng, [random_product])


def random_b_state(rng: np.random.Generator) -> np.ndarray:
    return random_mixture(rng, [random_product, random_bisep])


def random_w_state(rng: np.random.Generator) -> np.ndarray:
    return random_mixture(rng, [random_product, random_bisep, random_w_type])
