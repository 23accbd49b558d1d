"""PPT checks, the (7,7,7,7) edge-state family and range/kernel edge tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import least_squares

from triwit.qcore import (
    DEFAULT_TOL,
    DIM,
    InvalidInputError,
    Partition,
    Party,
    Tolerances,
    basis_state,
    check_density,
    eig_hermitian,
    normalize,
    partial_transpose,
    rank_kernel,
)
from triwit.overlap import OptimizerConfig

EDGE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class EdgeFamilyParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.c > 0):
            raise InvalidInputError("edge family parameters a, b, c must be positive")

    @property
    def n(self) -> float:
        a, b, c = self.a, self.b, self.c
        return 2 + a + 1 / a + b + 1 / b + c + 1 / c


class PptSignature(NamedTuple):
    pptA: bool
    pptB: bool
    pptC: bool

    @property
    def all(self) -> bool:
        return self.pptA and self.pptB and self.pptC


@dataclass
class EdgeVerdict:
    """Outcome of the product-vector-in-ranges search.

    A large residual is numerical evidence that no product vector fits the four
    ranges, not a proof.
    """

    is_edge: bool
    residual: float
    witness_vector: np.ndarray


def ppt_signature(rho, tol: Tolerances = DEFAULT_TOL) -> PptSignature:
    rho = check_density(rho, tol, psd=False)
    flags = [eig_hermitian(partial_transpose(rho, x))[0][0] >= -tol.psd_tol for x in Party]
    return PptSignature(*(bool(f) for f in flags))


def edge_family(p: EdgeFamilyParams) -> np.ndarray:
    a, b, c = p.a, p.b, p.c
    rho = np.diag(np.array([1, a, b, c, 1 / c, 1 / b, 1 / a, 1], dtype=complex))
    rho[0, 7] = rho[7, 0] = 1
    return rho / p.n


def edge_family_kernels(p: EdgeFamilyParams) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Kernel vectors of rho and of its partial transposes on A, B and C."""
    k = basis_state("000") - basis_state("111")
    ka = basis_state("011") - p.c * basis_state("100")
    kb = basis_state("010") - p.b * basis_state("101")
    kc = basis_state("001") - p.a * basis_state("110")
    return normalize(k), normalize(ka), normalize(kb), normalize(kc)


def edge_family_is_edge(p: EdgeFamilyParams, tol: Tolerances = DEFAULT_TOL) -> bool:
    """A product vector fits all four ranges exactly when ``a*b == c``."""
    return abs(p.a * p.b - p.c) > tol.zero_tol * max(1.0, p.c)


def recognize_edge_family(rho, atol: float = 1e-12) -> EdgeFamilyParams | None:
    """Recover ``(a, b, c)`` when ``rho`` is a member of the edge family."""
    rho = np.asarray(rho, dtype=complex)
    d = np.diag(rho).real
    if d[0] <= 0:
        return None
    a, b, c = d[1] / d[0], d[2] / d[0], d[3] / d[0]
    if min(a, b, c) <= 0:
        return None
    try:
        p = EdgeFamilyParams(float(a), float(b), float(c))
    except InvalidInputError:
        return None
    if np.max(np.abs(edge_family(p) - rho)) > atol:
        return None
    return p


# ---------------------------------------------------------------------------
# product vector search


def _qubit(theta: float, phi: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta) * complex(math.cos(phi), math.sin(phi))])


def _factors(x) -> list[np.ndarray]:
    return [_qubit(x[0], x[1]), _qubit(x[2], x[3]), _qubit(x[4], x[5])]


def _kron3(f) -> np.ndarray:
    return np.kron(np.kron(f[0], f[1]), f[2])


def product_in_ranges_search(rho, cfg: OptimizerConfig = OptimizerConfig(starts=16), tol: Tolerances = DEFAULT_TOL) -> EdgeVerdict:
    """Look for a product vector ``phi`` in R(rho) with each ``phi^{*X}`` in R(rho^{T_X}).

    Minimizes the summed squared norm of the kernel components of ``phi`` and
    of its three partial conjugates, over product vectors parametrized as
    ``(cos t, e^{i f} sin t)`` per qubit.  ``is_edge`` is declared when the best
    residual exceeds 1e-6.
    """
    rho = check_density(rho, tol, psd=False)
    kernels = [rank_kernel(rho, tol)[1]]
    kernels += [rank_kernel(partial_transpose(rho, x), tol)[1] for x in Party]
    if all(k.shape[1] == 0 for k in kernels):
        return EdgeVerdict(False, 0.0, basis_state("000"))
    bras = [k.conj().T for k in kernels]

    def components(x):
        f = _factors(x)
        out = [bras[0] @ _kron3(f)]
        for party in range(3):
            g = list(f)
            g[party] = g[party].conj()
            out.append(bras[party + 1] @ _kron3(g))
        z = np.concatenate(out)
        return np.concatenate([z.real, z.imag])

    rng = np.random.default_rng(cfg.seed)
    lows = np.zeros(6)
    highs = np.array([math.pi / 2, 2 * math.pi] * 3)
    best_x, best_r = None, math.inf
    for _ in range(cfg.starts):
        x0 = rng.uniform(lows, highs)
        sol = least_squares(components, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=cfg.max_iters)
        r = float(np.sum(sol.fun**2))
        if r < best_r:
            best_x, best_r = sol.x, r
        if best_r < 1e-20:
            break
    return EdgeVerdict(best_r > EDGE_THRESHOLD, best_r, _kron3(_factors(best_x)))


# ---------------------------------------------------------------------------
# explicit biseparable decomposition


def edge_family_bisep_decomposition(
    p: EdgeFamilyParams, partition: Partition = Partition.A_BC, n_phases: int = 4
) -> list[tuple[float, np.ndarray]]:
    """Weights and vectors whose projector sum is ``edge_family(p)``.

    With X the isolated party, the corner coherence lives in the 2x2 space
    spanned by X and ``{|00>, |11>}`` of the other two qubits.  That block is
    a sum of ``n_phases`` product vectors across the cut,
    ``(x0|0> + x1 e^{i f}|1>) (y0|00> + y1 e^{-i f}|11>)``, at equispaced
    phases ``f``; all other diagonal entries are basis projectors.
    """
    if n_phases < 3:
        raise InvalidInputError("phase averaging needs at least three phases")
    rho = edge_family(p)
    x = int(partition.party)
    n = p.n

    def index(bx: int, rest: tuple[int, int]) -> int:
        bits = list(rest)
        bits.insert(x, bx)
        return 4 * bits[0] + 2 * bits[1] + bits[2]

    block = [index(0, (0, 0)), index(0, (1, 1)), index(1, (0, 0)), index(1, (1, 1))]
    d01 = rho[block[1], block[1]].real * n
    # diag of the block is (1, d01, 1/d01, 1): x1/x0 = 1/sqrt(d01), y1/y0 = sqrt(d01)
    xv = normalize([1.0, 1.0 / math.sqrt(d01)])
    yv = normalize([1.0, math.sqrt(d01)])
    block_weight = (2 + d01 + 1 / d01) / n

    parts: list[tuple[float, np.ndarray]] = []
    for k in range(DIM):
        if k not in block:
            parts.append((float(rho[k, k].real), basis_state(format(k, "03b"))))
    for j in range(n_phases):
        f = 2 * math.pi * j / n_phases
        e = np.exp(1j * f)
        single = np.array([xv[0], xv[1] * e])
        pair = np.zeros((2, 2), dtype=complex)
        pair[0, 0] = yv[0]
        pair[1, 1] = yv[1] * np.conj(e)
        t = np.moveaxis(np.multiply.outer(single, pair), 0, x)
        parts.append((block_weight / n_phases, t.reshape(DIM)))
    return parts
