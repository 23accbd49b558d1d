"""Pure three-qubit vectors: canonical generators, the tangle and the pure class."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from triwit.qcore import (
    DEFAULT_TOL,
    InvalidInputError,
    Partition,
    Party,
    Tolerances,
    check_pure,
    rank_kernel,
    reduced_state,
)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class GhzGenParams:
    """Magnitudes and phase of the five-term generator of an arbitrary vector."""

    lambdas: tuple[float, float, float, float, float]
    theta: float = 0.0

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.shape != (5,):
            raise InvalidInputError("GHZ-type generator needs exactly five magnitudes")
        if np.any(lam < 0):
            raise InvalidInputError("generator magnitudes must be nonnegative")
        if abs(float(np.sum(lam**2)) - 1.0) > _NORM_TOL:
            raise InvalidInputError("generator magnitudes must satisfy sum(lambda^2) = 1")
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidInputError("theta must lie in [0, pi]")


@dataclass(frozen=True)
class WGenParams:
    lambdas: tuple[float, float, float, float]

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.shape != (4,):
            raise InvalidInputError("W-type generator needs exactly four magnitudes")
        if np.any(lam < 0):
            raise InvalidInputError("generator magnitudes must be nonnegative")
        if abs(float(np.sum(lam**2)) - 1.0) > _NORM_TOL:
            raise InvalidInputError("generator magnitudes must satisfy sum(lambda^2) = 1")


class PureKind(enum.IntEnum):
    PRODUCT = 0
    BISEP = 1
    W = 2
    GHZ = 3


class PureClass(NamedTuple):
    kind: PureKind
    partition: Optional[Partition] = None

    def __str__(self) -> str:
        if self.kind is PureKind.BISEP:
            return f"Bisep({self.partition.value})"
        return {PureKind.PRODUCT: "Product", PureKind.W: "Wtype", PureKind.GHZ: "GHZtype"}[self.kind]


GHZ = np.zeros(8, dtype=complex)
GHZ[[0, 7]] = 1 / math.sqrt(2)
W = np.zeros(8, dtype=complex)
W[[4, 2, 1]] = 1 / math.sqrt(3)


def gen_ghz_type(p: GhzGenParams) -> np.ndarray:
    l0, l1, l2, l3, l4 = p.lambdas
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = l0
    psi[0b100] = l1 * np.exp(1j * p.theta)
    psi[0b101] = l2
    psi[0b110] = l3
    psi[0b111] = l4
    return psi


def gen_w_type(p: WGenParams) -> np.ndarray:
    l0, l1, l2, l3 = p.lambdas
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = l0
    psi[0b100] = l1
    psi[0b101] = l2
    psi[0b110] = l3
    return psi


def hyperdeterminant(psi) -> complex:
    """Cayley hyperdeterminant ``d1 - 2 d2 + 4 d3`` of the 2x2x2 amplitude tensor.

    Works for unnormalized vectors (it is a homogeneous quartic).
    """
    a = np.asarray(psi, dtype=complex).reshape(2, 2, 2)
    a000, a001, a010, a011 = a[0, 0, 0], a[0, 0, 1], a[0, 1, 0], a[0, 1, 1]
    a100, a101, a110, a111 = a[1, 0, 0], a[1, 0, 1], a[1, 1, 0], a[1, 1, 1]
    d1 = a000**2 * a111**2 + a001**2 * a110**2 + a010**2 * a101**2 + a100**2 * a011**2
    d2 = (
        a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001
    )
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return complex(d1 - 2 * d2 + 4 * d3)


def tangle(psi) -> float:
    """Three-tangle ``4 |Det|`` of a normalized vector; 1 for GHZ, 0 on the W-type closure."""
    return 4.0 * abs(hyperdeterminant(check_pure(psi, atol=1e-10)))


def reduced_ranks(psi, tol: Tolerances = DEFAULT_TOL) -> tuple[int, int, int]:
    return tuple(rank_kernel(reduced_state(psi, x), tol)[0] for x in Party)


def classify_pure(psi, tol: Tolerances = DEFAULT_TOL) -> PureClass:
    psi = check_pure(psi, atol=1e-10)
    ranks = reduced_ranks(psi, tol)
    ones = [x for x, r in zip(Party, ranks) if r == 1]
    if len(ones) == 3:
        return PureClass(PureKind.PRODUCT)
    if len(ones) == 1:
        return PureClass(PureKind.BISEP, Partition.of(ones[0]))
    if tangle(psi) > tol.zero_tol:
        return PureClass(PureKind.GHZ)
    return PureClass(PureKind.W)


def _quartic_coefficients(psi1: np.ndarray, psi2: np.ndarray) -> np.ndarray:
    """Coefficients (highest degree first) of z -> Det(psi1 + z psi2).

    Obtained by exact interpolation at the fifth roots of unity.
    """
    nodes = np.exp(2j * np.pi * np.arange(5) / 5)
    values = np.array([hyperdeterminant(psi1 + z * psi2) for z in nodes])
    # values_k = sum_j c_j nodes_k**j, inverted by the conjugate DFT
    low_first = np.array([np.sum(values * nodes ** (-j)) / 5 for j in range(5)])
    return low_first[::-1]


def zero_tangle_mix(psi1, psi2, tol: Tolerances = DEFAULT_TOL) -> tuple[complex, complex, np.ndarray]:
    """Normalized combination ``alpha psi1 + beta psi2`` with vanishing tangle.

    The hyperdeterminant along the pencil is a quartic in ``z = beta/alpha``;
    its roots come from the companion matrix (``numpy.roots``).  A drop in
    degree means ``alpha = 0`` is also a root, i.e. ``psi2`` itself qualifies.
    Among all candidates the one with the smallest tangle wins, ties going to
    the smallest ``|z|``.
    """
    psi1 = check_pure(psi1, atol=1e-10)
    psi2 = check_pure(psi2, atol=1e-10)
    if np.linalg.matrix_rank(np.stack([psi1, psi2]), tol=1e-10) < 2:
        raise InvalidInputError("zero_tangle_mix needs linearly independent vectors")

    coeffs = _quartic_coefficients(psi1, psi2)
    scale = float(np.max(np.abs(coeffs)))
    if scale <= tol.zero_tol * 1e-2:
        return 1.0 + 0j, 0j, psi1.copy()

    trimmed = np.trim_zeros(np.where(np.abs(coeffs) > 1e-14 * scale, coeffs, 0), "f")
    # z = 0 exactly, so a zero-tangle psi1 comes back untouched rather than via a roundoff root
    candidates: list[tuple[float, float, complex, complex, np.ndarray]] = [(tangle(psi1), 0.0, 1.0 + 0j, 0j, psi1.copy())]
    for z in np.roots(trimmed) if trimmed.size > 1 else []:
        z = _polish_root(coeffs, complex(z))
        v = psi1 + z * psi2
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            continue
        mix = v / norm
        candidates.append((tangle(mix), abs(z), 1.0 / norm, z / norm, mix))
    if trimmed.size < coeffs.size:
        candidates.append((tangle(psi2), math.inf, 0j, 1.0 + 0j, psi2.copy()))
    tau, _, alpha, beta, mix = min(candidates, key=lambda c: (round(c[0], 15), c[1]))
    return complex(alpha), complex(beta), mix


def _polish_root(coeffs: np.ndarray, z: complex, steps: int = 3) -> complex:
    deriv = np.polyder(coeffs)
    f = abs(np.polyval(coeffs, z))
    for _ in range(steps):
        d = np.polyval(deriv, z)
        if d == 0:
            break
        trial = z - np.polyval(coeffs, z) / d
        ft = abs(np.polyval(coeffs, trial))
        if ft >= f:
            break
        z, f = trial, ft
    return complex(z)
