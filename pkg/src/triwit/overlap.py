"""Maximal squared overlaps of a vector with the biseparable and W-type sets."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from triwit.qcore import (
    InvalidInputError,
    Partition,
    Party,
    check_pure,
    eig_hermitian,
    local_unitary,
    reduced_state,
    su2,
)
from triwit.puretri import GHZ, W


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 64
    max_iters: int = 2000
    ftol: float = 1e-12
    seed: int = 42

    def __post_init__(self):
        if self.starts < 1 or self.max_iters < 1 or not self.ftol > 0 or self.seed < 0:
            raise InvalidInputError("optimizer settings must be positive")


@dataclass(frozen=True)
class SymmetricWParams:
    """Symmetric W vector ``k0|000> + k1(|100>+|010>+|001>)`` under a common rotation.

    The rotation maps ``|0> -> alpha|0> + beta|1>`` and ``|1> -> conj(beta)|0> - conj(alpha)|1>``
    on every qubit.
    """

    kappa0: float
    kappa1: float
    alpha: complex
    beta: complex

    def __post_init__(self):
        if abs(self.kappa0**2 + 3 * self.kappa1**2 - 1.0) > 1e-12:
            raise InvalidInputError("kappa0^2 + 3 kappa1^2 must equal 1")
        if abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0) > 1e-12:
            raise InvalidInputError("|alpha|^2 + |beta|^2 must equal 1")

    @classmethod
    def from_angles(cls, t: float, u: float, phi_a: float, phi_b: float) -> "SymmetricWParams":
        return cls(
            math.cos(t),
            math.sin(t) / math.sqrt(3),
            math.cos(u) * np.exp(1j * phi_a),
            math.sin(u) * np.exp(1j * phi_b),
        )

    def vector(self) -> np.ndarray:
        psi = np.zeros(8, dtype=complex)
        psi[0b000] = self.kappa0
        psi[[0b100, 0b010, 0b001]] = self.kappa1
        a, b = self.alpha, self.beta
        r = np.array([[a, np.conj(b)], [b, -np.conj(a)]])
        return local_unitary(r, r, r) @ psi


def max_bisep_overlap(psi) -> tuple[float, Partition]:
    """Largest squared overlap of ``psi`` with a vector that is product across some cut.

    Across each cut this is the top eigenvalue of the isolated party's reduced
    matrix; the best cut wins, ties resolved in the order A-BC, B-AC, C-AB.
    """
    psi = check_pure(psi, atol=1e-10)
    best_val, best_part = -1.0, Partition.A_BC
    for x in Party:
        top = float(eig_hermitian(reduced_state(psi, x))[0][-1])
        if top > best_val + 1e-15:
            best_val, best_part = top, Partition.of(x)
    return best_val, best_part


def w_manifold_vector(params: np.ndarray) -> np.ndarray:
    """Point of the W-type manifold from 12 reals.

    The first three are hyperspherical angles for the four generator
    magnitudes; the remaining nine are Euler angles of one SU(2) per party.
    """
    t1, t2, t3 = params[:3]
    s1, s2 = math.sin(t1), math.sin(t2)
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = math.cos(t1)
    psi[0b100] = s1 * math.cos(t2)
    psi[0b101] = s1 * s2 * math.cos(t3)
    psi[0b110] = s1 * s2 * math.sin(t3)
    u = local_unitary(su2(params[3:6]), su2(params[6:9]), su2(params[9:12]))
    return u @ psi


def _su2_entries(a: float, b: float, c: float) -> tuple[complex, complex, complex, complex]:
    cb, sb = math.cos(b / 2), math.sin(b / 2)
    ep = cmath.exp(0.5j * (a + c))
    em = cmath.exp(0.5j * (a - c))
    return cb / ep, -sb / em, sb * em, cb * ep


def _w_overlap_amplitude(x, bra: list[complex]) -> complex:
    """``<psi| w_manifold_vector(x)>`` with ``bra`` the conjugated amplitudes of psi."""
    t1, t2, t3 = x[0], x[1], x[2]
    s1, s2 = math.sin(t1), math.sin(t2)
    l0 = math.cos(t1)
    l1 = s1 * math.cos(t2)
    l2 = s1 * s2 * math.cos(t3)
    l3 = s1 * s2 * math.sin(t3)
    ua00, ua01, ua10, ua11 = _su2_entries(x[3], x[4], x[5])
    ub00, ub01, ub10, ub11 = _su2_entries(x[6], x[7], x[8])
    uc00, uc01, uc10, uc11 = _su2_entries(x[9], x[10], x[11])
    # contract the bra with column 0 (resp. 1) of U_A
    m0 = [ua00 * bra[k] + ua10 * bra[4 + k] for k in range(4)]
    m1 = [ua01 * bra[k] + ua11 * bra[4 + k] for k in range(4)]
    # then with columns of U_B -> vectors over C
    m00 = (ub00 * m0[0] + ub10 * m0[2], ub00 * m0[1] + ub10 * m0[3])
    m10 = (ub00 * m1[0] + ub10 * m1[2], ub00 * m1[1] + ub10 * m1[3])
    m11 = (ub01 * m1[0] + ub11 * m1[2], ub01 * m1[1] + ub11 * m1[3])
    c0 = (uc00, uc10)
    c1 = (uc01, uc11)

    def dot(m, c):
        return m[0] * c[0] + m[1] * c[1]

    return l0 * dot(m00, c0) + l1 * dot(m10, c0) + l2 * dot(m10, c1) + l3 * dot(m11, c0)


def multistart_minimize(fun, sample_start, cfg: OptimizerConfig, first_start=None):
    """Nelder-Mead from ``cfg.starts`` seeded starting points; best result wins.

    Each run is restarted from its own optimum until the value stops improving,
    which guards against simplex collapse in higher dimensions.  Ties resolve
    to the lowest start index.
    """
    rng = np.random.default_rng(cfg.seed)
    starts = [sample_start(rng) for _ in range(cfg.starts)]
    if first_start is not None:
        starts[0] = np.asarray(first_start, dtype=float)
    best_x, best_f = None, math.inf
    for x0 in starts:
        x, f = _nelder_mead_restarts(fun, x0, cfg)
        if f < best_f:
            best_x, best_f = x, f
    return best_x, best_f


def _nelder_mead_restarts(fun, x0, cfg: OptimizerConfig, max_restarts: int = 4):
    opts = {"maxiter": cfg.max_iters, "maxfev": 2 * cfg.max_iters, "xatol": 1e-10, "fatol": cfg.ftol}
    res = minimize(fun, x0, method="Nelder-Mead", options=opts)
    x, f = res.x, float(res.fun)
    for _ in range(max_restarts):
        res = minimize(fun, x, method="Nelder-Mead", options=opts)
        if float(res.fun) >= f - cfg.ftol:
            if float(res.fun) < f:
                x, f = res.x, float(res.fun)
            break
        x, f = res.x, float(res.fun)
    return x, f


def max_w_overlap(psi, cfg: OptimizerConfig = OptimizerConfig()) -> tuple[float, np.ndarray]:
    """Best squared overlap of ``psi`` with a W-type vector found by multistart search.

    The value is a lower bound on the true supremum.  The returned vector lies on
    the W-type manifold (zero tangle by construction).
    """
    psi = check_pure(psi, atol=1e-10)
    bra = [complex(z) for z in psi.conj()]

    def loss(x):
        return -abs(_w_overlap_amplitude(x, bra)) ** 2

    def sample(rng):
        return rng.uniform(0.0, 2 * math.pi, size=12)

    x, f = multistart_minimize(loss, sample, cfg)
    return -f, w_manifold_vector(x)


def symmetric_w_overlap_ghz(p: SymmetricWParams) -> float:
    return float(abs(np.vdot(GHZ, p.vector())) ** 2)


# Symmetric W vector with maximal GHZ overlap 3/4: kappa0 = 0, beta = -alpha = 1/sqrt(2).
OPTIMAL_SYMMETRIC_W = SymmetricWParams(0.0, 1 / math.sqrt(3), -1 / math.sqrt(2), 1 / math.sqrt(2))
