"""Dense linear algebra on the 2x2x2 Hilbert space.

Vectors carry 8 amplitudes indexed ``4*i_A + 2*i_B + i_C``, so qubit A is the
most significant bit and the basis reads 000, 001, ..., 111.  Density matrices
are plain ``(8, 8)`` complex arrays.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

logger = logging.getLogger(__name__)

DIM = 8
BASIS_LABELS = tuple(format(i, "03b") for i in range(DIM))


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


class Party(enum.IntEnum):
    A = 0
    B = 1
    C = 2


class Partition(enum.Enum):
    """Bipartite cut that isolates one party from the other two."""

    A_BC = "A-BC"
    B_AC = "B-AC"
    C_AB = "C-AB"

    @property
    def party(self) -> Party:
        return Party[self.value[0]]

    @classmethod
    def of(cls, party: Party) -> "Partition":
        return (cls.A_BC, cls.B_AC, cls.C_AB)[int(party)]


@dataclass(frozen=True)
class Tolerances:
    psd_tol: float = 1e-9
    rank_rel_tol: float = 1e-8
    zero_tol: float = 1e-10

    def __post_init__(self):
        for name in ("psd_tol", "rank_rel_tol", "zero_tol"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be strictly positive")


DEFAULT_TOL = Tolerances()


class RankSignature(NamedTuple):
    """Ranks of rho and of its partial transposes on A, B and C."""

    r: int
    rA: int
    rB: int
    rC: int

    @property
    def total(self) -> int:
        return self.r + self.rA + self.rB + self.rC


# ---------------------------------------------------------------------------
# validation and construction


def basis_state(label: str) -> np.ndarray:
    """Computational basis vector from a bit string such as ``"101"``."""
    v = np.zeros(DIM, dtype=complex)
    v[int(label, 2)] = 1.0
    return v


def check_pure(psi, atol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (DIM,):
        raise InvalidInputError(f"pure state must have 8 amplitudes, got shape {psi.shape}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > atol:
        raise InvalidInputError(f"pure state is not normalized (norm^2 = {norm2!r})")
    return psi


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InvalidInputError("cannot normalize the zero vector")
    return psi / norm


def check_hermitian(m, atol: float | None = None) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if atol is None:
        atol = 1e-10 * (1.0 + scale)
    if m.size and np.max(np.abs(m - m.conj().T)) > atol:
        raise InvalidInputError("matrix is not Hermitian")
    return m


def check_density(rho, tol: Tolerances = DEFAULT_TOL, psd: bool = True) -> np.ndarray:
    """Validate an 8x8 density matrix and return it as a complex array.

    Hermiticity and unit trace are checked to 1e-12; positivity (when ``psd``)
    against ``tol.psd_tol``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise InvalidInputError(f"density matrix must be 8x8, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise InvalidInputError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-12:
        raise InvalidInputError(f"density matrix trace is {tr.real!r}, expected 1")
    if psd:
        lam_min = eig_hermitian(rho)[0][0]
        if lam_min < -tol.psd_tol:
            raise InvalidInputError(f"density matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
    return rho


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def product_vector(a: Sequence[complex], b: Sequence[complex], c: Sequence[complex]) -> np.ndarray:
    """Normalized tensor product a (x) b (x) c of three single-qubit vectors."""
    factors = []
    for name, f in zip("abc", (a, b, c)):
        f = np.asarray(f, dtype=complex)
        if f.shape != (2,):
            raise InvalidInputError(f"factor {name} must have two amplitudes")
        norm = np.linalg.norm(f)
        if norm == 0:
            raise InvalidInputError(f"factor {name} has zero norm")
        factors.append(f / norm)
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


def local_unitary(ua: np.ndarray, ub: np.ndarray, uc: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(ua, ub), uc)


def su2(angles: Sequence[float]) -> np.ndarray:
    """SU(2) element Rz(a) Ry(b) Rz(c) from three Euler angles."""
    a, b, c = angles
    cb, sb = math.cos(b / 2), math.sin(b / 2)
    ep = np.exp(0.5j * (a + c))
    em = np.exp(0.5j * (a - c))
    return np.array([[cb / ep, -sb / em], [sb * em, cb * ep]], dtype=complex)


def random_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(rng: np.random.Generator, rank: int = DIM) -> np.ndarray:
    g = rng.standard_normal((DIM, rank)) + 1j * rng.standard_normal((DIM, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(rng: np.random.Generator, n: int = DIM) -> np.ndarray:
    return normalize(rng.standard_normal(n) + 1j * rng.standard_normal(n))


# ---------------------------------------------------------------------------
# partial operations


def partial_transpose(m, party: Party | Sequence[Party]) -> np.ndarray:
    """Transpose the indices of one party (or of several, applied in turn)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (DIM, DIM):
        raise InvalidInputError(f"expected an 8x8 matrix, got shape {m.shape}")
    parties = [party] if isinstance(party, (int, Party)) else list(party)
    t = m.reshape((2,) * 6)
    for x in parties:
        x = int(Party(x))
        t = np.swapaxes(t, x, x + 3)
    return np.ascontiguousarray(t.reshape(DIM, DIM))


def reduced_state(psi, party: Party) -> np.ndarray:
    """2x2 reduced density matrix of ``party`` for a pure three-qubit vector."""
    t = np.moveaxis(np.asarray(psi, dtype=complex).reshape(2, 2, 2), int(party), 0).reshape(2, 4)
    return t @ t.conj().T


def cut_matrix(psi, party: Party) -> np.ndarray:
    """Amplitudes reshaped as a 2x4 matrix across the cut isolating ``party``."""
    return np.moveaxis(np.asarray(psi, dtype=complex).reshape(2, 2, 2), int(party), 0).reshape(2, 4)


# ---------------------------------------------------------------------------
# Hermitian eigensolver


def eig_hermitian(m, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a small Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    eigenvectors in the columns of ``v``.  Each eigenvector is rephased so that
    its largest-magnitude component is real and nonnegative.
    """
    a = check_hermitian(m)
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    norm = float(np.linalg.norm(a))
    if norm == 0.0 or n == 1:
        return _finish(a, v)
    target = 1e-14 * norm
    skip = 1e-18 * norm
    for _ in range(max_sweeps):
        off = _offdiag_norm(a)
        if off < target:
            return _finish(a, v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # column update by G = [[c, s], [-s*conj(phase), c*conj(phase)]];
                # rows follow by Hermitian symmetry, the pivot block is set exactly
                sp = s * phase.conjugate()
                cph = c * phase.conjugate()
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - sp * aq
                a[:, q] = s * ap + cph * aq
                a[p, :] = a[:, p].conj()
                a[q, :] = a[:, q].conj()
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - sp * vq
                v[:, q] = s * vp + cph * vq
    off = _offdiag_norm(a)
    if off < 1e-12 * norm:
        logger.warning("Jacobi stopped at relative off-diagonal norm %.2e", off / norm)
        return _finish(a, v)
    raise NumericalError(f"Jacobi iteration did not converge (off-diagonal norm {off:.3e})")


def _offdiag_norm(a: np.ndarray) -> float:
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real**2 + off.imag**2)))


def _finish(a: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    v = v * (lead.conj() / np.abs(lead))
    return w, v


def min_eigenvalue(m) -> float:
    return float(eig_hermitian(m)[0][0])


def rank_kernel(m, tol: Tolerances = DEFAULT_TOL) -> tuple[int, np.ndarray]:
    """Numerical rank and an orthonormal kernel basis (as columns).

    An eigenvalue counts toward the rank when its magnitude exceeds
    ``tol.rank_rel_tol`` times the largest eigenvalue magnitude.
    """
    w, v = eig_hermitian(m)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if scale == 0.0:
        return 0, v
    keep = np.abs(w) > tol.rank_rel_tol * scale
    return int(np.count_nonzero(keep)), v[:, ~keep]


def range_basis(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    w, v = eig_hermitian(m)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if scale == 0.0:
        return v[:, :0]
    return v[:, np.abs(w) > tol.rank_rel_tol * scale]


def rank_signature(rho, tol: Tolerances = DEFAULT_TOL) -> RankSignature:
    rho = check_density(rho, tol, psd=False)
    ranks = [rank_kernel(rho, tol)[0]]
    ranks += [rank_kernel(partial_transpose(rho, x), tol)[0] for x in Party]
    return RankSignature(*ranks)


# ---------------------------------------------------------------------------
# projector subtraction


def max_subtractable_weight(rho, psi, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest ``lam`` with ``rho - lam |psi><psi|`` positive semidefinite.

    The value comes from the pseudo-inverse quadratic form on the range of
    ``rho`` (``1 / <psi|rho^+|psi>``) and is then certified by bisection on the
    minimum eigenvalue; if the two disagree by more than 1e-8 the bisection
    result is returned.
    """
    rho = check_density(rho, tol)
    psi = check_pure(psi, atol=1e-10)
    w, v = eig_hermitian(rho)
    keep = np.abs(w) > tol.rank_rel_tol * float(np.max(np.abs(w)))
    coeff = v.conj().T @ psi
    outside = float(np.sum(np.abs(coeff[~keep]) ** 2))
    if outside > tol.zero_tol:
        lam = 0.0
    else:
        quad = float(np.sum(np.abs(coeff[keep]) ** 2 / w[keep]))
        lam = min(1.0, 1.0 / quad)
    check = subtractable_weight_bisection(rho, psi)
    if abs(check - lam) > 1e-8:
        logger.warning("pseudo-inverse weight %.12g disagrees with bisection %.12g; using bisection", lam, check)
        return check
    return lam


def subtractable_weight_bisection(rho, psi, slack: float = 1e-12, resolution: float = 1e-13) -> float:
    """Bisection on ``lam -> min eig(rho - lam P)`` over [0, 1]."""
    rho = np.asarray(rho, dtype=complex)
    p = projector(psi)
    bound = -slack * max(1.0, float(np.max(np.abs(rho))))
    if min_eigenvalue(rho - p) >= bound:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if min_eigenvalue(rho - mid * p) >= bound:
            lo = mid
        else:
            hi = mid
    return lo
