import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hermitian(rng, scale=1.0):
    g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    return scale * (g + g.conj().T) / 2


def oracle_subtractable_weight(rho, psi, resolution=1e-12):
    """Independent bisection using LAPACK eigvalsh."""
    p = np.outer(psi, psi.conj())
    bound = -1e-12
    if np.linalg.eigvalsh(rho - p)[0] >= bound:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if np.linalg.eigvalsh(rho - mid * p)[0] >= bound:
            lo = mid
        else:
            hi = mid
    return lo


# one summary line per acceptance criterion, printed at the end of the session
ACCEPTANCE: dict[int, str] = {}


def record(number, passed, detail):
    ACCEPTANCE[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    print(ACCEPTANCE[number])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
