"""Shared fixtures and independent reference implementations.

The references deliberately avoid the library's own formulas: atoms come
from the continued-fraction form of m(z) in extended precision, or from the
eigendecomposition of a large symmetrised truncation; polynomial values come
from the recurrence in mpmath.
"""

from __future__ import annotations

import mpmath as mp
import numpy as np
import pytest

from bdspectral import ChainParams

FIXTURES = {
    "A": (0.2, 0.2, 0.5),
    "B": (0.2, 0.6, 0.1),
    "C": (0.5, 1.0, 0.0),
    "D": (0.85, 0.3, 0.6),
    "E": (0.3, 0.6, 0.4),
}

# Atoms (x, w) frozen from atoms_mp below, cross-checked against atoms_eig.
FROZEN_ATOMS = {
    "A": [(0.82, 0.36)],
    "B": [(-0.82683625187004104, 0.18396618202557817),
          (0.87683625187004104, 0.31603381797442176)],
    "C": [],
    "D": [(0.71639861433903064, 0.32797228678061135)],
    "E": [(1.0, 0.4)],
}


def chain(name: str) -> ChainParams:
    return ChainParams(*FIXTURES[name])


@pytest.fixture(params=sorted(FIXTURES))
def fixture_name(request):
    return request.param


@pytest.fixture
def params(fixture_name):
    return chain(fixture_name)


def atoms_mp(p: float, p0: float, r0: float, dps: int = 40):
    """Zeros of g(z) = z - r0 + q p0 n(z) off the cut; weight 1/g'(x)."""
    with mp.workdps(dps):
        p, p0, r0 = mp.mpf(p), mp.mpf(p0), mp.mpf(r0)
        q = 1 - p
        c = 2 * mp.sqrt(p * q)

        def g(z):
            s = mp.sqrt(z - c) * mp.sqrt(z + c)
            return z - r0 - 2 * q * p0 / (z + s)

        out = []
        for x0 in mp.linspace(-1, 1, 81):
            if abs(x0) <= c:
                continue
            try:
                x = mp.findroot(g, x0)
            except (ValueError, ZeroDivisionError):
                continue
            if mp.im(x) != 0 or abs(x) <= c or abs(g(x)) > mp.mpf(10) ** (5 - dps):
                continue
            x = mp.re(x)
            if any(abs(x - y) < 1e-20 for y, _ in out):
                continue
            out.append((x, mp.re(1 / mp.diff(g, x))))
        return [(float(x), float(w)) for x, w in sorted(out)]


def atoms_eig(p: float, p0: float, r0: float, size: int = 800):
    """Eigenvalues outside the cut of the symmetrised truncation, weight v_0^2."""
    q = 1.0 - p
    diag = np.zeros(size)
    diag[0] = r0
    off = np.full(size - 1, np.sqrt(p * q))
    off[0] = np.sqrt(p0 * q)
    w, v = np.linalg.eigh(np.diag(diag) + np.diag(off, 1) + np.diag(off, -1))
    keep = np.abs(w) > 2.0 * np.sqrt(p * q) + 1e-6
    return sorted(zip(w[keep].tolist(), (v[0, keep] ** 2).tolist()))


def q_mp(p: float, p0: float, r0: float, jmax: int, x, dps: int = 60):
    """Q_0 .. Q_jmax at x by the recurrence in extended precision."""
    with mp.workdps(dps):
        p, p0, r0, x = mp.mpf(p), mp.mpf(p0), mp.mpf(r0), mp.mpf(x)
        q = 1 - p
        Q = [mp.mpf(1), (x - r0) / p0]
        for j in range(1, jmax):
            Q.append((x * Q[j] - q * Q[j - 1]) / p)
        return [float(v) for v in Q[: jmax + 1]]


def random_params(rng: np.random.Generator) -> ChainParams:
    """Uniform sample from the valid parameter set."""
    while True:
        p, r0, p0 = rng.uniform(0.0, 1.0, 3)
        if 0.0 < p0 and r0 + p0 <= 1.0 and 0.0 < p < 1.0:
            return ChainParams(p, p0, r0)


# One line per acceptance criterion, filled in by test_acceptance.py and
# echoed in the terminal summary so it shows up without -s.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
