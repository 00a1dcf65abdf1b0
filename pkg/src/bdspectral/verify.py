"""Self-checks of the spectral machinery for one parameter set.

Every check compares two independent routes, usually a spectral quantity
against the truncated matrix power, and reports the largest discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import qsd_alpha, qsd_exists
from .chain import ChainParams, evolve, oracle_transition, pi_weights, truncate
from .errors import PreconditionError
from .measure import (
    classify_region,
    density_at,
    point_masses,
    spectral_measure,
    stieltjes_m,
)
from .polynomials import q_poly_closed, q_values
from .quadrature import VERIFY_NODES, gram_matrix, integrate_measure, km_transition, moments


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    max_err: float

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "max_err": self.max_err}


def _check(name: str, err: float, tol: float) -> Check:
    err = float(err)
    return Check(name, bool(err <= tol), err)


def sample_points(params: ChainParams, inside: int = 14, outside: int = 3) -> list[float]:
    """Chebyshev points on the cut plus midpoints of equal pieces of each gap to +-1.

    When the cut fills [-1, 1] all points go on the cut.
    """
    c = params.cut
    if c >= 1.0:
        inside += 2 * outside
    k = np.arange(inside)
    pts = list(c * np.cos(math.pi * (k + 0.5) / inside))
    if c < 1.0:
        mids = (np.arange(outside) + 0.5) / outside
        pts += list(c + (1.0 - c) * mids)
        pts += list(-c - (1.0 - c) * mids)
    return [float(x) for x in pts]


def closed_vs_recurrence_error(params: ChainParams, xs, jmax: int = 50) -> float:
    worst = 0.0
    for x in xs:
        rec = q_values(params, jmax, np.array([x]))[:, 0]
        for j in range(jmax + 1):
            cl = q_poly_closed(params, j, x)
            worst = max(worst, abs(cl - rec[j]) / max(1.0, abs(rec[j])))
    return worst


def run_checks(params: ChainParams, nodes: int = VERIFY_NODES) -> list[Check]:
    checks: list[Check] = []
    measure = spectral_measure(params)
    c = params.cut

    pi = pi_weights(params, 51)
    up = np.concatenate(([params.p0], np.full(50, params.p)))
    db = np.abs(pi[:-1] * up - pi[1:] * params.q) / np.maximum(pi[:-1] * up, 1e-300)
    checks.append(_check("detailed_balance", db.max(), 1e-13))

    xs = sample_points(params)
    checks.append(_check("closed_form_vs_recurrence", closed_vs_recurrence_error(params, xs), 1e-10))

    Q = q_values(params, 51, np.array(xs))
    xa = np.array(xs)
    resid = params.q * Q[:-2] + params.p * Q[2:] - xa * Q[1:-1]
    scale = np.maximum(1.0, np.abs(xa * Q[1:-1]) + params.q * np.abs(Q[:-2]))
    checks.append(_check("eigenvector_property", (np.abs(resid) / scale)[:50].max(), 1e-12))

    total = integrate_measure(measure, lambda x: np.ones_like(x), nodes)
    checks.append(_check("total_mass", abs(total - 1.0), 1e-10))

    first = integrate_measure(measure, lambda x: x, nodes)
    checks.append(_check("first_moment_equals_r0", abs(first - params.r0), 1e-10))

    mom = moments(params, 30, nodes)
    exact = np.array([oracle_transition(params, 0, 0, n) for n in range(31)])
    checks.append(_check("moment_identity", np.abs(mom - exact).max(), 1e-8))

    worst = 0.0
    for i, j, n in [(0, 1, 5), (1, 3, 7), (2, 2, 10), (4, 1, 13), (3, 5, 20), (5, 0, 9)]:
        worst = max(worst, km_transition(params, i, j, n, nodes, with_oracle=True).abs_diff)
    checks.append(_check("km_vs_oracle", worst, 1e-8))

    G = gram_matrix(params, 10, nodes)
    checks.append(_check("orthonormality", np.abs(G - np.eye(11)).max(), 1e-8))

    region = classify_region(params)
    masses = point_masses(params)
    checks.append(_check("classification_matches_masses",
                         0.0 if region.count == len(masses) else 1.0, 0.0))
    inside = max([c - 1e-12 - abs(m.x) for m in masses] + [0.0])
    checks.append(_check("masses_outside_cut", inside, 0.0))

    inv = 0.0
    for x in (-0.5 * c, 0.1 * c, 0.7 * c):
        inv = max(inv, abs(stieltjes_m(params, complex(x, 1e-8)).imag / math.pi - density_at(params, x)))
    checks.append(_check("stieltjes_inversion", inv, 1e-4 / math.pi))

    if region.recurrent:
        Q1 = q_values(params, 50, np.array([1.0]))[:, 0]
        checks.append(_check("polynomials_equal_one_at_one", np.abs(Q1 - 1.0).max(), 1e-12))
    if region.positive_recurrent:
        ratio = params.p / params.q
        pi_sum = 1.0 + params.p0 / params.q / (1.0 - ratio)
        at_one = [m.w for m in masses if abs(m.x - 1.0) <= 1e-12]
        err = abs(at_one[0] - 1.0 / pi_sum) if at_one else 1.0
        checks.append(_check("mass_at_one_equals_inverse_pi_sum", err, 1e-10))

    try:
        family = qsd_exists(params)
    except PreconditionError:
        family = None
    if family is not None:
        x = 0.5 * (family.lower + family.upper)
        d = qsd_alpha(params, x, tol=1e-13)
        checks.append(_check("qsd_normalised", abs(d.total - 1.0), 1e-8))
        checks.append(_check("qsd_nonnegative", 0.0 if d.nonnegative else 1.0, 0.0))
        a = d.alpha
        P = truncate(params, a.size + 2).matrix
        aP = np.pad(a, (0, 2)) @ P
        checks.append(_check("qsd_left_eigenvector", np.abs(aP[: a.size - 2] - x * a[:-2]).max(), 1e-10))
        dist, absorbed = evolve(params, a / a.sum(), 1)
        cond = dist[: a.size] / (1.0 - absorbed)
        checks.append(_check("qsd_one_step_invariance", np.abs(cond - a / a.sum()).max(), 1e-8))
    return checks
