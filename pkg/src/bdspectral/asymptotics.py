"""Quasi-stationary distributions and ratio limits."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainParams, pi_weights
from .errors import InvalidParameterError, PreconditionError
from .measure import spectral_measure, support_sup_eta
from .polynomials import q_values

__all__ = [
    "QsdFamily",
    "QsdDistribution",
    "RatioLimitResult",
    "qsd_exists",
    "qsd_alpha",
    "ratio_limit",
    "ratio_limit_parity",
]

log = logging.getLogger(__name__)

MAX_TERMS = 10_000_000


@dataclass(frozen=True)
class QsdFamily:
    """One-parameter family of QSDs indexed by x in the open interval (lower, upper)."""

    lower: float
    upper: float = 1.0

    def __contains__(self, x: float) -> bool:
        return self.lower < x < self.upper


def qsd_exists(params: ChainParams) -> QsdFamily | None:
    """QSD family of an absorbing chain, or None when eta = 1.

    Needs q0 > 0 (there is something to be absorbed into) and p <= 1/2
    (absorption is certain); otherwise PreconditionError.
    """
    if params.q0 <= 0.0:
        raise PreconditionError("theory precondition unmet: q0 = 0, the chain never absorbs")
    if params.p > 0.5:
        raise PreconditionError(
            f"theory precondition unmet: p = {params.p!r} > 1/2, absorption is not certain"
        )
    eta = support_sup_eta(spectral_measure(params))
    if eta >= 1.0:
        return None
    return QsdFamily(lower=eta)


@dataclass(frozen=True)
class QsdDistribution:
    x: float
    alpha: np.ndarray
    jcut: int
    tail_bound: float
    nonnegative: bool

    @property
    def total(self) -> float:
        return math.fsum(self.alpha)


def growth_ratio(params: ChainParams, x: float) -> float:
    """Asymptotic ratio alpha_{j+1}/alpha_j = sqrt(p/q) (s + sqrt(s^2 - 1)), s = x/2sqrt(pq)."""
    s = x / params.cut
    return math.sqrt(params.p / params.q) * (s + math.sqrt(max(s * s - 1.0, 0.0)))


def qsd_alpha(params: ChainParams, x: float, tol: float = 1e-12) -> QsdDistribution:
    """alpha_j(x) = pi_j (1 - x) Q_j(x) / q0, summed until the tail is below ``tol``.

    The products pi_j Q_j are generated by the transposed recurrence
    alpha_{j+1} = (x alpha_j - p alpha_{j-1}) / q, which is the left
    eigenvector equation alpha P = x alpha and never overflows.
    """
    family = qsd_exists(params)
    if family is None or x not in family:
        lo = family.lower if family is not None else 1.0
        raise InvalidParameterError(f"x must lie in ({lo!r}, 1), got {x!r}")
    if tol <= 0.0:
        raise InvalidParameterError(f"tol must be positive, got {tol!r}")
    p, q, p0, r0 = params.p, params.q, params.p0, params.r0
    rho = growth_ratio(params, x)

    alpha = [(1.0 - x) / params.q0]
    alpha.append((x - r0) * alpha[0] / q)
    alpha.append((x * alpha[1] - p0 * alpha[0]) / q)
    tail = math.inf
    j = 2
    while j < MAX_TERMS:
        ratio = max(rho, alpha[j] / alpha[j - 1]) if alpha[j - 1] > 0 else rho
        if ratio < 1.0:
            tail = alpha[j] * ratio / (1.0 - ratio)
            if 0.0 <= tail < tol:
                break
        alpha.append((x * alpha[j] - p * alpha[j - 1]) / q)
        j += 1
    values = np.array(alpha)
    nonneg = bool(np.all(values >= 0.0))
    if not nonneg:
        log.warning("negative QSD entries at x=%r: indices %s", x,
                    np.flatnonzero(values < 0)[:10].tolist())
    return QsdDistribution(x=x, alpha=values, jcut=j, tail_bound=tail, nonnegative=nonneg)


@dataclass(frozen=True)
class RatioLimitResult:
    limit: float
    mode: str
    eta_used: float
    caveat: str | None = None


def _limit_at(params: ChainParams, eta: float, i: int, j: int, k: int, l: int) -> float:
    jmax = max(i, j, k, l)
    Q = q_values(params, jmax, np.array([eta]))[:, 0]
    pi = pi_weights(params, jmax)
    return float(pi[j] / pi[l] * (Q[i] * Q[j]) / (Q[k] * Q[l]))


def _check_indices(*idx: int) -> None:
    if min(idx) < 0:
        raise InvalidParameterError("state indices must be nonnegative")


def ratio_limit(params: ChainParams, i: int, j: int, k: int, l: int) -> RatioLimitResult:
    """lim_n (P^n)_{ij} / (P^n)_{kl}.

    Defined for recurrent aperiodic chains (limit pi_j / pi_l) and for
    aperiodic chains with at least one atom (pi_j Q_i Q_j / (pi_l Q_k Q_l)
    at eta). Anything else raises PreconditionError.
    """
    _check_indices(i, j, k, l)
    if params.r0 == 0.0:
        raise PreconditionError(
            "limit not guaranteed by cited theory: r0 = 0 makes the chain periodic; "
            "use ratio_limit_parity"
        )
    measure = spectral_measure(params)
    eta = support_sup_eta(measure)
    recurrent = params.q0 == 0.0 and params.p <= 0.5
    if recurrent:
        pi = pi_weights(params, max(j, l))
        return RatioLimitResult(limit=float(pi[j] / pi[l]), mode="full", eta_used=1.0)
    if not measure.masses:
        raise PreconditionError(
            "limit not guaranteed by cited theory: chain is transient or absorbing "
            "and the spectral measure has no atoms"
        )
    return RatioLimitResult(limit=_limit_at(params, eta, i, j, k, l), mode="full", eta_used=eta)


def ratio_limit_parity(params: ChainParams, i: int, j: int, k: int, l: int,
                       parity: str) -> RatioLimitResult:
    """Limit along even or odd n for the periodic case r0 = 0.

    With r0 = 0 the chain moves between even and odd states at every step,
    so (P^n)_{ij} vanishes unless n = i - j mod 2. The indices must have
    i - j = k - l mod 2 and the requested parity must match that.
    """
    _check_indices(i, j, k, l)
    if parity not in ("even", "odd"):
        raise InvalidParameterError(f"parity must be 'even' or 'odd', got {parity!r}")
    if params.r0 != 0.0:
        raise PreconditionError(
            f"parity limits require r0 = 0 (periodic chain), got r0 = {params.r0!r}"
        )
    if (i - j) % 2 != (k - l) % 2:
        raise InvalidParameterError("i - j and k - l must be both even or both odd")
    want = 0 if parity == "even" else 1
    if (i - j) % 2 != want:
        raise InvalidParameterError(
            f"(P^n)_(ij) vanishes for {parity} n when i - j = {i - j}; ratio undefined"
        )
    measure = spectral_measure(params)
    eta = support_sup_eta(measure)
    caveat = None
    if not measure.masses:
        caveat = "no-mass: spectral measure has no atoms, limit not covered by cited theorem"
    return RatioLimitResult(
        limit=_limit_at(params, eta, i, j, k, l),
        mode=f"{parity}-subsequence",
        eta_used=eta,
        caveat=caveat,
    )
