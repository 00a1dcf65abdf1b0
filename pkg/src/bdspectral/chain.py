"""Birth-and-death chain with constant transition probabilities away from 0.

The one-step matrix is tridiagonal on the states {0, 1, 2, ...}::

    r0  p0  0   0  ...
    q   0   p   0  ...
    0   q   0   p  ...

Mass leaving state 0 with probability ``q0 = 1 - r0 - p0`` goes to an
absorbing coffin state. Everything here works in plain float64; the matrix
power oracle is exact up to rounding because a walk started inside a finite
window cannot reach its edge in fewer steps than the window margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "ChainParams",
    "PiWeights",
    "TruncatedChain",
    "new_chain",
    "pi_weight",
    "pi_weights",
    "truncate",
    "evolve",
    "oracle_transition",
    "absorption_probability",
]

# Slack when checking r0 + p0 <= 1, so that e.g. 0.7 + 0.3 is accepted.
SUM_TOL = 1e-12


@dataclass(frozen=True)
class ChainParams:
    """Validated parameters (p, p0, r0) of the chain.

    ``q = 1 - p`` and ``q0 = 1 - r0 - p0`` are derived on construction.
    """

    p: float
    p0: float
    r0: float
    q: float = field(init=False)
    q0: float = field(init=False)

    def __post_init__(self) -> None:
        p, p0, r0 = float(self.p), float(self.p0), float(self.r0)
        for name, value in (("p", p), ("p0", p0), ("r0", r0)):
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")
        if not 0.0 < p < 1.0:
            raise InvalidParameterError(f"p must lie in (0, 1), got {p!r}")
        if p0 <= 0.0:
            raise InvalidParameterError(f"p0 must be positive, got {p0!r}")
        if r0 < 0.0:
            raise InvalidParameterError(f"r0 must be nonnegative, got {r0!r}")
        if r0 + p0 > 1.0 + SUM_TOL:
            raise InvalidParameterError(
                f"r0 + p0 must not exceed 1, got {r0!r} + {p0!r} = {r0 + p0!r}"
            )
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "r0", r0)
        object.__setattr__(self, "q", 1.0 - p)
        q0 = 1.0 - r0 - p0
        object.__setattr__(self, "q0", 0.0 if q0 <= SUM_TOL else q0)

    @property
    def pq(self) -> float:
        return self.p * self.q

    @property
    def cut(self) -> float:
        """Half-width 2*sqrt(pq) of the continuous spectrum."""
        return 2.0 * math.sqrt(self.p * self.q)

    def as_dict(self) -> dict[str, float]:
        return {"p": self.p, "q": self.q, "p0": self.p0, "r0": self.r0, "q0": self.q0}


def new_chain(p: float, p0: float, r0: float) -> ChainParams:
    """Validate ``(p, p0, r0)`` and return the parameter record.

    Raises InvalidParameterError when p is outside (0, 1), p0 <= 0, r0 < 0 or
    r0 + p0 > 1.

    >>> c = new_chain(0.2, 0.2, 0.5)
    >>> round(c.q, 12), round(c.q0, 12)
    (0.8, 0.3)
    """
    return ChainParams(p, p0, r0)


def pi_weight(params: ChainParams, j: int) -> float:
    """Potential coefficient pi_j = p0 p^(j-1) / q^j, with pi_0 = 1."""
    if j < 0:
        raise InvalidParameterError(f"state index must be >= 0, got {j}")
    if j == 0:
        return 1.0
    return params.p0 / params.q * (params.p / params.q) ** (j - 1)


def pi_weights(params: ChainParams, jmax: int) -> np.ndarray:
    """Array of pi_0 .. pi_jmax."""
    if jmax < 0:
        raise InvalidParameterError(f"jmax must be >= 0, got {jmax}")
    out = np.empty(jmax + 1)
    out[0] = 1.0
    if jmax >= 1:
        ratio = params.p / params.q
        out[1:] = params.p0 / params.q * ratio ** np.arange(jmax)
    return out


@dataclass(frozen=True)
class PiWeights:
    """Lazily indexable view of the potential coefficients of a chain."""

    params: ChainParams

    def __getitem__(self, j: int) -> float:
        return pi_weight(self.params, j)

    def upto(self, jmax: int) -> np.ndarray:
        return pi_weights(self.params, jmax)


@dataclass(frozen=True)
class TruncatedChain:
    """Finite M x M section of the infinite transition matrix."""

    size: int
    matrix: np.ndarray


def truncate(params: ChainParams, M: int) -> TruncatedChain:
    if M < 2:
        raise InvalidParameterError(f"truncation size must be >= 2, got {M}")
    P = np.zeros((M, M))
    P[0, 0] = params.r0
    P[0, 1] = params.p0
    idx = np.arange(1, M)
    P[idx, idx - 1] = params.q
    P[idx[:-1], idx[:-1] + 1] = params.p
    P.setflags(write=False)
    return TruncatedChain(M, P)


def _step(params: ChainParams, v: np.ndarray) -> np.ndarray:
    # Row vector times the tridiagonal matrix. The summation order per entry
    # is fixed, so zero padding never changes a single bit of the result.
    up = np.zeros_like(v)
    up[1] = v[0] * params.p0
    up[2:] = v[1:-1] * params.p
    down = np.zeros_like(v)
    down[:-1] = v[1:] * params.q
    out = up + down
    out[0] += v[0] * params.r0
    return out


def evolve(params: ChainParams, initial: Sequence[float], n: int,
           size: int | None = None) -> tuple[np.ndarray, float]:
    """Propagate a distribution ``n`` steps.

    Returns ``(dist, absorbed)`` where ``dist[j]`` is the probability of being
    at state j and ``absorbed`` the accumulated flux into the coffin state.
    The window is wide enough that truncation has no effect.
    """
    v0 = np.asarray(initial, dtype=float)
    if v0.ndim != 1 or v0.size == 0:
        raise InvalidParameterError("initial distribution must be a nonempty 1-D sequence")
    if n < 0:
        raise InvalidParameterError(f"number of steps must be >= 0, got {n}")
    need = v0.size + n + 2
    M = need if size is None else max(size, need)
    v = np.zeros(M)
    v[: v0.size] = v0
    absorbed = 0.0
    for _ in range(n):
        absorbed += v[0] * params.q0
        v = _step(params, v)
    return v, absorbed


def oracle_transition(params: ChainParams, i: int, j: int, n: int,
                      margin: int = 2) -> float:
    """Exact (P^n)_{ij} by repeated vector-matrix products from the unit row e_i."""
    if min(i, j, n) < 0:
        raise InvalidParameterError("i, j and n must be nonnegative")
    M = max(i, j) + n + margin
    e = np.zeros(i + 1)
    e[i] = 1.0
    v, _ = evolve(params, e, n, size=M)
    return float(v[j])


def absorption_probability(params: ChainParams, initial: Sequence[float], n: int) -> float:
    """Probability of having left the state space by time ``n``.

    ``initial`` is indexed by state and must be a probability vector.
    """
    v0 = np.asarray(initial, dtype=float)
    if v0.ndim != 1 or v0.size == 0 or not np.all(np.isfinite(v0)):
        raise InvalidParameterError("initial distribution must be a finite 1-D sequence")
    if np.any(v0 < 0):
        raise InvalidParameterError("initial distribution has negative entries")
    if abs(v0.sum() - 1.0) > 1e-12:
        raise InvalidParameterError(f"initial distribution sums to {v0.sum()!r}, not 1")
    _, absorbed = evolve(params, v0, n)
    return absorbed
