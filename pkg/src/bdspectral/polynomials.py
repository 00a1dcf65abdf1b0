"""Chebyshev polynomials and the eigenpolynomials Q_j of the chain.

Q_j solves P Q(x) = x Q(x) with Q_0 = 1. Two evaluators are provided:

* ``q_poly_recurrence`` runs the three-term recurrence. It is the reference
  used everywhere else in the package.
* ``q_poly_closed`` evaluates the Chebyshev closed form and exists to
  cross-check the recurrence.

The recurrence switches between three algebraically identical forms. Inside
the cut it is the plain recurrence. To the right of the cut it propagates the
differences Q_{j+1} - Q_j, which carry the factor (x - 1) and so keep
Q_j(1) = 1 exact for conservative chains. To the left it propagates the sums
Q_{j+1} + Q_j, which play the same role at x = -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import ChainParams
from .errors import InvalidParameterError

__all__ = [
    "PolyEval",
    "cheb_T",
    "cheb_U",
    "q_poly_closed",
    "q_poly_recurrence",
    "q_values",
]


def cheb_T(j: int, t):
    """Chebyshev polynomial of the first kind by recurrence (any real t)."""
    if j < 0:
        raise InvalidParameterError(f"T_j needs j >= 0, got {j}")
    t = np.asarray(t, dtype=float)
    prev, cur = np.ones_like(t), t.copy()
    if j == 0:
        return prev[()]
    for _ in range(j - 1):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur[()]


def cheb_U(j: int, t):
    """Chebyshev polynomial of the second kind, with U_{-1} = 0."""
    if j < -1:
        raise InvalidParameterError(f"U_j needs j >= -1, got {j}")
    t = np.asarray(t, dtype=float)
    prev, cur = np.zeros_like(t), np.ones_like(t)
    if j == -1:
        return prev[()]
    for _ in range(j):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur[()]


@dataclass(frozen=True)
class PolyEval:
    """Values Q_0(x) .. Q_jmax(x) at one point."""

    x: float
    xstar: float
    values: np.ndarray


def q_poly_closed(params: ChainParams, j: int, x: float) -> float:
    """Q_j(x) from its Chebyshev representation.

    With s = x / (2 sqrt(pq))::

        Q_j = (q/p)^(j/2) [ 2(p0-p)/p0 T_j(s) + (2p-p0)/p0 U_j(s)
                            - r0/p0 sqrt(p/q) U_{j-1}(s) ]

    On the cut T and U are taken in trigonometric form; off the cut the
    growing exponential is factored out and carried as a logarithm, so large
    j neither overflows nor underflows before the final product.
    """
    if j < 0:
        raise InvalidParameterError(f"Q_j needs j >= 0, got {j}")
    p, q, p0, r0 = params.p, params.q, params.p0, params.r0
    if j == 0:
        return 1.0
    a = 2.0 * (p0 - p) / p0
    b = (2.0 * p - p0) / p0
    g = r0 / p0 * math.sqrt(p / q)
    half_log_ratio = 0.5 * math.log(q / p)

    s = float(x) / params.cut
    sign = -1.0 if s < 0 else 1.0
    at = abs(s)
    # T_j(-s) = (-1)^j T_j(s), U_j(-s) = (-1)^j U_j(s); work with |s|.
    parity = sign if j % 2 else 1.0
    if at <= 1.0:
        # Half-angle form keeps theta accurate near the cut edge.
        theta = 2.0 * math.asin(math.sqrt((1.0 - at) / 2.0))
        st = math.sin(theta)
        T = math.cos(j * theta)
        if st == 0.0:
            U, Um = j + 1.0, float(j)
        else:
            U = math.sin((j + 1) * theta) / st
            Um = math.sin(j * theta) / st
        bracket = a * T + b * U - g * sign * Um
        log_mag = j * half_log_ratio
    else:
        phi = math.acosh(at)
        sh = math.sinh(phi)
        # T, U_j, U_{j-1} divided by exp(j*phi).
        T = 0.5 * (1.0 + math.exp(-2.0 * j * phi))
        U = -math.exp(phi) * math.expm1(-(2.0 * j + 2.0) * phi) / (2.0 * sh)
        Um = -math.expm1(-2.0 * j * phi) / (2.0 * sh)
        bracket = a * T + b * U - g * sign * Um
        log_mag = j * (half_log_ratio + phi)
    if bracket == 0.0:
        return 0.0
    return parity * math.copysign(math.exp(log_mag + math.log(abs(bracket))), bracket)


def _plain(params: ChainParams, jmax: int, x: np.ndarray) -> np.ndarray:
    p, q = params.p, params.q
    Q = np.empty((jmax + 1,) + x.shape, dtype=x.dtype)
    Q[0] = 1.0
    if jmax >= 1:
        Q[1] = (x - params.r0) / params.p0
    for j in range(1, jmax):
        Q[j + 1] = (x * Q[j] - q * Q[j - 1]) / p
    return Q


def _differences(params: ChainParams, jmax: int, x: np.ndarray) -> np.ndarray:
    # p (Q_{j+1} - Q_j) = (x - 1) Q_j + q (Q_j - Q_{j-1})
    p, q = params.p, params.q
    xm1 = x - 1.0
    Q = np.empty((jmax + 1,) + x.shape)
    Q[0] = 1.0
    if jmax >= 1:
        d = (xm1 + params.q0) / params.p0
        Q[1] = 1.0 + d
        for j in range(1, jmax):
            d = (xm1 * Q[j] + q * d) / p
            Q[j + 1] = Q[j] + d
    return Q


def _sums(params: ChainParams, jmax: int, x: np.ndarray) -> np.ndarray:
    # p (Q_{j+1} + Q_j) = (x + 1) Q_j - q (Q_j + Q_{j-1})
    p, q = params.p, params.q
    xp1 = x + 1.0
    Q = np.empty((jmax + 1,) + x.shape)
    Q[0] = 1.0
    if jmax >= 1:
        s = (xp1 - (1.0 + params.r0 - params.p0)) / params.p0
        Q[1] = s - 1.0
        for j in range(1, jmax):
            s = (xp1 * Q[j] - q * s) / p
            Q[j + 1] = s - Q[j]
    return Q


def q_values(params: ChainParams, jmax: int, x) -> np.ndarray:
    """Q_0 .. Q_jmax at every point of ``x``; result has shape (jmax+1, *x.shape).

    Complex points use the plain recurrence.
    """
    if jmax < 0:
        raise InvalidParameterError(f"jmax must be >= 0, got {jmax}")
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return _plain(params, jmax, x.astype(complex))
    x = x.astype(float)
    c = params.cut
    right = x > c
    left = x < -c
    inside = ~(right | left)
    out = np.empty((jmax + 1,) + x.shape)
    if inside.any():
        out[:, inside] = _plain(params, jmax, x[inside])
    if right.any():
        out[:, right] = _differences(params, jmax, x[right])
    if left.any():
        out[:, left] = _sums(params, jmax, x[left])
    return out


def q_poly_recurrence(params: ChainParams, jmax: int, x: float) -> PolyEval:
    """Q_0(x) .. Q_jmax(x) from the three-term recurrence."""
    x = float(x)
    values = q_values(params, jmax, np.array([x]))[:, 0]
    return PolyEval(x=x, xstar=x / params.cut, values=values)
