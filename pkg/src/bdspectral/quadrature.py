"""Integration against the spectral measure and the spectral transition formula.

The continuous part of the measure has density

    (p0 / 2 pi) sqrt(4pq - x^2) / Dc(x),   |x| <= 2 sqrt(pq),

with Dc the quadratic denominator. The sqrt factor is absorbed into a
Gauss-Chebyshev rule of the second kind on the cut. What is left, f/Dc, is
smooth unless Dc has a root close to the cut: a near-double complex pair when
p0 is small, or a real root hugging a cut edge. Such poles are subtracted
and integrated in closed form using

    int sqrt(c^2 - x^2) / (x - z) dx = pi (sqrt(z^2 - c^2) - z),

so the rule only ever sees a smooth remainder. Atoms are added exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chain import ChainParams, oracle_transition, pi_weights
from .errors import InvalidParameterError
from .measure import SpectralMeasure, _all_roots, _dc_coeffs, branch_sqrt, spectral_measure
from .polynomials import q_values

__all__ = [
    "QuadratureRule",
    "TransitionResult",
    "build_rule",
    "continuous_integral",
    "integrate_measure",
    "km_transition",
    "gram_matrix",
    "moments",
]

DEFAULT_NODES = 512
VERIFY_NODES = 2048

# A pole z is subtracted when the rule error exp(-2(N+1) log rho(z)) would
# exceed exp(-NEAR_EXPONENT); rho is the Bernstein ellipse parameter of z.
NEAR_EXPONENT = 45.0


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes x_k = c cos(k pi/(N+1)) and weights c^2 pi/(N+1) sin^2(k pi/(N+1)).

    Integrates g(x) sqrt(c^2 - x^2) over [-c, c] exactly for polynomials g
    of degree <= 2N - 1.
    """

    n: int
    half_width: float
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Sum of weights * values over the trailing axis."""
        return np.sum(values * self.weights, axis=-1)


def build_rule(params: ChainParams, N: int) -> QuadratureRule:
    if N < 1:
        raise InvalidParameterError(f"node count must be >= 1, got {N}")
    c = params.cut
    theta = np.arange(1, N + 1) * (math.pi / (N + 1))
    nodes = c * np.cos(theta)
    weights = (c * c * math.pi / (N + 1)) * np.sin(theta) ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(N, c, nodes, weights)


def _semicircle_stieltjes(z: complex, c: float) -> complex:
    return math.pi * (branch_sqrt(z, c) - z)


def _is_near(z: complex, c: float, N: int) -> bool:
    u = z / c
    rho = abs(u + branch_sqrt(u, 1.0))
    return 2.0 * (N + 1) * math.log(max(rho, 1.0)) < NEAR_EXPONENT


def _call(f: Callable, x: np.ndarray) -> np.ndarray:
    out = np.asarray(f(x))
    if out.ndim == 0:
        out = np.broadcast_to(out, x.shape)
    return out


def continuous_integral(params: ChainParams, f: Callable, N: int = DEFAULT_NODES):
    """Integral of ``f`` against the continuous part of the measure.

    ``f`` maps a 1-D array of points to an array whose trailing axis runs over
    the points; the result drops that axis. If Dc has complex roots close to
    the cut, ``f`` is also called at those complex points.
    """
    rule = build_rule(params, N)
    x, c = rule.nodes, rule.half_width
    a, b, cc = _dc_coeffs(params)
    scale = params.p0 / (2.0 * math.pi)
    fx = _call(f, x)

    roots = _all_roots(params)
    near = [_is_near(z, c, N) for z in roots]
    if not any(near):
        return scale * rule.integrate(fx / ((a * x + b) * x + cc))

    def fz(z: complex) -> np.ndarray:
        return _call(f, np.array([z]))[..., 0]

    kappas = [1.0 / (2.0 * a * z + b) for z in roots]
    total = 0j
    if len(roots) == 2 and all(near):
        z1, z2 = roots
        s1, s2 = branch_sqrt(z1, c), branch_sqrt(z2, c)
        if abs(z1 - z2) < abs(s1 + s2):
            # Close pair: combine the two closed-form pieces through divided
            # differences so the large, opposite residues never meet.
            f1, f2 = fz(z1), fz(z2)
            ds = math.pi * ((z1 + z2) / (s1 + s2) - 1.0)
            df = (f1 - f2) / (z1 - z2)
            total = (f1 * ds + df * _semicircle_stieltjes(z2, c)) / a
            for z, k, fzv in ((z1, kappas[0], f1), (z2, kappas[1], f2)):
                total = total + k * rule.integrate((fx - fzv[..., None]) / (x - z))
            return scale * np.real(total)
    for z, k, is_near in zip(roots, kappas, near):
        if is_near:
            fzv = fz(z)
            total = total + k * (
                rule.integrate((fx - fzv[..., None]) / (x - z))
                + fzv * _semicircle_stieltjes(z, c)
            )
        else:
            total = total + k * rule.integrate(fx / (x - z))
    return scale * np.real(total)


def integrate_measure(measure: SpectralMeasure, f: Callable, N: int = DEFAULT_NODES):
    """Integral of ``f`` against the full spectral measure (density plus atoms)."""
    total = continuous_integral(measure.params, f, N)
    for m in measure.masses:
        total = total + m.w * _call(f, np.array([m.x]))[..., 0]
    return total


def moments(params: ChainParams, nmax: int, N: int = VERIFY_NODES) -> np.ndarray:
    """Moments int x^n psi(dx) for n = 0 .. nmax."""
    powers = np.arange(nmax + 1)
    measure = spectral_measure(params)
    return np.asarray(integrate_measure(measure, lambda x: x[None, :] ** powers[:, None], N))


@dataclass(frozen=True)
class TransitionResult:
    spectral: float
    oracle: float | None = None
    abs_diff: float | None = None


def km_transition(params: ChainParams, i: int, j: int, n: int,
                  N: int = VERIFY_NODES, with_oracle: bool = False) -> TransitionResult:
    """(P^n)_{ij} = pi_j int x^n Q_i(x) Q_j(x) psi(dx)."""
    if min(i, j, n) < 0:
        raise InvalidParameterError("i, j and n must be nonnegative")
    jmax = max(i, j)

    def integrand(x):
        Q = q_values(params, jmax, x)
        return x ** n * Q[i] * Q[j]

    measure = spectral_measure(params)
    value = float(pi_weights(params, j)[j] * integrate_measure(measure, integrand, N))
    if not with_oracle:
        return TransitionResult(spectral=value)
    exact = oracle_transition(params, i, j, n)
    return TransitionResult(spectral=value, oracle=exact, abs_diff=abs(value - exact))


def gram_matrix(params: ChainParams, jmax: int, N: int = VERIFY_NODES) -> np.ndarray:
    """Matrix with entries pi_j int Q_i Q_j dpsi; the identity in exact arithmetic."""
    if jmax < 0:
        raise InvalidParameterError(f"jmax must be >= 0, got {jmax}")

    def products(x):
        Q = q_values(params, jmax, x)
        return Q[:, None, :] * Q[None, :, :]

    measure = spectral_measure(params)
    G = np.asarray(integrate_measure(measure, products, N))
    return G * pi_weights(params, jmax)[None, :]
