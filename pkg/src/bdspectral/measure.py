"""Orthogonality measure of the chain.

The Stieltjes transform ``m(z) = int psi(dx) / (x - z)`` of the spectral
measure is an explicit algebraic function of z with a square-root branch cut
on [-2 sqrt(pq), 2 sqrt(pq)]. Its jump across the cut gives the density;
its poles off the cut are the atoms, each with weight equal to minus the
residue.

The square root sqrt(z^2 - 4pq) always means the branch that behaves like z
at infinity: positive to the right of the cut, negative to the left. It is
computed as sqrt(z - c) * sqrt(z + c) with principal roots.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .chain import ChainParams
from .errors import CutError, PoleError

__all__ = [
    "MassPoint",
    "RegionClass",
    "SpectralMeasure",
    "StieltjesM",
    "branch_sqrt",
    "classify_region",
    "denominator_roots",
    "density_at",
    "positive_part_weight",
    "point_masses",
    "spectral_measure",
    "stieltjes_m",
    "stieltjes_n",
    "support_sup_eta",
]

# |p0 - p| at or below this switches to the single-root formulas.
EQUAL_TOL = 1e-12
# Distance to a classification line that sets RegionClass.boundary.
BOUNDARY_TOL = 1e-9


def branch_sqrt(z, c: float):
    """sqrt(z^2 - c^2) on the branch that is ~z at infinity."""
    z = complex(z)
    return cmath.sqrt(z - c) * cmath.sqrt(z + c)


def _real_branch_sqrt(x: float, c: float) -> float:
    # Real x with |x| >= c; the factored form avoids cancellation near the edge.
    ax = abs(x)
    return math.copysign(math.sqrt(max(ax - c, 0.0) * (ax + c)), x)


@dataclass(frozen=True)
class StieltjesM:
    """Rationalised form of m(z).

    ``m(z) = (r0 + lin*z + half*sqrt(z^2-4pq)) / (a z^2 + b z + c)`` with
    ``lin = -(1 - p0/(2p))`` and ``half = p0/(2p)``.
    """

    params: ChainParams
    r0: float
    lin: float
    half: float
    a: float
    b: float
    c: float

    @classmethod
    def of(cls, params: ChainParams) -> "StieltjesM":
        p, q, p0, r0 = params.p, params.q, params.p0, params.r0
        half = p0 / (2.0 * p)
        return cls(
            params=params,
            r0=r0,
            lin=-(1.0 - half),
            half=half,
            a=1.0 - p0 / p,
            b=-2.0 * r0 * (1.0 - half),
            c=r0 * r0 + p0 * p0 * q / p,
        )

    def numerator(self, z):
        # (half - 1) z + half s == (2 half - 1) z - half c^2 / (s + z); the
        # right side does not cancel for large |z|.
        z = complex(z)
        cut = self.params.cut
        s = branch_sqrt(z, cut)
        return self.r0 + (2.0 * self.half - 1.0) * z - self.half * cut * cut / (s + z)

    def denominator(self, z):
        return (self.a * z + self.b) * z + self.c

    def denominator_derivative(self, x):
        return 2.0 * self.a * x + self.b


def _on_closed_cut(z: complex, c: float) -> bool:
    return z.imag == 0.0 and abs(z.real) <= c


def stieltjes_n(params: ChainParams, z) -> complex:
    """Stieltjes transform of the chain with state 0 removed.

    n(z) = (-z + sqrt(z^2 - 4pq)) / (2pq), evaluated as -2 / (z + sqrt(...))
    so that it decays like -1/z without cancellation.
    """
    z = complex(z)
    c = params.cut
    if _on_closed_cut(z, c):
        raise CutError(f"n(z) is two-valued on the cut; z = {z.real!r} lies in [-{c}, {c}]")
    return -2.0 / (z + branch_sqrt(z, c))


def stieltjes_m(params: ChainParams, z) -> complex:
    """Stieltjes transform m(z) of the spectral measure.

    Uses the rationalised quotient, falling back to -1/(z - r0 + q p0 n(z))
    where the quotient is 0/0 (a denominator root that carries no atom).
    Raises PoleError at an atom and CutError on the closed cut.
    """
    z = complex(z)
    c = params.cut
    if _on_closed_cut(z, c):
        raise CutError(f"m(z) is two-valued on the cut; z = {z.real!r} lies in [-{c}, {c}]")
    cf = z - params.r0 + params.q * params.p0 * stieltjes_n(params, z)
    if abs(cf) <= 1e-14 * max(1.0, abs(z)):
        raise PoleError(f"m(z) has a pole at z = {z!r}")
    sm = StieltjesM.of(params)
    den = sm.denominator(z)
    if abs(den) < 1e-8:
        return -1.0 / cf
    return sm.numerator(z) / den


def _dc_coeffs(params: ChainParams) -> tuple[float, float, float]:
    """Coefficients of p * denominator(m) = a x^2 + b x + c."""
    p, q, p0, r0 = params.p, params.q, params.p0, params.r0
    return p - p0, -r0 * (2.0 * p - p0), p * r0 * r0 + p0 * p0 * q


def dc(params: ChainParams, x):
    """(p - p0) x^2 - r0 (2p - p0) x + p r0^2 + p0^2 q."""
    a, b, c = _dc_coeffs(params)
    return (a * x + b) * x + c


def _all_roots(params: ChainParams) -> list[complex]:
    """Roots of the denominator, complex ones included, without cancellation.

    The discriminant factors as p0^2 (r0^2 - 4q(p - p0)).
    """
    p, q, p0, r0 = params.p, params.q, params.p0, params.r0
    a, b, c = _dc_coeffs(params)
    h = -b
    if abs(p0 - p) <= EQUAL_TOL:
        if r0 == 0.0:
            return []
        return [complex(r0 + p * q / r0)]
    disc = r0 * r0 - 4.0 * q * (p - p0)
    if disc >= 0.0:
        s = p0 * math.sqrt(disc)
        big = 0.5 * (h + math.copysign(s, h)) if h != 0.0 else 0.5 * s
        if big == 0.0:
            return [0j, 0j]
        return [complex(r) for r in sorted((big / a, c / big))]
    s = p0 * cmath.sqrt(disc)
    return [(h - s) / (2.0 * a), (h + s) / (2.0 * a)]


def denominator_roots(params: ChainParams) -> list[float]:
    """Real roots of the denominator of m(z), increasing.

    These are the candidate atom locations; a root need not carry mass.
    """
    return [z.real for z in _all_roots(params) if z.imag == 0.0]


@dataclass(frozen=True)
class MassPoint:
    x: float
    w: float


def _residue_weight(params: ChainParams, x: float) -> float:
    """Minus the residue of m at a real denominator root ``x`` (0 if no pole)."""
    c = params.cut
    if abs(x) <= c:
        return 0.0
    sm = StieltjesM.of(params)
    s = _real_branch_sqrt(x, c)
    # At a root, (x(1 - half) - r0)^2 = half^2 s^2. The root is a pole of m
    # only when x(1 - half) - r0 = -half*s; otherwise the numerator vanishes.
    lead = x * (1.0 - sm.half) - params.r0
    if not lead * s < 0.0:
        return 0.0
    if abs(params.p0 - params.p) <= EQUAL_TOL:
        dprime = -params.r0
    else:
        dprime = sm.denominator_derivative(x)
    w = -2.0 * sm.half * s / dprime
    return w if w > 0.0 else 0.0


def point_masses(params: ChainParams) -> list[MassPoint]:
    """Atoms of the spectral measure, ordered by location."""
    out = []
    for x in denominator_roots(params):
        w = _residue_weight(params, x)
        if w > 0.0:
            out.append(MassPoint(x, w))
    return out


def positive_part_weight(params: ChainParams, x: float) -> float:
    """The positive-part weight expression for a denominator root.

    For p0 = p this is (1 - pq/r0^2)_+. Otherwise it is::

        (q p0^2 / (p |x - r0|) - |x - r0|)_+ / sqrt(r0^2 - 4q(p - p0))

    which equals (p0/p) times the residue weight, not the residue weight
    itself. ``point_masses`` uses residues; this is kept for comparison.
    """
    p, q, p0, r0 = params.p, params.q, params.p0, params.r0
    if abs(p0 - p) <= EQUAL_TOL:
        return max(0.0, 1.0 - p * q / (r0 * r0)) if r0 > 0 else 0.0
    disc = r0 * r0 - 4.0 * q * (p - p0)
    if disc <= 0.0:
        return 0.0
    d = abs(x - r0)
    return max(0.0, q * p0 * p0 / (p * d) - d) / math.sqrt(disc)


def density_at(params: ChainParams, x: float) -> float:
    """Density of the continuous part at |x| <= 2 sqrt(pq).

    Zero at the cut edges unless the denominator also vanishes there, in
    which case the density has an inverse square-root singularity and
    ``inf`` is returned.
    """
    c = params.cut
    x = float(x)
    ax = abs(x)
    if ax > c:
        raise CutError(f"density is supported on [-{c}, {c}], got x = {x!r}")
    root = math.sqrt((c - ax) * (c + ax))
    den = dc(params, x)
    if root == 0.0:
        a, b, cc = _dc_coeffs(params)
        scale = abs(a) * c * c + abs(b) * c + abs(cc)
        return math.inf if abs(den) <= 1e-13 * scale else 0.0
    return params.p0 / (2.0 * math.pi) * root / den


@dataclass(frozen=True)
class SpectralMeasure:
    """Continuous density on the cut plus zero, one or two atoms."""

    params: ChainParams
    masses: tuple[MassPoint, ...]
    eta: float
    cut: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cut", self.params.cut)

    def density(self, x: float) -> float:
        return density_at(self.params, x)

    @property
    def discrete_mass(self) -> float:
        return math.fsum(m.w for m in self.masses)


def spectral_measure(params: ChainParams) -> SpectralMeasure:
    masses = tuple(point_masses(params))
    eta = max([params.cut] + [m.x for m in masses])
    return SpectralMeasure(params=params, masses=masses, eta=eta)


def support_sup_eta(measure: SpectralMeasure) -> float:
    """Supremum of the support: the right cut edge or the rightmost atom."""
    return max([measure.cut] + [m.x for m in measure.masses])


@dataclass(frozen=True)
class RegionClass:
    count: int
    boundary: bool
    recurrent: bool
    positive_recurrent: bool


def classify_region(params: ChainParams) -> RegionClass:
    """Number of atoms from the parameter inequalities alone.

    With s = sqrt(p/q) and the lines p0 = 2p -+ s r0:

    * two atoms iff p < 1/2 and p0 > 2p + s r0;
    * one atom iff p < 1/2 and 2p - s r0 < p0 <= 2p + s r0,
      or p > 1/2, p0 > 2p - s r0 and r0 > sqrt(pq);
    * for p0 = p, one atom iff p < 1/2 and r0 > sqrt(pq).
    """
    p, q, p0, r0 = params.p, params.q, params.p0, params.r0
    s = math.sqrt(p / q)
    lower = 2.0 * p - s * r0
    upper = 2.0 * p + s * r0
    rpq = math.sqrt(p * q)

    if abs(p0 - p) <= EQUAL_TOL:
        count = 1 if (p < 0.5 and r0 > rpq) else 0
    elif p < 0.5:
        if p0 > upper:
            count = 2
        elif p0 > lower:
            count = 1
        else:
            count = 0
    elif p > 0.5:
        count = 1 if (p0 > lower and r0 > rpq) else 0
    else:
        count = 0

    boundary = (
        abs(p0 - lower) <= BOUNDARY_TOL
        or abs(p0 - upper) <= BOUNDARY_TOL
        or abs(r0 - rpq) <= BOUNDARY_TOL
        or abs(p - 0.5) <= BOUNDARY_TOL
    )
    recurrent = params.q0 == 0.0 and p <= 0.5
    return RegionClass(
        count=count,
        boundary=boundary,
        recurrent=recurrent,
        positive_recurrent=recurrent and p < 0.5,
    )
