"""Spectral measure of a birth-and-death chain with constant rates away from 0.

The chain moves up with probability p and down with q = 1 - p on states
j >= 1; state 0 holds with r0, moves up with p0 and is absorbed with
q0 = 1 - r0 - p0. Transition probabilities are integrals of polynomials
against an explicit measure, and everything spectral here is checked
against the exact matrix power.
"""

from .asymptotics import (
    QsdDistribution,
    QsdFamily,
    RatioLimitResult,
    qsd_alpha,
    qsd_exists,
    ratio_limit,
    ratio_limit_parity,
)
from .chain import (
    ChainParams,
    PiWeights,
    TruncatedChain,
    absorption_probability,
    evolve,
    new_chain,
    oracle_transition,
    pi_weight,
    pi_weights,
    truncate,
)
from .errors import ChainError, CutError, InvalidParameterError, PoleError, PreconditionError
from .measure import (
    MassPoint,
    RegionClass,
    SpectralMeasure,
    classify_region,
    denominator_roots,
    density_at,
    point_masses,
    positive_part_weight,
    spectral_measure,
    stieltjes_m,
    stieltjes_n,
    support_sup_eta,
)
from .polynomials import cheb_T, cheb_U, q_poly_closed, q_poly_recurrence, q_values
from .quadrature import (
    TransitionResult,
    build_rule,
    continuous_integral,
    gram_matrix,
    integrate_measure,
    km_transition,
    moments,
)
from .verify import Check, run_checks

__version__ = "0.1.0"
