"""
Growth sequences, Wick polynomial bounds and convergence radii.
"""

import math
from typing import List, Optional, Sequence

import numpy as np

from src.config.config import SeriesConfig
from src.cumulants.formulas import free_cumulant
from src.cumulants.kernel import r_prime_series
from src.fock.space import FockContext
from src.norms.estimates import (NormReport, creation_constant, deformed_norm, element_norm, gamma_norm,
                                 gns_map_norm, lambda_norm, skipped_report)
from src.utils.exceptions import KindMismatchError
from src.utils.logger import setup_logger
from src.utils.scalars import to_float
from src.wick.polynomials import wick_poly

logger = setup_logger(__name__)

_SQRT2 = math.sqrt(2.0)


def alpha_sequence(n: int) -> List[int]:
    """alpha_0..alpha_n with alpha_j = 2 alpha_{j-1} + alpha_{j-2}, alpha_0 = 0, alpha_1 = 1."""
    values = [0, 1]
    while len(values) <= n:
        values.append(2 * values[-1] + values[-2])
    return values[:n + 1]


def alpha_closed_form(j: int) -> float:
    return ((1 + _SQRT2) ** j - (1 - _SQRT2) ** j) / (2 * _SQRT2)


def r_sequence(n: int) -> List[int]:
    """r_0..r_n with r_0 = r_1 = 1 and r_k = sum_{i=0}^{k-2} r_i r_{k-i-2} + r_{k-1}."""
    values = [1, 1]
    while len(values) <= n:
        k = len(values)
        values.append(sum(values[i] * values[k - i - 2] for i in range(k - 1)) + values[k - 1])
    return values[:n + 1]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def wick_constant(fc: FockContext) -> float:
    """K = 2 + ||Lambda|| / sqrt(kappa) + 1 / (2 kappa)."""
    kappa = creation_constant(fc.ctx)
    return 2 + lambda_norm(fc.ctx) / math.sqrt(kappa) + 1 / (2 * kappa)


def wick_norm_bounds(fc: FockContext, elements: Sequence[np.ndarray]) -> NormReport:
    """
    ||W(u_1..u_n)|| <= alpha_n kappa^(n/2) K prod ||u_i||.

    Raises:
        KindMismatchError: If Lambda is not a left multiplier
    """
    ctx = fc.ctx
    if not ctx.is_left_multiplier():
        raise KindMismatchError(f"'{ctx.name}' does not have a left-multiplier Lambda")
    n = len(elements)
    kappa = creation_constant(ctx)
    if kappa <= 0:
        return skipped_report('wick_norm', '||gamma + phi|| vanishes', degree=n)
    product = math.prod(element_norm(ctx, u) for u in elements)
    bound = alpha_sequence(n)[n] * kappa ** (n / 2) * wick_constant(fc) * product
    computed = deformed_norm(fc, wick_poly(fc, elements))
    return NormReport('wick_norm', computed, bound, tags={'degree': n})


def wick_series_bound(fc: FockContext, u: np.ndarray, max_degree: int) -> NormReport:
    """
    sum_{n=1}^{max_degree} ||W_n(u)|| against K / (2 sqrt 2) / (1 - (1 + sqrt 2) sqrt(kappa) ||u||).

    Skipped when ||u|| is outside the region where the geometric series converges.
    """
    kappa = creation_constant(fc.ctx)
    s = element_norm(fc.ctx, u)
    ratio = (1 + _SQRT2) * math.sqrt(kappa) * s
    if ratio >= 1:
        return skipped_report('wick_series', f"(1 + sqrt 2) sqrt(kappa) ||u|| = {ratio:.4g} >= 1",
                              degree=max_degree)
    computed = sum(deformed_norm(fc, wick_poly(fc, [u] * n)) for n in range(1, max_degree + 1))
    bound = wick_constant(fc) / (2 * _SQRT2) / (1 - ratio)
    return NormReport('wick_series', computed, bound, tags={'degree': max_degree, 'norm_u': s})


def convergence_constant(fc: FockContext) -> float:
    """K' = max(sqrt(||gamma||), ||Lambda||)."""
    return max(math.sqrt(gamma_norm(fc.ctx)), lambda_norm(fc.ctx))


def convergence_radius(fc: FockContext) -> float:
    """
    1 / (4 K'); math.inf when K' = 0 (then R'(u) = 1 identically).

    Example:
        >>> convergence_radius(build_fock(load_example('bozejko', {'eta': '1/4', 'lam': 0}), N=4))
        0.5
    """
    k_prime = convergence_constant(fc)
    if k_prime == 0:
        return math.inf
    return 1 / (4 * k_prime)


def r_prime_partial_sums(fc: FockContext, u: np.ndarray,
                         fraction: float = SeriesConfig.DEFAULT_RADIUS_FRACTION,
                         max_degree: int = SeriesConfig.DEFAULT_PARTIAL_SUM_DEGREE) -> NormReport:
    """
    Empirical convergence of R'(u) inside the radius.

    u is rescaled to fraction * radius (unit norm when the radius is
    infinite); sum_n ||R'_n(u)|| is compared with sum_n r_n K'^n ||u||^n.
    """
    ctx = fc.ctx
    radius = convergence_radius(fc)
    k_prime = convergence_constant(fc)
    norm_u = element_norm(ctx, u)
    if norm_u == 0:
        return skipped_report('r_prime_partial_sums', 'u vanishes')
    target = 1.0 if math.isinf(radius) else fraction * radius
    scaled = to_float(u) * (target / norm_u)
    float_space = fc if not fc.exact else FockContext(ctx.with_mode(False), fc.N)
    table = r_prime_series(float_space, scaled, max_degree)
    terms = [gns_map_norm(ctx, table[n]) for n in range(max_degree + 1)]
    r = r_sequence(max_degree)
    bound_terms = [r[n] * (k_prime * target) ** n for n in range(max_degree + 1)]
    report = NormReport('r_prime_partial_sums', sum(terms), sum(bound_terms),
                        tags={'radius': radius, 'norm_u': target, 'degree': max_degree}, note='empirical')
    logger.info(f"R' partial sums at {target:.4g}: {report.computed_norm:.6g} (bound {report.bound:.6g})")
    return report


def matricial_gf_bound(fc: FockContext, family: Sequence[np.ndarray],
                       max_degree: Optional[int] = None) -> NormReport:
    """
    sum_n sup_i |R[X(u_i), ..., X(u_{i+n-1})]| <= sum_{n>=2} phi[1] r_{n-2} K'^(n-2) s^n.
    """
    ctx = fc.ctx
    family = [np.asarray(u) for u in family]
    m = len(family)
    top = min(fc.N, m) if max_degree is None else min(max_degree, fc.N, m)
    s = max(element_norm(ctx, u) for u in family)
    k_prime = convergence_constant(fc)
    phi_one = float(to_float(ctx.phi_of_unit))
    r = r_sequence(max(top - 2, 0))
    computed = 0.0
    bound = 0.0
    for n in range(2, top + 1):
        computed += max(abs(float(to_float(free_cumulant(fc, family[i:i + n])))) for i in range(m - n + 1))
        bound += phi_one * r[n - 2] * k_prime ** (n - 2) * s ** n
    return NormReport('matricial_gf', computed, bound, tags={'degree': top, 's': s})
