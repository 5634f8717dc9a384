"""
Norm bounds for the C-deformed construction and the orthogonal-basis criterion.

Norms on H are Euclidean in the standard basis; ||C + I|| and ||Lambda||
are spectral norms of the d^2 x d^2 and d x d^2 matrices.
"""

import math
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config.config import SeriesConfig, tolerance_for
from src.construction_c.construction import ConstructionC
from src.cumulants.kernel import r_prime_series
from src.fock.operators import a_minus, a_plus, a_zero
from src.fock.space import FockContext
from src.norms.estimates import NormReport, deformed_norm, skipped_report
from src.norms.series import r_sequence
from src.utils.logger import setup_logger
from src.utils.scalars import kron_all, max_abs, to_float, within
from src.wick.polynomials import wick_poly

logger = setup_logger(__name__)


def _vector_norm(f: np.ndarray) -> float:
    return float(np.linalg.norm(to_float(f)))


def shifted_norm(cc: ConstructionC) -> float:
    """||C + I (x) I||."""
    return float(np.linalg.norm(to_float(cc.shifted), 2))


def lambda_operator_norm(cc: ConstructionC) -> float:
    return float(np.linalg.norm(to_float(cc.lambda_matrix), 2))


def creation_bound_c(cc: ConstructionC) -> float:
    """sqrt(max(1, ||C + I||)); the level-0 map f -> f has norm ||f||."""
    return math.sqrt(max(1.0, shifted_norm(cc)))


def radius_constant_c(cc: ConstructionC) -> float:
    """L = max(sqrt(||C + I||), ||Lambda||)."""
    return max(math.sqrt(shifted_norm(cc)), lambda_operator_norm(cc))


def convergence_radius_c(cc: ConstructionC) -> float:
    """1 / (4L), math.inf when L = 0."""
    constant = radius_constant_c(cc)
    return math.inf if constant == 0 else 1 / (4 * constant)


def _labels(cc: ConstructionC, elements: Optional[Sequence[np.ndarray]]) -> List[Tuple[str, np.ndarray]]:
    if elements is None:
        return [(f"e{i}", cc.basis(i)) for i in range(cc.dim)]
    return [(f"f{i}", np.asarray(f)) for i, f in enumerate(elements)]


def norm_bounds_c(cc: ConstructionC, elements: Optional[Sequence[np.ndarray]] = None) -> List[NormReport]:
    """
    ||a+(f)|| = ||a-(f*)|| <= sqrt(max(1, ||C + I||)) ||f||, ||a0(f)|| <= ||Lambda|| ||f||,
    and the empirical convergence of R'(f) inside the radius 1 / (4L).
    """
    creation = creation_bound_c(cc)
    lam_norm = lambda_operator_norm(cc)
    reports = []
    for label, f in _labels(cc, elements):
        norm_f = _vector_norm(f)
        plus = deformed_norm(cc, a_plus(cc, f))
        minus = deformed_norm(cc, a_minus(cc, cc.conjugate(f)))
        reports.append(NormReport('a_plus_c', plus, creation * norm_f, tags={'element': label}))
        reports.append(NormReport('a_minus_adjoint_c', abs(minus - plus), 0.0, tags={'element': label}))
        reports.append(NormReport('a_zero_c', deformed_norm(cc, a_zero(cc, f)), lam_norm * norm_f,
                                  tags={'element': label}))
    reports.append(r_prime_partial_sums_c(cc, cc.basis(0)))
    failed = [r for r in reports if not r.passed]
    if failed:
        logger.warning(f"{len(failed)} construction C norm bound(s) violated")
    else:
        logger.info(f"All {len(reports)} construction C norm bounds hold (N={cc.N})")
    return reports


def r_prime_partial_sums_c(cc: ConstructionC, f: np.ndarray,
                           fraction: float = SeriesConfig.DEFAULT_RADIUS_FRACTION,
                           max_degree: Optional[int] = None) -> NormReport:
    """sum_n ||R'_n(f)|| against sum_n r_n L^n ||f||^n at fraction * radius."""
    norm_f = _vector_norm(f)
    if norm_f == 0:
        return skipped_report('r_prime_partial_sums_c', 'f vanishes')
    radius = convergence_radius_c(cc)
    constant = radius_constant_c(cc)
    target = 1.0 if math.isinf(radius) else fraction * radius
    scaled = to_float(f) * (target / norm_f)
    float_space = cc if not cc.exact else ConstructionC(cc.dim, to_float(cc.conj), to_float(cc.C),
                                                        to_float(cc.Lambda), cc.N, cc.name)
    degree = SeriesConfig.DEFAULT_PARTIAL_SUM_DEGREE if max_degree is None else max_degree
    table = r_prime_series(float_space, scaled, degree)
    computed = sum(float(np.linalg.norm(table[n], 2)) for n in range(degree + 1))
    r = r_sequence(degree)
    bound = sum(r[n] * (constant * target) ** n for n in range(degree + 1))
    return NormReport('r_prime_partial_sums_c', computed, bound,
                      tags={'radius': radius, 'norm_f': target, 'degree': degree}, note='empirical')


def fitted_wick_constant(cc: ConstructionC, f: np.ndarray,
                         max_degree: Optional[int] = None) -> Tuple[float, float, List[float]]:
    """
    Fit (alpha, K) in ||W_n(f)|| <= alpha^(n-1) (sqrt||C + I|| + ||Lambda||)^(n-1) K ||f||^n.

    K is ||W_1(f)|| / ||f||; alpha is the smallest value that makes every
    degree up to max_degree satisfy the inequality. Norms are measured on
    the exact sources of each W_n.

    Returns:
        (alpha, K, [||W_n(f)|| for n = 1..max_degree])
    """
    top = cc.N - 1 if max_degree is None else min(max_degree, cc.N - 1)
    norm_f = _vector_norm(f)
    growth = math.sqrt(shifted_norm(cc)) + lambda_operator_norm(cc)
    norms = [deformed_norm(cc, wick_poly(cc, [f] * n)) for n in range(1, top + 1)]
    k_constant = norms[0] / norm_f if norm_f else 0.0
    alpha = 0.0
    for n in range(2, top + 1):
        scale = k_constant * growth ** (n - 1) * norm_f ** n
        if scale > 0:
            alpha = max(alpha, (norms[n - 1] / scale) ** (1 / (n - 1)))
    return alpha, k_constant, norms


def wick_growth_c(cc: ConstructionC, f: np.ndarray, max_degree: Optional[int] = None) -> List[NormReport]:
    """Per-degree Wick norms against the bound with the fitted alpha (flagged empirical)."""
    alpha, k_constant, norms = fitted_wick_constant(cc, f, max_degree)
    growth = math.sqrt(shifted_norm(cc)) + lambda_operator_norm(cc)
    norm_f = _vector_norm(f)
    logger.info(f"Fitted Wick growth constant alpha = {alpha:.4g} (K = {k_constant:.4g})")
    return [NormReport('wick_c', value, alpha ** (n - 1) * growth ** (n - 1) * k_constant * norm_f ** n,
                       tags={'degree': n, 'alpha': alpha}, note='empirical')
            for n, value in enumerate(norms, start=1)]


@dataclass
class OrthogonalBasisResult:
    """
    Outcome of the orthogonal-basis criterion.

    Attributes:
        passed: Criterion holds and the tensor family is orthogonal
        condition_residual: Violation of the eigen-tensor (or gamma) condition
        orthogonality_residual: Largest off-diagonal Gram entry of the family
        witness: Failing index pair, e.g. ('condition', n, i, k) or ('gram', level, p, q)
        levels: Highest level checked
    """
    passed: bool
    condition_residual: float
    orthogonality_residual: float
    witness: Optional[Tuple] = None
    levels: int = 0

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self):
        return {'passed': self.passed, 'condition_residual': self.condition_residual,
                'orthogonality_residual': self.orthogonality_residual,
                'witness': list(self.witness) if self.witness else None, 'levels': self.levels}


def _proportional_residual(image: np.ndarray, vector: np.ndarray) -> float:
    """Distance of image from the line through vector."""
    norm = np.dot(vector, vector)
    if norm == 0:
        return max_abs(image)
    return max_abs(image - vector * (np.dot(vector, image) / norm))


def _c_condition(cc: ConstructionC, bases: List[np.ndarray]) -> Tuple[float, Optional[Tuple]]:
    worst, witness = 0.0, None
    for n in range(2, len(bases) + 1):
        upper, lower = bases[n - 1], bases[n - 2]
        for i, k in product(range(upper.shape[1]), range(lower.shape[1])):
            tensor = np.kron(upper[:, i], lower[:, k])
            residual = _proportional_residual(np.dot(cc.C, tensor), tensor)
            if residual > worst:
                worst, witness = residual, ('condition', n, i, k)
    return worst, witness


def _gamma_condition(fc: FockContext, bases: List[np.ndarray]) -> Tuple[float, Optional[Tuple]]:
    ctx = fc.ctx
    worst, witness = 0.0, None
    for n in range(1, len(bases) + 1):
        basis = bases[n - 1]
        for i, k in product(range(basis.shape[1]), repeat=2):
            value = ctx.gamma_pair(ctx.adjoint(basis[:, i]), basis[:, k])
            if i != k:
                residual = max_abs(value)
            elif n >= 2:
                lower = bases[n - 2]
                residual = max((_proportional_residual(ctx.multiply(value, lower[:, j]), lower[:, j])
                                for j in range(lower.shape[1])), default=0.0)
            else:
                continue
            if residual > worst:
                worst, witness = residual, ('condition', n, i, k)
    return worst, witness


def orthogonal_basis_check(space: Union[ConstructionC, FockContext], bases: Sequence,
                           tolerance: Optional[float] = None) -> OrthogonalBasisResult:
    """
    Check that {f_{n, i_n} (x) ... (x) f_{1, i_1}} is orthogonal in the deformed inner product.

    Args:
        space: ConstructionC (eigen-tensor condition C(f_{n,i} (x) f_{n-1,k}) = alpha f_{n,i} (x) f_{n-1,k})
            or FockContext (gamma[f*_{n,i} f_{n,k}] = 0 for i != k, and
            gamma[f*_{n,i} f_{n,i}] f_{n-1,j} proportional to f_{n-1,j})
        bases: Per-level bases f_{n, .} as columns, n = 1..L (L <= N);
            orthogonality, not normalization, is what the criterion uses
        tolerance: Pass threshold

    Returns:
        OrthogonalBasisResult with a witness on failure
    """
    tolerance = tolerance_for(space.exact) if tolerance is None else tolerance
    bases = [np.asarray(b) for b in bases][:space.N]
    if isinstance(space, ConstructionC):
        condition, witness = _c_condition(space, bases)
    else:
        condition, witness = _gamma_condition(space, bases)

    orthogonality, gram_witness = 0.0, None
    for level in range(1, len(bases) + 1):
        family = kron_all([bases[n - 1] for n in range(level, 0, -1)])
        gram = np.dot(np.dot(family.T, space.gram(level)), family)
        off_diagonal = gram.copy()
        for p in range(gram.shape[0]):
            off_diagonal[p, p] = 0
        residual = max_abs(off_diagonal)
        if residual > orthogonality:
            flat = int(np.argmax(np.abs(to_float(off_diagonal))))
            orthogonality, gram_witness = residual, ('gram', level, *divmod(flat, gram.shape[0]))

    condition_ok = within(condition, tolerance)
    orthogonal_ok = within(orthogonality, tolerance)
    result = OrthogonalBasisResult(condition_ok and orthogonal_ok, condition, orthogonality,
                                   witness if not condition_ok else (gram_witness if not orthogonal_ok else None),
                                   len(bases))
    if condition_ok != orthogonal_ok:
        logger.warning(f"Orthogonal-basis condition ({condition_ok}) and Gram orthogonality "
                       f"({orthogonal_ok}) disagree")
    return result
