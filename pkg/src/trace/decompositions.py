"""
Structure of tracial contexts.

With gamma = 0 and a tracial vacuum, f . g = Lambda(f (x) g) turns B into
an associative star-algebra under the phi inner product <f, g> = phi[g* f];
B splits into the annihilator Z (semicircular part) and the product span
P (compound Poisson part). With gamma = eta . for a central eta the same
holds on N = ker(eta .), and N-perp is Bozejko-like.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.algebra.context import AlgebraContext
from src.algebra.validation import CheckResult
from src.config.config import tolerance_for
from src.cumulants.formulas import central_element, free_cumulant
from src.fock.space import FockContext
from src.trace.conditions import CONDITION_NAMES, condition_residuals
from src.utils.exceptions import PreconditionError
from src.utils.logger import setup_logger
from src.utils.scalars import as_array, column_space, eye, inverse, max_abs, null_space, symmetric_eigenvalues, within, zeros

logger = setup_logger(__name__)

# Cumulant patterns are checked up to this order (capped by the truncation)
MAX_PATTERN_ORDER = 6


@dataclass
class DecompositionReport:
    """
    Named checks of a structural decomposition.

    Attributes:
        name: 'poisson' or 'central_eta'
        subspaces: Subspace name -> basis columns
        checks: CheckResult per identity
        cumulant_orders: Largest cumulant order checked
    """
    name: str
    subspaces: Dict[str, np.ndarray] = field(default_factory=dict)
    checks: List[CheckResult] = field(default_factory=list)
    cumulant_orders: int = 0

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def dimension(self, subspace: str) -> int:
        return int(self.subspaces[subspace].shape[1])

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(f"No check named '{name}' in {self.name} decomposition")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{'check': c.name, 'residual': c.residual, 'passed': c.passed, 'detail': c.detail}
                             for c in self.checks])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'decomposition': self.name,
            'passed': self.passed,
            'dimensions': {name: self.dimension(name) for name in self.subspaces},
            'cumulant_orders': self.cumulant_orders,
            'checks': [{'name': c.name, 'residual': c.residual, 'passed': c.passed, 'detail': c.detail}
                       for c in self.checks],
        }


def _check(name: str, residual: float, tolerance: float, detail: str = '') -> CheckResult:
    return CheckResult(name=name, residual=residual, passed=within(residual, tolerance), detail=detail)


def _require_trace_conditions(ctx: AlgebraContext, tolerance: float) -> None:
    residuals = condition_residuals(ctx)
    failing = [name for name in CONDITION_NAMES if not within(residuals[name], tolerance)]
    if failing:
        raise PreconditionError(f"Trace conditions fail on '{ctx.name}': {', '.join(failing)}")


def phi_inner(ctx: AlgebraContext, f: np.ndarray, g: np.ndarray):
    """<f, g> = phi[g* f]."""
    return np.dot(g, np.dot(ctx.phi_gram, f))


def orthogonal_complement(ctx: AlgebraContext, basis: np.ndarray) -> np.ndarray:
    """Basis of the phi-orthogonal complement of span(basis)."""
    if basis.shape[1] == 0:
        return eye(ctx.dim, ctx.exact)
    return null_space(np.dot(basis.T, ctx.phi_gram.T))


def self_adjoint_part(ctx: AlgebraContext, basis: np.ndarray) -> np.ndarray:
    """Spanning set of {f in span(basis) : f* = f}."""
    if basis.shape[1] == 0:
        return basis
    coefficients = null_space(np.dot(ctx.star.T, basis) - basis)
    if coefficients.shape[1] == 0:
        return zeros((ctx.dim, 0), ctx.exact)
    return column_space(np.dot(basis, coefficients))


def product_subspaces(ctx: AlgebraContext, ambient: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    (Z, P) inside span(ambient) for the product f . g = Lambda(f (x) g):
    Z = {f : g . f = 0 for all g}, P = span{f . g}.
    """
    ambient = eye(ctx.dim, ctx.exact) if ambient is None else ambient
    k = ambient.shape[1]
    if k == 0:
        empty = zeros((ctx.dim, 0), ctx.exact)
        return empty, empty
    stacked = np.vstack([np.dot(ctx.lam_matrix(ambient[:, j]), ambient) for j in range(k)])
    coefficients = null_space(stacked)
    z_basis = np.dot(ambient, coefficients) if coefficients.shape[1] else zeros((ctx.dim, 0), ctx.exact)
    products = np.column_stack([ctx.lam_of(ambient[:, i], ambient[:, j]) for i in range(k) for j in range(k)])
    return z_basis, column_space(products)


def _chain(ctx: AlgebraContext, elements: Sequence[np.ndarray]) -> np.ndarray:
    """f_1 . (f_2 . (... . f_n))."""
    result = elements[-1]
    for f in reversed(elements[:-1]):
        result = ctx.lam_of(f, result)
    return result


def _columns(basis: np.ndarray) -> List[np.ndarray]:
    return [basis[:, j] for j in range(basis.shape[1])]


def _star_algebra_checks(ctx: AlgebraContext, basis: List[np.ndarray], tolerance: float) -> List[CheckResult]:
    star = 0.0
    associative = 0.0
    symmetric = 0.0
    for f, g in product(basis, repeat=2):
        star = max(star, max_abs(ctx.adjoint(ctx.lam_of(f, g)) -
                                 ctx.lam_of(ctx.adjoint(g), ctx.adjoint(f))))
        for h in basis:
            associative = max(associative, max_abs(ctx.lam_of(ctx.lam_of(f, g), h) -
                                                   ctx.lam_of(f, ctx.lam_of(g, h))))
            symmetric = max(symmetric, max_abs(phi_inner(ctx, ctx.lam_of(f, g), h) -
                                               phi_inner(ctx, g, ctx.lam_of(ctx.adjoint(f), h))))
    return [_check('product_star', star, tolerance), _check('product_associative', associative, tolerance),
            _check('product_symmetric', symmetric, tolerance)]


def cumulant_formula_residual(fc: FockContext, letters: List[np.ndarray], max_order: int) -> float:
    """
    max |R[X(f_1), ..., X(f_n)] - phi[f_1 (f_2 . ... . f_n)]| over words in the letters, 2 <= n <= max_order.

    phi[f_1 F] = <F, f_1*> is the pairing of f_1 against the product chain.
    """
    ctx = fc.ctx
    worst = 0.0
    for n in range(2, max_order + 1):
        for word in product(range(len(letters)), repeat=n):
            elements = [letters[i] for i in word]
            expected = ctx.phi_of(ctx.multiply(elements[0], _chain(ctx, elements[1:])))
            worst = max(worst, max_abs(free_cumulant(fc, elements) - expected))
    return worst


def mixed_cumulant_residual(fc: FockContext, first: List[np.ndarray], second: List[np.ndarray],
                            max_order: int) -> float:
    """Largest |R_n| over words using letters from both families (vanishes when they are free)."""
    letters = first + second
    split = len(first)
    worst = 0.0
    for n in range(2, max_order + 1):
        for word in product(range(len(letters)), repeat=n):
            if all(i < split for i in word) or all(i >= split for i in word):
                continue
            worst = max(worst, max_abs(free_cumulant(fc, [letters[i] for i in word])))
    return worst


def semicircular_residual(fc: FockContext, letters: List[np.ndarray], max_order: int) -> float:
    """R_n = delta_{n=2} <f_1, f_2> on self-adjoint letters."""
    ctx = fc.ctx
    worst = 0.0
    for n in range(2, max_order + 1):
        for word in product(range(len(letters)), repeat=n):
            elements = [letters[i] for i in word]
            expected = phi_inner(ctx, elements[0], elements[1]) if n == 2 else 0
            worst = max(worst, max_abs(free_cumulant(fc, elements) - expected))
    return worst


def _annihilating_pairs(ctx: AlgebraContext, letters: List[np.ndarray]) -> List[Tuple[int, int]]:
    zero = tolerance_for(ctx.exact)
    return [(i, j) for i in range(len(letters)) for j in range(i + 1, len(letters))
            if max_abs(ctx.lam_of(letters[i], letters[j])) <= zero
            and max_abs(ctx.lam_of(letters[j], letters[i])) <= zero]


def _product_checks(fc: FockContext, ambient: Optional[np.ndarray], max_order: int, tolerance: float,
                    prefix: str = '') -> Tuple[np.ndarray, np.ndarray, List[CheckResult]]:
    ctx = fc.ctx
    z_basis, p_basis = product_subspaces(ctx, ambient)
    ambient_dim = ctx.dim if ambient is None else ambient.shape[1]
    checks = [
        _check(f'{prefix}orthogonality', max_abs(np.dot(np.dot(p_basis.T, ctx.phi_gram), z_basis)), tolerance),
        _check(f'{prefix}direct_sum', float(abs(ambient_dim - z_basis.shape[1] - p_basis.shape[1])), 0,
               detail=f"dim Z = {z_basis.shape[1]}, dim P = {p_basis.shape[1]}"),
    ]
    basis = _columns(eye(ctx.dim, ctx.exact) if ambient is None else ambient)
    checks += [CheckResult(f'{prefix}{c.name}', c.residual, c.passed) for c in
               _star_algebra_checks(ctx, basis, tolerance)]
    checks.append(_check(f'{prefix}cumulant_formula', cumulant_formula_residual(fc, basis, max_order), tolerance))

    z_letters = _columns(self_adjoint_part(ctx, z_basis))
    p_letters = _columns(self_adjoint_part(ctx, p_basis))
    checks.append(_check(f'{prefix}semicircular_z', semicircular_residual(fc, z_letters, max_order), tolerance,
                         detail=f"{len(z_letters)} self-adjoint letters"))
    checks.append(_check(f'{prefix}free_z_p', mixed_cumulant_residual(fc, z_letters, p_letters, max_order),
                         tolerance))
    pairs = _annihilating_pairs(ctx, p_letters)
    worst = max((mixed_cumulant_residual(fc, [p_letters[i]], [p_letters[j]], max_order) for i, j in pairs),
                default=0.0)
    checks.append(_check(f'{prefix}free_annihilating_pairs', worst, tolerance, detail=f"{len(pairs)} pairs"))
    return z_basis, p_basis, checks


def poisson_decomposition(fc: FockContext, tolerance: Optional[float] = None) -> DecompositionReport:
    """
    Split B = Z (+) P for gamma = 0 and verify the cumulant patterns.

    Args:
        fc: Fock space over a context with gamma = 0 satisfying the trace conditions
        tolerance: Pass threshold (defaults to the mode's tolerance)

    Returns:
        DecompositionReport with subspaces 'Z' and 'P'

    Raises:
        PreconditionError: If gamma does not vanish or a trace condition fails
    """
    ctx = fc.ctx
    tolerance = tolerance_for(fc.exact) if tolerance is None else tolerance
    if max_abs(ctx.gamma_pair_tensor) > tolerance:
        raise PreconditionError(f"Poisson decomposition needs gamma = 0 on '{ctx.name}'")
    _require_trace_conditions(ctx, tolerance)
    max_order = min(MAX_PATTERN_ORDER, fc.N)
    z_basis, p_basis, checks = _product_checks(fc, None, max_order, tolerance)
    report = DecompositionReport('poisson', {'Z': z_basis, 'P': p_basis}, checks, max_order)
    logger.info(f"Poisson decomposition of '{ctx.name}': dim Z = {z_basis.shape[1]}, "
                f"dim P = {p_basis.shape[1]}, passed = {report.passed}")
    return report


def central_eta_decomposition(fc: FockContext, tolerance: Optional[float] = None) -> DecompositionReport:
    """
    Split B = N (+) N-perp with N = {f : eta f = 0} for gamma = eta . central.

    N is further split as in poisson_decomposition. On N-perp
    Lambda(f (x) g) = lambda f g with lambda = Lambda(1 (x) 1) central and
    self-adjoint; X(f) with f in N-perp is free from X(g) with g in N.

    Raises:
        PreconditionError: If gamma is not multiplication by a central element,
            or a trace condition fails
    """
    ctx = fc.ctx
    tolerance = tolerance_for(fc.exact) if tolerance is None else tolerance
    eta = central_element(ctx, ctx.gamma) if ctx.gamma_bilinear is None else None
    if eta is None:
        raise PreconditionError(f"gamma of '{ctx.name}' is not multiplication by a central element")
    _require_trace_conditions(ctx, tolerance)
    max_order = min(MAX_PATTERN_ORDER, fc.N)

    n_basis = null_space(ctx.left_matrix(eta))
    if n_basis.shape[1] == 0:
        n_basis = zeros((ctx.dim, 0), ctx.exact)
    n_perp = orthogonal_complement(ctx, n_basis)
    lam = ctx.lam_of(ctx.unit, ctx.unit)

    basis = [ctx.basis(i) for i in range(ctx.dim)]
    eta_lambda = max((max_abs(ctx.multiply(eta, ctx.lam_of(b, f) - ctx.multiply(ctx.multiply(lam, b), f)))
                      for b, f in product(basis, repeat=2)), default=0.0)
    perp = _columns(n_perp)
    perp_lambda = max((max_abs(ctx.lam_of(f, g) - ctx.multiply(ctx.multiply(lam, f), g))
                       for f, g in product(perp, repeat=2)), default=0.0)
    lam_central = max((max_abs(ctx.multiply(lam, f) - ctx.multiply(f, lam)) for f in perp), default=0.0)
    lam_self_adjoint = max((max_abs(ctx.multiply(ctx.adjoint(lam) - lam, f)) for f in perp), default=0.0)
    checks = [
        _check('eta_lambda', eta_lambda, tolerance),
        _check('n_perp_lambda', perp_lambda, tolerance),
        _check('lambda_central', lam_central, tolerance),
        _check('lambda_self_adjoint', lam_self_adjoint, tolerance),
        _check('n_orthogonal', max_abs(np.dot(np.dot(n_perp.T, ctx.phi_gram), n_basis)), tolerance),
    ]

    z_basis, p_basis, n_checks = _product_checks(fc, n_basis, max_order, tolerance, prefix='n_')
    checks += n_checks
    n_letters = _columns(self_adjoint_part(ctx, n_basis))
    perp_letters = _columns(self_adjoint_part(ctx, n_perp))
    checks.append(_check('free_n_perp', mixed_cumulant_residual(fc, perp_letters, n_letters, max_order),
                         tolerance))

    report = DecompositionReport('central_eta', {'N': n_basis, 'N_perp': n_perp, 'Z': z_basis, 'P': p_basis},
                                 checks, max_order)
    logger.info(f"Central-eta decomposition of '{ctx.name}': dim N = {n_basis.shape[1]}, "
                f"dim N-perp = {n_perp.shape[1]}, passed = {report.passed}")
    return report


def conjugated_lambda(ctx: AlgebraContext, V: Any, lam: Any, eta: Any,
                      tolerance: Optional[float] = None) -> AlgebraContext:
    """
    Context with Lambda(f (x) g) = V^-1[(V f) lambda (V g)] and gamma = eta . on the algebra of ctx.

    Args:
        ctx: Algebra supplying B, star and phi
        V: d x d matrix, unitary for the phi inner product and commuting with the star
        lam: Central self-adjoint element
        eta: Central positive element

    Returns:
        AlgebraContext named 'conjugated'

    Raises:
        PreconditionError: If V is not phi-unitary, or lam / eta are not of the required form

    Example:
        >>> base = load_example('poisson', {'m': 2})
        >>> conj = conjugated_lambda(base, [[0, 1], [1, 0]], [1, 2], [1, 1])
        >>> conj.lam_of(conj.basis(0), conj.basis(0))
        array([Fraction(2, 1), Fraction(0, 1)], dtype=object)
    """
    tolerance = tolerance_for(ctx.exact) if tolerance is None else tolerance
    V = as_array(V, ctx.exact)
    if V.shape != (ctx.dim, ctx.dim):
        raise PreconditionError(f"V must be {ctx.dim}x{ctx.dim}, got {V.shape}")
    lam = ctx.element(lam)
    eta = ctx.element(eta)

    unitary = max_abs(np.dot(np.dot(V.T, ctx.phi_gram), V) - ctx.phi_gram)
    if not within(unitary, tolerance):
        raise PreconditionError(f"V is not unitary for the phi inner product (residual {unitary:.3g})")
    star_commutation = max_abs(np.dot(V, ctx.star.T) - np.dot(ctx.star.T, V))
    if not within(star_commutation, tolerance):
        raise PreconditionError(f"V does not commute with the star (residual {star_commutation:.3g})")
    for label, element in (('lambda', lam), ('eta', eta)):
        if central_element(ctx, ctx.left_matrix(element)) is None:
            raise PreconditionError(f"{label} is not central")
        if not within(max_abs(ctx.adjoint(element) - element), tolerance):
            raise PreconditionError(f"{label} is not self-adjoint")
    positivity = symmetric_eigenvalues(np.dot(ctx.phi_gram, ctx.left_matrix(eta)))
    if positivity.size and positivity[0] < -tolerance_for(False):
        raise PreconditionError(f"eta is not positive (phi[f* eta f] reaches {positivity[0]:.3g})")

    images = [ctx.multiply(V[:, i], V[:, j]) for i in range(ctx.dim) for j in range(ctx.dim)]
    multiplicative = max(max_abs(np.dot(V, ctx.multiply(ctx.basis(i), ctx.basis(j))) - images[i * ctx.dim + j])
                         for i in range(ctx.dim) for j in range(ctx.dim))
    if not within(multiplicative, tolerance):
        logger.warning(f"V is not multiplicative (residual {multiplicative:.3g}); "
                       f"the conjugated Lambda may violate the trace conditions")

    v_inverse = inverse(V)
    tensor = zeros((ctx.dim, ctx.dim, ctx.dim), ctx.exact)
    for i in range(ctx.dim):
        for j in range(ctx.dim):
            tensor[i, j, :] = np.dot(v_inverse, ctx.multiply(ctx.multiply(V[:, i], lam), V[:, j]))
    conjugated = ctx.replace(gamma=ctx.left_matrix(eta), lam=tensor, lambda_kind='general',
                             gamma_bilinear=None, name='conjugated')
    logger.info(f"Built conjugated Lambda on '{ctx.name}' (d={ctx.dim})")
    return conjugated
