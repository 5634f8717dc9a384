"""
Structural checks on an algebra context.

Every check is a report entry with a residual magnitude; nothing here
raises on a failed axiom. Shape problems are caught earlier, when the
context is constructed.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.algebra.context import AlgebraContext
from src.config.config import AlgebraConfig, NumericConfig, tolerance_for
from src.utils.logger import setup_logger
from src.utils.scalars import _to_sympy, eye, max_abs, symmetric_eigenvalues, to_float, within

logger = setup_logger(__name__)


@dataclass
class CheckResult:
    """
    One named pass/fail check.

    Attributes:
        name: Check identifier (e.g. 'associativity')
        residual: Largest violation found (0 when exact)
        passed: Whether the residual is within tolerance
        detail: Optional human-readable note
    """
    name: str
    residual: float
    passed: bool
    detail: str = ''


@dataclass
class CPCertificate:
    """
    Partial complete-positivity certificate for a map B -> B.

    Attributes:
        passed: True if every block matrix up to `level` was positive semidefinite
        level: Matrix level that was tested
        min_eigenvalue: Most negative eigenvalue seen over all tested tuples
        witness: Basis tuple realizing min_eigenvalue (indices, -1 for the unit)
    """
    passed: bool
    level: int
    min_eigenvalue: float
    witness: Tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.passed


@dataclass
class ValidationReport:
    """Named checks for one context, with an overall verdict."""
    context_name: str
    checks: List[CheckResult] = field(default_factory=list)
    cp_certificate: Optional[CPCertificate] = None

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(f"No check named '{name}' in report for {self.context_name}")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {'check': c.name, 'residual': c.residual, 'passed': c.passed, 'detail': c.detail}
            for c in self.checks
        ])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'context': self.context_name,
            'passed': self.passed,
            'checks': [
                {'name': c.name, 'residual': c.residual, 'passed': c.passed, 'detail': c.detail}
                for c in self.checks
            ],
            'cp_level': self.cp_certificate.level if self.cp_certificate else None,
            'cp_min_eigenvalue': self.cp_certificate.min_eigenvalue if self.cp_certificate else None,
        }


def _identity_check(name: str, difference: Any, tolerance: float, scale: float = 1.0) -> CheckResult:
    residual = max_abs(difference)
    return CheckResult(name=name, residual=residual, passed=within(residual, tolerance, scale))


def associativity_residual(ctx: AlgebraContext) -> float:
    """max |(e_i e_j) e_k - e_i (e_j e_k)| over basis triples."""
    left = np.tensordot(ctx.mul, ctx.mul, axes=([2], [0]))            # [i, j, k, l]
    right = np.tensordot(ctx.mul, ctx.mul, axes=([1], [2]))           # [i, l, j, k]
    return max_abs(left - right.transpose(0, 2, 3, 1))


def star_residuals(ctx: AlgebraContext) -> Dict[str, float]:
    """Involution, anti-multiplicativity and unit preservation of the star."""
    involution = np.dot(ctx.star, ctx.star) - eye(ctx.dim, ctx.exact)
    lhs = np.tensordot(ctx.mul, ctx.star, axes=([2], [0]))            # (e_i e_j)*
    inner = np.tensordot(ctx.star, ctx.mul, axes=([1], [0]))          # [j, b, l]
    rhs = np.tensordot(ctx.star, inner, axes=([1], [1]))              # e_j* e_i*
    return {
        'star_involution': max_abs(involution),
        'star_antimultiplicative': max_abs(lhs - rhs),
        'star_unit': max_abs(ctx.adjoint(ctx.unit) - ctx.unit),
    }


def eq23_residuals(ctx: AlgebraContext) -> Tuple[float, float]:
    """
    Residuals of the Lambda symmetry conditions on basis triples.

    phi[v* Lambda(b (x) u)] = phi[Lambda(b* (x) v)* u], and the same with gamma.

    Returns:
        (phi residual, gamma residual)
    """
    d = ctx.dim
    phi_residual = 0.0
    gamma_residual = 0.0
    basis = [ctx.basis(i) for i in range(d)]
    stars = [ctx.adjoint(e) for e in basis]
    for b, u, v in product(range(d), repeat=3):
        left_arg = ctx.lam_of(basis[b], basis[u])
        right_arg = ctx.adjoint(ctx.lam_of(stars[b], basis[v]))
        phi_residual = max(phi_residual, max_abs(
            ctx.phi_of(ctx.multiply(stars[v], left_arg)) - ctx.phi_of(ctx.multiply(right_arg, basis[u]))
        ))
        gamma_residual = max(gamma_residual, max_abs(
            ctx.gamma_pair(stars[v], left_arg) - ctx.gamma_pair(right_arg, basis[u])
        ))
    return phi_residual, gamma_residual


def _phi_positivity(ctx: AlgebraContext) -> CheckResult:
    gram = ctx.phi_gram
    symmetric = max_abs(gram - gram.T)
    eigenvalues = symmetric_eigenvalues(gram)
    lowest = float(eigenvalues[0])
    if ctx.exact and symmetric == 0.0:
        faithful = bool(_to_sympy(gram).is_positive_definite)
    else:
        faithful = symmetric <= NumericConfig.FLOAT_TOLERANCE and lowest > NumericConfig.KERNEL_TOLERANCE
    return CheckResult(
        name='phi_positive_faithful',
        residual=max(0.0, -lowest, symmetric),
        passed=faithful,
        detail=f"min eigenvalue of phi Gram = {lowest:.6g}",
    )


def check_cp_level(ctx: AlgebraContext, map_matrix: np.ndarray, n: int,
                   tolerance: float = NumericConfig.KERNEL_TOLERANCE) -> CPCertificate:
    """
    Test complete positivity of a map T: B -> B at matrix level n.

    For every n-tuple (x_1..x_n) drawn from the basis and the unit, the
    element [T(x_a* x_b)] of M_n(B) is represented on L^2(B, phi)^n and
    its Gram form [P L_{T(x_a* x_b)}] must be positive semidefinite.
    Tuples with repeats are included, so a failure at level n persists
    at every higher level.

    Args:
        ctx: Algebra context providing B and phi
        map_matrix: d x d matrix of T (column i is T(e_i))
        n: Matrix level, n >= 1
        tolerance: Eigenvalues >= -tolerance count as nonnegative

    Returns:
        CPCertificate with the most negative eigenvalue and its witness tuple

    Example:
        >>> ctx = load_example('scalar_gamma', {'psi': -0.8})
        >>> check_cp_level(ctx, ctx.gamma_plus_phi(0.5), 1).passed
        False
    """
    if n < 1:
        raise ValueError(f"Matrix level must be >= 1, got {n}")
    d = ctx.dim
    candidates = [ctx.basis(i) for i in range(d)] + [ctx.unit]
    labels = list(range(d)) + [-1]
    gram = to_float(ctx.phi_gram)
    map_float = to_float(map_matrix)
    mul_float = to_float(ctx.mul)
    cache: Dict[Tuple[int, int], np.ndarray] = {}

    def block(a: int, b: int) -> np.ndarray:
        key = (a, b)
        if key not in cache:
            product_ab = ctx.multiply(ctx.adjoint(candidates[a]), candidates[b])
            image = map_float @ to_float(product_ab)
            cache[key] = gram @ np.tensordot(image, mul_float, axes=([0], [0])).T
        return cache[key]

    lowest = np.inf
    witness: Tuple[int, ...] = ()
    for tuple_indices in product(range(len(candidates)), repeat=n):
        full = np.block([[block(a, b) for b in tuple_indices] for a in tuple_indices])
        value = float(symmetric_eigenvalues(full)[0])
        if value < lowest:
            lowest = value
            witness = tuple(labels[i] for i in tuple_indices)
    passed = lowest >= -tolerance
    logger.debug(f"CP level {n}: min eigenvalue {lowest:.6g} ({'pass' if passed else 'fail'})")
    return CPCertificate(passed=passed, level=n, min_eigenvalue=float(lowest), witness=witness)


def check_non_degeneracy(ctx: AlgebraContext, level: int = AlgebraConfig.DEFAULT_CP_LEVEL,
                         t: float = AlgebraConfig.NON_DEGENERACY_T) -> CPCertificate:
    """CP certificate of gamma + t*phi for some t < 1, which makes every Fock Gram positive definite."""
    return check_cp_level(ctx, to_float(ctx.gamma) + t * np.outer(to_float(ctx.unit), to_float(ctx.phi)), level)


def validate_algebra(ctx: AlgebraContext, cp_level: int = AlgebraConfig.DEFAULT_CP_LEVEL,
                     tolerance: Optional[float] = None) -> ValidationReport:
    """
    Check all standing hypotheses on (B, phi, gamma, Lambda).

    Covers associativity, the unit, the star, positivity and faithfulness
    of phi, star-linearity of gamma, complete positivity of gamma + phi
    up to `cp_level`, and the Lambda symmetry conditions.

    Args:
        ctx: Context to validate
        cp_level: Highest matrix level for the complete-positivity test
        tolerance: Residual tolerance (defaults to the mode's tolerance)

    Returns:
        ValidationReport whose `passed` is True iff every check passed
    """
    tol = tolerance_for(ctx.exact) if tolerance is None else tolerance
    report = ValidationReport(context_name=ctx.name)
    scale = max_abs(ctx.mul)

    report.checks.append(_identity_check('associativity', associativity_residual(ctx), tol, scale))
    identity = eye(ctx.dim, ctx.exact)
    left_unit = np.tensordot(ctx.unit, ctx.mul, axes=([0], [0]))
    right_unit = np.tensordot(ctx.mul, ctx.unit, axes=([1], [0]))
    report.checks.append(_identity_check(
        'unit', np.concatenate([(left_unit - identity).ravel(), (right_unit - identity).ravel()]), tol))

    for name, residual in star_residuals(ctx).items():
        report.checks.append(_identity_check(name, residual, tol, scale))

    report.checks.append(_identity_check('phi_star_linear', np.dot(ctx.star, ctx.phi) - ctx.phi, tol))
    report.checks.append(_phi_positivity(ctx))

    star_t = ctx.star.T
    report.checks.append(_identity_check(
        'gamma_star_linear', np.dot(ctx.gamma, star_t) - np.dot(star_t, ctx.gamma), tol))

    certificate = check_cp_level(ctx, ctx.gamma_plus_phi(1), cp_level)
    report.cp_certificate = certificate
    report.checks.append(CheckResult(
        'gamma_phi_completely_positive', max(0.0, -certificate.min_eigenvalue), certificate.passed,
        detail=f"certified up to level {cp_level}"))

    phi_res, gamma_res = eq23_residuals(ctx)
    report.checks.append(_identity_check('lambda_symmetry_phi', phi_res, tol, scale))
    report.checks.append(_identity_check('lambda_symmetry_gamma', gamma_res, tol, scale))

    if report.passed:
        logger.info(f"Context '{ctx.name}' (d={ctx.dim}) validated")
    else:
        names = ", ".join(check.name for check in report.failures())
        logger.warning(f"Context '{ctx.name}' failed validation: {names}")
    return report
