"""
Wick polynomials and the resolvent identity.

W(u_1..u_n) is the polynomial in the X's with W(u_1..u_n) Omega =
u_1 (x) ... (x) u_n. It is built from the recursion

    W(u_0, ..., u_n) = X(u_0) W(u_1, ..., u_n)
                       - W(Lambda(u_0 (x) u_1), u_2, ..., u_n)
                       - W(a-(u_0)(u_1 (x) u_2), u_3, ..., u_n)

with W() = I, W(u) = X(u) and W(u_0, u_1) = X(u_0) X(u_1) - X(Lambda(u_0 (x) u_1)) - phi[u_0 u_1] I.
Only the one-particle hooks of the space are used, so the same code
serves the C-deformed construction.
"""

import weakref
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.linalg import LinAlgError

from src.config.config import tolerance_for
from src.cumulants.kernel import DegreeResiduals
from src.fock.operators import OperatorMatrix, identity_op, x_op
from src.fock.space import FockContext, GradedSpace
from src.utils.exceptions import SingularElementError, SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import max_abs, solve

logger = setup_logger(__name__)

_CACHES: 'weakref.WeakKeyDictionary[GradedSpace, Dict]' = weakref.WeakKeyDictionary()


def _key(elements: Sequence[np.ndarray]) -> Tuple:
    return tuple(tuple(np.asarray(e).tolist()) for e in elements)


def _cache(space: GradedSpace) -> Dict:
    if space not in _CACHES:
        _CACHES[space] = {}
    return _CACHES[space]


def two_step_image(space: GradedSpace, u0: np.ndarray, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """a-(u0)(u1 (x) u2) on level 2, i.e. (gamma + phi)[u0 u1] u2 for Fock spaces over B."""
    return np.dot(space.annihilation_pair_matrix(u0), np.kron(u1, u2))


def wick_poly(space: GradedSpace, elements: Sequence[np.ndarray]) -> OperatorMatrix:
    """
    Wick polynomial W(u_1, ..., u_n) as a graded operator matrix.

    Args:
        space: Truncated Fock-type space
        elements: u_1..u_n

    Returns:
        OperatorMatrix (reach n), memoized per space

    Raises:
        SizeLimitError: If n > N - 1

    Example:
        >>> fc = build_fock(load_example('scalar_gamma', {'psi': 0, 'lam': 0}), N=4)
        >>> w = wick_poly(fc, [fc.ctx.unit, fc.ctx.unit])
        >>> w.vacuum_column()[2]
        array([Fraction(1, 1)], dtype=object)
    """
    n = len(elements)
    if n > space.N - 1:
        raise SizeLimitError(f"Wick polynomial of degree {n} needs truncation level >= {n + 1}, got {space.N}")
    elements = [np.asarray(e) for e in elements]
    return _build(space, elements, _cache(space))


def _build(space: GradedSpace, elements: List[np.ndarray], cache: Dict) -> OperatorMatrix:
    key = _key(elements)
    if key in cache:
        return cache[key]
    n = len(elements)
    if n == 0:
        result = identity_op(space)
    elif n == 1:
        result = x_op(space, elements[0])
    else:
        u0, u1 = elements[0], elements[1]
        result = x_op(space, u0) @ _build(space, elements[1:], cache)
        preserved = np.dot(space.preservation_matrix(u0), u1)
        result = result - _build(space, [preserved] + elements[2:], cache)
        if n == 2:
            result = result - identity_op(space) * np.dot(space.vacuum_row(u0), u1)[0]
        else:
            lowered = two_step_image(space, u0, u1, elements[2])
            result = result - _build(space, [lowered] + elements[3:], cache)
    cache[key] = result
    return result


def clear_cache(space: GradedSpace) -> None:
    _CACHES.pop(space, None)


def vacuum_residual(space: GradedSpace, elements: Sequence[np.ndarray]) -> float:
    """Largest entry of W(u_1..u_n) Omega - u_1 (x) ... (x) u_n over all levels."""
    image = wick_poly(space, elements).vacuum_column()
    n = len(elements)
    expected = space.tensor([np.asarray(e) for e in elements])
    worst = max_abs(image[n] - expected) if n in image else max_abs(expected)
    for level, vector in image.items():
        if level != n:
            worst = max(worst, max_abs(vector))
    return worst


def graded_inner(space: GradedSpace, x: Dict[int, np.ndarray], y: Dict[int, np.ndarray]):
    """Deformed inner product of two graded vectors (level -> coefficients)."""
    total = 0 * space.vacuum()[0]
    for level in set(x) & set(y):
        total = total + space.inner(x[level], y[level], level)
    return total


def pseudo_orthogonality(space: GradedSpace, word_a: Sequence[np.ndarray], word_b: Sequence[np.ndarray]):
    """<W(word_a) Omega, W(word_b) Omega>, which vanishes when the lengths differ."""
    return graded_inner(space, wick_poly(space, word_a).vacuum_column(),
                        wick_poly(space, word_b).vacuum_column())


def resolvent_element(fc: FockContext, u: np.ndarray) -> np.ndarray:
    """
    b(u) = 1 + Lambda(u (x) u) u^{-1} + (gamma + phi)[u^2].

    In left-multiplier mode Lambda(u (x) u) u^{-1} = Lambda(u), so no
    inversion is needed.

    Raises:
        SingularElementError: If Lambda is general and u is not invertible
    """
    ctx = fc.ctx
    u = np.asarray(u)
    if ctx.is_left_multiplier():
        middle = ctx.lam_of(u, ctx.unit)
    else:
        try:
            # x u = Lambda(u (x) u)
            middle = solve(ctx.right_matrix(u), ctx.lam_of(u, u))
        except LinAlgError as e:
            raise SingularElementError(f"u is not invertible in '{ctx.name}'; b(u) needs Lambda(u (x) u) u^-1") from e
    return ctx.unit + middle + ctx.gamma_phi_pair(u, u)


def _first_arguments(space: GradedSpace, u: np.ndarray,
                     b: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    First Wick arguments of degree shift 0, 1 and 2 in b(u) (1 + sum_n W_n(u)).

    With b given (Fock spaces over B), b(u) u is split as
    u + (b - 1 - (gamma + phi)[u^2]) u + (gamma + phi)[u^2] u; otherwise the
    one-particle hooks supply Lambda(u (x) u) and a-(u)(u (x) u).
    """
    if b is None:
        return u, np.dot(space.preservation_matrix(u), u), two_step_image(space, u, u, u)
    ctx = space.ctx
    scalar = ctx.gamma_phi_pair(u, u)
    middle = b - ctx.unit - scalar
    return u, ctx.multiply(middle, u), ctx.multiply(scalar, u)


def _degree_terms(space: GradedSpace, arguments: Tuple[np.ndarray, np.ndarray, np.ndarray], u: np.ndarray,
                  degree: int, max_degree: int) -> Optional[OperatorMatrix]:
    """The degree part of b(u) (1 + sum_{n <= max_degree} W_n(u))."""
    total: Optional[OperatorMatrix] = None

    def add(term: OperatorMatrix) -> None:
        nonlocal total
        total = term if total is None else total + term

    for shift, first in enumerate(arguments):
        n = degree - shift
        if 1 <= n <= max_degree:
            add(wick_poly(space, [first] + [u] * (n - 1)))
    if degree == 2:
        add(identity_op(space) * np.dot(space.vacuum_row(u), u)[0])
    return total


def b_element_residual(fc: FockContext, u: np.ndarray, b: np.ndarray) -> float:
    """|b u - (u + Lambda(u (x) u) + (gamma + phi)[u^2] u)|."""
    ctx = fc.ctx
    expected = u + ctx.lam_of(u, u) + two_step_image(fc, u, u, u)
    return max_abs(ctx.multiply(b, u) - expected)


def resolvent_residual(fc: GradedSpace, u: np.ndarray, max_degree: int,
                       tolerance: Optional[float] = None) -> DegreeResiduals:
    """
    Degree-wise residuals of (b(u) - X(u)) (1 + sum_n W_n(u)) = b(u) - phi[u^2].

    Degrees 1..max_degree are judged; max_degree + 1 and max_degree + 2,
    where the truncated sum is missing terms, are reported as tail. On Fock
    spaces over B the computed b(u) enters the left side, and the relation
    b(u) u = u + Lambda(u (x) u) + (gamma + phi)[u^2] u is recorded as
    'b_element' at degree 0.

    Args:
        fc: Fock space
        u: The element
        max_degree: Highest Wick degree kept (<= N - 1)
        tolerance: Pass threshold (defaults to the mode's tolerance)

    Returns:
        DegreeResiduals named 'resolvent', with b(u) in details

    Raises:
        SizeLimitError: If max_degree > N - 1
        SingularElementError: If b(u) needs an inverse that does not exist
    """
    if max_degree > fc.N - 1:
        raise SizeLimitError(f"Degree {max_degree} needs truncation level >= {max_degree + 1}, got {fc.N}")
    u = np.asarray(u)
    report = DegreeResiduals('resolvent', tolerance=tolerance_for(fc.exact) if tolerance is None else tolerance)
    b = None
    if isinstance(fc, FockContext):
        b = resolvent_element(fc, u)
        report.details['b'] = [str(x) for x in b]
        report.record('b_element', 0, b_element_residual(fc, u, b))
    arguments = _first_arguments(fc, u, b)
    x = x_op(fc, u)
    for degree in range(1, max_degree + 3):
        lhs = _degree_terms(fc, arguments, u, degree, max_degree)
        rhs = x @ wick_poly(fc, [u] * (degree - 1)) if degree - 1 <= max_degree else None
        if lhs is None and rhs is None:
            continue
        if lhs is None:
            residual = rhs.max_abs_over(rhs.exact_sources())
        elif rhs is None:
            residual = lhs.max_abs_over(lhs.exact_sources())
        else:
            residual = lhs.residual(rhs)
        if degree <= max_degree:
            report.record('resolvent', degree, residual)
            logger.debug(f"Resolvent residual at degree {degree}: {residual:.3g}")
        else:
            report.record_tail('resolvent', degree, residual)
    if report.tail:
        tail = max(report.tail['resolvent'].values())
        if tail > report.tolerance:
            logger.warning(f"Truncation tail of the resolvent identity at degrees > {max_degree}: {tail:.3g}")
    return report
