"""
The R' kernel of the free cumulant generating function.

R'[u_1..u_k] is an operator on the one-particle space, stored as a
d x d matrix. It is the sum over interval partitions of {1..k} of the
product of block weights, leftmost block first:

    singleton {i}          -> preservation by u_i
    block {i, ..., j}      -> v -> gamma(u_i, R'[u_{i+1}..u_{j-1}] u_j) v

so that R_{k+2}[X(u_0), ..., X(u_{k+1})] = phi[u_0 R'[u_1..u_k] u_{k+1}].
All graded identities are checked degree by degree (degree = number
of u's); nothing is evaluated at a point.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.config.config import SeriesConfig, tolerance_for
from src.cumulants.formulas import bozejko_data, free_cumulant
from src.fock.space import FockContext, GradedSpace
from src.utils.exceptions import KindMismatchError, SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import eye, max_abs, one, to_scalar, within, zeros

logger = setup_logger(__name__)


@dataclass
class SeriesTable:
    """
    Graded coefficients of a generating function.

    Attributes:
        coefficients: degree -> scalar or d x d matrix
        max_degree: Highest stored degree
    """
    coefficients: Dict[int, Any] = field(default_factory=dict)
    max_degree: int = 0

    def __getitem__(self, degree: int):
        return self.coefficients[degree]

    def __setitem__(self, degree: int, value) -> None:
        self.coefficients[degree] = value
        self.max_degree = max(self.max_degree, degree)

    def degrees(self) -> List[int]:
        return sorted(self.coefficients)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for degree in self.degrees():
            value = self.coefficients[degree]
            if np.ndim(value) == 0:
                rows.append({'degree': degree, 'value': str(value), 'max_abs': max_abs(value)})
            else:
                rows.append({'degree': degree, 'value': None, 'max_abs': max_abs(value)})
        return pd.DataFrame(rows)


@dataclass
class DegreeResiduals:
    """
    Per-degree residuals of one or more graded identities.

    Attributes:
        name: Identity family (e.g. 'cumulant_gf')
        residuals: check name -> degree -> residual
        tolerance: Pass threshold
        tail: Boundary degrees that are reported but not judged
        details: Extra values worth reporting (e.g. the element b(u))
    """
    name: str
    residuals: Dict[str, Dict[int, float]] = field(default_factory=dict)
    tolerance: float = 0.0
    tail: Dict[str, Dict[int, float]] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def record(self, check: str, degree: int, residual: float) -> None:
        self.residuals.setdefault(check, {})[degree] = residual

    def record_tail(self, check: str, degree: int, residual: float) -> None:
        self.tail.setdefault(check, {})[degree] = residual

    @property
    def passed(self) -> bool:
        return all(within(value, self.tolerance) for series in self.residuals.values()
                   for value in series.values())

    def worst(self) -> float:
        return max((value for series in self.residuals.values() for value in series.values()), default=0.0)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for check, series in self.residuals.items():
            for degree, value in sorted(series.items()):
                rows.append({'check': check, 'degree': degree, 'residual': value,
                             'passed': within(value, self.tolerance), 'tail': False})
        for check, series in self.tail.items():
            for degree, value in sorted(series.items()):
                rows.append({'check': check, 'degree': degree, 'residual': value, 'passed': None, 'tail': True})
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'passed': self.passed,
            'tolerance': self.tolerance,
            'residuals': {check: {str(k): v for k, v in series.items()} for check, series in self.residuals.items()},
            'tail': {check: {str(k): v for k, v in series.items()} for check, series in self.tail.items()},
            'details': self.details,
        }


def _block_weight(space: GradedSpace, opening: np.ndarray, inner_image: np.ndarray) -> np.ndarray:
    """Matrix of v -> (interacting annihilation by `opening`)(inner_image (x) v)."""
    lifted = np.kron(np.asarray(inner_image).reshape(-1, 1), eye(space.dim, space.exact))
    return np.dot(space.interaction_pair_matrix(opening), lifted)


def r_prime(space: GradedSpace, elements: Sequence[np.ndarray]) -> np.ndarray:
    """
    R'[u_1..u_k] as the interval-partition sum.

    Args:
        space: Fock-type space providing the one-particle data
        elements: u_1..u_k

    Returns:
        d x d matrix (identity for k = 0)

    Raises:
        SizeLimitError: If k > N - 2

    Example:
        >>> fc = build_fock(load_example('bozejko', {'eta': '1/2', 'lam': 1}), N=4)
        >>> r_prime(fc, [fc.ctx.unit, fc.ctx.unit])
        array([[Fraction(3, 2)]], dtype=object)
    """
    k = len(elements)
    if k > space.N - 2:
        raise SizeLimitError(f"R' of {k} arguments needs truncation level >= {k + 2}, got {space.N}")
    cache: Dict[Tuple[int, int], np.ndarray] = {}

    def segment(start: int, stop: int) -> np.ndarray:
        if start >= stop:
            return eye(space.dim, space.exact)
        if (start, stop) in cache:
            return cache[(start, stop)]
        # first block is {start} or {start, ..., end}
        total = np.dot(space.preservation_matrix(elements[start]), segment(start + 1, stop))
        for end in range(start + 1, stop):
            inner = np.dot(segment(start + 1, end), elements[end])
            total = total + np.dot(_block_weight(space, elements[start], inner), segment(end + 1, stop))
        cache[(start, stop)] = total
        return total

    return segment(0, k)


def r_prime_recursive(space: GradedSpace, u: np.ndarray, n: int) -> np.ndarray:
    """
    R'_n[u] from the last-block recursion
    R'_n = sum_{i=0}^{n-2} R'_i B(R'_{n-i-2} u) + R'_{n-1} Lambda_u,
    where B(x) is v -> gamma(u, x) v.
    """
    if n < 0:
        raise ValueError(f"Degree must be >= 0, got {n}")
    return r_prime_series(space, u, n)[n]


def r_prime_series(space: GradedSpace, u: np.ndarray, max_degree: int) -> SeriesTable:
    """R'_0..R'_max_degree of a single variable by the recursion."""
    table = SeriesTable()
    table[0] = eye(space.dim, space.exact)
    preservation = space.preservation_matrix(u)
    for n in range(1, max_degree + 1):
        total = np.dot(table[n - 1], preservation)
        for i in range(0, n - 1):
            total = total + np.dot(table[i], _block_weight(space, u, np.dot(table[n - i - 2], u)))
        table[n] = total
    return table


def _words(letters: int, length: int):
    return product(range(letters), repeat=length)


def cumulant_gf_residual(space: GradedSpace, u, max_degree: int = SeriesConfig.MAX_GF_DEGREE,
                         tolerance: Optional[float] = None) -> DegreeResiduals:
    """
    Degree-wise residuals of the generating-function identity for R'.

    Checks, for each degree n <= max_degree:
      - 'kernel': R'(u)v = v + R'(u) gamma[u R'(u) u] v + R'(u) Lambda(u (x) v),
        with the left side from the interval-partition definition;
      - 'recursion': interval definition against r_prime_recursive;
      - 'double_prime' and 'vacuum' (Fock spaces over B): R'' = u R'(u) u
        satisfies R'' = u^2 + u R'(gamma[R''] u) + u R'(Lambda(u (x) u)),
        and phi[R''_n] equals the free cumulant of order n;
      - 'multivariate' when u is a list of elements: the word-level identity
        for every word, and R'(sum u_i) against the sum over words;
      - 'left_multiplier' for left-multiplier contexts: R'(u) is left
        multiplication by rho(u) with rho (1 - Lambda(u) - gamma[u rho u]) = 1;
      - 'bozejko' for central (eta, lambda): r = 1 + lambda r f + eta r f r f.

    Args:
        space: Fock-type space
        u: One element, or a list of elements for the multivariate checks
        max_degree: Highest degree (<= SeriesConfig.MAX_GF_DEGREE)
        tolerance: Pass threshold (defaults to the mode's tolerance)

    Returns:
        DegreeResiduals
    """
    if max_degree > SeriesConfig.MAX_GF_DEGREE:
        raise SizeLimitError(f"Degree {max_degree} exceeds limit {SeriesConfig.MAX_GF_DEGREE}")
    if max_degree > space.N - 2:
        raise SizeLimitError(f"Degree {max_degree} needs truncation level >= {max_degree + 2}, got {space.N}")
    report = DegreeResiduals('cumulant_gf', tolerance=tolerance_for(space.exact) if tolerance is None else tolerance)
    family = [np.asarray(x) for x in u] if isinstance(u, (list, tuple)) else [np.asarray(u)]
    total_u = family[0]
    for x in family[1:]:
        total_u = total_u + x

    series = SeriesTable()
    for n in range(max_degree + 1):
        series[n] = r_prime(space, [total_u] * n)
    recursive = r_prime_series(space, total_u, max_degree)
    preservation = space.preservation_matrix(total_u)
    for n in range(max_degree + 1):
        rhs = eye(space.dim, space.exact) if n == 0 else zeros((space.dim, space.dim), space.exact)
        if n >= 1:
            rhs = rhs + np.dot(series[n - 1], preservation)
        for i in range(0, n - 1):
            rhs = rhs + np.dot(series[i], _block_weight(space, total_u, np.dot(series[n - i - 2], total_u)))
        report.record('kernel', n, max_abs(series[n] - rhs))
        report.record('recursion', n, max_abs(series[n] - recursive[n]))

    if isinstance(space, FockContext):
        _double_prime_checks(space, total_u, series, max_degree, report)
        if space.ctx.is_left_multiplier():
            _left_multiplier_checks(space, total_u, series, max_degree, report)
        try:
            eta, lam = bozejko_data(space.ctx)
        except KindMismatchError:
            pass
        else:
            _bozejko_checks(space, total_u, eta, lam, series, max_degree, report)

    if len(family) > 1:
        _multivariate_checks(space, family, series, max_degree, report)

    if report.passed:
        logger.info(f"Generating-function identities hold to degree {max_degree}")
    else:
        logger.warning(f"Generating-function residual up to {report.worst():.3g}")
    return report


def _double_prime_checks(fc: FockContext, u, series: SeriesTable, max_degree: int,
                         report: DegreeResiduals) -> None:
    ctx = fc.ctx
    double = {n: ctx.multiply(u, np.dot(series[n - 2], u)) for n in range(2, max_degree + 1)}
    lam_uu = ctx.lam_of(u, u)
    for n in range(2, max_degree + 1):
        rhs = ctx.multiply(u, u) if n == 2 else ctx.zero()
        for a in range(0, n - 3):
            c = n - 2 - a
            gamma_double = ctx.gamma_pair(u, np.dot(series[c - 2], u))
            rhs = rhs + ctx.multiply(u, np.dot(series[a], ctx.multiply(gamma_double, u)))
        if n >= 3:
            rhs = rhs + ctx.multiply(u, np.dot(series[n - 3], lam_uu))
        report.record('double_prime', n, max_abs(double[n] - rhs))
        if n <= fc.N:
            report.record('vacuum', n, max_abs(ctx.phi_of(double[n]) - free_cumulant(fc, [u] * n)))


def _left_multiplier_checks(fc: FockContext, u, series: SeriesTable, max_degree: int,
                            report: DegreeResiduals) -> None:
    ctx = fc.ctx
    rho = {n: np.dot(series[n], ctx.unit) for n in range(max_degree + 1)}
    lam_u = ctx.lam_of(u, ctx.unit)
    for n in range(max_degree + 1):
        # coefficients of 1 - Lambda(u) - gamma[u rho u]
        total = ctx.zero()
        for k in range(n + 1):
            m = n - k
            if m == 0:
                factor = ctx.unit
            elif m == 1:
                factor = -lam_u
            else:
                factor = -ctx.gamma_pair(u, ctx.multiply(rho[m - 2], u))
            total = total + ctx.multiply(rho[k], factor)
        expected = ctx.unit if n == 0 else ctx.zero()
        left = max_abs(series[n] - ctx.left_matrix(rho[n]))
        report.record('left_multiplier', n, max(max_abs(total - expected), left))


def _bozejko_checks(fc: FockContext, f, eta, lam, series: SeriesTable, max_degree: int,
                    report: DegreeResiduals) -> None:
    ctx = fc.ctx
    r = {n: np.dot(series[n], ctx.unit) for n in range(max_degree + 1)}
    for n in range(max_degree + 1):
        rhs = ctx.unit if n == 0 else ctx.zero()
        if n >= 1:
            rhs = rhs + ctx.multiply(lam, ctx.multiply(r[n - 1], f))
        for i in range(0, n - 1):
            j = n - 2 - i
            rhs = rhs + ctx.multiply(eta, ctx.multiply(ctx.multiply(r[i], f), ctx.multiply(r[j], f)))
        report.record('bozejko', n, max_abs(r[n] - rhs))


def _multivariate_checks(space: GradedSpace, family: List[np.ndarray], series: SeriesTable,
                         max_degree: int, report: DegreeResiduals) -> None:
    letters = len(family)
    word_cache: Dict[Tuple[int, ...], np.ndarray] = {}

    def kernel_of(word: Tuple[int, ...]) -> np.ndarray:
        if word not in word_cache:
            word_cache[word] = r_prime(space, [family[i] for i in word])
        return word_cache[word]

    for n in range(max_degree + 1):
        word_residual = 0.0
        summed = zeros((space.dim, space.dim), space.exact)
        for word in _words(letters, n):
            value = kernel_of(word)
            summed = summed + value
            # last block is a singleton {n} or a block {i, ..., n}
            rhs = eye(space.dim, space.exact) if n == 0 else \
                np.dot(kernel_of(word[:-1]), space.preservation_matrix(family[word[-1]]))
            for i in range(0, n - 1):
                inner = np.dot(kernel_of(word[i + 1:n - 1]), family[word[-1]])
                rhs = rhs + np.dot(kernel_of(word[:i]), _block_weight(space, family[word[i]], inner))
            word_residual = max(word_residual, max_abs(value - rhs))
        report.record('multivariate', n, max(word_residual, max_abs(summed - series[n])))


def jacobi_moments(diagonal: Sequence, off_diagonal: Sequence, max_degree: int, exact: bool = True) -> List:
    """
    Moments <J^n e_0, e_0> of a Jacobi matrix, counted as weighted Motzkin paths.

    Args:
        diagonal: a_0, a_1, ... (level step weights)
        off_diagonal: b_1, b_2, ... (weight of a down step from level k to k-1 is b_k)
        max_degree: Highest moment
        exact: Scalar mode

    Returns:
        [m_0, ..., m_max_degree]
    """
    a = [to_scalar(x, exact) for x in diagonal]
    b = [to_scalar(x, exact) for x in off_diagonal]
    height = max_degree // 2 + 1
    if len(a) < height + 1 or len(b) < height:
        raise ValueError(f"Need {height + 1} diagonal and {height} off-diagonal entries for degree {max_degree}")
    paths = [one(exact)] + [zeros(1, exact)[0]] * height
    moments = [one(exact)]
    for _ in range(max_degree):
        new = [zeros(1, exact)[0]] * (height + 1)
        for level, weight in enumerate(paths):
            new[level] = new[level] + weight * a[level]
            if level + 1 <= height:
                new[level + 1] = new[level + 1] + weight
            if level >= 1:
                new[level - 1] = new[level - 1] + weight * b[level - 1]
        paths = new
        moments.append(paths[0])
    return moments


def free_meixner_moments(t: Any, lam: Any, max_degree: int, exact: bool = True) -> List:
    """Vacuum moments of X(1) for the scalar context with gamma = t, Lambda = lam."""
    height = max_degree // 2 + 2
    s = to_scalar(1, exact) + to_scalar(t, exact)
    diagonal = [0] + [lam] * height
    off_diagonal = [1] + [s] * height
    return jacobi_moments(diagonal, off_diagonal, max_degree, exact)
