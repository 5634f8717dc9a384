"""
The C-deformed Fock space over a finite-dimensional real Hilbert space H.

Level-n vectors use the same storage as src.fock (first factor slowest).
The inner product is <x, y>_C = <x, K_n y> with

    K_n = (A (x) I..I)(I (x) A (x) I..I) ... (I..I (x) A),   A = C + I (x) I,

and K_0 = K_1 = I. The generators act through the GradedSpace hooks, so
operators, vacuum moments, Wick polynomials and the R' series of the
main construction run unchanged on this space.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.algebra.examples import load_example
from src.config.config import FockConfig, NumericConfig, tolerance_for
from src.fock.space import FockContext, GradedSpace
from src.fock.states import vacuum_expectation
from src.utils.exceptions import ConstructionError, DimensionMismatchError, ExampleParameterError
from src.utils.logger import setup_logger
from src.utils.scalars import (as_array, eye, is_exact_array, kron_all, max_abs, symmetric_eigenvalues, to_scalar,
                               unit_vector, zeros)

logger = setup_logger(__name__)

Violation = Tuple[str, float]


class ConstructionC(GradedSpace):
    """
    Truncated C-deformed Fock space.

    Attributes:
        h_dim: Dimension d of H
        conj: f* = conj^T f (real-linear conjugation of H)
        C: d^2 x d^2 matrix on H (x) H
        Lambda: L[a, b, c] = <e_c, Lambda(e_a (x) e_b)>
        N: Truncation level
        name: Label used in reports
    """

    def __init__(self, h_dim: int, conj: np.ndarray, C: np.ndarray, Lambda: np.ndarray,
                 N: int = FockConfig.DEFAULT_TRUNCATION, name: str = 'construction_c'):
        super().__init__(h_dim, N, is_exact_array(C))
        error = self._validate_shapes(h_dim, conj, C, Lambda)
        if error:
            raise DimensionMismatchError(error)
        self.h_dim = h_dim
        self.conj = conj
        self.C = C
        self.Lambda = Lambda
        self.name = name

    @staticmethod
    def _validate_shapes(d: int, conj: np.ndarray, C: np.ndarray, Lambda: np.ndarray) -> Optional[str]:
        expected = {'conj': (conj, (d, d)), 'C': (C, (d * d, d * d)), 'Lambda': (Lambda, (d, d, d))}
        for label, (array, shape) in expected.items():
            if np.shape(array) != shape:
                return f"Field '{label}' has shape {np.shape(array)}, expected {shape}"
        return None

    # -- hooks ---------------------------------------------------------

    def vacuum_row(self, f: np.ndarray) -> np.ndarray:
        # l*(f)(f_1) = <f_1, f*>
        return self.conjugate(f).reshape(1, self.dim)

    def interaction_pair_matrix(self, f: np.ndarray) -> np.ndarray:
        return np.dot(np.kron(self.vacuum_row(f), eye(self.dim, self.exact)), self.C)

    def preservation_matrix(self, f: np.ndarray) -> np.ndarray:
        return np.tensordot(f, self.Lambda, axes=([0], [0])).T

    def conjugate(self, f: np.ndarray) -> np.ndarray:
        return np.dot(self.conj.T, f)

    def _compute_gram(self, level: int) -> np.ndarray:
        return self.K(level)

    # -- structure -----------------------------------------------------

    @property
    def shifted(self) -> np.ndarray:
        """A = C + I (x) I."""
        return self.C + eye(self.dim * self.dim, self.exact)

    @property
    def lambda_matrix(self) -> np.ndarray:
        """Lambda as a d x d^2 matrix on flattened H (x) H."""
        return self.Lambda.reshape(self.dim * self.dim, self.dim).T

    def K(self, level: int) -> np.ndarray:
        """K_n as a d^n x d^n matrix."""
        if level < 2:
            return eye(self.level_dim(level), self.exact)
        d = self.dim
        result = eye(self.level_dim(level), self.exact)
        for j in range(level - 1):
            factor = kron_all([eye(d ** j, self.exact), self.shifted, eye(d ** (level - 2 - j), self.exact)])
            result = np.dot(result, factor)
        return result

    def element(self, coefficients: Any) -> np.ndarray:
        vector = as_array(coefficients, self.exact)
        if vector.shape != (self.dim,):
            raise DimensionMismatchError(f"Element has shape {vector.shape}, expected ({self.dim},)")
        return vector

    def basis(self, i: int) -> np.ndarray:
        return unit_vector(self.dim, i, self.exact)

    def to_dict(self) -> Dict[str, Any]:
        def encode(arr):
            if self.exact:
                return np.vectorize(str, otypes=[object])(arr).tolist()
            return np.asarray(arr, dtype=float).tolist()
        return {'kind': 'construction_c', 'name': self.name, 'h_dim': self.h_dim,
                'conj': encode(self.conj), 'C': encode(self.C), 'Lambda': encode(self.Lambda)}


def construction_residuals(cc: ConstructionC) -> Dict[str, float]:
    """
    Residual of each hypothesis of the construction.

    conjugation_involution: (f*)* = f
    conjugation_compatible: C(f* (x) g*) = C(f (x) g)*
    commutation: (I (x) C)(C (x) I) = (C (x) I)(I (x) C)
    symmetric, positivity: C + I (x) I is a positive operator
    lambda_adjoint: <g, Lambda(b (x) f)> = <Lambda(b* (x) g), f>
    intertwining: C (Lambda (x) I) = (Lambda (x) I)(I (x) C)
    """
    d, exact = cc.dim, cc.exact
    identity = eye(d, exact)
    conj_t = cc.conj.T
    pair_conj = np.kron(conj_t, conj_t)
    c_left = np.kron(cc.C, identity)
    c_right = np.kron(identity, cc.C)
    lowest = float(symmetric_eigenvalues(cc.shifted)[0])
    adjoint = max((max_abs(cc.preservation_matrix(cc.basis(b)).T -
                           cc.preservation_matrix(cc.conjugate(cc.basis(b)))) for b in range(d)), default=0.0)
    lam_left = np.kron(cc.lambda_matrix, identity)
    return {
        'conjugation_involution': max_abs(np.dot(cc.conj, cc.conj) - identity),
        'conjugation_compatible': max_abs(np.dot(cc.C, pair_conj) - np.dot(pair_conj, cc.C)),
        'commutation': max_abs(np.dot(c_right, c_left) - np.dot(c_left, c_right)),
        'symmetric': max_abs(cc.C - cc.C.T),
        'positivity': max(0.0, -lowest),
        'lambda_adjoint': adjoint,
        'intertwining': max_abs(np.dot(cc.C, lam_left) - np.dot(lam_left, c_right)),
    }


def validate_construction(cc: ConstructionC, tolerance: Optional[float] = None) -> List[Violation]:
    """Named hypotheses that fail, with their residuals (empty when all hold)."""
    tolerance = tolerance_for(cc.exact) if tolerance is None else tolerance
    violations = []
    for name, residual in construction_residuals(cc).items():
        limit = NumericConfig.KERNEL_TOLERANCE if name == 'positivity' else tolerance
        if residual > limit:
            violations.append((name, residual))
    return violations


def diagonal_c(coefficients: np.ndarray, exact: bool) -> np.ndarray:
    """C(e_i (x) e_j) = C_ij e_i (x) e_j."""
    d = coefficients.shape[0]
    matrix = zeros((d * d, d * d), exact)
    for i, j in product(range(d), repeat=2):
        matrix[i * d + j, i * d + j] = coefficients[i, j]
    return matrix


def build_construction_c(params: Dict[str, Any], N: int = FockConfig.DEFAULT_TRUNCATION, exact: bool = True,
                         validate: bool = True, tolerance: Optional[float] = None) -> ConstructionC:
    """
    Build and validate a C-deformed Fock space.

    Args:
        params: h_dim; C (d^2 x d^2) or C_diagonal (d x d); Lambda (d x d x d,
            alias B, default 0); conj (d x d, default identity); optional name
        N: Truncation level
        exact: Rational (True) or float (False) scalars
        validate: Check the hypotheses and the Gram spectra
        tolerance: Pass threshold for the hypotheses

    Returns:
        ConstructionC

    Raises:
        ConstructionError: Listing every violated hypothesis
        DimensionMismatchError: If a field has the wrong shape

    Example:
        >>> cc = build_construction_c({'h_dim': 1, 'C_diagonal': [['1/2']]}, N=3)
        >>> cc.gram(3)
        array([[Fraction(9, 4)]], dtype=object)
    """
    if 'h_dim' not in params and 'C_diagonal' not in params:
        raise DimensionMismatchError("Construction C needs 'h_dim' or 'C_diagonal'")
    if 'C_diagonal' in params:
        diagonal = as_array(params['C_diagonal'], exact)
        d = int(params.get('h_dim', diagonal.shape[0]))
        if diagonal.shape != (d, d):
            raise DimensionMismatchError(f"'C_diagonal' must be {d}x{d}, got shape {diagonal.shape}")
        C = diagonal_c(diagonal, exact)
    else:
        d = int(params['h_dim'])
        C = zeros((d * d, d * d), exact) if params.get('C') is None else as_array(params['C'], exact)
    raw_lambda = params.get('Lambda', params.get('B'))
    Lambda = zeros((d, d, d), exact) if raw_lambda is None else as_array(raw_lambda, exact)
    conj = eye(d, exact) if params.get('conj') is None else as_array(params['conj'], exact)

    cc = ConstructionC(d, conj, C, Lambda, N, name=params.get('name', 'construction_c'))
    if validate:
        violations = validate_construction(cc, tolerance)
        if violations:
            raise ConstructionError(violations)
        minima = cc.check_positivity()
        logger.info(f"Built construction C (d={d}) up to level {N}, "
                    f"min Gram eigenvalue {min(minima.values()):.4g}")
    return cc


@dataclass
class LenczewskiOverlap:
    """
    A Lenczewski kernel modeled by both constructions.

    e'_i = sqrt(m) e_i is phi-orthonormal in B = R^m; the H-vector with
    coordinates c corresponds to the element scale * c of B.

    Attributes:
        construction: C-deformed space with C(e'_a (x) e'_b) = w(b, a) e'_a (x) e'_b
        fock: (gamma, phi)-deformed space over the matching context
        scale: sqrt(m)
    """
    construction: ConstructionC
    fock: FockContext
    scale: Any

    def to_fock_element(self, coordinates: np.ndarray) -> np.ndarray:
        return np.asarray(coordinates) * self.scale

    def moment_residual(self, max_length: int) -> float:
        """Largest difference of vacuum moments over basis words of length <= max_length."""
        d = self.construction.dim
        worst = 0.0
        for n in range(1, max_length + 1):
            for word in product(range(d), repeat=n):
                letters = [self.construction.basis(i) for i in word]
                left = vacuum_expectation(self.construction, letters)
                right = vacuum_expectation(self.fock, [self.to_fock_element(f) for f in letters])
                worst = max(worst, max_abs(left - right))
        return worst


def _grid_scale(m: int, exact: bool):
    if not exact:
        return math.sqrt(m)
    root = math.isqrt(m)
    if root * root != m:
        raise ExampleParameterError(f"Exact overlap needs a perfect-square grid size, got m={m}")
    return Fraction(root)


def construction_from_lenczewski(w: Any, lam: Any = 0, N: int = FockConfig.DEFAULT_TRUNCATION,
                                 exact: bool = True) -> LenczewskiOverlap:
    """
    The C-construction matching load_example('lenczewski_discrete', {'w': w, 'lam': lam}).

    Args:
        w: m x m kernel samples
        lam: Pointwise values (length m) or an m x m left-multiplier kernel
        N: Truncation level of both spaces
        exact: Scalar mode (exact mode needs m to be a perfect square)

    Returns:
        LenczewskiOverlap
    """
    ctx = load_example('lenczewski_discrete', {'w': w, 'lam': lam}, exact=exact)
    m = ctx.dim
    scale = _grid_scale(m, exact)
    w_values = as_array(w, exact)
    lam_values = as_array(lam, exact)
    C = zeros((m * m, m * m), exact)
    for a, b in product(range(m), repeat=2):
        C[a * m + b, a * m + b] = w_values[b, a]
    Lambda = zeros((m, m, m), exact)
    if lam_values.ndim == 2:
        for a, c in product(range(m), repeat=2):
            Lambda[a, c, c] = lam_values[c, a] / scale
    else:
        pointwise = lam_values if lam_values.ndim == 1 else as_array([lam_values.item()] * m, exact)
        for a in range(m):
            Lambda[a, a, a] = to_scalar(pointwise[a], exact) * scale
    cc = build_construction_c({'h_dim': m, 'C': C, 'Lambda': Lambda, 'name': 'lenczewski_c'}, N, exact)
    fc = FockContext(ctx, N)
    logger.info(f"Built Lenczewski overlap on an m={m} grid (scale {scale})")
    return LenczewskiOverlap(cc, fc, scale)
