"""
The involution S, right operators X_r, and the extended Wick map.

S(u_1 (x) ... (x) u_n) = u_n* (x) ... (x) u_1*, real-linear, acting
level by level. X_r(b) = S X(S(b)) S.
"""

from itertools import product
from typing import Dict, List

import numpy as np

from src.fock.operators import OperatorMatrix, x_op
from src.fock.space import FockContext
from src.utils.exceptions import SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import kron_all, max_abs, zeros
from src.wick.polynomials import wick_poly

logger = setup_logger(__name__)


def s_matrix(fc: FockContext, level: int) -> np.ndarray:
    """Matrix of S on one level."""
    d = fc.dim
    if level == 0:
        return np.array([[fc.vacuum()[0]]], dtype=object if fc.exact else float)
    size = d ** level
    reverse = zeros((size, size), fc.exact)
    for word in product(range(d), repeat=level):
        reverse[fc.word_index(word[::-1]), fc.word_index(word)] = 1
    return np.dot(kron_all([fc.ctx.star.T] * level), reverse)


def s_involution(fc: FockContext) -> OperatorMatrix:
    """
    S as a level-preserving operator matrix.

    Example:
        >>> fc = build_fock(load_example('poisson', {'m': 2}), N=3)
        >>> s_involution(fc).block(2, 2)[:, 1]       # e_0 (x) e_1 -> e_1 (x) e_0
        array([Fraction(0, 1), Fraction(0, 1), Fraction(1, 1), Fraction(0, 1)], dtype=object)
    """
    return OperatorMatrix(fc.level_dims, {(k, k): s_matrix(fc, k) for k in range(fc.N + 1)},
                          reach=0, up=0, exact=fc.exact)


def s_residuals(fc: FockContext) -> Dict[str, float]:
    """
    'square': S^2 = I; 'isometry': <S x, S y> = <y, x>, which holds on
    every level exactly when phi is tracial.
    """
    square = 0.0
    isometry = 0.0
    for k in range(fc.N + 1):
        s = s_matrix(fc, k)
        square = max(square, max_abs(np.dot(s, s) - np.eye(s.shape[0])))
        gram = fc.gram(k)
        isometry = max(isometry, max_abs(np.dot(np.dot(s.T, gram), s) - gram.T))
    return {'square': square, 'isometry': isometry}


def x_r(fc: FockContext, b: np.ndarray) -> OperatorMatrix:
    """Right operator X_r(b) = S X(b*) S."""
    s = s_involution(fc)
    return s @ x_op(fc, fc.ctx.adjoint(np.asarray(b))) @ s


def interacting_w_map(fc: FockContext, vector: np.ndarray, level: int) -> OperatorMatrix:
    """
    W(xi) for a Fock vector xi of the given level, with W(xi) Omega = xi.

    The recursion W(a+(b) eta) = X(b) W(eta) - W(a0(b) eta) - W(a-(b) eta)
    on basis words is the Wick recursion, so W(xi) is the linear
    combination of Wick polynomials of the basis words.

    Raises:
        SizeLimitError: If level > N - 1
    """
    if level > fc.N - 1:
        raise SizeLimitError(f"Vector level {level} needs truncation level >= {level + 1}, got {fc.N}")
    vector = np.asarray(vector)
    result = wick_poly(fc, []) * 0
    for word in fc.basis_words(level):
        coefficient = vector[fc.word_index(word)]
        if coefficient == 0:
            continue
        result = result + wick_poly(fc, [fc.ctx.basis(i) for i in word]) * coefficient
    return result


def w_adjoint_residual(fc: FockContext, vector: np.ndarray, level: int) -> float:
    """
    Distance of W(xi)* Omega from S(xi): sup over exact source levels and
    basis zeta of |<W(xi) zeta, Omega> - <S(xi), zeta>|.
    """
    op = interacting_w_map(fc, vector, level)
    image = np.dot(s_matrix(fc, level), np.asarray(vector))
    worst = 0.0
    for source in op.exact_sources():
        row = op.block(0, source)[0, :]
        expected = np.dot(image, fc.gram(level)) if source == level else zeros(fc.level_dim(source), fc.exact)
        worst = max(worst, max_abs(row - expected))
    return worst


def commutator(fc: FockContext, u: np.ndarray, v: np.ndarray) -> OperatorMatrix:
    """[X(u), X_r(v)]."""
    left = x_op(fc, u)
    right = x_r(fc, v)
    return left @ right - right @ left


def commutator_residuals(fc: FockContext, levels: List[int]) -> Dict[int, float]:
    """
    Per source level, the largest |<[X(e_i), X_r(e_j)] x, y>| over basis pairs and basis x, y.

    Levels beyond the exact range of the commutator are skipped.
    """
    residuals: Dict[int, float] = {}
    pairs = [(fc.ctx.basis(i), fc.ctx.basis(j)) for i in range(fc.dim) for j in range(fc.dim)]
    ops = [commutator(fc, u, v) for u, v in pairs]
    for source in levels:
        if ops and source not in ops[0].exact_sources():
            logger.debug(f"Commutator level {source} is beyond the truncation; skipped")
            continue
        worst = 0.0
        for op in ops:
            for (target, s), block in op.blocks.items():
                if s == source:
                    worst = max(worst, max_abs(np.dot(fc.gram(target).T, block)))
        residuals[source] = worst
    return residuals
