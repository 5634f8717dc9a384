"""Vacuum state, adjoint relations, and the null-space quotient."""

from typing import Dict, Sequence, Tuple, Union

import numpy as np

from src.config.config import NumericConfig, tolerance_for
from src.fock.operators import GENERATOR_APPLIERS, OperatorMatrix, a_minus, a_plus, a_zero, apply_x
from src.fock.space import GradedSpace
from src.utils.exceptions import SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import eye, inverse, max_abs, symmetric_eigenvalues, within, zeros

logger = setup_logger(__name__)

# An element b stands for X(b); (kind, b) for a single generator, kind in GENERATOR_APPLIERS or 'x'
Descriptor = Union[OperatorMatrix, np.ndarray, Tuple[str, np.ndarray]]


def _apply_descriptor(space: GradedSpace, op: Descriptor, vector: Dict[int, np.ndarray]) -> Dict[int, np.ndarray]:
    if isinstance(op, OperatorMatrix):
        return op.apply(vector)
    if isinstance(op, tuple):
        kind, b = op
        if kind == 'x':
            return apply_x(space, b, vector)
        applier = GENERATOR_APPLIERS[kind]
        out: Dict[int, np.ndarray] = {}
        for level, coefficients in vector.items():
            image = applier(space, b, (level, coefficients))
            if image is not None:
                target, value = image
                out[target] = out[target] + value if target in out else value
        return out
    return apply_x(space, np.asarray(op), vector)


def vacuum_expectation(space: GradedSpace, ops: Sequence[Descriptor]):
    """
    <op_1 ... op_k Omega, Omega>.

    Operators are applied right to left starting from the vacuum; only
    the Omega coefficient is read off, so no Gram matrix is needed.

    Args:
        space: Fock space
        ops: OperatorMatrix instances, elements b (meaning X(b)), or
            (kind, b) generator descriptors

    Returns:
        Scalar moment

    Raises:
        SizeLimitError: If the word is longer than the truncation level

    Example:
        >>> fc = build_fock(load_example('poisson'), N=4, compute_gram=False)
        >>> one = fc.ctx.unit
        >>> vacuum_expectation(fc, [one, one, one, one])
        Fraction(3, 1)
    """
    if len(ops) > space.N:
        raise SizeLimitError(f"Word of length {len(ops)} exceeds truncation level {space.N}")
    vector: Dict[int, np.ndarray] = {0: space.vacuum()}
    for op in reversed(list(ops)):
        vector = _apply_descriptor(space, op, vector)
        if not vector:
            break
    if 0 not in vector:
        return zeros(1, space.exact)[0]
    return vector[0][0]


def adjoint_residuals(space: GradedSpace, b: np.ndarray) -> Dict[str, float]:
    """
    Residuals of <a+(b) xi, eta> = <xi, a-(b*) eta> and <a0(b) xi, eta> = <xi, a0(b*) eta>.

    Returns:
        {'creation': ..., 'preservation': ...}, maxima over all levels
    """
    b_star = space.conjugate(b)
    plus, minus = a_plus(space, b), a_minus(space, b_star)
    zero, zero_star = a_zero(space, b), a_zero(space, b_star)
    creation = 0.0
    preservation = 0.0
    for k in range(space.N):
        lhs = np.dot(plus.block(k + 1, k).T, space.gram(k + 1))
        rhs = np.dot(space.gram(k), minus.block(k, k + 1))
        creation = max(creation, max_abs(lhs - rhs))
    for k in range(1, space.N + 1):
        lhs = np.dot(zero.block(k, k).T, space.gram(k))
        rhs = np.dot(space.gram(k), zero_star.block(k, k))
        preservation = max(preservation, max_abs(lhs - rhs))
    return {'creation': creation, 'preservation': preservation}


def adjoint_residual(space: GradedSpace, b: np.ndarray) -> float:
    """Largest violation of the two adjoint relations, over all levels."""
    residuals = adjoint_residuals(space, b)
    return max(residuals.values())


def quotient_projector(space: GradedSpace, level: int) -> np.ndarray:
    """
    Projector onto the (undeformed) orthogonal complement of the level's Gram kernel.

    Exact contexts use the exact kernel; float contexts use the Gram
    eigenvectors above NumericConfig.KERNEL_TOLERANCE.
    """
    gram = space.gram(level)
    size = gram.shape[0]
    values = symmetric_eigenvalues(gram)
    near_null = values[(values > NumericConfig.KERNEL_TOLERANCE)
                       & (values <= NumericConfig.KERNEL_TOLERANCE * NumericConfig.ILL_CONDITIONED_FACTOR)]
    if near_null.size:
        logger.warning(f"Gram at level {level} is ill-conditioned: "
                       f"{near_null.size} eigenvalue(s) within {NumericConfig.ILL_CONDITIONED_FACTOR:g}x "
                       f"of the kernel tolerance")
    kernel = space.gram_kernel(level)
    if kernel.shape[1] == 0:
        return eye(size, space.exact)
    if kernel.shape[1] == size:
        return zeros((size, size), space.exact)
    if space.exact:
        return eye(size, True) - np.dot(np.dot(kernel, inverse(np.dot(kernel.T, kernel))), kernel.T)
    return np.eye(size) - kernel @ kernel.T


def kernel_preservation_residual(space: GradedSpace, op: OperatorMatrix) -> float:
    """
    How far an operator is from mapping the Gram null space into itself.

    For every source level with a nontrivial kernel K and every target t,
    G_t @ block(t, s) @ K must vanish.
    """
    worst = 0.0
    for source in op.exact_sources():
        kernel = space.gram_kernel(source)
        if kernel.shape[1] == 0:
            continue
        for (target, s), block in op.blocks.items():
            if s != source:
                continue
            image = np.dot(block, kernel)
            worst = max(worst, max_abs(np.dot(space.gram(target), image)))
    if not within(worst, tolerance_for(space.exact)):
        logger.warning(f"Operator does not preserve the Gram null space (residual {worst:.3g})")
    return worst
