"""
Partition-weight formulas for moments, Boolean and free cumulants.

Each partition of the word positions assigns one generator to every
position according to its role; the generators are applied to the
vacuum from right to left and the vacuum coefficient is the weight.
"""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src.algebra.context import AlgebraContext
from src.config.config import tolerance_for
from src.fock.operators import GENERATOR_APPLIERS, Homogeneous
from src.fock.space import FockContext, GradedSpace
from src.fock.states import vacuum_expectation
from src.partitions.lattice import (CLOSING, MIDDLE, OPENING, SINGLETON, Partition,
                                    enumerate_nc_ns, enumerate_nc_ns_connected)
from src.partitions.mobius import mobius_boolean_cumulants, mobius_free_cumulants, word_moments
from src.utils.exceptions import KindMismatchError, SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import max_abs, zeros

logger = setup_logger(__name__)

MOMENT = 'moment'
FREE_CUMULANT = 'free_cumulant'

_MOMENT_ROLES = {OPENING: 'minus', CLOSING: 'plus', MIDDLE: 'zero'}


def weight_assignment(partition: Partition, kind: str) -> Tuple[str, ...]:
    """
    Generator name per position.

    moment: opening -> minus, closing -> plus, middle -> zero.
    free_cumulant: as moment, except that openings other than position 1
    use the interacting part of annihilation and position 1 its free part.
    """
    if kind not in (MOMENT, FREE_CUMULANT):
        raise ValueError(f"Invalid weight kind: {kind}. Must be '{MOMENT}' or '{FREE_CUMULANT}'")
    tags = []
    for i, role in enumerate(partition.roles, start=1):
        if role == SINGLETON:
            raise ValueError(f"Partition {partition} has a singleton at position {i}")
        tag = _MOMENT_ROLES[role]
        if kind == FREE_CUMULANT and role == OPENING:
            tag = 'phi_tilde' if i == 1 else 'gamma_tilde'
        tags.append(tag)
    return tuple(tags)


def partition_weight(space: GradedSpace, partition: Partition, elements: Sequence[np.ndarray], kind: str):
    """<W(pi) Omega, Omega> for the given role table."""
    item: Optional[Homogeneous] = (0, space.vacuum())
    tags = weight_assignment(partition, kind)
    for tag, element in zip(reversed(tags), reversed(list(elements))):
        item = GENERATOR_APPLIERS[tag](space, element, item)
        if item is None:
            return zeros(1, space.exact)[0]
    level, vector = item
    if level != 0:
        return zeros(1, space.exact)[0]
    return vector[0]


def _check_length(space: GradedSpace, n: int) -> None:
    if n > space.N:
        raise SizeLimitError(f"Word of length {n} exceeds truncation level {space.N}")


def _sum(space: GradedSpace, partitions, elements, kind):
    total = zeros(1, space.exact)[0]
    for partition in partitions:
        total = total + partition_weight(space, partition, elements, kind)
    return total


def moment_partition_sum(space: GradedSpace, elements: Sequence[np.ndarray]):
    """
    Mixed moment <X(u_1)...X(u_n) Omega, Omega> as a sum over NC_ns(n).

    Args:
        space: Fock space
        elements: u_1..u_n as coefficient vectors

    Returns:
        Scalar moment (zero for n = 1)

    Raises:
        SizeLimitError: If n exceeds the truncation level
    """
    n = len(elements)
    _check_length(space, n)
    if n == 0:
        return zeros(1, space.exact)[0] + 1
    if n == 1:
        return zeros(1, space.exact)[0]
    return _sum(space, enumerate_nc_ns(n), elements, MOMENT)


def boolean_cumulant(space: GradedSpace, elements: Sequence[np.ndarray]):
    """Boolean cumulant B_n[X(u_1), ..., X(u_n)] over the connected NC_ns partitions."""
    n = len(elements)
    _check_length(space, n)
    if n < 2:
        return zeros(1, space.exact)[0]
    return _sum(space, enumerate_nc_ns_connected(n), elements, MOMENT)


def free_cumulant(space: GradedSpace, elements: Sequence[np.ndarray]):
    """Free cumulant R_n[X(u_1), ..., X(u_n)] over the connected NC_ns partitions with free-cumulant weights."""
    n = len(elements)
    _check_length(space, n)
    if n < 2:
        return zeros(1, space.exact)[0]
    return _sum(space, enumerate_nc_ns_connected(n), elements, FREE_CUMULANT)


def _moment_function(space: GradedSpace, elements: Sequence[np.ndarray]):
    cache: Dict[Tuple[int, ...], object] = {}

    def moment(word: Tuple[int, ...]):
        if word not in cache:
            cache[word] = vacuum_expectation(space, [elements[i] for i in word]) if word \
                else zeros(1, space.exact)[0] + 1
        return cache[word]

    return word_moments(moment, range(len(elements)))


def free_cumulant_oracle(space: GradedSpace, elements: Sequence[np.ndarray]):
    """R_n by Moebius inversion of operator-product vacuum moments."""
    _check_length(space, len(elements))
    return mobius_free_cumulants(_moment_function(space, elements), len(elements))


def boolean_cumulant_oracle(space: GradedSpace, elements: Sequence[np.ndarray]):
    """B_n by interval Moebius inversion of operator-product vacuum moments."""
    _check_length(space, len(elements))
    return mobius_boolean_cumulants(_moment_function(space, elements), len(elements))


def central_element(ctx: AlgebraContext, matrix: np.ndarray) -> Optional[np.ndarray]:
    """The central c with matrix == left multiplication by c, or None."""
    tolerance = tolerance_for(ctx.exact)
    c = np.dot(matrix, ctx.unit)
    if max_abs(ctx.left_matrix(c) - matrix) > tolerance:
        return None
    if max_abs(ctx.left_matrix(c) - ctx.right_matrix(c)) > tolerance:
        return None
    return c


def bozejko_data(ctx: AlgebraContext) -> Tuple[np.ndarray, np.ndarray]:
    """
    (eta, lambda) with gamma[f] = eta f and Lambda(b (x) f) = lambda b f, both central.

    Raises:
        KindMismatchError: If the context is not of this form
    """
    eta = central_element(ctx, ctx.gamma)
    if eta is None:
        raise KindMismatchError(f"gamma of '{ctx.name}' is not multiplication by a central element")
    lam = ctx.lam_of(ctx.unit, ctx.unit)
    expected = np.tensordot(np.tensordot(lam, ctx.mul, axes=([0], [0])), ctx.mul, axes=([1], [0]))
    if central_element(ctx, ctx.left_matrix(lam)) is None or \
            max_abs(expected - ctx.lam) > tolerance_for(ctx.exact):
        raise KindMismatchError(f"Lambda of '{ctx.name}' is not lambda * b * f with central lambda")
    return eta, lam


def _power(ctx: AlgebraContext, element: np.ndarray, exponent: int) -> np.ndarray:
    result = ctx.unit
    for _ in range(exponent):
        result = ctx.multiply(result, element)
    return result


def bozejko_cumulant_formula(fc: FockContext, elements: Sequence[np.ndarray]):
    """
    Free cumulants for central (eta, lambda):
    sum over connected NC_ns partitions of phi[eta^(|pi|-1) lambda^(n-2|pi|) f_1...f_n].

    Raises:
        KindMismatchError: If gamma or Lambda is not of the central form
    """
    ctx = fc.ctx
    eta, lam = bozejko_data(ctx)
    n = len(elements)
    if n < 2:
        return zeros(1, ctx.exact)[0]
    product_f = ctx.unit
    for f in elements:
        product_f = ctx.multiply(product_f, f)
    total = zeros(1, ctx.exact)[0]
    for partition in enumerate_nc_ns_connected(n):
        blocks = len(partition)
        factor = ctx.multiply(_power(ctx, eta, blocks - 1), _power(ctx, lam, n - 2 * blocks))
        total = total + ctx.phi_of(ctx.multiply(factor, product_f))
    return total
