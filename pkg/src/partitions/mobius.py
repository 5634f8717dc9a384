"""
Moment-cumulant inversion over NC(n) and Int(n).

These are the brute-force references for the partition-weight formulas
in src.cumulants: cumulants are recovered from moments alone, by the
inductive moment-cumulant relations, without touching the Fock space.
"""

from functools import reduce
from operator import mul
from typing import Callable, Dict, Sequence, Tuple

from src.partitions.lattice import enumerate_int, enumerate_nc

Positions = Tuple[int, ...]
MomentFunction = Callable[[Positions], object]


def _invert(moments: MomentFunction, n: int, lattice: Callable[[int], Sequence]) -> object:
    cache: Dict[Positions, object] = {}

    def cumulant(positions: Positions):
        if positions in cache:
            return cache[positions]
        k = len(positions)
        value = moments(positions)
        for partition in lattice(k):
            if len(partition) == 1:
                continue
            value = value - reduce(mul, (
                cumulant(tuple(positions[i - 1] for i in block)) for block in partition.blocks))
        cache[positions] = value
        return value

    return cumulant(tuple(range(1, n + 1)))


def mobius_free_cumulants(moments: MomentFunction, n: int):
    """
    Free cumulant R_n by Moebius inversion over NC(n).

    Args:
        moments: Maps a sorted tuple of positions in 1..n to the mixed
            moment of the corresponding subword
        n: Cumulant order

    Returns:
        R_n in the scalar type returned by `moments`

    Example:
        >>> m = {1: 0, 2: 1, 3: 1, 4: 3}
        >>> mobius_free_cumulants(lambda p: m[len(p)], 4)
        1
    """
    return _invert(moments, n, enumerate_nc)


def mobius_boolean_cumulants(moments: MomentFunction, n: int):
    """Boolean cumulant B_n by Moebius inversion over Int(n)."""
    return _invert(moments, n, enumerate_int)


def word_moments(moment_of_word: Callable[[Tuple], object], word: Sequence) -> MomentFunction:
    """Adapt a word-level moment function to the positions interface of the inversions."""
    word = tuple(word)
    return lambda positions: moment_of_word(tuple(word[p - 1] for p in positions))
