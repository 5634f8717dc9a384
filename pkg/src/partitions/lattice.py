"""
Set partitions of {1..n} and the lattices NC(n), Int(n), NC_ns(n).

Partitions are canonical: each block is a sorted tuple and blocks are
ordered by their minimum, so equality is structural.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from src.config.config import PartitionConfig
from src.utils.exceptions import SizeLimitError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

OPENING = 'opening'
CLOSING = 'closing'
MIDDLE = 'middle'
SINGLETON = 'singleton'

Block = Tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    """
    A partition of {1..n}.

    Attributes:
        n: Size of the ground set
        blocks: Sorted blocks, ordered by minimum
    """
    n: int
    blocks: Tuple[Block, ...]
    _block_of: Dict[int, int] = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0]))
        object.__setattr__(self, 'blocks', blocks)
        error = self._validate_blocks()
        if error:
            raise ValueError(error)
        object.__setattr__(self, '_block_of', {i: k for k, b in enumerate(blocks) for i in b})

    def _validate_blocks(self):
        elements = [i for b in self.blocks for i in b]
        if any(len(b) == 0 for b in self.blocks):
            return "Partition blocks must be nonempty"
        if sorted(elements) != list(range(1, self.n + 1)):
            return f"Blocks {self.blocks} do not cover {{1..{self.n}}} disjointly"
        return None

    @classmethod
    def from_blocks(cls, *blocks) -> 'Partition':
        n = sum(len(b) for b in blocks)
        return cls(n=n, blocks=tuple(tuple(b) for b in blocks))

    def block_of(self, i: int) -> Block:
        return self.blocks[self._block_of[i]]

    def same_block(self, i: int, j: int) -> bool:
        return self._block_of[i] == self._block_of[j]

    def role(self, i: int) -> str:
        """Role of element i: opening (block min), closing (block max), middle, or singleton."""
        block = self.block_of(i)
        if len(block) == 1:
            return SINGLETON
        if i == block[0]:
            return OPENING
        if i == block[-1]:
            return CLOSING
        return MIDDLE

    @property
    def roles(self) -> Tuple[str, ...]:
        return tuple(self.role(i) for i in range(1, self.n + 1))

    @property
    def inner_flags(self) -> Tuple[bool, ...]:
        """Per block: True if some other block W has o_W < o_V < c_V < c_W."""
        flags = []
        for a, v in enumerate(self.blocks):
            flags.append(any(w[0] < v[0] and v[-1] < w[-1] for b, w in enumerate(self.blocks) if b != a))
        return tuple(flags)

    def is_noncrossing(self) -> bool:
        for a, v in enumerate(self.blocks):
            for w in self.blocks[a + 1:]:
                if _crosses(v, w):
                    return False
        return True

    def is_interval(self) -> bool:
        return all(b[-1] - b[0] + 1 == len(b) for b in self.blocks)

    def has_singletons(self) -> bool:
        return any(len(b) == 1 for b in self.blocks)

    def is_connected(self) -> bool:
        """True if 1 and n lie in the same block."""
        return self.same_block(1, self.n)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return ''.join('{' + ''.join(str(i) for i in b) + '}' if self.n < 10
                       else '{' + ','.join(str(i) for i in b) + '}' for b in self.blocks)


def _check_size(n: int) -> None:
    if n < 1:
        raise ValueError(f"Partition size must be >= 1, got {n}")
    if n > PartitionConfig.MAX_PARTITION_N:
        raise SizeLimitError(f"Partition size {n} exceeds limit {PartitionConfig.MAX_PARTITION_N}")


def _noncrossing(elements: Tuple[int, ...], singletons: bool) -> Iterator[List[Block]]:
    """Noncrossing partitions of an ordered tuple, built from the block of its first element."""
    if not elements:
        yield []
        return
    yield from _extend((elements[0],), elements[1:], singletons)


def _extend(block: Block, rest: Tuple[int, ...], singletons: bool) -> Iterator[List[Block]]:
    if singletons or len(block) > 1:
        for tail in _noncrossing(rest, singletons):
            yield [block] + tail
    for k, j in enumerate(rest):
        for gap in _noncrossing(rest[:k], singletons):
            for cont in _extend(block + (j,), rest[k + 1:], singletons):
                yield gap + cont


@lru_cache(maxsize=None)
def _nc_cached(n: int, singletons: bool) -> Tuple[Partition, ...]:
    result = tuple(Partition(n, tuple(blocks))
                   for blocks in _noncrossing(tuple(range(1, n + 1)), singletons))
    logger.debug(f"Enumerated {len(result)} noncrossing partitions of {n} (singletons={singletons})")
    return result


def enumerate_nc(n: int) -> List[Partition]:
    """
    All noncrossing partitions of {1..n}.

    Raises:
        SizeLimitError: If n exceeds PartitionConfig.MAX_PARTITION_N

    Example:
        >>> len(enumerate_nc(3))
        5
    """
    _check_size(n)
    return list(_nc_cached(n, True))


@lru_cache(maxsize=None)
def _interval_cached(n: int) -> Tuple[Partition, ...]:
    result = []
    # each of the n-1 gaps is either a cut or not
    for mask in range(2 ** (n - 1)):
        blocks, current = [], [1]
        for i in range(2, n + 1):
            if mask >> (i - 2) & 1:
                blocks.append(tuple(current))
                current = []
            current.append(i)
        blocks.append(tuple(current))
        result.append(Partition(n, tuple(blocks)))
    return tuple(result)


def enumerate_int(n: int) -> List[Partition]:
    """All interval partitions of {1..n} (2^(n-1) of them)."""
    _check_size(n)
    return list(_interval_cached(n))


def enumerate_nc_ns(n: int) -> List[Partition]:
    """Noncrossing partitions without singleton blocks."""
    _check_size(n)
    return list(_nc_cached(n, False))


def enumerate_nc_ns_connected(n: int) -> List[Partition]:
    """Noncrossing partitions without singletons in which 1 and n share a block."""
    _check_size(n)
    return [p for p in _nc_cached(n, False) if p.is_connected()]


def restrict_word(word: Tuple, block: Block) -> Tuple:
    """Letters of a word at the (1-based) positions of a block."""
    return tuple(word[i - 1] for i in block)


def _crosses(v: Block, w: Block) -> bool:
    """True if some i < k in v separate two elements of w."""
    for i in v:
        for k in v:
            if i < k and any(i < j < k for j in w) and any(j < i or j > k for j in w):
                return True
    return False
