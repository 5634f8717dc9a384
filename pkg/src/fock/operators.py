"""
Graded operator matrices and the nearest-neighbor generators.

An OperatorMatrix stores one dense block per (target level, source level).
Blocks that would land above the truncation level are dropped; `reach`
records how far above a source level the operator needed to go, so that
a block from source s is exact (equal to the untruncated operator) iff
s + reach <= N.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.fock.space import GradedSpace
from src.utils.logger import setup_logger
from src.utils.scalars import eye, max_abs, zeros

logger = setup_logger(__name__)

Level = int
Homogeneous = Tuple[Level, np.ndarray]


@dataclass
class OperatorMatrix:
    """
    Linear operator on a truncated graded space.

    Attributes:
        dims: Dimension of each level 0..N
        blocks: (target, source) -> dense block
        reach: Source level s is exact iff s + reach <= N
        up: Largest upward level shift of the untruncated operator
        exact: Scalar mode of the blocks
    """
    dims: Tuple[int, ...]
    blocks: Dict[Tuple[Level, Level], np.ndarray] = field(default_factory=dict)
    reach: int = 0
    up: int = 0
    exact: bool = True

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    def block(self, target: Level, source: Level) -> np.ndarray:
        if (target, source) in self.blocks:
            return self.blocks[(target, source)]
        return zeros((self.dims[target], self.dims[source]), self.exact)

    def exact_sources(self) -> List[Level]:
        return [s for s in range(self.N + 1) if s + self.reach <= self.N]

    def _combine(self, other: 'OperatorMatrix', sign: int) -> 'OperatorMatrix':
        blocks = dict(self.blocks)
        for key, value in other.blocks.items():
            blocks[key] = blocks[key] + sign * value if key in blocks else sign * value
        return OperatorMatrix(self.dims, blocks, max(self.reach, other.reach), max(self.up, other.up),
                              self.exact and other.exact)

    def __add__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        return self._combine(other, 1)

    def __sub__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        return self._combine(other, -1)

    def __neg__(self) -> 'OperatorMatrix':
        return self * -1

    def __mul__(self, scalar) -> 'OperatorMatrix':
        return OperatorMatrix(self.dims, {k: scalar * v for k, v in self.blocks.items()},
                              self.reach, self.up, self.exact)

    __rmul__ = __mul__

    def __matmul__(self, other: 'OperatorMatrix') -> 'OperatorMatrix':
        blocks: Dict[Tuple[Level, Level], np.ndarray] = {}
        for (middle, source), right in other.blocks.items():
            for (target, mid), left in self.blocks.items():
                if mid != middle:
                    continue
                value = np.dot(left, right)
                key = (target, source)
                blocks[key] = blocks[key] + value if key in blocks else value
        return OperatorMatrix(self.dims, blocks, max(other.reach, other.up + self.reach),
                              self.up + other.up, self.exact and other.exact)

    @property
    def T(self) -> 'OperatorMatrix':
        """Undeformed transpose (blocks swapped and transposed)."""
        return OperatorMatrix(self.dims, {(s, t): v.T for (t, s), v in self.blocks.items()},
                              self.reach, self.up, self.exact)

    def apply(self, vector: Dict[Level, np.ndarray]) -> Dict[Level, np.ndarray]:
        """Apply to a graded vector given as level -> coefficients."""
        out: Dict[Level, np.ndarray] = {}
        for (target, source), block in self.blocks.items():
            if source in vector:
                value = np.dot(block, vector[source])
                out[target] = out[target] + value if target in out else value
        return out

    def vacuum_column(self) -> Dict[Level, np.ndarray]:
        """Image of the vacuum."""
        return {t: v[:, 0] for (t, s), v in self.blocks.items() if s == 0}

    def to_dense(self, sources: Optional[Iterable[Level]] = None,
                 targets: Optional[Iterable[Level]] = None) -> np.ndarray:
        sources = list(range(self.N + 1)) if sources is None else list(sources)
        targets = list(range(self.N + 1)) if targets is None else list(targets)
        return np.block([[self.block(t, s) for s in sources] for t in targets])

    def max_abs_over(self, sources: Iterable[Level]) -> float:
        sources = set(sources)
        values = [max_abs(v) for (t, s), v in self.blocks.items() if s in sources]
        return max(values, default=0.0)

    def residual(self, other: 'OperatorMatrix') -> float:
        """Largest entry of self - other on the sources where both are exact."""
        reach = max(self.reach, other.reach)
        sources = [s for s in range(self.N + 1) if s + reach <= self.N]
        return (self - other).max_abs_over(sources)


def identity_op(space: GradedSpace) -> OperatorMatrix:
    dims = space.level_dims
    return OperatorMatrix(dims, {(k, k): eye(dims[k], space.exact) for k in range(space.N + 1)},
                          0, 0, space.exact)


def zero_op(space: GradedSpace) -> OperatorMatrix:
    return OperatorMatrix(space.level_dims, {}, 0, 0, space.exact)


def a_plus(space: GradedSpace, b: np.ndarray) -> OperatorMatrix:
    """Creation: xi -> b (x) xi."""
    blocks = {}
    column = np.asarray(b).reshape(-1, 1)
    for k in range(space.N):
        blocks[(k + 1, k)] = np.kron(column, eye(space.level_dim(k), space.exact))
    return OperatorMatrix(space.level_dims, blocks, reach=1, up=1, exact=space.exact)


def _lowering(space: GradedSpace, level_one: Optional[np.ndarray], pair: Optional[np.ndarray]) -> OperatorMatrix:
    blocks = {}
    if level_one is not None:
        blocks[(0, 1)] = level_one
    if pair is not None:
        for k in range(2, space.N + 1):
            blocks[(k - 1, k)] = np.kron(pair, eye(space.level_dim(k - 2), space.exact))
    return OperatorMatrix(space.level_dims, blocks, reach=0, up=-1, exact=space.exact)


def a_minus(space: GradedSpace, b: np.ndarray) -> OperatorMatrix:
    """Annihilation: u_1 -> phi[b u_1] Omega, u_1 (x) u_2 (x) ... -> (gamma + phi)[b u_1] u_2 (x) ..."""
    return _lowering(space, space.vacuum_row(b), space.annihilation_pair_matrix(b))


def a_gamma_tilde(space: GradedSpace, b: np.ndarray) -> OperatorMatrix:
    """Interacting part of annihilation; zero on level 1."""
    return _lowering(space, None, space.interaction_pair_matrix(b))


def a_phi_tilde(space: GradedSpace, b: np.ndarray) -> OperatorMatrix:
    """Free part of annihilation, including the level-1 vacuum term."""
    return _lowering(space, space.vacuum_row(b), np.kron(space.vacuum_row(b), eye(space.dim, space.exact)))


def a_zero(space: GradedSpace, b: np.ndarray) -> OperatorMatrix:
    """Preservation: u_1 (x) rest -> Lambda(b (x) u_1) (x) rest; zero on the vacuum."""
    blocks = {}
    lam = space.preservation_matrix(b)
    for k in range(1, space.N + 1):
        blocks[(k, k)] = np.kron(lam, eye(space.level_dim(k - 1), space.exact))
    return OperatorMatrix(space.level_dims, blocks, reach=0, up=0, exact=space.exact)


def x_op(space: GradedSpace, b: np.ndarray) -> OperatorMatrix:
    """X(b) = a+(b) + a0(b) + a-(b)."""
    return a_plus(space, b) + a_zero(space, b) + a_minus(space, b)


# ----------------------------------------------------------------------
# Matrix-free application to homogeneous vectors
# ----------------------------------------------------------------------

def _split_first(space: GradedSpace, vector: np.ndarray, factors: int) -> np.ndarray:
    return np.asarray(vector).reshape(space.dim ** factors, -1)


def apply_plus(space: GradedSpace, b: np.ndarray, item: Homogeneous) -> Optional[Homogeneous]:
    level, vector = item
    return level + 1, np.kron(b, vector)


def apply_zero(space: GradedSpace, b: np.ndarray, item: Homogeneous) -> Optional[Homogeneous]:
    level, vector = item
    if level == 0:
        return None
    return level, np.dot(space.preservation_matrix(b), _split_first(space, vector, 1)).reshape(-1)


def _apply_lowering(space: GradedSpace, item: Homogeneous, row: Optional[np.ndarray],
                    pair: Optional[np.ndarray]) -> Optional[Homogeneous]:
    level, vector = item
    if level == 0:
        return None
    if level == 1:
        if row is None:
            return None
        return 0, np.dot(row, vector).reshape(1)
    if pair is None:
        return None
    return level - 1, np.dot(pair, _split_first(space, vector, 2)).reshape(-1)


def apply_minus(space: GradedSpace, b: np.ndarray, item: Homogeneous) -> Optional[Homogeneous]:
    return _apply_lowering(space, item, space.vacuum_row(b), space.annihilation_pair_matrix(b))


def apply_gamma_tilde(space: GradedSpace, b: np.ndarray, item: Homogeneous) -> Optional[Homogeneous]:
    return _apply_lowering(space, item, None, space.interaction_pair_matrix(b))


def apply_phi_tilde(space: GradedSpace, b: np.ndarray, item: Homogeneous) -> Optional[Homogeneous]:
    row = space.vacuum_row(b)
    return _apply_lowering(space, item, row, np.kron(row, eye(space.dim, space.exact)))


GENERATOR_APPLIERS: Dict[str, Callable[[GradedSpace, np.ndarray, Homogeneous], Optional[Homogeneous]]] = {
    'plus': apply_plus,
    'zero': apply_zero,
    'minus': apply_minus,
    'gamma_tilde': apply_gamma_tilde,
    'phi_tilde': apply_phi_tilde,
}


def apply_x(space: GradedSpace, b: np.ndarray, vector: Dict[Level, np.ndarray]) -> Dict[Level, np.ndarray]:
    """X(b) applied to a graded vector without building matrices; levels above N are kept."""
    out: Dict[Level, np.ndarray] = {}
    for level, coefficients in vector.items():
        for applier in (apply_plus, apply_zero, apply_minus):
            image = applier(space, b, (level, coefficients))
            if image is None:
                continue
            target, value = image
            out[target] = out[target] + value if target in out else value
    return out
