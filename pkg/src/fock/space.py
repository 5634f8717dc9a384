"""
Truncated deformed Fock spaces.

A level-n vector is a flattened n-fold tensor over the one-particle
space, first tensor factor slowest, so that b (x) xi is np.kron(b, xi).
Level 0 is spanned by the vacuum.

GradedSpace holds everything that the creation/annihilation/preservation
operators need from a concrete construction; FockContext is the
(gamma, phi)-deformed space over an algebra B, and the C-deformed
construction in src.construction_c plugs into the same hooks.
"""

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.context import AlgebraContext
from src.config.config import FockConfig, NumericConfig
from src.utils.exceptions import PositivityError, SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import eye, kron_all, null_space, one, symmetric_eigenvalues, unit_vector, zeros

logger = setup_logger(__name__)

Word = Tuple[int, ...]


class GradedSpace:
    """
    Base class for truncated Fock-type spaces with nearest-neighbor operators.

    Subclasses provide the one-particle data through four hooks and the
    per-level Gram matrices; everything else (operators, vacuum moments,
    norms) is built on top of these.
    """

    def __init__(self, dim: int, N: int, exact: bool):
        if N < FockConfig.MIN_TRUNCATION:
            raise SizeLimitError(f"Truncation level must be >= {FockConfig.MIN_TRUNCATION}, got {N}")
        self.dim = dim
        self.N = N
        self.exact = exact
        self._grams: Dict[int, np.ndarray] = {}
        self._kernels: Dict[int, np.ndarray] = {}

    # -- hooks ---------------------------------------------------------

    def vacuum_row(self, b: np.ndarray) -> np.ndarray:
        """1 x d row of the map u -> <annihilation by b of u, vacuum> on level 1."""
        raise NotImplementedError

    def interaction_pair_matrix(self, b: np.ndarray) -> np.ndarray:
        """d x d^2 matrix of the interacting part of annihilation on the first two factors."""
        raise NotImplementedError

    def preservation_matrix(self, b: np.ndarray) -> np.ndarray:
        """d x d matrix of the preservation operator on the first factor."""
        raise NotImplementedError

    def conjugate(self, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _compute_gram(self, level: int) -> np.ndarray:
        raise NotImplementedError

    # -- levels --------------------------------------------------------

    def level_dim(self, level: int) -> int:
        return self.dim ** level

    @property
    def level_dims(self) -> Tuple[int, ...]:
        return tuple(self.level_dim(k) for k in range(self.N + 1))

    def basis_words(self, level: int) -> List[Word]:
        """Basis words of a level in storage order."""
        return list(product(range(self.dim), repeat=level))

    def word_index(self, word: Sequence[int]) -> int:
        index = 0
        for letter in word:
            index = index * self.dim + letter
        return index

    def vacuum(self) -> np.ndarray:
        return unit_vector(1, 0, self.exact)

    def word_vector(self, word: Sequence[int]) -> np.ndarray:
        """Coefficient vector of e_{w1} (x) ... (x) e_{wn}."""
        if not word:
            return self.vacuum()
        return unit_vector(self.level_dim(len(word)), self.word_index(word), self.exact)

    def tensor(self, elements: Sequence[np.ndarray]) -> np.ndarray:
        """u_1 (x) ... (x) u_n as a level-n vector."""
        if len(elements) == 0:
            return self.vacuum()
        return kron_all([np.asarray(e) for e in elements])

    def annihilation_pair_matrix(self, b: np.ndarray) -> np.ndarray:
        """Full annihilation on the first two factors: interaction part plus phi part."""
        return self.interaction_pair_matrix(b) + np.kron(self.vacuum_row(b), eye(self.dim, self.exact))

    # -- Gram matrices -------------------------------------------------

    def gram(self, level: int) -> np.ndarray:
        """Gram matrix G of a level, with <x, y> = x^T G y."""
        if level < 0 or level > self.N:
            raise SizeLimitError(f"Level {level} outside 0..{self.N}")
        if level not in self._grams:
            self._grams[level] = self._compute_gram(level)
        return self._grams[level]

    def inner(self, x: np.ndarray, y: np.ndarray, level: int):
        """Deformed inner product of two vectors of the same level."""
        return np.dot(x, np.dot(self.gram(level), y))

    def gram_kernel(self, level: int) -> np.ndarray:
        """Basis (columns) of the null space of the level Gram."""
        if level not in self._kernels:
            gram = self.gram(level)
            if self.exact:
                self._kernels[level] = null_space(gram)
            else:
                values, vectors = np.linalg.eigh(0.5 * (gram + gram.T))
                self._kernels[level] = vectors[:, values <= NumericConfig.KERNEL_TOLERANCE]
        return self._kernels[level]

    def check_positivity(self, levels: Optional[Sequence[int]] = None) -> Dict[int, float]:
        """
        Minimum Gram eigenvalue per level.

        Raises:
            PositivityError: If some level has an eigenvalue below -KERNEL_TOLERANCE
        """
        minima = {}
        for level in (levels if levels is not None else range(self.N + 1)):
            lowest = float(symmetric_eigenvalues(self.gram(level))[0])
            minima[level] = lowest
            if lowest < -NumericConfig.KERNEL_TOLERANCE:
                raise PositivityError(f"Gram at level {level} has negative eigenvalue {lowest:.6g}")
            if 0 < abs(lowest) <= NumericConfig.KERNEL_TOLERANCE * NumericConfig.ILL_CONDITIONED_FACTOR:
                logger.warning(f"Gram at level {level} is ill-conditioned (min eigenvalue {lowest:.3g})")
        return minima


class FockContext(GradedSpace):
    """
    The (gamma, phi)-deformed Fock space over B, truncated at level N.

    Attributes:
        ctx: Underlying algebra context
        N: Truncation level
    """

    def __init__(self, ctx: AlgebraContext, N: int = FockConfig.DEFAULT_TRUNCATION):
        super().__init__(ctx.dim, N, ctx.exact)
        self.ctx = ctx
        self._nested: Dict[int, np.ndarray] = {}
        # T[v, p, :] = (gamma + phi)(e_v*, e_p)
        self._star_pair = np.tensordot(ctx.star, ctx.gamma_phi_tensor, axes=([1], [0]))

    def vacuum_row(self, b: np.ndarray) -> np.ndarray:
        return np.dot(b, self.ctx.phi_pair).reshape(1, self.dim)

    def interaction_pair_matrix(self, b: np.ndarray) -> np.ndarray:
        gamma_rows = np.tensordot(b, self.ctx.gamma_pair_tensor, axes=([0], [0]))        # [i, k] = gamma(b, e_i)_k
        images = np.tensordot(gamma_rows, self.ctx.mul, axes=([1], [0]))                 # [i, l, :]
        return images.reshape(self.dim * self.dim, self.dim).T

    def preservation_matrix(self, b: np.ndarray) -> np.ndarray:
        return self.ctx.lam_matrix(b)

    def conjugate(self, b: np.ndarray) -> np.ndarray:
        return self.ctx.adjoint(b)

    def _nested_pairing(self, level: int) -> np.ndarray:
        """
        Q[V, U, :] in B for words U, V of the given level.

        Q_1(v, u) = (gamma + phi)[v* u] and
        Q_k(V v, U u) = (gamma + phi)[v* Q_{k-1}(V, U) u].
        """
        if level in self._nested:
            return self._nested[level]
        d = self.dim
        if level == 1:
            pairing = self._star_pair
        else:
            previous = self._nested_pairing(level - 1)
            size = previous.shape[0]
            times_u = np.tensordot(previous, self.ctx.mul, axes=([2], [0]))               # [V, U, u, p]
            pairing = np.tensordot(times_u, self._star_pair, axes=([3], [1]))             # [V, U, u, v, :]
            pairing = pairing.transpose(0, 3, 1, 2, 4).reshape(size * d, size * d, d)
        self._nested[level] = pairing
        return pairing

    def _compute_gram(self, level: int) -> np.ndarray:
        d = self.dim
        if level == 0:
            return np.array([[one(self.exact)]], dtype=object if self.exact else float)
        if level == 1:
            return self.ctx.phi_gram.T.copy()
        previous = self._nested_pairing(level - 1)
        size = previous.shape[0]
        times_u = np.tensordot(previous, self.ctx.mul, axes=([2], [0]))                   # [V, U, u, p]
        values = np.tensordot(times_u, self.ctx.phi_gram, axes=([3], [1]))               # [V, U, u, v]
        gram = values.transpose(1, 2, 0, 3).reshape(size * d, size * d)
        logger.debug(f"Gram level {level}: {gram.shape[0]}x{gram.shape[1]}")
        return gram


def build_fock(ctx: AlgebraContext, N: int = FockConfig.DEFAULT_TRUNCATION,
               compute_gram: bool = True) -> FockContext:
    """
    Build the truncated (gamma, phi)-deformed Fock space.

    Args:
        ctx: Validated algebra context
        N: Truncation level (>= 2)
        compute_gram: Compute and positivity-check every level Gram now;
            vacuum moments do not need Gram matrices

    Returns:
        FockContext

    Raises:
        SizeLimitError: If N < 2
        PositivityError: If a Gram matrix has a negative eigenvalue

    Example:
        >>> fc = build_fock(load_example('poisson'), N=4)
        >>> fc.level_dims
        (1, 1, 1, 1, 1)
    """
    fc = FockContext(ctx, N)
    if compute_gram:
        minima = fc.check_positivity()
        logger.info(f"Built Fock space over '{ctx.name}' up to level {N}, "
                    f"dims {fc.level_dims}, min Gram eigenvalue {min(minima.values()):.4g}")
    else:
        logger.info(f"Built Fock space over '{ctx.name}' up to level {N}, dims {fc.level_dims}")
    return fc
