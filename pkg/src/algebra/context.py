"""
Finite-dimensional *-algebra B with the triple (phi, gamma, Lambda).

Elements of B are coefficient vectors over a fixed basis e_1..e_d.
All structure is carried by dense tensors so that exact (Fraction)
and float contexts share one code path.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Literal, Optional

import numpy as np

from src.utils.exceptions import DimensionMismatchError
from src.utils.logger import setup_logger
from src.utils.scalars import as_array, is_exact_array, one, to_float, to_scalar, unit_vector, zeros

logger = setup_logger(__name__)

LambdaKind = Literal['general', 'left-multiplier']


@dataclass(eq=False)
class AlgebraContext:
    """
    Container for the algebra B and the data (phi, gamma, Lambda).

    Attributes:
        dim: Dimension d of B
        mul: Structure tensor, e_i e_j = sum_k mul[i, j, k] e_k
        star: e_i* = sum_j star[i, j] e_j
        unit: Coefficients of 1_B
        phi: phi[e_i]
        gamma: gamma[e_i] = sum_j gamma[j, i] e_j (column i is gamma[e_i])
        lam: Lambda(e_i (x) e_j) = sum_k lam[i, j, k] e_k
        lambda_kind: 'left-multiplier' when Lambda(u (x) v) = Lambda(u) v
        gamma_bilinear: Optional tensor of a bilinear gamma(e_i, e_j);
            when absent gamma(a, b) = gamma[ab]
        name: Label used in reports
    """
    dim: int
    mul: np.ndarray
    star: np.ndarray
    unit: np.ndarray
    phi: np.ndarray
    gamma: np.ndarray
    lam: np.ndarray
    lambda_kind: LambdaKind = 'general'
    gamma_bilinear: Optional[np.ndarray] = None
    name: str = 'custom'
    exact: bool = field(init=False)

    def __post_init__(self):
        error = self._validate_shapes()
        if error:
            raise DimensionMismatchError(error)
        self.exact = is_exact_array(self.mul)
        if self.gamma_bilinear is None:
            # gamma(a, b) = gamma[ab]
            self._gamma_pair_tensor = np.tensordot(self.mul, self.gamma, axes=([2], [1]))
        else:
            self._gamma_pair_tensor = self.gamma_bilinear
        # phi[e_i e_j]
        self._phi_pair = np.tensordot(self.mul, self.phi, axes=([2], [0]))
        self._gamma_phi_tensor = self._gamma_pair_tensor + np.multiply.outer(self._phi_pair, self.unit)
        self._phi_gram = np.dot(self.star, self._phi_pair)

    def _validate_shapes(self) -> Optional[str]:
        d = self.dim
        if d < 1:
            return f"Algebra dimension must be positive, got {d}"
        expected = {
            'mul': (d, d, d),
            'star': (d, d),
            'unit': (d,),
            'phi': (d,),
            'gamma': (d, d),
            'lam': (d, d, d),
        }
        for attribute, shape in expected.items():
            actual = np.shape(getattr(self, attribute))
            if actual != shape:
                return f"Field '{attribute}' has shape {actual}, expected {shape}"
        if self.gamma_bilinear is not None and np.shape(self.gamma_bilinear) != (d, d, d):
            return f"Field 'gamma_bilinear' has shape {np.shape(self.gamma_bilinear)}, expected {(d, d, d)}"
        if self.lambda_kind not in ('general', 'left-multiplier'):
            return f"Invalid lambda_kind: {self.lambda_kind}. Must be 'general' or 'left-multiplier'"
        return None

    # ------------------------------------------------------------------
    # Construction helpers
    # ------------------------------------------------------------------

    @classmethod
    def from_data(cls, dim: int, mul: Any, star: Any, unit: Any, phi: Any, gamma: Any, lam: Any,
                  lambda_kind: LambdaKind = 'general', gamma_bilinear: Any = None,
                  exact: bool = True, name: str = 'custom') -> 'AlgebraContext':
        """Build a context from nested lists of rationals or floats."""
        return cls(
            dim=dim,
            mul=as_array(mul, exact),
            star=as_array(star, exact),
            unit=as_array(unit, exact),
            phi=as_array(phi, exact),
            gamma=as_array(gamma, exact),
            lam=as_array(lam, exact),
            lambda_kind=lambda_kind,
            gamma_bilinear=None if gamma_bilinear is None else as_array(gamma_bilinear, exact),
            name=name,
        )

    @staticmethod
    def left_multiplier_tensor(mul: np.ndarray, lambda_map: np.ndarray) -> np.ndarray:
        """Tensor of Lambda(u (x) v) = Lambda(u) v for a map given by its matrix (column i = Lambda(e_i))."""
        return np.tensordot(lambda_map, mul, axes=([0], [0]))

    def with_mode(self, exact: bool) -> 'AlgebraContext':
        """Copy of this context in exact or float mode."""
        if exact == self.exact:
            return self
        convert = (lambda a: as_array(a, True)) if exact else to_float
        return AlgebraContext(
            dim=self.dim, mul=convert(self.mul), star=convert(self.star), unit=convert(self.unit),
            phi=convert(self.phi), gamma=convert(self.gamma), lam=convert(self.lam),
            lambda_kind=self.lambda_kind,
            gamma_bilinear=None if self.gamma_bilinear is None else convert(self.gamma_bilinear),
            name=self.name,
        )

    def replace(self, **changes: Any) -> 'AlgebraContext':
        """New context with some fields replaced."""
        fields = dict(dim=self.dim, mul=self.mul, star=self.star, unit=self.unit, phi=self.phi,
                      gamma=self.gamma, lam=self.lam, lambda_kind=self.lambda_kind,
                      gamma_bilinear=self.gamma_bilinear, name=self.name)
        fields.update(changes)
        return AlgebraContext(**fields)

    # ------------------------------------------------------------------
    # Elements
    # ------------------------------------------------------------------

    def element(self, coefficients: Any) -> np.ndarray:
        """Coefficient vector in this context's scalar mode."""
        vector = as_array(coefficients, self.exact)
        if vector.shape != (self.dim,):
            raise DimensionMismatchError(f"Element has shape {vector.shape}, expected ({self.dim},)")
        return vector

    def basis(self, i: int) -> np.ndarray:
        return unit_vector(self.dim, i, self.exact)

    def zero(self) -> np.ndarray:
        return zeros(self.dim, self.exact)

    def scalar(self, value: Any):
        return to_scalar(value, self.exact)

    # ------------------------------------------------------------------
    # Algebra operations
    # ------------------------------------------------------------------

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product ab in B."""
        return np.tensordot(b, np.tensordot(a, self.mul, axes=([0], [0])), axes=([0], [0]))

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of x -> a x."""
        return np.tensordot(a, self.mul, axes=([0], [0])).T

    def right_matrix(self, b: np.ndarray) -> np.ndarray:
        """Matrix of x -> x b."""
        return np.tensordot(self.mul, b, axes=([1], [0])).T

    def adjoint(self, a: np.ndarray) -> np.ndarray:
        """The star a*."""
        return np.dot(self.star.T, a)

    def phi_of(self, a: np.ndarray):
        return np.dot(self.phi, a)

    def gamma_of(self, a: np.ndarray) -> np.ndarray:
        return np.dot(self.gamma, a)

    def gamma_pair(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """gamma[ab], or the bilinear gamma(a, b) when one is supplied."""
        return np.tensordot(b, np.tensordot(a, self._gamma_pair_tensor, axes=([0], [0])), axes=([0], [0]))

    def gamma_phi_pair(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """(gamma + phi)[ab], the inner deformation."""
        return np.tensordot(b, np.tensordot(a, self._gamma_phi_tensor, axes=([0], [0])), axes=([0], [0]))

    def lam_of(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Lambda(a (x) b)."""
        return np.tensordot(b, np.tensordot(a, self.lam, axes=([0], [0])), axes=([0], [0]))

    def lam_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of v -> Lambda(a (x) v), the action of a^0(a) on the first tensor factor."""
        return np.tensordot(a, self.lam, axes=([0], [0])).T

    def lambda_map(self) -> np.ndarray:
        """Matrix of u -> Lambda(u (x) 1); for left-multiplier contexts this is Lambda itself."""
        return np.tensordot(self.lam, self.unit, axes=([1], [0])).T

    def gamma_plus_phi(self, t: Any = 1) -> np.ndarray:
        """Matrix of the map gamma + t*phi on B."""
        t = self.scalar(t)
        return self.gamma + t * np.multiply.outer(self.unit, self.phi)

    @property
    def gamma_pair_tensor(self) -> np.ndarray:
        """T[i, j, :] = gamma(e_i, e_j)."""
        return self._gamma_pair_tensor

    @property
    def gamma_phi_tensor(self) -> np.ndarray:
        """T[i, j, :] = (gamma + phi)(e_i, e_j)."""
        return self._gamma_phi_tensor

    @property
    def phi_pair(self) -> np.ndarray:
        """M[i, j] = phi[e_i e_j]."""
        return self._phi_pair

    @property
    def phi_gram(self) -> np.ndarray:
        """P[i, j] = phi[e_i* e_j]."""
        return self._phi_gram

    @property
    def phi_of_unit(self):
        return self.phi_of(self.unit)

    def is_left_multiplier(self) -> bool:
        return self.lambda_kind == 'left-multiplier'

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready dict with rational strings (exact) or floats."""
        def encode(arr):
            if self.exact:
                return np.vectorize(str, otypes=[object])(arr).tolist()
            return np.asarray(arr, dtype=float).tolist()
        spec = {
            'name': self.name,
            'dim': self.dim,
            'mul': encode(self.mul),
            'star': encode(self.star),
            'unit': encode(self.unit),
            'phi': encode(self.phi),
            'gamma': encode(self.gamma),
            'lambda': encode(self.lam),
            'lambda_kind': self.lambda_kind,
        }
        if self.gamma_bilinear is not None:
            spec['gamma_bilinear'] = encode(self.gamma_bilinear)
        return spec


def commutative_algebra(weights: Any, exact: bool = True) -> Dict[str, np.ndarray]:
    """
    Structure of B = R^m with componentwise product and idempotent basis.

    Args:
        weights: phi[e_i] for each basis idempotent
        exact: Scalar mode

    Returns:
        Dict with mul, star, unit, phi arrays
    """
    phi = as_array(weights, exact)
    m = phi.shape[0]
    mul = zeros((m, m, m), exact)
    star = zeros((m, m), exact)
    unit = zeros(m, exact)
    for i in range(m):
        mul[i, i, i] = one(exact)
        star[i, i] = one(exact)
        unit[i] = one(exact)
    return {'mul': mul, 'star': star, 'unit': unit, 'phi': phi}


def matrix_algebra(n: int, exact: bool = True) -> Dict[str, np.ndarray]:
    """
    Structure of B = M_n(R) with matrix units E_ij, transpose star, normalized trace.

    Basis index of E_ij is i*n + j.
    """
    d = n * n
    mul = zeros((d, d, d), exact)
    star = zeros((d, d), exact)
    unit = zeros(d, exact)
    phi = zeros(d, exact)
    weight = Fraction(1, n) if exact else 1.0 / n
    for i in range(n):
        unit[i * n + i] = one(exact)
        phi[i * n + i] = weight
        for j in range(n):
            star[i * n + j, j * n + i] = one(exact)
            for k in range(n):
                mul[i * n + j, j * n + k, i * n + k] = one(exact)
    return {'mul': mul, 'star': star, 'unit': unit, 'phi': phi}
