"""
Scalar-mode helpers shared by every numeric module.

Exact mode stores entries as ``fractions.Fraction`` in numpy object
arrays; float mode uses float64. Spectral work always happens on a
float copy.
"""

from fractions import Fraction
from numbers import Rational
from typing import Any, List, Sequence, Tuple, Union

import numpy as np
import sympy
from scipy import linalg

from src.config.config import NumericConfig

Scalar = Union[Fraction, float]


def to_scalar(value: Any, exact: bool) -> Scalar:
    """
    Convert a JSON-style value ("3/2", 1.5, 2) to the scalar type of the mode.

    Args:
        value: String, int, float, or Fraction
        exact: True for Fraction output, False for float

    Returns:
        Fraction in exact mode, float otherwise

    Raises:
        ValueError: If a string cannot be parsed as a rational
    """
    if isinstance(value, (bool, np.bool_)):
        raise ValueError(f"Boolean {value!r} is not a scalar")
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, (float, np.floating)):
            return Fraction(str(float(value)))
        if isinstance(value, Rational):
            return Fraction(value.numerator, value.denominator)
        return Fraction(str(value).strip())
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


def as_array(data: Any, exact: bool) -> np.ndarray:
    """Nested sequence (or array) to an array of the mode's scalar type."""
    raw = np.array(data, dtype=object)
    if raw.size == 0:
        return zeros(raw.shape, exact)
    if raw.ndim == 0:
        scalar = to_scalar(raw.item(), exact)
        return np.array(scalar, dtype=object) if exact else np.array(scalar, dtype=float)
    converted = np.vectorize(lambda x: to_scalar(x, exact), otypes=[object])(raw)
    return converted if exact else converted.astype(float)


def zeros(shape: Union[int, Tuple[int, ...]], exact: bool) -> np.ndarray:
    """Zero array in the given mode."""
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=float)


def eye(n: int, exact: bool) -> np.ndarray:
    """Identity matrix in the given mode."""
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def unit_vector(d: int, i: int, exact: bool) -> np.ndarray:
    """Standard basis vector e_i of length d."""
    out = zeros(d, exact)
    out[i] = Fraction(1) if exact else 1.0
    return out


def one(exact: bool) -> Scalar:
    return Fraction(1) if exact else 1.0


def is_exact_array(arr: np.ndarray) -> bool:
    return np.asarray(arr).dtype == object


def to_float(arr: Any) -> np.ndarray:
    """Float copy of an exact or float array."""
    return np.asarray(arr, dtype=object).astype(float) if is_exact_array(np.asarray(arr)) \
        else np.asarray(arr, dtype=float)


def max_abs(arr: Any) -> float:
    """Largest absolute entry as a float (0.0 for empty input)."""
    values = np.asarray(arr)
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(to_float(values))))


def within(residual: float, tolerance: float, scale: float = 1.0) -> bool:
    """True if residual <= tolerance * max(1, scale)."""
    return residual <= tolerance * max(1.0, abs(scale))


def _to_sympy(matrix: np.ndarray) -> sympy.Matrix:
    rows = np.atleast_2d(np.asarray(matrix, dtype=object))
    return sympy.Matrix([
        [sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row]
        for row in rows
    ])


def _from_sympy(matrix: sympy.Matrix) -> np.ndarray:
    out = zeros((matrix.rows, matrix.cols), True)
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            value = sympy.Rational(matrix[i, j])
            out[i, j] = Fraction(int(value.p), int(value.q))
    return out


def rank(matrix: np.ndarray, tolerance: float = NumericConfig.KERNEL_TOLERANCE) -> int:
    """Exact rank via sympy for object arrays, SVD rank otherwise."""
    matrix = np.atleast_2d(matrix)
    if matrix.size == 0:
        return 0
    if is_exact_array(matrix):
        return int(_to_sympy(matrix).rank())
    return int(np.linalg.matrix_rank(matrix, tol=tolerance))


def null_space(matrix: np.ndarray, tolerance: float = NumericConfig.KERNEL_TOLERANCE) -> np.ndarray:
    """
    Basis of the right null space as columns.

    Exact arrays go through sympy and return rational columns; float
    arrays use scipy.linalg.null_space.
    """
    matrix = np.atleast_2d(matrix)
    n_cols = matrix.shape[1]
    if is_exact_array(matrix):
        vectors: List[sympy.Matrix] = _to_sympy(matrix).nullspace()
        if not vectors:
            return zeros((n_cols, 0), True)
        return _from_sympy(sympy.Matrix.hstack(*vectors))
    if matrix.shape[0] == 0:
        return np.eye(n_cols)
    return linalg.null_space(matrix, rcond=tolerance)


def column_space(matrix: np.ndarray, tolerance: float = NumericConfig.KERNEL_TOLERANCE) -> np.ndarray:
    """Basis of the column space as columns."""
    matrix = np.atleast_2d(matrix)
    if is_exact_array(matrix):
        vectors = _to_sympy(matrix).columnspace()
        if not vectors:
            return zeros((matrix.shape[0], 0), True)
        return _from_sympy(sympy.Matrix.hstack(*vectors))
    if matrix.size == 0:
        return np.zeros((matrix.shape[0], 0))
    return linalg.orth(matrix, rcond=tolerance)


def solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve matrix @ x = rhs.

    Raises:
        np.linalg.LinAlgError: If the matrix is singular
    """
    if is_exact_array(matrix):
        sym = _to_sympy(matrix)
        if sym.rank() < sym.rows:
            raise np.linalg.LinAlgError("Singular matrix")
        solution = sym.LUsolve(_to_sympy(np.asarray(rhs).reshape(-1, 1)))
        return _from_sympy(solution).reshape(-1)
    return linalg.solve(np.asarray(matrix, dtype=float), np.asarray(rhs, dtype=float))


def inverse(matrix: np.ndarray) -> np.ndarray:
    """Matrix inverse in the mode of the input."""
    if is_exact_array(matrix):
        sym = _to_sympy(matrix)
        if sym.rank() < sym.rows:
            raise np.linalg.LinAlgError("Singular matrix")
        return _from_sympy(sym.inv())
    return linalg.inv(np.asarray(matrix, dtype=float))


def symmetric_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of the symmetric part of a real matrix, ascending."""
    values = to_float(matrix)
    if values.size == 0:
        return np.zeros(0)
    return linalg.eigh(0.5 * (values + values.T), eigvals_only=True)


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence of matrices (left factor slowest)."""
    result = factors[0]
    for factor in factors[1:]:
        result = np.kron(result, factor)
    return result
