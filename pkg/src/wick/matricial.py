"""
Finite sections of the matricial generating function.

Letters u_0..u_{m-1} index the rows and columns 0..m of band matrices:

    X[i, i+1]   = X(u_i)
    W[i, k]     = W(u_i, ..., u_{k-1})           (W[i, i] = I)
    A0[i, i+1]  = preservation by u_i            (acts on the first argument)
    Gamma[i, i+2], Phi[i, i+2]                    the interacting and phi parts of
                                                  annihilation by u_i against u_{i+1}

A0 and Gamma act on the first argument of the Wick entry they multiply,
and Phi multiplies the empty word by phi[u_i u_{i+1}], so that
(B - X) W = B - Phi with B = I + A0 + Gamma + Phi reads, entry by entry,
as the Wick recursion.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.config.config import tolerance_for
from src.cumulants.formulas import free_cumulant, free_cumulant_oracle
from src.fock.operators import OperatorMatrix, identity_op, x_op
from src.fock.space import GradedSpace
from src.fock.states import vacuum_expectation
from src.utils.exceptions import SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import eye, max_abs, within, zeros
from src.wick.polynomials import wick_poly

logger = setup_logger(__name__)

Entry = Tuple[int, int]


@dataclass
class MatricialSystem:
    """
    Truncated band matrices of the matricial generating function.

    Attributes:
        space: Underlying Fock-type space
        family: u_0..u_{m-1}
        max_degree: Largest k - i for which W[i, k] is assembled
        X: (i, i+1) -> X(u_i)
        W: (i, k) -> W(u_i..u_{k-1})
        A0: (i, i+1) -> d x d preservation matrix of u_i
        Gamma: (i, i+2) -> d x d matrix of v -> interacting annihilation by u_i of u_{i+1} (x) v
        Phi: (i, i+2) -> phi[u_i u_{i+1}]
        residuals: (i, k) -> residual of (B - X) W - (B - Phi)
        boundary: Entries left out because W[i, k] is beyond max_degree
    """
    space: GradedSpace
    family: List[np.ndarray]
    max_degree: int
    X: Dict[Entry, OperatorMatrix] = field(default_factory=dict)
    W: Dict[Entry, OperatorMatrix] = field(default_factory=dict)
    A0: Dict[Entry, np.ndarray] = field(default_factory=dict)
    Gamma: Dict[Entry, np.ndarray] = field(default_factory=dict)
    Phi: Dict[Entry, Any] = field(default_factory=dict)
    residuals: Dict[Entry, float] = field(default_factory=dict)
    boundary: List[Entry] = field(default_factory=list)
    tolerance: float = 0.0

    @property
    def m(self) -> int:
        return len(self.family)

    @property
    def passed(self) -> bool:
        return all(within(value, self.tolerance) for value in self.residuals.values())

    def worst(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def diagonal(self, n: int) -> Dict[Entry, OperatorMatrix]:
        """W_n: the entries of W on the n-th superdiagonal."""
        return {(i, k): op for (i, k), op in self.W.items() if k - i == n}

    def structure_violations(self) -> List[str]:
        """Band and triangularity violations of the assembled matrices (empty when well formed)."""
        problems = []
        if any(k - i != 1 for i, k in self.X):
            problems.append("X is not supported on the first superdiagonal")
        if any(k - i != 1 for i, k in self.A0):
            problems.append("A0 is not supported on the first superdiagonal")
        if any(k - i != 2 for i, k in list(self.Gamma) + list(self.Phi)):
            problems.append("Gamma/Phi not supported on the second superdiagonal")
        if any(k < i for i, k in self.W):
            problems.append("W has entries below the diagonal")
        identity = identity_op(self.space)
        for i in range(self.m + 1):
            if (i, i) not in self.W or self.W[(i, i)].residual(identity) > self.tolerance:
                problems.append(f"W[{i}, {i}] is not the identity")
        return problems

    def psi(self, entries: Dict[Entry, OperatorMatrix]) -> np.ndarray:
        """Entrywise vacuum expectation of an operator-valued band matrix."""
        result = zeros((self.m + 1, self.m + 1), self.space.exact)
        for (i, k), op in entries.items():
            result[i, k] = vacuum_expectation(self.space, [op])
        return result

    def to_frame(self) -> pd.DataFrame:
        rows = [{'row': i, 'column': k, 'degree': k - i, 'residual': value,
                 'passed': within(value, self.tolerance), 'boundary': False}
                for (i, k), value in sorted(self.residuals.items())]
        rows += [{'row': i, 'column': k, 'degree': k - i, 'residual': None, 'passed': None, 'boundary': True}
                 for i, k in self.boundary]
        return pd.DataFrame(rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'm': self.m,
            'max_degree': self.max_degree,
            'passed': self.passed,
            'tolerance': self.tolerance,
            'residuals': {f"{i},{k}": value for (i, k), value in sorted(self.residuals.items())},
            'boundary': [f"{i},{k}" for i, k in self.boundary],
            'phi': {f"{i},{k}": str(value) for (i, k), value in sorted(self.Phi.items())},
        }


def _entry_residual(system: MatricialSystem, i: int, k: int) -> float:
    space, family = system.space, system.family
    lhs = system.W[(i, k)]
    if k >= i + 2:
        first = np.dot(system.A0[(i, i + 1)], family[i + 1])
        lhs = lhs + wick_poly(space, [first] + family[i + 2:k])
    if k >= i + 3:
        lowered = np.dot(system.Gamma[(i, i + 2)], family[i + 2]) + system.Phi[(i, i + 2)] * family[i + 2]
        lhs = lhs + wick_poly(space, [lowered] + family[i + 3:k])
    if k == i + 2:
        lhs = lhs + identity_op(space) * system.Phi[(i, i + 2)]
    return lhs.residual(system.X[(i, i + 1)] @ system.W[(i + 1, k)])


def matricial_system(space: GradedSpace, family: Sequence[np.ndarray], max_degree: int,
                     tolerance: Optional[float] = None) -> MatricialSystem:
    """
    Assemble the finite section and check (B - X) W = B - Phi entrywise.

    Args:
        space: Fock-type space
        family: u_0..u_{m-1}, m >= 2
        max_degree: Largest Wick degree assembled (<= N - 1)
        tolerance: Pass threshold (defaults to the mode's tolerance)

    Returns:
        MatricialSystem with residuals on every entry whose Wick entries are
        assembled; the remaining upper-triangular entries are listed as boundary

    Raises:
        ValueError: If m < 2
        SizeLimitError: If max_degree > N - 1
    """
    family = [np.asarray(u) for u in family]
    m = len(family)
    if m < 2:
        raise ValueError(f"Matricial system needs at least 2 letters, got {m}")
    if max_degree > space.N - 1:
        raise SizeLimitError(f"Degree {max_degree} needs truncation level >= {max_degree + 1}, got {space.N}")
    system = MatricialSystem(space, family, max_degree,
                             tolerance=tolerance_for(space.exact) if tolerance is None else tolerance)
    d = space.dim
    for i in range(m):
        system.X[(i, i + 1)] = x_op(space, family[i])
        system.A0[(i, i + 1)] = space.preservation_matrix(family[i])
        if i + 1 < m:
            lifted = np.kron(family[i + 1].reshape(-1, 1), eye(d, space.exact))
            system.Gamma[(i, i + 2)] = np.dot(space.interaction_pair_matrix(family[i]), lifted)
            system.Phi[(i, i + 2)] = np.dot(space.vacuum_row(family[i]), family[i + 1])[0]
    for i in range(m + 1):
        for k in range(i, m + 1):
            if k - i <= max_degree:
                system.W[(i, k)] = wick_poly(space, family[i:k])
    for i in range(m):
        for k in range(i + 1, m + 1):
            if k - i > max_degree:
                system.boundary.append((i, k))
                continue
            system.residuals[(i, k)] = _entry_residual(system, i, k)
    if system.passed:
        logger.info(f"(B - X) W = B - Phi holds on {len(system.residuals)} entries "
                    f"(m={m}, degree <= {max_degree}, {len(system.boundary)} boundary)")
    else:
        logger.warning(f"Matricial residual up to {system.worst():.3g}")
    return system


def matricial_moments(space: GradedSpace, family: Sequence[np.ndarray], k: int) -> np.ndarray:
    """Psi[X^k]: entry (i, i+k) is <X(u_i)...X(u_{i+k-1}) Omega, Omega>."""
    family = [np.asarray(u) for u in family]
    m = len(family)
    result = zeros((m + 1, m + 1), space.exact)
    for i in range(m - k + 1):
        result[i, i + k] = vacuum_expectation(space, family[i:i + k])
    return result


def matricial_cumulants(space: GradedSpace, family: Sequence[np.ndarray], n: int) -> np.ndarray:
    """
    Matricial free cumulant of order n.

    Entry (i, i+n) of the (m+1) x (m+1) result is R[X(u_i), ..., X(u_{i+n-1})];
    all other entries vanish.

    Raises:
        SizeLimitError: If n > min(m - 1, N)
    """
    family = [np.asarray(u) for u in family]
    m = len(family)
    if n < 1 or n > min(m - 1, space.N):
        raise SizeLimitError(f"Cumulant order {n} must lie in 1..{min(m - 1, space.N)}")
    result = zeros((m + 1, m + 1), space.exact)
    for i in range(m - n + 1):
        result[i, i + n] = free_cumulant(space, family[i:i + n])
    return result


def matricial_cumulant_oracle(space: GradedSpace, family: Sequence[np.ndarray], n: int) -> np.ndarray:
    """
    The same matrix from the D-valued moment-cumulant relation.

    With single-diagonal entries every nested D-valued cumulant collapses
    along the path i -> i+n, so the inversion is carried out entrywise on
    the moments of the subwords of each window.
    """
    family = [np.asarray(u) for u in family]
    m = len(family)
    if n < 1 or n > min(m - 1, space.N):
        raise SizeLimitError(f"Cumulant order {n} must lie in 1..{min(m - 1, space.N)}")
    result = zeros((m + 1, m + 1), space.exact)
    for i in range(m - n + 1):
        result[i, i + n] = free_cumulant_oracle(space, family[i:i + n])
    return result


def matricial_cumulant_residual(space: GradedSpace, family: Sequence[np.ndarray], n: int) -> float:
    return max_abs(matricial_cumulants(space, family, n) - matricial_cumulant_oracle(space, family, n))
