"""
Deformed operator norms and the norm inequalities for the generators.

Norms are spectral quantities and are always computed in float64, from
a float copy of exact data. On a truncated space an operator is only
measured on the source levels where its blocks are exact, so computed
norms lower-bound the norms on the full Fock space.

Norms on B: the C*-norm of b is the operator norm of left multiplication
on the phi-GNS space. For maps T on B we use computable upper bounds:
c * sqrt(phi[1]) * ||T||_GNS, where c bounds the C*-norm by the GNS norm.
For a completely positive map the norm is attained at the unit, which
gives ||gamma + phi|| exactly.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg

from src.algebra.context import AlgebraContext
from src.config.config import NumericConfig
from src.fock.operators import OperatorMatrix, a_minus, a_plus, a_zero, x_op
from src.fock.space import FockContext, GradedSpace
from src.fock.states import kernel_preservation_residual
from src.utils.exceptions import KindMismatchError
from src.utils.logger import setup_logger
from src.utils.scalars import eye, to_float

logger = setup_logger(__name__)

Entry = Tuple[int, int]


@dataclass
class NormReport:
    """
    One verified norm inequality computed <= bound.

    Attributes:
        name: Inequality label
        computed_norm: Left-hand side
        bound: Right-hand side
        tags: Context (element index, degree, ...)
        skipped: True when the inequality does not apply (bound undefined)
        note: Reason for skipping, or a remark such as 'empirical'
    """
    name: str
    computed_norm: float
    bound: float
    tags: Dict[str, Any] = field(default_factory=dict)
    skipped: bool = False
    note: str = ''
    tolerance: float = NumericConfig.NORM_SLACK_TOLERANCE

    @property
    def slack(self) -> float:
        return self.bound - self.computed_norm

    @property
    def passed(self) -> bool:
        return self.skipped or self.slack >= -self.tolerance * max(1.0, abs(self.bound))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'computed_norm': self.computed_norm,
            'bound': self.bound,
            'slack': self.slack,
            'passed': self.passed,
            'skipped': self.skipped,
            'note': self.note,
            **{f"tag_{k}": v for k, v in self.tags.items()},
        }


def reports_to_frame(reports: Iterable[NormReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_dict() for r in reports])


def skipped_report(name: str, note: str, **tags) -> NormReport:
    logger.warning(f"Norm report '{name}' skipped: {note}")
    return NormReport(name, 0.0, math.inf, tags=tags, skipped=True, note=note)


# ----------------------------------------------------------------------
# Spectral core
# ----------------------------------------------------------------------

def _positive_frame(gram: np.ndarray) -> np.ndarray:
    """Q with Q^T G Q = I on the positive eigenspace of G."""
    values, vectors = linalg.eigh(0.5 * (gram + gram.T))
    keep = values > NumericConfig.KERNEL_TOLERANCE
    return vectors[:, keep] / np.sqrt(values[keep])


def pencil_norm(matrix: np.ndarray, target_gram: np.ndarray, source_gram: np.ndarray) -> float:
    """
    sup ||A x||_target / ||x||_source over the positive part of the source Gram.

    This is the square root of the top eigenvalue of the pencil
    (A^T G_t A, G_s) restricted to the range of G_s.
    """
    frame = _positive_frame(to_float(source_gram))
    if frame.shape[1] == 0:
        return 0.0
    target = to_float(target_gram)
    a = to_float(matrix) @ frame
    reduced = a.T @ (0.5 * (target + target.T)) @ a
    top = linalg.eigh(0.5 * (reduced + reduced.T), eigvals_only=True)[-1]
    return math.sqrt(max(float(top), 0.0))


def deformed_norm(space: GradedSpace, op: OperatorMatrix, sources: Optional[Sequence[int]] = None) -> float:
    """
    Norm of an operator in the deformed inner product.

    Args:
        space: Fock-type space (Gram matrices are computed on demand)
        op: Operator matrix
        sources: Source levels making up the domain (default: the exact ones)

    Returns:
        Operator norm on the domain, measured on all target levels
    """
    sources = list(op.exact_sources() if sources is None else sources)
    if not sources:
        return 0.0
    if any(space.gram_kernel(s).shape[1] for s in sources):
        kernel_preservation_residual(space, op)
    targets = list(range(space.N + 1))
    dense = op.to_dense(sources, targets)
    target_gram = linalg.block_diag(*[to_float(space.gram(t)) for t in targets])
    source_gram = linalg.block_diag(*[to_float(space.gram(s)) for s in sources])
    return pencil_norm(dense, target_gram, source_gram)


def undeformed_norm_bound(space: GradedSpace, op: OperatorMatrix, adjoint: OperatorMatrix) -> float:
    """
    sqrt(||A|| ||B||) in undeformed spectral norms, for an adjoint pair (A, B).

    A maps the exact sources of op; B is restricted to A's targets and back.
    """
    sources = op.exact_sources()
    targets = sorted({t for (t, s) in op.blocks if s in sources})
    if not targets:
        return 0.0
    forward = to_float(op.to_dense(sources, targets))
    backward = to_float(adjoint.to_dense(targets, sources))
    return math.sqrt(np.linalg.norm(forward, 2) * np.linalg.norm(backward, 2))


# ----------------------------------------------------------------------
# Norms on B
# ----------------------------------------------------------------------

def _gns_gram(ctx: AlgebraContext) -> np.ndarray:
    # <x, y> = phi[y* x] = x^T P^T y
    gram = to_float(ctx.phi_gram).T
    return 0.5 * (gram + gram.T)


def element_norm(ctx: AlgebraContext, b: np.ndarray) -> float:
    """C*-norm of b: the norm of left multiplication on the phi-GNS space."""
    gram = _gns_gram(ctx)
    return pencil_norm(ctx.left_matrix(np.asarray(b)), gram, gram)


def gns_map_norm(ctx: AlgebraContext, matrix: np.ndarray) -> float:
    """Norm of a linear map on B between phi-GNS norms."""
    gram = _gns_gram(ctx)
    return pencil_norm(matrix, gram, gram)


def cstar_constant(ctx: AlgebraContext) -> float:
    """
    A constant c with ||x|| <= c ||x||_GNS for all x in B.

    With q_i a GNS-orthonormal basis, ||sum y_i q_i|| <= sqrt(sum ||q_i||^2) |y|.
    """
    frame = _positive_frame(_gns_gram(ctx))
    return math.sqrt(sum(element_norm(ctx, frame[:, i]) ** 2 for i in range(frame.shape[1])))


def map_norm(ctx: AlgebraContext, matrix: np.ndarray) -> float:
    """Upper bound on the C*-norm of a map on B."""
    phi_one = max(float(to_float(ctx.phi_of_unit)), 0.0)
    return cstar_constant(ctx) * math.sqrt(phi_one) * gns_map_norm(ctx, matrix)


def gamma_phi_norm(ctx: AlgebraContext) -> float:
    """||gamma + phi|| = ||(gamma + phi)[1]|| for the completely positive map gamma + phi."""
    return element_norm(ctx, np.dot(ctx.gamma_plus_phi(1), ctx.unit))


def creation_constant(ctx: AlgebraContext) -> float:
    """kappa = max(phi[1], ||gamma + phi||); ||a+(b)|| <= sqrt(kappa) ||b|| on every level."""
    return max(float(to_float(ctx.phi_of_unit)), gamma_phi_norm(ctx))


def gamma_norm(ctx: AlgebraContext) -> float:
    return map_norm(ctx, ctx.gamma)


def lambda_norm(ctx: AlgebraContext) -> float:
    """
    Norm of Lambda: of b -> Lambda(b) in left-multiplier mode, otherwise
    of the bilinear map B (x) B -> B between GNS norms, scaled as map_norm.
    """
    if ctx.is_left_multiplier():
        return map_norm(ctx, ctx.lambda_map())
    gram = _gns_gram(ctx)
    flat = to_float(ctx.lam).reshape(ctx.dim * ctx.dim, ctx.dim).T
    phi_one = max(float(to_float(ctx.phi_of_unit)), 0.0)
    return cstar_constant(ctx) * math.sqrt(phi_one) * pencil_norm(flat, gram, np.kron(gram, gram))


# ----------------------------------------------------------------------
# Generator estimates
# ----------------------------------------------------------------------

def _label(elements: Optional[Sequence[np.ndarray]], fc: FockContext) -> List[Tuple[str, np.ndarray]]:
    if elements is None:
        return [(f"e{i}", fc.ctx.basis(i)) for i in range(fc.dim)]
    return [(f"u{i}", np.asarray(b)) for i, b in enumerate(elements)]


def verify_estimates(fc: FockContext, elements: Optional[Sequence[np.ndarray]] = None) -> List[NormReport]:
    """
    Norm inequalities for the creation, annihilation and preservation operators.

    For each element b (default: the basis):
      ||a+(b)|| <= sqrt(max(phi[b*b], ||(gamma + phi)[b*b]||)) <= sqrt(kappa) ||b||,
      ||a-(b*)|| = ||a+(b)||, and in left-multiplier mode ||a0(b)|| <= ||Lambda|| ||b||.

    Returns:
        List of NormReport
    """
    ctx = fc.ctx
    kappa = creation_constant(ctx)
    lam_norm = lambda_norm(ctx) if ctx.is_left_multiplier() else None
    reports = []
    for label, b in _label(elements, fc):
        b_star = ctx.adjoint(b)
        norm_b = element_norm(ctx, b)
        plus = deformed_norm(fc, a_plus(fc, b))
        pair = ctx.gamma_phi_pair(b_star, b)
        first = math.sqrt(max(float(to_float(ctx.phi_of(ctx.multiply(b_star, b)))), element_norm(ctx, pair), 0.0))
        reports.append(NormReport('a_plus', plus, first, tags={'element': label}))
        reports.append(NormReport('a_plus_map', first, math.sqrt(kappa) * norm_b, tags={'element': label}))
        minus = deformed_norm(fc, a_minus(fc, b_star))
        reports.append(NormReport('a_minus_adjoint', abs(minus - plus), 0.0, tags={'element': label}))
        if lam_norm is None:
            reports.append(skipped_report('a_zero', 'Lambda is not a left multiplier', element=label))
        else:
            zero = deformed_norm(fc, a_zero(fc, b))
            reports.append(NormReport('a_zero', zero, lam_norm * norm_b, tags={'element': label}))
    failed = [r for r in reports if not r.passed]
    if failed:
        logger.warning(f"{len(failed)} norm estimate(s) violated on '{ctx.name}'")
    else:
        logger.info(f"All {len(reports)} generator norm estimates hold on '{ctx.name}' (N={fc.N})")
    return reports


# ----------------------------------------------------------------------
# Banded operator matrices over l^2
# ----------------------------------------------------------------------

def banded_norm(space: GradedSpace, entries: Dict[Entry, OperatorMatrix]) -> float:
    """Deformed norm of the operator matrix [T_{i,k}] acting on F (x) l^2."""
    if not entries:
        return 0.0
    reach = max(op.reach for op in entries.values())
    sources = [s for s in range(space.N + 1) if s + reach <= space.N]
    targets = list(range(space.N + 1))
    rows = sorted({i for i, _ in entries})
    columns = sorted({k for _, k in entries})
    dims = space.level_dims

    def dense(i: int, k: int) -> np.ndarray:
        if (i, k) in entries:
            return to_float(entries[(i, k)].to_dense(sources, targets))
        return np.zeros((sum(dims[t] for t in targets), sum(dims[s] for s in sources)))

    matrix = np.block([[dense(i, k) for k in columns] for i in rows])
    target_gram = linalg.block_diag(*[to_float(space.gram(t)) for _ in rows for t in targets])
    source_gram = linalg.block_diag(*[to_float(space.gram(s)) for _ in columns for s in sources])
    return pencil_norm(matrix, target_gram, source_gram)


def diagonal_bound(space: GradedSpace, entries: Dict[Entry, OperatorMatrix]) -> NormReport:
    """
    Sum over diagonals of the largest entry norm, against the norm of the assembled matrix.

    Returns:
        NormReport with computed_norm = ||T|| and bound = sum_j sup_k ||T_{k, k+j}||
    """
    per_diagonal: Dict[int, float] = {}
    for (i, k), op in entries.items():
        per_diagonal[k - i] = max(per_diagonal.get(k - i, 0.0), deformed_norm(space, op))
    bound = sum(per_diagonal.values())
    computed = banded_norm(space, entries)
    return NormReport('diagonal_bound', computed, bound, tags={'diagonals': len(per_diagonal)})


def first_factor_multiplication(fc: FockContext, c: np.ndarray, vacuum_scalar: Any) -> OperatorMatrix:
    """Left multiplication by c on the first tensor factor, with Omega -> vacuum_scalar Omega."""
    blocks = {(0, 0): np.array([[vacuum_scalar]], dtype=object if fc.exact else float)}
    left = fc.ctx.left_matrix(c)
    for k in range(1, fc.N + 1):
        blocks[(k, k)] = np.kron(left, eye(fc.level_dim(k - 1), fc.exact))
    return OperatorMatrix(fc.level_dims, blocks, reach=0, up=0, exact=fc.exact)


def corollary_y(fc: FockContext, family: Sequence[np.ndarray]) -> Dict[Entry, OperatorMatrix]:
    """
    Y = B - I - A0 with the first diagonal replaced by a+ + a-:
    Y[i, i+1] = a+(u_i) + a-(u_i), Y[i, i+2] = the (gamma + phi)[u_i u_{i+1}] action.
    """
    ctx = fc.ctx
    family = [np.asarray(u) for u in family]
    entries: Dict[Entry, OperatorMatrix] = {}
    for i, u in enumerate(family):
        entries[(i, i + 1)] = a_plus(fc, u) + a_minus(fc, u)
        if i + 1 < len(family):
            c = ctx.gamma_phi_pair(u, family[i + 1])
            entries[(i, i + 2)] = first_factor_multiplication(fc, c, ctx.phi_of(ctx.multiply(u, family[i + 1])))
    return entries


def corollary_bound(fc: FockContext, family: Sequence[np.ndarray]) -> List[NormReport]:
    """
    ||Y|| <= diagonal bound <= 2 sqrt(kappa) s + kappa s^2, s = max ||u_i||.
    """
    kappa = creation_constant(fc.ctx)
    s = max(element_norm(fc.ctx, u) for u in family)
    entries = corollary_y(fc, family)
    diagonal = diagonal_bound(fc, entries)
    closed = 2 * math.sqrt(kappa) * s + kappa * s * s
    return [diagonal, NormReport('corollary_y', diagonal.bound, closed, tags={'s': s, 'm': len(family)})]


def x_norm_bound(fc: FockContext, u: np.ndarray) -> NormReport:
    """||X(u)|| <= (2 sqrt(kappa) + ||Lambda||) ||u||."""
    if not fc.ctx.is_left_multiplier():
        raise KindMismatchError(f"'{fc.ctx.name}' does not have a left-multiplier Lambda")
    bound = (2 * math.sqrt(creation_constant(fc.ctx)) + lambda_norm(fc.ctx)) * element_norm(fc.ctx, u)
    return NormReport('x_norm', deformed_norm(fc, x_op(fc, u)), bound)
