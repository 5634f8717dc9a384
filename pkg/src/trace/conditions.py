"""
Traciality of the vacuum state.

The vacuum state is tracial on the algebra generated by the X(b) when
phi is tracial and every X_r(v) commutes with every X(u); commutation
holds exactly when four algebraic conditions on (gamma, Lambda) do.
This module evaluates the conditions, the commutators and the cyclicity
of moments and free cumulants side by side.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from src.algebra.context import AlgebraContext
from src.algebra.validation import eq23_residuals
from src.config.config import TraceConfig, tolerance_for
from src.cumulants.formulas import free_cumulant
from src.fock.space import FockContext
from src.fock.states import vacuum_expectation
from src.trace.involution import commutator_residuals
from src.utils.logger import setup_logger
from src.utils.scalars import max_abs, within

logger = setup_logger(__name__)

CONDITION_NAMES = ('trace_star', 'trace_associative', 'trace_extra', 'gamma_self_adjoint')


@dataclass
class TraceReport:
    """
    Residuals of the traciality conditions and their consequences.

    Attributes:
        context_name: Label of the algebra context
        conditions: trace_star, trace_associative, trace_extra, gamma_self_adjoint,
            plus the Lambda symmetry residuals eq23_phi and eq23_gamma
        phi_tracial: max |phi[uv] - phi[vu]|
        commutators: source level -> commutator residual (levels 0..2)
        spot_check: Commutator residual on the spot-check level, None if out of range
        cyclicity: word length -> max |tau(w) - tau(rotated w)|
        cumulant_cyclicity: order -> max |R(w) - R(rotated w)|
        tolerance: Pass threshold
    """
    context_name: str
    conditions: Dict[str, float] = field(default_factory=dict)
    phi_tracial: float = 0.0
    commutators: Dict[int, float] = field(default_factory=dict)
    spot_check: Optional[float] = None
    cyclicity: Dict[int, float] = field(default_factory=dict)
    cumulant_cyclicity: Dict[int, float] = field(default_factory=dict)
    tolerance: float = 0.0

    def _ok(self, value: float) -> bool:
        return within(value, self.tolerance)

    @property
    def conditions_hold(self) -> bool:
        return all(self._ok(self.conditions[name]) for name in CONDITION_NAMES)

    @property
    def commutes(self) -> bool:
        return all(self._ok(value) for value in self.commutators.values())

    @property
    def cyclic(self) -> bool:
        return all(self._ok(value) for value in self.cyclicity.values())

    @property
    def cumulants_cyclic(self) -> bool:
        return all(self._ok(value) for value in self.cumulant_cyclicity.values())

    @property
    def passed(self) -> bool:
        return self.conditions_hold and self.commutes and self.cyclic and self._ok(self.phi_tracial)

    def to_frame(self) -> pd.DataFrame:
        rows = [{'check': name, 'order': None, 'residual': value} for name, value in self.conditions.items()]
        rows.append({'check': 'phi_tracial', 'order': None, 'residual': self.phi_tracial})
        rows += [{'check': 'commutator', 'order': k, 'residual': v} for k, v in sorted(self.commutators.items())]
        if self.spot_check is not None:
            rows.append({'check': 'commutator_spot_check', 'order': TraceConfig.SPOT_CHECK_LEVEL,
                         'residual': self.spot_check})
        rows += [{'check': 'cyclicity', 'order': k, 'residual': v} for k, v in sorted(self.cyclicity.items())]
        rows += [{'check': 'cumulant_cyclicity', 'order': k, 'residual': v}
                 for k, v in sorted(self.cumulant_cyclicity.items())]
        frame = pd.DataFrame(rows)
        frame['passed'] = frame['residual'].apply(self._ok)
        return frame

    def to_dict(self) -> Dict[str, Any]:
        return {
            'context': self.context_name,
            'passed': self.passed,
            'conditions_hold': self.conditions_hold,
            'commutes': self.commutes,
            'cyclic': self.cyclic,
            'cumulants_cyclic': self.cumulants_cyclic,
            'tolerance': self.tolerance,
            'conditions': self.conditions,
            'phi_tracial': self.phi_tracial,
            'commutators': {str(k): v for k, v in self.commutators.items()},
            'spot_check': self.spot_check,
            'cyclicity': {str(k): v for k, v in self.cyclicity.items()},
            'cumulant_cyclicity': {str(k): v for k, v in self.cumulant_cyclicity.items()},
        }


def condition_residuals(ctx: AlgebraContext) -> Dict[str, float]:
    """
    The four traciality conditions on basis tuples:

        trace_star:          Lambda(v* (x) u*)* = Lambda(u (x) v)
        trace_associative:   u gamma[yv] - gamma[uy] v = Lambda(u (x) Lambda(y (x) v)) - Lambda(Lambda(u (x) y) (x) v)
        trace_extra:         Lambda(u (x) y gamma[zv]) - Lambda(u (x) y) gamma[zv]
                                 = Lambda(gamma[uy] z (x) v) - gamma[uy] Lambda(z (x) v)
        gamma_self_adjoint:  phi[gamma[u] v] = phi[u gamma[v]]
    """
    d = ctx.dim
    basis = [ctx.basis(i) for i in range(d)]
    mult, lam, gam = ctx.multiply, ctx.lam_of, ctx.gamma_pair
    star = 0.0
    self_adjoint = 0.0
    for u, v in product(basis, repeat=2):
        star = max(star, max_abs(ctx.adjoint(lam(ctx.adjoint(v), ctx.adjoint(u))) - lam(u, v)))
        self_adjoint = max(self_adjoint, max_abs(
            ctx.phi_of(mult(ctx.gamma_of(u), v)) - ctx.phi_of(mult(u, ctx.gamma_of(v)))))
    associative = 0.0
    for u, y, v in product(basis, repeat=3):
        lhs = mult(u, gam(y, v)) - mult(gam(u, y), v)
        rhs = lam(u, lam(y, v)) - lam(lam(u, y), v)
        associative = max(associative, max_abs(lhs - rhs))
    extra = 0.0
    for u, y, z, v in product(basis, repeat=4):
        gzv, guy = gam(z, v), gam(u, y)
        lhs = lam(u, mult(y, gzv)) - mult(lam(u, y), gzv)
        rhs = lam(mult(guy, z), v) - mult(guy, lam(z, v))
        extra = max(extra, max_abs(lhs - rhs))
    return {'trace_star': star, 'trace_associative': associative,
            'trace_extra': extra, 'gamma_self_adjoint': self_adjoint}


def phi_tracial_residual(ctx: AlgebraContext) -> float:
    pair = ctx.phi_pair
    return max_abs(pair - pair.T)


def _rotation_residuals(evaluate, d: int, orders) -> Dict[int, float]:
    cache: Dict[Tuple[int, ...], Any] = {}

    def value(word: Tuple[int, ...]):
        if word not in cache:
            cache[word] = evaluate(word)
        return cache[word]

    residuals = {}
    for n in orders:
        worst = 0.0
        for word in product(range(d), repeat=n):
            worst = max(worst, max_abs(value(word) - value(word[1:] + word[:1])))
        residuals[n] = worst
    return residuals


def cyclicity_residuals(fc: FockContext, max_word: int) -> Dict[int, float]:
    """tau(x y) = tau(y x) on monomials in the X(e_i), as invariance of moments under rotation."""
    basis = [fc.ctx.basis(i) for i in range(fc.dim)]
    return _rotation_residuals(lambda word: vacuum_expectation(fc, [basis[i] for i in word]),
                               fc.dim, range(2, max_word + 1))


def cumulant_cyclicity_residuals(fc: FockContext, max_order: int) -> Dict[int, float]:
    basis = [fc.ctx.basis(i) for i in range(fc.dim)]
    return _rotation_residuals(lambda word: free_cumulant(fc, [basis[i] for i in word]),
                               fc.dim, range(2, max_order + 1))


def check_trace_conditions(fc: FockContext, max_word: int = TraceConfig.DEFAULT_MAX_WORD,
                           tolerance: Optional[float] = None) -> TraceReport:
    """
    Evaluate the traciality conditions, commutators and cyclicity.

    Args:
        fc: Fock space (N >= 4 for commutators on levels 0..2)
        max_word: Longest monomial in the cyclicity sweep (capped at N)
        tolerance: Pass threshold (defaults to the mode's tolerance)

    Returns:
        TraceReport
    """
    ctx = fc.ctx
    tolerance = tolerance_for(fc.exact) if tolerance is None else tolerance
    report = TraceReport(ctx.name, tolerance=tolerance)
    report.conditions = condition_residuals(ctx)
    phi_res, gamma_res = eq23_residuals(ctx)
    report.conditions['eq23_phi'] = phi_res
    report.conditions['eq23_gamma'] = gamma_res
    report.phi_tracial = phi_tracial_residual(ctx)

    levels = list(TraceConfig.COMMUTATOR_LEVELS) + [TraceConfig.SPOT_CHECK_LEVEL]
    commutators = commutator_residuals(fc, levels)
    report.spot_check = commutators.pop(TraceConfig.SPOT_CHECK_LEVEL, None)
    report.commutators = commutators
    missing = [k for k in TraceConfig.COMMUTATOR_LEVELS if k not in commutators]
    if missing:
        logger.warning(f"Commutator levels {missing} need truncation level >= {max(missing) + 2}, got {fc.N}")
    if report.spot_check is not None and not within(report.spot_check, tolerance) and report.commutes:
        logger.warning(f"Commutators vanish on levels 0..2 but not on level {TraceConfig.SPOT_CHECK_LEVEL} "
                       f"(residual {report.spot_check:.3g})")

    if max_word > fc.N:
        logger.warning(f"Cyclicity sweep capped at word length {fc.N} (requested {max_word})")
        max_word = fc.N
    report.cyclicity = cyclicity_residuals(fc, max_word)
    report.cumulant_cyclicity = cumulant_cyclicity_residuals(fc, min(TraceConfig.CUMULANT_CYCLIC_ORDER, fc.N))

    if report.passed:
        logger.info(f"Vacuum state on '{ctx.name}' is tracial up to word length {max_word}")
    else:
        logger.info(f"Traciality on '{ctx.name}': conditions {report.conditions_hold}, "
                    f"commutators {report.commutes}, cyclic {report.cyclic}")
    return report
