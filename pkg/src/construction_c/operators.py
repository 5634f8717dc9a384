"""Generators, R' kernel and Wick polynomials of the C-deformed construction."""

from typing import Dict, Optional, Sequence

import numpy as np

from src.config.config import SeriesConfig
from src.construction_c.construction import ConstructionC
from src.cumulants.formulas import free_cumulant_oracle
from src.cumulants.kernel import DegreeResiduals, cumulant_gf_residual, r_prime_series
from src.fock.operators import OperatorMatrix, a_minus, a_plus, a_zero, x_op
from src.fock.states import adjoint_residuals
from src.utils.exceptions import SizeLimitError
from src.utils.logger import setup_logger
from src.utils.scalars import max_abs
from src.wick.polynomials import vacuum_residual, wick_poly

logger = setup_logger(__name__)


def ops_c(cc: ConstructionC, f: np.ndarray) -> Dict[str, OperatorMatrix]:
    """
    a+, a-, a0 and X for one vector f.

    a-(f)(f_1 (x) f_2 (x) ...) = l*(f)[(C + I)(f_1 (x) f_2)] (x) ...
    """
    f = np.asarray(f)
    return {'plus': a_plus(cc, f), 'minus': a_minus(cc, f), 'zero': a_zero(cc, f), 'X': x_op(cc, f)}


def adjoint_residuals_c(cc: ConstructionC, f: np.ndarray) -> Dict[str, float]:
    """<a+(f) x, y>_C = <x, a-(f*) y>_C and the symmetry of a0, on every level."""
    return adjoint_residuals(cc, np.asarray(f))


def r_prime_c(cc: ConstructionC, f: np.ndarray, n: int) -> np.ndarray:
    """
    R'_n[f] from
    R'_n(g) = sum_{i=0}^{n-2} R'_i l*(f) C(R'_{n-i-2} f (x) g) + R'_{n-1} Lambda(f (x) g).

    Raises:
        SizeLimitError: If n > N - 2
    """
    if n > cc.N - 2:
        raise SizeLimitError(f"R'_{n} needs truncation level >= {n + 2}, got {cc.N}")
    return r_prime_series(cc, np.asarray(f), n)[n]


def gf_residual_c(cc: ConstructionC, f: np.ndarray, max_degree: int = SeriesConfig.MAX_GF_DEGREE,
                  tolerance: Optional[float] = None) -> DegreeResiduals:
    """
    Degree-wise residuals of the R' relation, plus an 'oracle' check:
    <R'_n f, f*> against the free cumulant of order n + 2 obtained by
    Moebius inversion of vacuum moments, for n + 2 <= N.
    """
    f = np.asarray(f)
    report = cumulant_gf_residual(cc, f, max_degree, tolerance)
    report.name = 'cumulant_gf_c'
    series = r_prime_series(cc, f, max_degree)
    row = cc.vacuum_row(f)
    for n in range(0, min(max_degree, cc.N - 2) + 1):
        value = np.dot(row, np.dot(series[n], f))[0]
        report.record('oracle', n, max_abs(value - free_cumulant_oracle(cc, [f] * (n + 2))))
    if not report.passed:
        logger.warning(f"Construction C generating-function residual up to {report.worst():.3g}")
    return report


def wick_c(cc: ConstructionC, elements: Sequence[np.ndarray]) -> OperatorMatrix:
    """
    W(f_1, ..., f_n) with the two-step term W(l*(f_1)(C + I)(f_2 (x) f_3), f_4, ...).

    Raises:
        SizeLimitError: If n > N - 1
    """
    return wick_poly(cc, elements)


def wick_vacuum_residual_c(cc: ConstructionC, elements: Sequence[np.ndarray]) -> float:
    """|W(f_1..f_n) Omega - f_1 (x) ... (x) f_n|."""
    return vacuum_residual(cc, elements)
