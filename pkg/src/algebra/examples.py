"""
Catalog of named algebra contexts.

All presets live on B = R^m with componentwise product, idempotent basis
and the identity star; step functions on [0, 1] are represented by their
values on m equal cells, with phi the normalized cell average unless
weights are supplied.
"""

from typing import Any, Callable, Dict, Optional

import numpy as np

from src.algebra.context import AlgebraContext, commutative_algebra
from src.algebra.validation import validate_algebra
from src.config.config import AlgebraConfig
from src.utils.exceptions import ExampleParameterError
from src.utils.logger import setup_logger
from src.utils.scalars import as_array, to_scalar, zeros

logger = setup_logger(__name__)


def _weights(params: Dict[str, Any], m: int, exact: bool) -> np.ndarray:
    if 'weights' in params and params['weights'] is not None:
        weights = as_array(params['weights'], exact)
        if weights.shape != (m,):
            raise ExampleParameterError(f"weights must have length {m}, got shape {weights.shape}")
        if any(w <= 0 for w in weights):
            raise ExampleParameterError("weights must be strictly positive (phi must be faithful)")
        return weights
    return as_array([to_scalar(1, exact) / m] * m, exact)


def _vector(params: Dict[str, Any], key: str, m: int, exact: bool, default: Any = 0) -> np.ndarray:
    raw = params.get(key, default)
    values = as_array(raw, exact)
    if values.ndim == 0:
        values = as_array([raw] * m, exact)
    if values.shape != (m,):
        raise ExampleParameterError(f"'{key}' must be a scalar or a vector of length {m}, got shape {values.shape}")
    return values


def _pointwise_lambda(lam_values: np.ndarray, m: int, exact: bool) -> np.ndarray:
    lam = zeros((m, m, m), exact)
    for i in range(m):
        lam[i, i, i] = lam_values[i]
    return lam


def _bozejko(params: Dict[str, Any], exact: bool) -> AlgebraContext:
    eta_raw = params.get('eta', params.get('t', 0))
    m = int(params.get('m', np.size(np.array(eta_raw, dtype=object))))
    structure = commutative_algebra(_weights(params, m, exact), exact)
    eta = _vector(params, 'eta' if 'eta' in params else 't', m, exact)
    if any(value < 0 for value in eta):
        raise ExampleParameterError(f"eta must be nonnegative, got {list(map(str, eta))}")
    lam_values = _vector(params, 'lam', m, exact)
    gamma = zeros((m, m), exact)
    for i in range(m):
        gamma[i, i] = eta[i]
    return AlgebraContext(dim=m, gamma=gamma, lam=_pointwise_lambda(lam_values, m, exact),
                          lambda_kind='left-multiplier', name='bozejko', **structure)


def _scalar_gamma(params: Dict[str, Any], exact: bool) -> AlgebraContext:
    m = int(params.get('m', 1))
    structure = commutative_algebra(_weights(params, m, exact), exact)
    psi = to_scalar(params.get('psi', 0), exact)
    if psi < -1:
        raise ExampleParameterError(f"psi must be >= -1 for gamma + phi to be positive, got {psi}")
    gamma = psi * np.multiply.outer(structure['unit'], structure['phi'])
    lam_values = _vector(params, 'lam', m, exact)
    return AlgebraContext(dim=m, gamma=gamma, lam=_pointwise_lambda(lam_values, m, exact),
                          lambda_kind='left-multiplier', name='scalar_gamma', **structure)


def _lenczewski_discrete(params: Dict[str, Any], exact: bool, name: str = 'lenczewski_discrete') -> AlgebraContext:
    if 'w' not in params:
        raise ExampleParameterError("lenczewski_discrete requires the kernel samples 'w'")
    w = as_array(params['w'], exact)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ExampleParameterError(f"'w' must be a square matrix, got shape {w.shape}")
    m = w.shape[0]
    if 'm' in params and int(params['m']) != m:
        raise ExampleParameterError(f"grid size m={params['m']} does not match kernel size {m}")
    if any(value + 1 < 0 for value in w.ravel()):
        raise ExampleParameterError("kernel must satisfy w + 1 >= 0 entrywise")
    structure = commutative_algebra(_weights(params, m, exact), exact)
    cell = to_scalar(1, exact) / m
    gamma = w * cell

    lam_raw = as_array(params.get('lam', 0), exact)
    if lam_raw.ndim == 2:
        if lam_raw.shape != (m, m):
            raise ExampleParameterError(f"kernel 'lam' must be {m}x{m}, got shape {lam_raw.shape}")
        lam = AlgebraContext.left_multiplier_tensor(structure['mul'], lam_raw * cell)
    else:
        lam = _pointwise_lambda(_vector(params, 'lam', m, exact), m, exact)
    return AlgebraContext(dim=m, gamma=gamma, lam=lam, lambda_kind='left-multiplier', name=name, **structure)


def kesten_kernel(m: int, p: Any, q: Any, exact: bool = True) -> np.ndarray:
    """w(s, t) = p for s < t, q for t < s, 1 on the diagonal, sampled on an m-cell grid."""
    p, q = to_scalar(p, exact), to_scalar(q, exact)
    w = zeros((m, m), exact)
    for s in range(m):
        for t in range(m):
            w[s, t] = p if s < t else (q if t < s else to_scalar(1, exact))
    return w


def _lenczewski_kesten(params: Dict[str, Any], exact: bool) -> AlgebraContext:
    m = int(params.get('m', 4))
    w = kesten_kernel(m, params.get('p', 0), params.get('q', 0), exact)
    gauge = w.copy()
    for s in range(m):
        gauge[s, s] = gauge[s, s] + to_scalar(1, exact)
    merged = dict(params, w=w, lam=gauge)
    merged.pop('m', None)
    return _lenczewski_discrete(merged, exact, name='lenczewski_kesten')


def _ma(params: Dict[str, Any], exact: bool) -> AlgebraContext:
    c_raw = params.get('C')
    d = int(params.get('d', 2 if c_raw is None else np.shape(np.array(c_raw, dtype=object))[0]))
    c_matrix = zeros((d, d), exact) if c_raw is None else as_array(c_raw, exact)
    if c_matrix.shape != (d, d):
        raise ExampleParameterError(f"'C' must be {d}x{d}, got shape {c_matrix.shape}")
    if any(value + 1 < 0 for value in c_matrix.ravel()):
        raise ExampleParameterError("'C' must satisfy C + 1 >= 0 entrywise")
    b_tensor = zeros((d, d, d), exact) if params.get('B') is None else as_array(params['B'], exact)
    if b_tensor.shape != (d, d, d):
        raise ExampleParameterError(f"'B' must have shape {(d, d, d)}, got {b_tensor.shape}")
    structure = commutative_algebra(as_array([1] * d, exact), exact)
    return AlgebraContext(dim=d, gamma=c_matrix, lam=b_tensor, lambda_kind='general', name='ma', **structure)


def _poisson(params: Dict[str, Any], exact: bool) -> AlgebraContext:
    m = int(params.get('m', 1))
    structure = commutative_algebra(_weights(params, m, exact), exact)
    return AlgebraContext(dim=m, gamma=zeros((m, m), exact), lam=structure['mul'].copy(),
                          lambda_kind='left-multiplier', name='poisson', **structure)


_BUILDERS: Dict[str, Callable[[Dict[str, Any], bool], AlgebraContext]] = {
    'bozejko': _bozejko,
    'lenczewski_discrete': _lenczewski_discrete,
    'lenczewski_kesten': _lenczewski_kesten,
    'ma': _ma,
    'scalar_gamma': _scalar_gamma,
    'poisson': _poisson,
}


def load_example(name: str, params: Optional[Dict[str, Any]] = None, exact: bool = True,
                 validate: bool = True) -> AlgebraContext:
    """
    Build a named example context.

    Args:
        name: One of AlgebraConfig.EXAMPLE_NAMES
        params: Example parameters:
            bozejko: eta, lam (scalars or length-m vectors), optional weights
            lenczewski_discrete: w (m x m), lam (length-m vector or m x m kernel)
            lenczewski_kesten: m, p, q
            ma: C (d x d), B (d x d x d)
            scalar_gamma: psi, optional lam and m
            poisson: optional m
        exact: Rational (True) or float (False) scalars
        validate: Run validate_algebra and reject failing contexts

    Returns:
        AlgebraContext

    Raises:
        ExampleParameterError: Unknown name, invalid parameters, or a failed validation

    Example:
        >>> ctx = load_example('bozejko', {'eta': '1/2', 'lam': 1})
        >>> ctx.dim
        1
    """
    if name not in AlgebraConfig.EXAMPLE_NAMES:
        raise ExampleParameterError(
            f"Unknown example '{name}'. Must be one of: {', '.join(AlgebraConfig.EXAMPLE_NAMES)}")
    try:
        ctx = _BUILDERS[name](dict(params or {}), exact)
    except (TypeError, ZeroDivisionError) as exc:
        raise ExampleParameterError(f"Invalid parameters for '{name}': {exc}") from exc
    if validate:
        report = validate_algebra(ctx)
        if not report.passed:
            failed = ", ".join(f"{c.name} ({c.residual:.3g})" for c in report.failures())
            raise ExampleParameterError(f"Example '{name}' fails validation: {failed}")
    logger.info(f"Loaded example '{name}' (d={ctx.dim}, lambda_kind={ctx.lambda_kind})")
    return ctx
