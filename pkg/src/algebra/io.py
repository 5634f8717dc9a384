"""JSON algebra specs: parsing, writing, and catalog-style example references."""

import json
from pathlib import Path
from typing import Any, Dict, Union

from src.algebra.context import AlgebraContext
from src.algebra.examples import load_example
from src.utils.exceptions import SpecParseError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

REQUIRED_FIELDS = ('dim', 'mul', 'star', 'unit', 'phi', 'gamma', 'lambda')


def _validate_fields(spec: Dict[str, Any]):
    if not isinstance(spec, dict):
        return f"Spec must be a JSON object, got {type(spec).__name__}"
    if 'example' in spec:
        return None
    missing = [name for name in REQUIRED_FIELDS if name not in spec]
    if missing:
        return f"Spec is missing required fields: {', '.join(missing)}"
    kind = spec.get('lambda_kind', 'general')
    if kind not in ('general', 'left-multiplier'):
        return f"Invalid lambda_kind '{kind}'. Must be 'general' or 'left-multiplier'"
    return None


def spec_to_context(spec: Dict[str, Any], exact: bool = True, validate: bool = True) -> AlgebraContext:
    """
    Build a context from a decoded spec.

    A spec is either the full tensor form {dim, mul, star, unit, phi, gamma,
    lambda, lambda_kind, gamma_bilinear?} or a reference to a catalog example
    {"example": name, "params": {...}}.
    """
    error = _validate_fields(spec)
    if error:
        raise SpecParseError(error)
    if 'example' in spec:
        return load_example(spec['example'], spec.get('params', {}), exact=exact, validate=validate)
    try:
        return AlgebraContext.from_data(
            dim=int(spec['dim']),
            mul=spec['mul'],
            star=spec['star'],
            unit=spec['unit'],
            phi=spec['phi'],
            gamma=spec['gamma'],
            lam=spec['lambda'],
            lambda_kind=spec.get('lambda_kind', 'general'),
            gamma_bilinear=spec.get('gamma_bilinear'),
            exact=exact,
            name=spec.get('name', 'custom'),
        )
    except (TypeError, ZeroDivisionError) as exc:
        raise SpecParseError(f"Invalid scalar in spec: {exc}") from exc


def parse_spec(text: str, exact: bool = True, validate: bool = True) -> AlgebraContext:
    """
    Parse JSON text into a context.

    Raises:
        SpecParseError: Malformed JSON (with line and column) or missing fields
    """
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"Malformed JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    return spec_to_context(spec, exact=exact, validate=validate)


def load_spec(path: Union[str, Path], exact: bool = True, validate: bool = True) -> AlgebraContext:
    """Read and parse a spec file."""
    path = Path(path)
    if not path.exists():
        raise SpecParseError(f"Spec file not found: {path}")
    ctx = parse_spec(path.read_text(), exact=exact, validate=validate)
    logger.info(f"Loaded spec {path.name} (d={ctx.dim})")
    return ctx


def dump_spec(ctx: AlgebraContext, path: Union[str, Path]) -> None:
    """Write a context in the full tensor form."""
    Path(path).write_text(json.dumps(ctx.to_dict(), indent=2))
