"""
Command-line front end.

    nnfock <subcommand> [spec.json] [options]

Every subcommand loads an algebra spec (or a catalog preset), runs one
family of checks and writes the machine-readable report to stdout as JSON
or CSV, with a one-line human summary on stderr. Exit codes: 0 when every
check passes, 1 when any check fails, 2 on usage and spec errors.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.algebra.context import AlgebraContext
from src.algebra.io import load_spec
from src.algebra.validation import check_non_degeneracy, validate_algebra
from src.cli.catalog import check_catalog, list_catalog
from src.config.config import CLIConfig, FockConfig, SeriesConfig, TraceConfig, tolerance_for
from src.construction_c.bounds import norm_bounds_c
from src.construction_c.construction import build_construction_c
from src.construction_c.operators import adjoint_residuals_c, gf_residual_c, wick_vacuum_residual_c
from src.cumulants.formulas import (boolean_cumulant, boolean_cumulant_oracle, free_cumulant,
                                    free_cumulant_oracle, moment_partition_sum)
from src.cumulants.kernel import cumulant_gf_residual
from src.fock.space import build_fock
from src.fock.states import vacuum_expectation
from src.norms.estimates import NormReport, corollary_bound, reports_to_frame, verify_estimates
from src.norms.series import matricial_gf_bound, r_prime_partial_sums, wick_norm_bounds
from src.trace.conditions import check_trace_conditions
from src.utils.exceptions import SpecParseError
from src.utils.logger import set_package_log_level, setup_logger
from src.utils.scalars import max_abs, to_scalar, within
from src.wick.matricial import matricial_cumulant_residual, matricial_system
from src.wick.polynomials import pseudo_orthogonality, resolvent_residual, vacuum_residual

logger = setup_logger(__name__)

SUBCOMMANDS = ('validate', 'moments', 'cumulants', 'gf-check', 'wick', 'matricial',
               'norms', 'trace-check', 'appendix-c', 'catalog')

# Random elements drawn per norm run, with integer coefficients in [-RANDOM_RANGE, RANDOM_RANGE]
RANDOM_ELEMENTS = 3
RANDOM_RANGE = 2


@dataclass
class RunConfig:
    """
    One CLI invocation.

    Attributes:
        subcommand: One of SUBCOMMANDS
        spec_path: Algebra spec file (unused by catalog)
        mode: 'rational' (exact Fractions) or 'float'
        tolerance: Pass threshold; None selects the mode's default
        N: Truncation level; None lets each subcommand pick the smallest level it needs
        output_format: 'json' or 'csv'
        seed: Seed for the random elements of the norm sweep
        degree: Highest order / degree examined
        word: Letter indices into the family (or the basis when no family is given)
        family: Elements as coefficient lists
        max_word: Longest monomial in the cyclicity sweep
        name: Catalog preset
        regenerate: Rewrite golden files
        verbose: -v count
    """
    subcommand: str
    spec_path: Optional[Path] = None
    mode: str = CLIConfig.DEFAULT_MODE
    tolerance: Optional[float] = None
    N: Optional[int] = None
    output_format: str = CLIConfig.DEFAULT_FORMAT
    seed: int = CLIConfig.DEFAULT_SEED
    degree: int = CLIConfig.DEFAULT_DEGREE
    word: Optional[List[int]] = None
    family: Optional[List[List[str]]] = None
    max_word: int = TraceConfig.DEFAULT_MAX_WORD
    name: Optional[str] = None
    regenerate: bool = False
    verbose: int = 0

    @property
    def exact(self) -> bool:
        return self.mode == 'rational'

    @property
    def resolved_tolerance(self) -> float:
        return tolerance_for(self.exact) if self.tolerance is None else self.tolerance

    def level(self, required: int) -> int:
        """Truncation level: -N when given, otherwise `required`."""
        if self.N is not None:
            return self.N
        return max(required, FockConfig.MIN_TRUNCATION)


@dataclass
class CommandResult:
    """Machine report, its table form, the verdict and the stderr summary."""
    payload: Dict[str, Any]
    frame: pd.DataFrame
    passed: bool
    summary: str


def _validate_run_config(config: RunConfig) -> Optional[str]:
    if config.N is not None and config.N < FockConfig.MIN_TRUNCATION:
        return f"Truncation level must be >= {FockConfig.MIN_TRUNCATION}, got {config.N}"
    if config.tolerance is not None and config.tolerance <= 0:
        return f"Tolerance must be positive, got {config.tolerance}"
    if config.degree < 1:
        return f"Degree must be >= 1, got {config.degree}"
    if config.max_word < 2:
        return f"Max word length must be >= 2, got {config.max_word}"
    if config.subcommand != 'catalog' and config.spec_path is None:
        return f"Subcommand '{config.subcommand}' needs a spec file"
    if config.word is not None and any(i < 0 for i in config.word):
        return f"Word letters must be nonnegative indices, got {config.word}"
    return None


# ----------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------

def _parse_word(text: str) -> List[int]:
    try:
        return [int(token) for token in text.split(',') if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"word must be comma-separated letter indices, got '{text}'")


def _parse_family(text: str) -> List[List[str]]:
    family = [[token.strip() for token in element.split(',')] for element in text.split(';') if element.strip()]
    if not family:
        raise argparse.ArgumentTypeError("family must contain at least one element")
    return family


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=CLIConfig.PROGRAM_NAME,
        description="Fock spaces with nearest-neighbor interactions: identity and bound checks.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("spec", nargs="?", default=None, help="Algebra spec (JSON)")
    parser.add_argument("-N", "--level", type=int, default=None, help="Truncation level (>= 2)")
    parser.add_argument("--tol", type=float, default=None, help="Pass threshold (> 0)")
    parser.add_argument("--mode", choices=("rational", "float"), default=CLIConfig.DEFAULT_MODE)
    parser.add_argument("--word", type=_parse_word, default=None,
                        help="Comma-separated letter indices, e.g. 0,1,1")
    parser.add_argument("--family", type=_parse_family, default=None,
                        help="Semicolon-separated elements as coefficient lists, e.g. '1,0;0,1/2'")
    parser.add_argument("--degree", type=int, default=CLIConfig.DEFAULT_DEGREE)
    parser.add_argument("--max-word", type=int, default=TraceConfig.DEFAULT_MAX_WORD)
    parser.add_argument("--format", choices=("json", "csv"), default=CLIConfig.DEFAULT_FORMAT)
    parser.add_argument("--seed", type=int, default=CLIConfig.DEFAULT_SEED)
    parser.add_argument("--name", default=None, help="Catalog preset")
    parser.add_argument("--regenerate", action="store_true", help="Rewrite catalog golden files")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(
        subcommand=args.subcommand,
        spec_path=Path(args.spec) if args.spec else None,
        mode=args.mode,
        tolerance=args.tol,
        N=args.level,
        output_format=args.format,
        seed=args.seed,
        degree=args.degree,
        word=args.word,
        family=args.family,
        max_word=args.max_word,
        name=args.name,
        regenerate=args.regenerate,
        verbose=args.verbose,
    )


# ----------------------------------------------------------------------
# Shared helpers
# ----------------------------------------------------------------------

def _load_context(config: RunConfig, validate: bool = True) -> AlgebraContext:
    return load_spec(config.spec_path, exact=config.exact, validate=validate)


def _letters(config: RunConfig, ctx: AlgebraContext) -> List[np.ndarray]:
    """The family elements, or the basis when no family is given."""
    if config.family is None:
        return [ctx.basis(i) for i in range(ctx.dim)]
    letters = []
    for coefficients in config.family:
        if len(coefficients) != ctx.dim:
            raise ValueError(f"Family element {coefficients} has {len(coefficients)} coefficients, "
                             f"expected {ctx.dim}")
        letters.append(ctx.element([to_scalar(c, ctx.exact) for c in coefficients]))
    return letters


def _word_elements(config: RunConfig, ctx: AlgebraContext) -> Optional[List[np.ndarray]]:
    if config.word is None:
        return None
    letters = _letters(config, ctx)
    if max(config.word, default=-1) >= len(letters):
        raise ValueError(f"Word {config.word} uses letters beyond the {len(letters)} available")
    return [letters[i] for i in config.word]


def _primary_element(config: RunConfig, ctx: AlgebraContext) -> np.ndarray:
    """First family element, or the unit."""
    return _letters(config, ctx)[0] if config.family is not None else ctx.unit


def _cycled(letters: List[np.ndarray], length: int, offset: int) -> List[np.ndarray]:
    """Word of the given length running through the letters cyclically from `offset`."""
    return [letters[(offset + i) % len(letters)] for i in range(length)]


def _label(word: Optional[Sequence[int]], n: int) -> str:
    return ",".join(map(str, word)) if word is not None else f"1^{n}"


def _encode(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.ndarray):
        return [_encode(x) for x in value.tolist()]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _scalar_rows(name: str, rows: List[Dict[str, Any]], tolerance: float) -> CommandResult:
    frame = pd.DataFrame(rows)
    if not frame.empty:
        frame['passed'] = frame['residual'].apply(lambda r: within(r, tolerance))
    passed = bool(frame['passed'].all()) if not frame.empty else True
    payload = {'command': name, 'passed': passed, 'tolerance': tolerance,
               'rows': frame.to_dict(orient='records')}
    return CommandResult(payload, frame, passed, f"{name}: {int(frame['passed'].sum()) if not frame.empty else 0}"
                                                 f"/{len(frame)} rows within tolerance")


def _norm_result(name: str, reports: List[NormReport]) -> CommandResult:
    passed = all(r.passed for r in reports)
    failed = [r.name for r in reports if not r.passed]
    summary = f"{name}: {len(reports) - len(failed)}/{len(reports)} bounds hold"
    if failed:
        summary += f" (violated: {', '.join(sorted(set(failed)))})"
    return CommandResult({'command': name, 'passed': passed, 'reports': [r.to_dict() for r in reports]},
                         reports_to_frame(reports), passed, summary)


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def run_validate(config: RunConfig) -> CommandResult:
    ctx = _load_context(config, validate=False)
    report = validate_algebra(ctx, tolerance=config.tolerance)
    payload = report.to_dict()
    certificate = check_non_degeneracy(ctx)
    payload['non_degenerate'] = certificate.passed
    failures = [check.name for check in report.failures()]
    summary = f"validate '{ctx.name}': {len(report.checks) - len(failures)}/{len(report.checks)} checks passed"
    if failures:
        summary += f" (failed: {', '.join(failures)})"
    return CommandResult(payload, report.to_frame(), report.passed, summary)


def run_moments(config: RunConfig) -> CommandResult:
    """Vacuum moments from operator products against the partition formula."""
    ctx = _load_context(config)
    word = _word_elements(config, ctx)
    words = [word] if word is not None else [[ctx.unit] * n for n in range(1, config.degree + 1)]
    fc = build_fock(ctx, config.level(max(len(w) for w in words)), compute_gram=False)
    rows = []
    for elements in words:
        moment = vacuum_expectation(fc, elements)
        oracle = moment_partition_sum(fc, elements)
        rows.append({'word': _label(config.word, len(elements)), 'order': len(elements),
                     'moment': str(moment), 'partition_sum': str(oracle), 'residual': max_abs(moment - oracle)})
    return _scalar_rows('moments', rows, config.resolved_tolerance)


def run_cumulants(config: RunConfig) -> CommandResult:
    """Free and Boolean cumulants from partition formulas against Moebius inversion."""
    ctx = _load_context(config)
    word = _word_elements(config, ctx)
    if word is not None and len(word) < 2:
        raise ValueError("Cumulants need a word of length >= 2")
    words = [word] if word is not None else [[ctx.unit] * n for n in range(2, config.degree + 1)]
    fc = build_fock(ctx, config.level(max(len(w) for w in words)), compute_gram=False)
    rows = []
    for elements in words:
        free, boolean = free_cumulant(fc, elements), boolean_cumulant(fc, elements)
        free_ref, boolean_ref = free_cumulant_oracle(fc, elements), boolean_cumulant_oracle(fc, elements)
        rows.append({'word': _label(config.word, len(elements)), 'order': len(elements),
                     'free': str(free), 'boolean': str(boolean),
                     'residual': max(max_abs(free - free_ref), max_abs(boolean - boolean_ref))})
    return _scalar_rows('cumulants', rows, config.resolved_tolerance)


def run_gf_check(config: RunConfig) -> CommandResult:
    ctx = _load_context(config)
    degree = min(config.degree, SeriesConfig.MAX_GF_DEGREE)
    fc = build_fock(ctx, config.level(degree + 2), compute_gram=False)
    if config.family is not None and len(config.family) > 1:
        u: Any = _letters(config, ctx)
    else:
        u = _primary_element(config, ctx)
    report = cumulant_gf_residual(fc, u, degree, config.tolerance)
    return CommandResult(report.to_dict(), report.to_frame(), report.passed,
                         f"gf-check '{ctx.name}': degrees 0..{degree}, worst residual {report.worst():.3g}")


def run_wick(config: RunConfig) -> CommandResult:
    """Vacuum property, pseudo-orthogonality and the resolvent identity."""
    ctx = _load_context(config)
    degree = config.degree
    word = _word_elements(config, ctx)
    fc = build_fock(ctx, config.level(max(degree, len(word or [])) + 1), compute_gram=True)
    tolerance = config.resolved_tolerance
    u = _primary_element(config, ctx)
    words = [word] if word is not None else [[u] * n for n in range(1, min(degree, fc.N - 1) + 1)]
    rows = [{'check': 'vacuum', 'degree': len(w), 'residual': vacuum_residual(fc, w)} for w in words]
    top = min(degree, fc.N - 1)
    for m in range(1, top + 1):
        for n in range(1, m):
            rows.append({'check': 'pseudo_orthogonality', 'degree': m,
                         'residual': max_abs(pseudo_orthogonality(fc, [u] * m, [u] * n))})
    if config.family is not None and len(config.family) > 1:
        letters = _letters(config, ctx)
        for m in range(1, top + 1):
            for n in range(1, m):
                inner = pseudo_orthogonality(fc, _cycled(letters, m, 0), _cycled(letters, n, 1))
                rows.append({'check': 'pseudo_orthogonality_mixed', 'degree': m, 'residual': max_abs(inner)})
    resolvent = resolvent_residual(fc, u, top, tolerance)
    frame = pd.concat([pd.DataFrame(rows), resolvent.to_frame()], ignore_index=True)
    frame['passed'] = [within(r, tolerance) if not tail else None
                       for r, tail in zip(frame['residual'], frame['tail'].fillna(False))]
    passed = all(within(row['residual'], tolerance) for row in rows) and resolvent.passed
    payload = {'command': 'wick', 'passed': passed, 'tolerance': tolerance, 'rows': rows,
               'resolvent': resolvent.to_dict()}
    return CommandResult(payload, frame, passed, f"wick '{ctx.name}': degrees <= {top}, passed={passed}")


def run_matricial(config: RunConfig) -> CommandResult:
    ctx = _load_context(config)
    family = _letters(config, ctx)
    if len(family) < 2:
        raise ValueError("The matricial system needs a family of at least two elements")
    degree = config.degree
    fc = build_fock(ctx, config.level(degree + 1), compute_gram=False)
    system = matricial_system(fc, family, min(degree, fc.N - 1), config.tolerance)
    tolerance = config.resolved_tolerance
    cumulants = {n: matricial_cumulant_residual(fc, family, n) for n in range(1, min(len(family) - 1, fc.N) + 1)}
    cumulants_ok = all(within(r, tolerance) for r in cumulants.values())
    payload = system.to_dict()
    payload['cumulant_residuals'] = {str(n): r for n, r in cumulants.items()}
    passed = system.passed and cumulants_ok
    return CommandResult(payload, system.to_frame(), passed,
                         f"matricial '{ctx.name}': family of {len(family)}, passed={passed}")


def _random_elements(config: RunConfig, ctx: AlgebraContext) -> List[np.ndarray]:
    rng = np.random.default_rng(config.seed)
    draws = rng.integers(-RANDOM_RANGE, RANDOM_RANGE + 1, size=(RANDOM_ELEMENTS, ctx.dim))
    return [ctx.element([to_scalar(int(c), ctx.exact) for c in row]) for row in draws if np.any(row)]


def run_norms(config: RunConfig) -> CommandResult:
    """Generator estimates, the diagonal bound, Wick bounds and R' convergence."""
    ctx = _load_context(config)
    fc = build_fock(ctx, config.level(5), compute_gram=True)
    elements = _letters(config, ctx) + _random_elements(config, ctx)
    reports = verify_estimates(fc, elements)
    if len(elements) >= 2:
        reports += corollary_bound(fc, elements)
        reports.append(matricial_gf_bound(fc, elements))
    if ctx.is_left_multiplier():
        for n in range(1, fc.N):
            reports.append(wick_norm_bounds(fc, [elements[i % len(elements)] for i in range(n)]))
    reports.append(r_prime_partial_sums(fc, _primary_element(config, ctx)))
    return _norm_result('norms', reports)


def run_trace_check(config: RunConfig) -> CommandResult:
    ctx = _load_context(config)
    fc = build_fock(ctx, config.level(max(config.max_word, 4)), compute_gram=False)
    report = check_trace_conditions(fc, config.max_word, config.tolerance)
    return CommandResult(report.to_dict(), report.to_frame(), report.passed,
                         f"trace-check '{ctx.name}': conditions={report.conditions_hold}, "
                         f"commutes={report.commutes}, cyclic={report.cyclic}")


def run_appendix_c(config: RunConfig) -> CommandResult:
    """Construction C from a {"kind": "construction_c", ...} spec."""
    path = config.spec_path
    if not path.exists():
        raise SpecParseError(f"Spec file not found: {path}")
    try:
        params = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"Malformed JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    degree = config.degree
    cc = build_construction_c(params, config.level(max(degree, 5)), exact=config.exact)
    tolerance = config.resolved_tolerance
    f = np.asarray(cc.basis(0)) if config.family is None else np.asarray(_c_letter(config, cc.dim, cc.exact))
    rows = [{'check': f"adjoint_{name}", 'degree': None, 'residual': value}
            for name, value in adjoint_residuals_c(cc, f).items()]
    rows += [{'check': 'wick_vacuum', 'degree': n, 'residual': wick_vacuum_residual_c(cc, [f] * n)}
             for n in range(1, cc.N)]
    gf = gf_residual_c(cc, f, min(degree, cc.N - 2, SeriesConfig.MAX_GF_DEGREE), config.tolerance)
    norms = norm_bounds_c(cc)
    identities_ok = all(within(row['residual'], tolerance) for row in rows)
    passed = identities_ok and gf.passed and all(r.passed for r in norms)
    frame = pd.concat([pd.DataFrame(rows), gf.to_frame(), reports_to_frame(norms)], ignore_index=True)
    payload = {'command': 'appendix-c', 'construction': cc.name, 'passed': passed, 'tolerance': tolerance,
               'rows': rows, 'cumulant_gf': gf.to_dict(), 'norms': [r.to_dict() for r in norms]}
    return CommandResult(payload, frame, passed, f"appendix-c '{cc.name}' (N={cc.N}): passed={passed}")


def _c_letter(config: RunConfig, dim: int, exact: bool) -> List[Any]:
    coefficients = config.family[0]
    if len(coefficients) != dim:
        raise ValueError(f"Family element {coefficients} has {len(coefficients)} coefficients, expected {dim}")
    return [to_scalar(c, exact) for c in coefficients]


def run_catalog(config: RunConfig) -> CommandResult:
    names = [config.name] if config.name else list_catalog()
    results = check_catalog(names, degree=config.degree, exact=config.exact, regenerate=config.regenerate)
    passed = all(result.passed for result in results)
    if len(results) == 1:
        payload = results[0].to_dict()
    else:
        payload = {'command': 'catalog', 'passed': passed, 'presets': [r.to_dict() for r in results]}
    frame = pd.concat([r.to_frame() for r in results], ignore_index=True) if results else pd.DataFrame()
    failed = [r.name for r in results if not r.passed]
    summary = f"catalog: {len(results) - len(failed)}/{len(results)} presets match"
    if failed:
        summary += f" (failed: {', '.join(failed)})"
    return CommandResult(payload, frame, passed, summary)


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    'validate': run_validate,
    'moments': run_moments,
    'cumulants': run_cumulants,
    'gf-check': run_gf_check,
    'wick': run_wick,
    'matricial': run_matricial,
    'norms': run_norms,
    'trace-check': run_trace_check,
    'appendix-c': run_appendix_c,
    'catalog': run_catalog,
}


def emit(result: CommandResult, output_format: str) -> None:
    if output_format == 'csv':
        result.frame.to_csv(sys.stdout, index=False)
    else:
        sys.stdout.write(json.dumps(result.payload, indent=2, default=_encode) + "\n")
    print(result.summary, file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return CLIConfig.EXIT_OK if exc.code == 0 else CLIConfig.EXIT_USAGE

    level = logging.WARNING
    if config.verbose == 1:
        level = logging.INFO
    elif config.verbose > 1:
        level = logging.DEBUG
    set_package_log_level(level, stream=sys.stderr)

    error = _validate_run_config(config)
    if error:
        print(f"error: {error}", file=sys.stderr)
        return CLIConfig.EXIT_USAGE

    try:
        result = COMMANDS[config.subcommand](config)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CLIConfig.EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CLIConfig.EXIT_USAGE

    emit(result, config.output_format)
    return CLIConfig.EXIT_OK if result.passed else CLIConfig.EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
