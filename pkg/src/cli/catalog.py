"""
Named example presets and their golden reports.

Each preset in data/catalog is an algebra spec of the form
{"example": name, "params": {...}}. Evaluating a preset produces the
vacuum moments and the free and Boolean cumulants of X(1); golden files
in data/golden hold the reference values and are only rewritten on request.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from src.algebra.io import spec_to_context
from src.algebra.validation import validate_algebra
from src.config.config import CLIConfig, FockConfig, tolerance_for
from src.cumulants.formulas import boolean_cumulant, free_cumulant, moment_partition_sum
from src.fock.space import build_fock
from src.fock.states import vacuum_expectation
from src.utils.exceptions import SpecParseError
from src.utils.logger import setup_logger
from src.utils.scalars import max_abs, within

logger = setup_logger(__name__)

SERIES_KEYS = ('moments', 'free_cumulants', 'boolean_cumulants')

# Moments up to this length are recomputed from the partition formula
CROSS_CHECK_ORDER = 4


@dataclass
class CatalogResult:
    """
    Evaluation of one preset.

    Attributes:
        name: Preset name (file stem)
        values: moments / free_cumulants / boolean_cumulants, orders 1..degree, as strings
        validated: The context passed validate_algebra
        cross_check: order -> |operator moment - partition sum|
        mismatches: Golden comparison failures, empty when the golden file agrees
        golden_found: A golden file existed for the preset
    """
    name: str
    degree: int
    exact: bool
    values: Dict[str, List[str]] = field(default_factory=dict)
    validated: bool = False
    cross_check: Dict[int, float] = field(default_factory=dict)
    mismatches: List[str] = field(default_factory=list)
    golden_found: bool = False

    @property
    def passed(self) -> bool:
        tolerance = tolerance_for(self.exact)
        return (self.validated and self.golden_found and not self.mismatches
                and all(within(value, tolerance) for value in self.cross_check.values()))

    def golden(self) -> Dict[str, Any]:
        """The part of the result stored in a golden file."""
        return {'name': self.name, 'degree': self.degree, 'validated': self.validated, **self.values}

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.golden(),
            'mode': 'rational' if self.exact else 'float',
            'passed': self.passed,
            'cross_check': {str(k): v for k, v in self.cross_check.items()},
            'golden_found': self.golden_found,
            'mismatches': self.mismatches,
        }

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for n in range(1, self.degree + 1):
            row = {'preset': self.name, 'order': n}
            for key in SERIES_KEYS:
                row[key] = self.values[key][n - 1]
            row['cross_check'] = self.cross_check.get(n)
            rows.append(row)
        return pd.DataFrame(rows)


def list_catalog(directory: Path = CLIConfig.CATALOG_DIR) -> List[str]:
    """Names of the presets stored in `directory`, sorted."""
    return sorted(path.stem for path in Path(directory).glob('*.json'))


def _read_json(path: Path) -> Dict[str, Any]:
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"Malformed JSON in {path.name}: {exc.msg}", exc.lineno, exc.colno) from exc


def load_preset(name: str, directory: Path = CLIConfig.CATALOG_DIR) -> Dict[str, Any]:
    """
    Read a preset spec.

    Raises:
        SpecParseError: Unknown preset or malformed file
    """
    path = Path(directory) / f"{name}.json"
    if not path.exists():
        available = ", ".join(list_catalog(directory)) or "none"
        raise SpecParseError(f"Unknown catalog preset '{name}'. Available: {available}")
    return _read_json(path)


def evaluate_preset(name: str, spec: Dict[str, Any], degree: int = CLIConfig.DEFAULT_DEGREE,
                    exact: bool = True) -> CatalogResult:
    """
    Moments and cumulants of X(1) for orders 1..degree.

    Moments of order <= 4 are cross-checked against the partition formula.
    """
    ctx = spec_to_context(spec, exact=exact, validate=False)
    result = CatalogResult(name, degree, exact)
    result.validated = validate_algebra(ctx).passed
    fc = build_fock(ctx, max(degree, FockConfig.MIN_TRUNCATION), compute_gram=False)
    words = [[ctx.unit] * n for n in range(1, degree + 1)]
    moments = [vacuum_expectation(fc, word) for word in words]
    result.values = {
        'moments': [str(value) for value in moments],
        'free_cumulants': [str(free_cumulant(fc, word)) for word in words],
        'boolean_cumulants': [str(boolean_cumulant(fc, word)) for word in words],
    }
    for n in range(1, min(degree, CROSS_CHECK_ORDER) + 1):
        result.cross_check[n] = max_abs(moments[n - 1] - moment_partition_sum(fc, words[n - 1]))
    logger.info(f"Evaluated preset '{name}' to order {degree}")
    return result


def _as_number(text: str, exact: bool):
    return Fraction(text) if exact else float(Fraction(text))


def compare_golden(result: CatalogResult, golden: Dict[str, Any]) -> List[str]:
    """Orders where `result` and `golden` disagree; float mode compares with the float tolerance."""
    tolerance = tolerance_for(result.exact)
    mismatches = []
    for key in SERIES_KEYS:
        expected = golden.get(key, [])
        for n, (value, reference) in enumerate(zip(result.values[key], expected), start=1):
            difference = abs(_as_number(value, result.exact) - _as_number(str(reference), result.exact))
            if not within(float(difference), tolerance, 1 + abs(float(Fraction(str(reference))))):
                mismatches.append(f"{key}[{n}]: got {value}, expected {reference}")
    if golden.get('validated') is not None and golden['validated'] != result.validated:
        mismatches.append(f"validated: got {result.validated}, expected {golden['validated']}")
    return mismatches


def check_preset(name: str, degree: int = CLIConfig.DEFAULT_DEGREE, exact: bool = True,
                 regenerate: bool = False, catalog_dir: Path = CLIConfig.CATALOG_DIR,
                 golden_dir: Path = CLIConfig.GOLDEN_DIR) -> CatalogResult:
    """
    Evaluate a preset and compare it with its golden file.

    With `regenerate`, the golden file is rewritten from the rational
    evaluation instead of being compared.
    """
    result = evaluate_preset(name, load_preset(name, catalog_dir), degree, exact)
    path = Path(golden_dir) / f"{name}.json"
    if regenerate:
        if not exact:
            logger.warning("Golden files are written from rational evaluations only; skipping regeneration")
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(result.golden(), indent=2) + "\n")
            logger.info(f"Rewrote golden file {path.name}")
    if path.exists():
        result.golden_found = True
        result.mismatches = compare_golden(result, _read_json(path))
    else:
        logger.warning(f"No golden file for preset '{name}'")
    if result.mismatches:
        logger.warning(f"Preset '{name}' disagrees with its golden file: {'; '.join(result.mismatches)}")
    return result


def check_catalog(names: Optional[List[str]] = None, **kwargs) -> List[CatalogResult]:
    """check_preset over `names` (default: every preset in the catalog directory)."""
    names = list_catalog(kwargs.get('catalog_dir', CLIConfig.CATALOG_DIR)) if names is None else names
    return [check_preset(name, **kwargs) for name in names]
