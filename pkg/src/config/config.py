"""
Central configuration for nnfock.

All tolerances, truncation defaults, and size guards are defined here
for easy maintenance and modification.

Type hints are used throughout to ensure type safety and improve
IDE support for autocomplete and error detection.
"""

from pathlib import Path
from typing import Dict, Tuple, Type


_REPO_ROOT: Path = Path(__file__).resolve().parents[2]


class NumericConfig:
    """Configuration for exact and floating-point comparisons."""

    # Residual tolerance in float mode (relative to max(1, scale))
    FLOAT_TOLERANCE: float = 1e-9

    # Exact mode compares rationals with no slack
    EXACT_TOLERANCE: float = 0.0

    # Gram eigenvalues at or below this are treated as null
    KERNEL_TOLERANCE: float = 1e-10

    # Eigenvalues within this factor of the kernel tolerance trigger a warning
    ILL_CONDITIONED_FACTOR: float = 10.0

    # Slack allowed on norm inequalities
    NORM_SLACK_TOLERANCE: float = 1e-9


class AlgebraConfig:
    """Configuration for algebra validation."""

    # Complete positivity is certified up to this matrix level
    DEFAULT_CP_LEVEL: int = 3

    # gamma + t*phi with this t is used for the non-degeneracy criterion
    NON_DEGENERACY_T: float = 0.9

    # Named catalog presets accepted by load_example
    EXAMPLE_NAMES: Tuple[str, ...] = (
        "bozejko",
        "lenczewski_discrete",
        "lenczewski_kesten",
        "ma",
        "scalar_gamma",
        "poisson",
    )


class PartitionConfig:
    """Configuration for partition enumeration."""

    # Guard against combinatorial blowup
    MAX_PARTITION_N: int = 14


class FockConfig:
    """Configuration for truncated Fock spaces."""

    MIN_TRUNCATION: int = 2
    DEFAULT_TRUNCATION: int = 6


class SeriesConfig:
    """Configuration for graded generating-function checks."""

    MAX_GF_DEGREE: int = 10

    # r_prime_recursive is cross-checked against r_prime up to this degree
    R_PRIME_RECURSION_CHECK: int = 8

    # Empirical convergence check evaluates at this fraction of the radius
    DEFAULT_RADIUS_FRACTION: float = 0.9
    DEFAULT_PARTIAL_SUM_DEGREE: int = 12


class TraceConfig:
    """Configuration for traciality checks."""

    DEFAULT_MAX_WORD: int = 6

    # Commutators [X(u), X_r(v)] are evaluated on these source levels
    COMMUTATOR_LEVELS: Tuple[int, ...] = (0, 1, 2)
    SPOT_CHECK_LEVEL: int = 3

    # Cyclic symmetry of free cumulants is checked up to this order
    CUMULANT_CYCLIC_ORDER: int = 5


class CLIConfig:
    """Configuration for the command-line front end."""

    PROGRAM_NAME: str = "nnfock"
    DEFAULT_FORMAT: str = "json"
    DEFAULT_MODE: str = "rational"
    DEFAULT_SEED: int = 0
    DEFAULT_DEGREE: int = 6

    CATALOG_DIR: Path = _REPO_ROOT / "data" / "catalog"
    GOLDEN_DIR: Path = _REPO_ROOT / "data" / "golden"

    # Exit codes
    EXIT_OK: int = 0
    EXIT_CHECK_FAILED: int = 1
    EXIT_USAGE: int = 2


class LoggingConfig:
    """Configuration for logging behavior."""

    # Log levels
    DEFAULT_LOG_LEVEL: str = "INFO"
    CLI_LOG_LEVEL: str = "WARNING"

    # Date format
    LOG_DATE_FORMAT: str = '%Y-%m-%d %H:%M:%S'

    # Message format
    LOG_FORMAT: str = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def tolerance_for(exact: bool) -> float:
    """Comparison tolerance for the given numeric mode."""
    return NumericConfig.EXACT_TOLERANCE if exact else NumericConfig.FLOAT_TOLERANCE


# Convenience function to get all configs as a dict
def get_all_configs() -> Dict[str, Type]:
    """
    Get all configuration classes as a dictionary.

    Returns:
        Dictionary mapping config names to config classes

    Example:
        >>> configs = get_all_configs()
        >>> configs['partition'].MAX_PARTITION_N
        14
    """
    return {
        'numeric': NumericConfig,
        'algebra': AlgebraConfig,
        'partition': PartitionConfig,
        'fock': FockConfig,
        'series': SeriesConfig,
        'trace': TraceConfig,
        'cli': CLIConfig,
        'logging': LoggingConfig
    }
