"""
Tests for configuration module.

Verifies all config classes have correct default values and types.
"""

import pytest
from src.config.config import (
    NumericConfig,
    AlgebraConfig,
    PartitionConfig,
    FockConfig,
    SeriesConfig,
    TraceConfig,
    CLIConfig,
    LoggingConfig,
    get_all_configs,
    tolerance_for,
)


class TestNumericConfig:
    """Test NumericConfig values."""

    @pytest.mark.unit
    def test_tolerances(self):
        """Test comparison tolerances."""
        assert NumericConfig.FLOAT_TOLERANCE == 1e-9
        assert NumericConfig.EXACT_TOLERANCE == 0.0
        assert NumericConfig.KERNEL_TOLERANCE == 1e-10
        assert isinstance(NumericConfig.FLOAT_TOLERANCE, float)

    @pytest.mark.unit
    def test_tolerance_for_modes(self):
        """Test tolerance_for picks the mode's tolerance."""
        assert tolerance_for(True) == 0.0
        assert tolerance_for(False) == NumericConfig.FLOAT_TOLERANCE


class TestAlgebraConfig:
    """Test AlgebraConfig values."""

    @pytest.mark.unit
    def test_cp_defaults(self):
        """Test complete-positivity defaults."""
        assert AlgebraConfig.DEFAULT_CP_LEVEL == 3
        assert 0 < AlgebraConfig.NON_DEGENERACY_T < 1

    @pytest.mark.unit
    def test_example_names(self):
        """Test the named examples are registered."""
        for name in ('bozejko', 'lenczewski_discrete', 'ma', 'scalar_gamma', 'poisson'):
            assert name in AlgebraConfig.EXAMPLE_NAMES


class TestSizeLimits:
    """Test PartitionConfig, FockConfig and SeriesConfig values."""

    @pytest.mark.unit
    def test_partition_limit(self):
        """Test partition enumeration limit."""
        assert PartitionConfig.MAX_PARTITION_N == 14
        assert isinstance(PartitionConfig.MAX_PARTITION_N, int)

    @pytest.mark.unit
    def test_truncation_defaults(self):
        """Test truncation level defaults."""
        assert FockConfig.MIN_TRUNCATION == 2
        assert FockConfig.DEFAULT_TRUNCATION >= FockConfig.MIN_TRUNCATION

    @pytest.mark.unit
    def test_series_defaults(self):
        """Test series and radius defaults."""
        assert SeriesConfig.MAX_GF_DEGREE == 10
        assert 0 < SeriesConfig.DEFAULT_RADIUS_FRACTION < 1
        assert SeriesConfig.DEFAULT_PARTIAL_SUM_DEGREE > 0


class TestTraceConfig:
    """Test TraceConfig values."""

    @pytest.mark.unit
    def test_commutator_levels(self):
        """Test commutators are checked on levels 0, 1, 2."""
        assert TraceConfig.COMMUTATOR_LEVELS == (0, 1, 2)
        assert TraceConfig.SPOT_CHECK_LEVEL not in TraceConfig.COMMUTATOR_LEVELS

    @pytest.mark.unit
    def test_word_lengths(self):
        """Test cyclicity sweep lengths."""
        assert TraceConfig.DEFAULT_MAX_WORD == 6
        assert TraceConfig.CUMULANT_CYCLIC_ORDER <= TraceConfig.DEFAULT_MAX_WORD


class TestCLIConfig:
    """Test CLIConfig values."""

    @pytest.mark.unit
    def test_defaults(self):
        """Test CLI defaults."""
        assert CLIConfig.PROGRAM_NAME == "nnfock"
        assert CLIConfig.DEFAULT_FORMAT == "json"
        assert CLIConfig.DEFAULT_MODE == "rational"

    @pytest.mark.unit
    def test_exit_codes(self):
        """Test exit codes are distinct."""
        codes = {CLIConfig.EXIT_OK, CLIConfig.EXIT_CHECK_FAILED, CLIConfig.EXIT_USAGE}
        assert codes == {0, 1, 2}

    @pytest.mark.unit
    def test_data_directories_exist(self):
        """Test catalog and golden directories ship with the repo."""
        assert CLIConfig.CATALOG_DIR.is_dir()
        assert CLIConfig.GOLDEN_DIR.is_dir()


class TestLoggingConfig:
    """Test LoggingConfig values."""

    @pytest.mark.unit
    def test_log_level(self):
        """Test default log levels."""
        assert LoggingConfig.DEFAULT_LOG_LEVEL == "INFO"
        assert LoggingConfig.CLI_LOG_LEVEL == "WARNING"

    @pytest.mark.unit
    def test_log_formats(self):
        """Test log format strings."""
        assert LoggingConfig.LOG_DATE_FORMAT == '%Y-%m-%d %H:%M:%S'
        assert '%(asctime)s' in LoggingConfig.LOG_FORMAT
        assert '%(name)s' in LoggingConfig.LOG_FORMAT
        assert '%(levelname)s' in LoggingConfig.LOG_FORMAT
        assert '%(message)s' in LoggingConfig.LOG_FORMAT


class TestConfigIntegration:
    """Integration tests for config module."""

    @pytest.mark.integration
    def test_get_all_configs(self):
        """Test get_all_configs function."""
        configs = get_all_configs()

        assert isinstance(configs, dict)
        assert len(configs) == 8
        assert configs['numeric'] == NumericConfig
        assert configs['trace'] == TraceConfig
        assert configs['cli'] == CLIConfig
        assert configs['logging'] == LoggingConfig

    @pytest.mark.integration
    def test_no_config_conflicts(self):
        """Test config values don't conflict."""
        assert CLIConfig.DEFAULT_DEGREE <= PartitionConfig.MAX_PARTITION_N
        assert SeriesConfig.MAX_GF_DEGREE + 2 <= PartitionConfig.MAX_PARTITION_N
        assert NumericConfig.KERNEL_TOLERANCE <= NumericConfig.FLOAT_TOLERANCE
