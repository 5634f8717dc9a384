"""
Tests for logger utility module.

Tests logger setup, configuration, and utility functions.
"""

import io
import logging

import pytest
from src.utils.logger import setup_logger, set_log_level, set_package_log_level, get_logger


class TestLoggerSetup:
    """Test logger setup functionality."""

    @pytest.mark.unit
    def test_setup_logger_creates_logger(self):
        """Test that setup_logger creates a logger."""
        logger = setup_logger('test_logger')

        assert isinstance(logger, logging.Logger)
        assert logger.name == 'test_logger'

    @pytest.mark.unit
    def test_setup_logger_default_level(self):
        """Test default log level is INFO."""
        logger = setup_logger('test_default_level')

        assert logger.level == logging.INFO

    @pytest.mark.unit
    def test_setup_logger_custom_level(self):
        """Test setting custom log level."""
        logger = setup_logger('test_custom_level', level=logging.DEBUG)

        assert logger.level == logging.DEBUG

    @pytest.mark.unit
    def test_setup_logger_idempotent(self):
        """Test calling setup_logger twice doesn't duplicate handlers."""
        logger1 = setup_logger('test_idempotent')
        handler_count1 = len(logger1.handlers)

        logger2 = setup_logger('test_idempotent')

        assert len(logger2.handlers) == handler_count1
        assert logger1 is logger2

    @pytest.mark.unit
    def test_formatter_fields(self):
        """Test formatter includes timestamp, name, level and message."""
        logger = setup_logger('test_formatter')
        format_string = logger.handlers[0].formatter._fmt

        for field in ('%(asctime)s', '%(name)s', '%(levelname)s', '%(message)s'):
            assert field in format_string


class TestSetLogLevel:
    """Test set_log_level functionality."""

    @pytest.mark.unit
    def test_set_log_level_updates_handlers(self):
        """Test that set_log_level updates logger and handler levels."""
        logger = setup_logger('test_set_handler_level', level=logging.INFO)

        set_log_level(logger, logging.WARNING)

        assert logger.level == logging.WARNING
        for handler in logger.handlers:
            assert handler.level == logging.WARNING


class TestSetPackageLogLevel:
    """Test set_package_log_level functionality."""

    @pytest.mark.unit
    def test_applies_to_prefix_only(self):
        """Test only loggers under the prefix change level."""
        inside = setup_logger('pkgtest.fock.space', level=logging.INFO)
        outside = setup_logger('otherpkg.module', level=logging.INFO)

        set_package_log_level(logging.WARNING, prefix='pkgtest')

        assert inside.level == logging.WARNING
        assert outside.level == logging.INFO

    @pytest.mark.unit
    def test_accepts_level_names(self):
        """Test level names are resolved."""
        logger = setup_logger('pkgnames.module')

        set_package_log_level('debug', prefix='pkgnames')

        assert logger.level == logging.DEBUG

    @pytest.mark.unit
    def test_redirects_stream(self):
        """Test stream handlers are pointed at the given stream."""
        logger = setup_logger('pkgstream.module')
        buffer = io.StringIO()

        set_package_log_level(logging.WARNING, prefix='pkgstream', stream=buffer)
        logger.warning("Gram spectrum is ill-conditioned")

        assert "Gram spectrum is ill-conditioned" in buffer.getvalue()


class TestGetLogger:
    """Test get_logger functionality."""

    @pytest.mark.unit
    def test_get_logger_returns_existing(self):
        """Test get_logger returns existing logger."""
        original = setup_logger('test_get_existing')

        assert get_logger('test_get_existing') is original

    @pytest.mark.unit
    def test_get_logger_returns_none_for_nonexistent(self):
        """Test get_logger returns None for non-existent logger."""
        assert get_logger('this_logger_does_not_exist_xyz123') is None

    @pytest.mark.edge_case
    def test_get_logger_case_sensitive(self):
        """Test get_logger is case sensitive."""
        setup_logger('test_case')
        logger_upper = get_logger('TEST_CASE')

        assert logger_upper is None or logger_upper.name != 'test_case'
