# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import io
import logging
import os
import sys
import tempfile
import warnings

from unittest import TestCase

from hamcrest import assert_that, contains_inanyorder, contains_string, equal_to, has_length, is_
from mock import Mock, patch

from ..lab_logging import (
    NOISY_LOGGERS,
    excepthook,
    lab_handlers,
    setup_logging,
    silence_loggers,
)


@patch('sys.stderr', new_callable=io.StringIO)
@patch('sys.stdout', new_callable=io.StringIO)
class TestSetupLogging(TestCase):
    def setUp(self):
        self.root_logger = logging.getLogger()
        self.handlers = list(self.root_logger.handlers)
        self.level = self.root_logger.level
        self.excepthook = sys.excepthook
        fd, self.file_name = tempfile.mkstemp()
        os.close(fd)

    def tearDown(self):
        for handler in lab_handlers(self.root_logger):
            handler.close()
        self.root_logger.handlers = self.handlers
        self.root_logger.setLevel(self.level)
        sys.excepthook = self.excepthook
        logging.captureWarnings(False)
        os.remove(self.file_name)

    def test_info_goes_to_stdout(self, stdout, stderr):
        setup_logging()
        logging.getLogger('test').info('sweep started')

        assert_that(stdout.getvalue(), contains_string('sweep started'))
        assert_that(stderr.getvalue(), has_length(0))

    def test_error_goes_to_stderr(self, stdout, stderr):
        setup_logging()
        logging.getLogger('test').error('sweep failed')

        assert_that(stderr.getvalue(), contains_string('sweep failed'))
        assert_that(stdout.getvalue(), has_length(0))

    def test_debug_is_dropped_by_default(self, stdout, stderr):
        setup_logging()
        logging.getLogger('test').debug('grid point done')

        assert_that(stdout.getvalue(), has_length(0))
        assert_that(self.root_logger.level, equal_to(logging.INFO))

    def test_all_levels_go_to_the_log_file(self, stdout, stderr):
        setup_logging(self.file_name, debug=True)
        logging.getLogger('test').debug('grid point done')
        for handler in lab_handlers(self.root_logger):
            handler.flush()

        with open(self.file_name) as f:
            assert_that(f.read(), contains_string('grid point done'))

    def test_no_file_handler_without_log_file(self, stdout, stderr):
        setup_logging()

        assert_that(lab_handlers(self.root_logger), has_length(2))

    def test_second_call_replaces_handlers(self, stdout, stderr):
        setup_logging(self.file_name)
        setup_logging()
        logging.getLogger('test').info('once')

        assert_that(lab_handlers(self.root_logger), has_length(2))
        assert_that(stdout.getvalue().count('once'), equal_to(1))

    def test_warnings_are_logged(self, stdout, stderr):
        setup_logging()
        with warnings.catch_warnings():
            warnings.simplefilter('always')
            warnings.warn('overflow in expm')

        assert_that(stdout.getvalue(), contains_string('overflow in expm'))

    def test_excepthook_is_installed(self, stdout, stderr):
        setup_logging()

        assert_that(sys.excepthook, is_(excepthook))


class TestExcepthook(TestCase):
    @patch('gibbslab.lab_logging.logging')
    def test_uncaught_errors_are_critical(self, logging_):
        error = ValueError('bad')

        excepthook(ValueError, error, None)

        logging_.getLogger.return_value.critical.assert_called_once_with(
            error, exc_info=(ValueError, error, None)
        )

    @patch('sys.__excepthook__')
    def test_keyboard_interrupt_uses_the_default_hook(self, default_hook):
        interrupt = KeyboardInterrupt()

        excepthook(KeyboardInterrupt, interrupt, None)

        default_hook.assert_called_once_with(KeyboardInterrupt, interrupt, None)


class TestSilenceLoggers(TestCase):
    @patch('gibbslab.lab_logging.logging')
    def test_that_loggers_are_leveled_down(self, mocked_logging):
        loggers = {}

        def get_loggers(logger_name):
            loggers[logger_name] = logger = Mock()
            return logger

        mocked_logging.getLogger = get_loggers

        silence_loggers(NOISY_LOGGERS, logging.WARNING)

        for logger in loggers.values():
            logger.setLevel.assert_called_once_with(logging.WARNING)
        assert_that(loggers.keys(), contains_inanyorder(*NOISY_LOGGERS))
