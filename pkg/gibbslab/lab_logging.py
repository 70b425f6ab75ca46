# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging
import sys

DEFAULT_LOG_FORMAT = '%(asctime)s [%(process)d] (%(levelname)s) (%(name)s): %(message)s'
DEFAULT_LOG_LEVEL = logging.INFO

NOISY_LOGGERS = ['stevedore', 'opt_einsum']

_LAB_HANDLER = '_gibbslab_handler'


class _LogLevelFilter(logging.Filter):
    def __init__(self, level_filter):
        super().__init__()
        self._level_filter = level_filter

    def filter(self, record):
        return self._level_filter(record.levelno)


def _lab_handler(handler, formatter, level_filter=None):
    handler.setFormatter(formatter)
    if level_filter is not None:
        handler.addFilter(_LogLevelFilter(level_filter))
    setattr(handler, _LAB_HANDLER, True)
    return handler


def lab_handlers(logger):
    return [h for h in logger.handlers if getattr(h, _LAB_HANDLER, False)]


def setup_logging(
    log_file=None, debug=False, log_level=DEFAULT_LOG_LEVEL, log_format=DEFAULT_LOG_FORMAT
):
    '''
    logger.*      > root logger > streamhandler(level<ERROR) > sys.stdout
    warnings.warn ^             > streamhandler(level>=ERROR) > sys.stderr
                                > filehandler(all levels) > file (when log_file is given)

    Calling it again replaces the handlers of the previous call.
    '''
    root_logger = logging.getLogger()
    for handler in lab_handlers(root_logger):
        root_logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(log_format)
    handlers = [
        _lab_handler(logging.StreamHandler(sys.stdout), formatter, lambda lvl: lvl < logging.ERROR),
        _lab_handler(logging.StreamHandler(sys.stderr), formatter, lambda lvl: lvl >= logging.ERROR),
    ]
    if log_file:
        handlers.append(_lab_handler(logging.FileHandler(log_file), formatter))
    for handler in handlers:
        root_logger.addHandler(handler)

    root_logger.setLevel(logging.DEBUG if debug else log_level)
    silence_loggers(NOISY_LOGGERS, logging.WARNING)

    # numpy and scipy report overflows and ill-conditioning through warnings
    logging.captureWarnings(True)
    sys.excepthook = excepthook


def silence_loggers(logger_names, level):
    for name in logger_names:
        logging.getLogger(name).setLevel(level)


def excepthook(exception_class, exception_instance, traceback):
    if issubclass(exception_class, KeyboardInterrupt):
        sys.__excepthook__(exception_class, exception_instance, traceback)
        return
    logging.getLogger().critical(
        exception_instance, exc_info=(exception_class, exception_instance, traceback)
    )
