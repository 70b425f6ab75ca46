# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import contextlib
import functools
import logging
import os
import time

logger = logging.getLogger(__name__)

DEBUG_ENV = 'GIBBSLAB_DEBUG'
_FALSY = ('', '0', 'false', 'no', 'off')


def debug_enabled(environ=None):
    environ = os.environ if environ is None else environ
    return environ.get(DEBUG_ENV, '').strip().lower() not in _FALSY


@contextlib.contextmanager
def timed(label, *args):
    '''Log how long the body of the `with` block took, errors included.'''
    start = time.perf_counter()
    try:
        yield
    finally:
        elapsed = time.perf_counter() - start
        logger.info('%s took %.3fs', label % args if args else label, elapsed)


def trace_duration(fun):
    '''
    Time every call of `fun` when GIBBSLAB_DEBUG is set. The environment is
    read when the module defining `fun` is imported: without the variable,
    `fun` is returned untouched.
    '''
    if not debug_enabled():
        return fun

    label = '{}.{}'.format(fun.__module__.rsplit('.', 1)[-1], fun.__qualname__)

    @functools.wraps(fun)
    def traced(*args, **kwargs):
        with timed(label):
            return fun(*args, **kwargs)

    return traced
