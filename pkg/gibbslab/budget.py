# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging
import os

from .exceptions import ConfigError, ResourceError

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIMENSION = 2 ** 14
DEFAULT_MAX_SITES = 4096
DEFAULT_MAX_BOND = 4096

MAX_DIMENSION_ENV = 'GIBBSLAB_MAX_DIMENSION'
MAX_SITES_ENV = 'GIBBSLAB_MAX_SITES'
MAX_BOND_ENV = 'GIBBSLAB_MAX_BOND'


def _read_limit(env_name, default):
    value = os.environ.get(env_name)
    if not value:
        return default
    try:
        limit = int(value)
    except ValueError:
        raise ConfigError(
            'Environment variable {} must be an integer, got {!r}'.format(env_name, value)
        )
    if limit < 1:
        raise ConfigError('Environment variable {} must be positive'.format(env_name))
    return limit


def max_dimension():
    return _read_limit(MAX_DIMENSION_ENV, DEFAULT_MAX_DIMENSION)


def max_sites():
    return _read_limit(MAX_SITES_ENV, DEFAULT_MAX_SITES)


def max_bond():
    return _read_limit(MAX_BOND_ENV, DEFAULT_MAX_BOND)


def check_dimension(dimension):
    limit = max_dimension()
    if dimension > limit:
        raise ResourceError(MAX_DIMENSION_ENV, limit, dimension)
    logger.debug('dense dimension %s within budget %s', dimension, limit)


def check_sites(n_sites):
    limit = max_sites()
    if n_sites > limit:
        raise ResourceError(MAX_SITES_ENV, limit, n_sites)
