# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging

from stevedore.exception import NoMatches
from stevedore.named import NamedExtensionManager

logger = logging.getLogger(__name__)

EXPERIMENTS_NAMESPACE = 'gibbslab.experiments'


def enabled_names(plugins_dict):
    return [name for name, enabled in plugins_dict.items() if enabled]


def on_load_failure(_, entrypoint, exception):
    logger.exception('There is an error with this experiment plugin: %s', entrypoint)


def on_missing_entrypoints(missing_names):
    logger.error(
        'Unable to load experiment plugins because the entrypoint is missing: %s',
        missing_names,
    )


def register_plugin(ext, registry):
    logger.debug('Registering experiments of plugin: %s', ext.name)
    return ext.obj.load(registry)


def load(registry, enabled_plugins, namespace=EXPERIMENTS_NAMESPACE):
    '''
    Instantiate the enabled entry points of namespace and let each of them
    register its experiments in registry.
    '''
    names = enabled_names(enabled_plugins)
    logger.debug('Enabled experiment plugins: %s', names)
    if not names:
        return None

    manager = NamedExtensionManager(
        namespace,
        names,
        name_order=True,
        on_load_failure_callback=on_load_failure,
        on_missing_entrypoints_callback=on_missing_entrypoints,
        invoke_on_load=True,
    )

    try:
        manager.map(register_plugin, registry)
    except NoMatches:
        logger.error('None of the experiment plugins %s could be loaded', names)

    return manager
