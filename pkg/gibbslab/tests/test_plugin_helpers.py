# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest

from hamcrest import assert_that, contains_exactly, equal_to, is_, none
from mock import Mock, patch, sentinel as s
from stevedore.exception import NoMatches

from .. import plugin_helpers
from ..plugin_helpers import EXPERIMENTS_NAMESPACE, enabled_names, load, register_plugin


class TestEnabledNames(unittest.TestCase):
    def test_only_enabled_plugins(self):
        names = enabled_names({'sweeps': True, 'legacy': False, 'extra': True})

        assert_that(names, contains_exactly('sweeps', 'extra'))


class TestRegisterPlugin(unittest.TestCase):
    def test_plugin_registers_into_the_registry(self):
        ext = Mock()
        ext.name = 'sweeps'

        register_plugin(ext, s.registry)

        ext.obj.load.assert_called_once_with(s.registry)


@patch('gibbslab.plugin_helpers.NamedExtensionManager')
class TestLoad(unittest.TestCase):
    def test_nothing_enabled(self, manager_class):
        result = load(s.registry, {'sweeps': False})

        assert_that(result, is_(none()))
        assert_that(manager_class.called, is_(False))

    def test_enabled_plugins_are_loaded(self, manager_class):
        manager = manager_class.return_value

        result = load(s.registry, {'sweeps': True, 'legacy': False})

        manager_class.assert_called_once_with(
            EXPERIMENTS_NAMESPACE,
            ['sweeps'],
            name_order=True,
            on_load_failure_callback=plugin_helpers.on_load_failure,
            on_missing_entrypoints_callback=plugin_helpers.on_missing_entrypoints,
            invoke_on_load=True,
        )
        manager.map.assert_called_once_with(register_plugin, s.registry)
        assert_that(result, equal_to(manager))

    def test_no_matching_plugin_is_logged(self, manager_class):
        manager_class.return_value.map.side_effect = NoMatches

        with patch.object(plugin_helpers, 'logger') as logger:
            load(s.registry, {'sweeps': True})

        assert_that(logger.error.called)
