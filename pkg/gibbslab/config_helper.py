# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import hashlib
import json
import logging
import os

from collections import UserDict

import yaml

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

CONFIG_SUFFIX = '.yml'


def _merge_missing(target, layer):
    for key, value in layer.items():
        if key not in target:
            target[key] = _detached(value)
        elif isinstance(target[key], dict) and isinstance(value, dict):
            _merge_missing(target[key], value)


def _detached(value):
    if isinstance(value, (dict, UserDict)):
        return {key: _detached(item) for key, item in value.items()}
    return value


class ChainMap(UserDict):
    '''
    Layered view of nested mappings, highest priority first.

    A key is taken from the first layer that has it. Mappings found under the
    same key in several layers are merged key by key with the same rule;
    anything else, lists included, is taken whole from the winning layer.
    The layers themselves are never modified.
    '''

    def __init__(self, *layers):
        super().__init__()
        for layer in layers:
            _merge_missing(self.data, layer or {})


def deep_merge(*layers):
    return ChainMap(*layers).data


def config_hash(config):
    '''sha256 of the config serialized as compact JSON with sorted keys.'''
    canonical = json.dumps(config, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


class ErrorHandler:
    def on_config_file_error(self, path, reason):
        pass

    def on_extra_config_error(self, path, reason):
        pass


class LogErrorHandler(ErrorHandler):
    def on_config_file_error(self, path, reason):
        logger.warning('Ignoring config file %s: %s', path, reason)

    def on_extra_config_error(self, path, reason):
        logger.warning('Ignoring extra config %s: %s', path, reason)


class RaiseErrorHandler(LogErrorHandler):
    '''The main config file of a run must be usable; extra files are only logged.'''

    def on_config_file_error(self, path, reason):
        raise ConfigError(
            'Unusable config file {}: {}'.format(path, reason), details={'config_file': path}
        )


class ConfigParser:
    def __init__(self, error_handler=None):
        self._error_handler = error_handler or LogErrorHandler()

    def _load(self, path):
        '''Return (mapping, reason); reason is None when path holds a usable mapping.'''
        try:
            with open(path) as f:
                data = yaml.safe_load(f)
        except OSError as e:
            return {}, 'cannot be read ({})'.format(e)
        except yaml.YAMLError as e:
            return {}, 'invalid YAML ({})'.format(e)
        if data is None:
            return {}, None
        if not isinstance(data, dict):
            return {}, 'top level must be a mapping'
        return data, None

    def parse_config_file(self, path):
        data, reason = self._load(path)
        if reason:
            self._error_handler.on_config_file_error(path, reason)
        return data

    def parse_config_dir(self, directory):
        '''
        Parse the *.yml files of directory in alphabetical order. Hidden files
        are skipped and unusable ones reported to the error handler.
        '''
        try:
            names = sorted(os.listdir(directory))
        except OSError as e:
            self._error_handler.on_extra_config_error(directory, 'cannot be listed ({})'.format(e))
            return []

        configs = []
        for name in names:
            if name.startswith('.') or not name.endswith(CONFIG_SUFFIX):
                continue
            path = os.path.join(directory, name)
            data, reason = self._load(path)
            if reason:
                self._error_handler.on_extra_config_error(path, reason)
                continue
            configs.append(data)
        return configs

    def read_config_file_hierarchy(
        self, defaults, config_file_key='config_file', extra_config_dir_key='extra_config_files'
    ):
        '''
        Merge, from highest to lowest priority: the files of the extra config
        directory (the last in alphabetical order wins), the config file named
        by defaults[config_file_key], then defaults. The extra directory is
        looked up in the config file first, then in defaults.
        '''
        main_config = self.parse_config_file(defaults[config_file_key])
        extra_dir = main_config.get(extra_config_dir_key, defaults.get(extra_config_dir_key))
        extra_configs = self.parse_config_dir(extra_dir) if extra_dir else []
        return deep_merge(*reversed(extra_configs), main_config, defaults)
