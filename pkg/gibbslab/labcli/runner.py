# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Deterministic experiment runs: config layering and validation, grid points
on a worker pool, CSV rows in grid order and a JSON manifest per run.
'''

import json
import logging
import os
import platform

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import metadata

import numpy as np
import pandas as pd

from .. import plugin_helpers
from ..config_helper import ConfigParser, RaiseErrorHandler, config_hash, deep_merge
from ..debug import trace_duration
from ..exceptions import EXIT_SUCCESS, ConfigError, LabError
from .experiment import RNG_ALGORITHM, RunContext, point_generators
from .experiments import register_builtin_experiments
from .registry import ExperimentRegistry
from .schema import load_config

logger = logging.getLogger(__name__)

GLOBAL_DEFAULTS = {
    'seed': 0,
    'workers': 1,
    'grid': {},
    'bounds': {},
    'tolerances': {},
    'output': {'dir': 'results'},
    'enabled_plugins': {},
    'extra_config_files': None,
}

# Model blocks are taken whole from the highest layer that has one.
ATOMIC_KEYS = ('model', 'models')

VERSIONED_DISTRIBUTIONS = (
    'gibbslab',
    'numpy',
    'scipy',
    'networkx',
    'opt_einsum',
    'pandas',
    'PyYAML',
    'marshmallow',
    'stevedore',
)


def create_registry(enabled_plugins=None):
    registry = register_builtin_experiments(ExperimentRegistry())
    if enabled_plugins:
        plugin_helpers.load(registry, enabled_plugins)
    return registry


def read_raw_config(config_path):
    '''Global defaults under the config file and its extra config directory.'''
    parser = ConfigParser(RaiseErrorHandler())
    raw = parser.read_config_file_hierarchy(dict(GLOBAL_DEFAULTS, config_file=config_path))
    raw.pop('config_file', None)
    return raw


def resolve_config(raw_config, overrides=None, registry=None):
    '''
    Layer overrides over the raw config over the experiment defaults, then
    validate. A default model block is used only when the config has none.
    '''
    name = raw_config.get('experiment')
    if not name:
        raise ConfigError('Config does not name an experiment')
    if registry is None:
        registry = create_registry(raw_config.get('enabled_plugins'))
    experiment = registry.get_experiment(name)
    user_config = deep_merge(overrides or {}, raw_config)
    defaults = {
        key: value
        for key, value in experiment.defaults.items()
        if key not in ATOMIC_KEYS or user_config.get(key) is None
    }
    for key in ATOMIC_KEYS:
        if key in user_config and user_config[key] is None:
            del user_config[key]
    return experiment, load_config(deep_merge(user_config, defaults))


def format_value(value):
    '''Shortest round-trip text for floats; empty for missing values.'''
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_rows(path, columns, rows):
    '''Rows in column order; values are formatted before pandas sees them.'''
    table = pd.DataFrame(
        [[format_value(row.get(column)) for column in columns] for row in rows], columns=list(columns)
    )
    table.to_csv(path, index=False, lineterminator='\n')


def _version(distribution):
    for name in (distribution, distribution.replace('_', '-')):
        try:
            return metadata.version(name)
        except metadata.PackageNotFoundError:
            continue
    return 'unknown'


def library_versions():
    versions = {name: _version(name) for name in VERSIONED_DISTRIBUTIONS}
    versions['python'] = platform.python_version()
    return versions


def _now():
    return datetime.now(timezone.utc).isoformat()


@dataclass
class RunRecord:
    experiment: str
    config: dict
    config_hash: str
    rng: dict
    versions: dict
    started: str
    finished: str = None
    rows: int = 0
    data_file: str = None
    warnings: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    exit_status: int = EXIT_SUCCESS
    error: dict = None


class Runner:
    def __init__(self, experiment, config):
        self.experiment = experiment
        self.config = config
        self.output_dir = config['output']['dir']

    @property
    def data_path(self):
        return os.path.join(self.output_dir, '{}.csv'.format(self.experiment.name))

    @property
    def manifest_path(self):
        return os.path.join(self.output_dir, '{}.manifest.json'.format(self.experiment.name))

    def _run_points(self):
        points = self.experiment.grid_points(self.config)
        workers = self.config['workers']
        inner_workers = max(1, workers // max(len(points), 1))
        contexts = [
            RunContext(self.config, rng, inner_workers)
            for rng in point_generators(self.config['seed'], len(points))
        ]
        logger.info(
            '%s: %s grid points on %s workers', self.experiment.name, len(points), workers
        )
        with ThreadPoolExecutor(max_workers=workers) as executor:
            run_point = trace_duration(self.experiment.run_point)
            results = list(executor.map(run_point, points, contexts))
        rows = [row for point_rows in results for row in point_rows]
        warnings = [warning for context in contexts for warning in context.warnings]
        return rows, warnings

    def run(self):
        record = RunRecord(
            experiment=self.experiment.name,
            config=self.config,
            config_hash=config_hash(self.config),
            rng={'algorithm': RNG_ALGORITHM, 'seed': self.config['seed']},
            versions=library_versions(),
            started=_now(),
        )
        os.makedirs(self.output_dir, exist_ok=True)
        try:
            rows, warnings = self._run_points()
            write_rows(self.data_path, self.experiment.columns, rows)
            record.rows = len(rows)
            record.data_file = self.data_path
            record.warnings = warnings
            record.summary = self.experiment.summarize(rows, self.config)
        except LabError as e:
            record.exit_status = e.exit_code
            record.error = e.as_dict()
            raise
        finally:
            record.finished = _now()
            self.write_manifest(record)
        logger.info('%s: %s rows written to %s', self.experiment.name, record.rows, self.data_path)
        return record

    def write_manifest(self, record):
        with open(self.manifest_path, 'w') as output:
            json.dump(asdict(record), output, indent=2, sort_keys=True, default=str)
            output.write('\n')


def run(config_path, overrides=None):
    experiment, config = resolve_config(read_raw_config(config_path), overrides)
    return Runner(experiment, config).run()
