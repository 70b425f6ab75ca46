# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging

from dataclasses import dataclass, field

import numpy as np

from ..correlations import ClusteringBoundParams
from ..exceptions import ConfigError
from ..hamiltonian import build_model
from ..lattice import build_cubic

logger = logging.getLogger(__name__)

RNG_ALGORITHM = 'PCG64'


@dataclass
class RunContext:
    '''What one grid point sees of the run: the validated config, its own generator and the worker budget.'''

    config: dict
    rng: np.random.Generator
    workers: int = 1
    warnings: list = field(default_factory=list)

    @property
    def grid(self):
        return self.config.get('grid', {})

    @property
    def bounds(self):
        return self.config['bounds']

    @property
    def tolerances(self):
        return self.config['tolerances']

    def warn(self, message, *args):
        logger.warning(message, *args)
        self.warnings.append(message % args if args else message)


def point_generators(seed, n_points):
    '''One independent generator per grid point, so results do not depend on scheduling.'''
    children = np.random.SeedSequence(seed).spawn(n_points)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def build_hamiltonian(model, n=None):
    lattice = model['lattice']
    size = n if n is not None else lattice.get('n')
    if size is None:
        raise ConfigError(
            'Model {} needs a lattice size'.format(model['name']), details={'model': model}
        )
    graph = build_cubic(size, lattice.get('D', 1), lattice.get('periodic', False))
    return build_model(model['name'], graph, model.get('couplings', {}))


class BaseExperiment:
    '''
    An experiment is a list of independent grid points. Each point yields
    rows keyed by the experiment columns; summarize reduces all rows once the
    whole grid has run.
    '''

    name = None
    anchor = None
    description = None
    columns = ()
    defaults = {}

    def grid_points(self, config):
        raise NotImplementedError('must be overriden in derived class')

    def run_point(self, point, context):
        raise NotImplementedError('must be overriden in derived class')

    def summarize(self, rows, config):
        return {'rows': len(rows)}

    def model(self, config):
        try:
            return config['model']
        except KeyError:
            raise ConfigError('Experiment {} needs a model block'.format(self.name))


def critical_beta(H, bounds):
    '''beta* of the high-temperature clustering bound for H.'''
    return ClusteringBoundParams.for_hamiltonian(H, 0.0, bounds.get('L0', 1), bounds.get('alpha')).beta_star


def inverse_temperatures(grid, H, bounds):
    '''Explicit beta values when the grid lists them, otherwise fractions of beta*.'''
    if 'beta' in grid:
        return list(grid['beta'])
    fractions = grid.get('beta_fraction', [0.5])
    beta_star = critical_beta(H, bounds)
    return [fraction * beta_star for fraction in fractions]


def chain_model(name, couplings, n):
    return {
        'name': name,
        'couplings': couplings,
        'lattice': {'n': n, 'D': 1, 'periodic': False},
    }
