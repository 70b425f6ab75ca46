# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import itertools
import logging
import math

import numpy as np

from ...densequantum import DensityMatrix
from ...exceptions import InsufficientDataError
from ...hamiltonian import assemble_dense
from ...statmech import (
    berry_esseen_distance,
    energy_cdf,
    energy_observables,
    eoe_experiment,
    fit_berry_esseen_scaling,
)
from ..experiment import BaseExperiment, build_hamiltonian, chain_model, inverse_temperatures

logger = logging.getLogger(__name__)

TEMPERATURES = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 10.0]


def _nonincreasing(values, tolerance):
    return all(b <= a * (1 + tolerance) for a, b in zip(values, values[1:]))


class EnergyGaussianity(BaseExperiment):
    name = 'energy_gaussianity'
    anchor = 'Berry-Esseen bound on the energy distribution'
    description = 'sup |F - G| for the uniform product state per chain length, with a scaling fit'
    columns = ('n', 'mu', 'sigma2', 'levels', 'distance', 'regime_flag')
    defaults = {
        'model': chain_model('ising', {'J_zz': 1.0}, 6),
        'grid': {'n': [6, 8, 10, 12, 14]},
    }

    def grid_points(self, config):
        return [{'n': n} for n in config['grid']['n']]

    def run_point(self, point, context):
        H = assemble_dense(build_hamiltonian(self.model(context.config), point['n']))
        plus = np.full(H.dim, 1.0 / math.sqrt(H.dim))
        distribution = energy_cdf(DensityMatrix.pure(plus, H.dims, H.sites), H)
        return [
            {
                'n': point['n'],
                'mu': distribution.mu,
                'sigma2': distribution.sigma2,
                'levels': len(distribution.energies),
                'distance': berry_esseen_distance(distribution),
                'regime_flag': 'fitted' if point['n'] >= 3 else 'below-fit-range',
            }
        ]

    def summarize(self, rows, config):
        distances = [r['distance'] for r in rows]
        summary = {
            'rows': len(rows),
            'strictly_decreasing': all(b < a for a, b in zip(distances, distances[1:])),
        }
        try:
            fit = fit_berry_esseen_scaling([r['n'] for r in rows], distances)
        except InsufficientDataError as e:
            logger.info('no Berry-Esseen scaling fit: %s', e.message)
            return summary
        summary.update(C=fit.C, power=fit.power, residual=fit.residual)
        return summary


class HeatCapacity(BaseExperiment):
    name = 'heat_capacity'
    anchor = 'heat capacity fluctuation identity'
    description = 'finite-difference heat capacity against Var(E)/T^2 over models and temperatures'
    columns = (
        'model',
        'n',
        'T',
        'U',
        'u',
        'C_finite_difference',
        'C_fluctuation',
        'c',
        'discrepancy',
        'regime_flag',
    )
    defaults = {
        'models': [
            chain_model('ising', {'J_zz': 1.0, 'h_z': 0.3}, 6),
            chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 0.7}, 6),
            chain_model('heisenberg', {'J': 1.0}, 6),
        ],
        'grid': {'T': TEMPERATURES},
    }

    def grid_points(self, config):
        return [
            {'model': model, 'T': T}
            for model, T in itertools.product(config['models'], config['grid']['T'])
        ]

    def run_point(self, point, context):
        model = point['model']
        observables = energy_observables(build_hamiltonian(model), point['T'])
        consistent = observables.discrepancy <= context.tolerances['fluctuation']
        if not consistent:
            context.warn(
                'heat capacity routes disagree by %.3e for %s at T=%r',
                observables.discrepancy,
                model['name'],
                point['T'],
            )
        return [
            {
                'model': model['name'],
                'n': observables.n_sites,
                'T': point['T'],
                'U': observables.U,
                'u': observables.u,
                'C_finite_difference': observables.C_finite_difference,
                'C_fluctuation': observables.C_fluctuation,
                'c': observables.c,
                'discrepancy': observables.discrepancy,
                'regime_flag': 'consistent' if consistent else 'inconsistent',
            }
        ]

    def summarize(self, rows, config):
        return {
            'rows': len(rows),
            'max_discrepancy': max((r['discrepancy'] for r in rows), default=0.0),
        }


class EnsembleEquivalence(BaseExperiment):
    name = 'eoe_sweep'
    anchor = 'equivalence of ensembles'
    description = 'translate-averaged local distance between microcanonical and Gibbs states per N'
    columns = ('n', 'T', 'delta', 'l', 'statistic', 'translate', 'value', 'regime_flag')
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 8),
        'grid': {'n': [8, 10, 12, 14], 'beta_fraction': [0.5], 'l': [2]},
    }

    def grid_points(self, config):
        grid = config['grid']
        model = self.model(config)
        points = []
        for n in grid['n']:
            H = build_hamiltonian(model, n)
            for beta, l, delta in itertools.product(
                inverse_temperatures(grid, H, config['bounds']), grid['l'], grid.get('delta', [None])
            ):
                points.append({'hamiltonian': H, 'n': n, 'beta': beta, 'l': l, 'delta': delta})
        return points

    def run_point(self, point, context):
        T = math.inf if point['beta'] == 0 else 1.0 / point['beta']
        report = eoe_experiment(
            point['hamiltonian'], T, point['delta'], point['l'], c1=context.bounds['c1']
        )
        for warning in report.warnings:
            context.warn('N=%s: %s', point['n'], warning)
        flag = 'in-regime' if report.in_regime else 'outside theorem regime'
        common = {
            'n': point['n'],
            'T': T,
            'delta': report.delta,
            'l': point['l'],
            'regime_flag': flag,
            'configured_delta': point['delta'],
        }
        rows = [
            dict(common, statistic='mean_distance', translate='', value=report.mean_distance),
            dict(common, statistic='relative_entropy_bits', translate='', value=report.relative_entropy),
            dict(common, statistic='window_size', translate='', value=report.window.size),
        ]
        for translate, distance in report.distances.items():
            label = '-'.join(str(v) for v in translate)
            rows.append(dict(common, statistic='translate_distance', translate=label, value=distance))
        return rows

    def summarize(self, rows, config):
        means = {}
        for row in rows:
            if row['statistic'] == 'mean_distance':
                key = (row['T'], row['l'], row['configured_delta'])
                means.setdefault(key, []).append((row['n'], row['value']))
        tolerance = config['tolerances']['trend']
        trends = [_nonincreasing([v for _, v in sorted(series)], tolerance) for series in means.values()]
        return {
            'rows': len(rows),
            'mean_distances': [sorted(series) for series in means.values()],
            'nonincreasing': all(trends),
        }
