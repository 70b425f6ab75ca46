# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging

from ...correlations import (
    ClusteringBoundParams,
    covariance_sweep,
    fit_decay,
    fit_gap_scaling,
    ground_state_covariance_experiment,
    spectral_gap,
    thermal_mutual_information,
)
from ...exceptions import InsufficientDataError
from ...hamiltonian import pauli_operator
from ..experiment import BaseExperiment, build_hamiltonian, chain_model, inverse_temperatures

logger = logging.getLogger(__name__)

TAU_GRID = [0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0]


class ClusteringSweep(BaseExperiment):
    name = 'clustering_sweep'
    anchor = 'high-temperature clustering bound'
    description = '|cov^tau| of single-site pairs against the exponential clustering bound'
    columns = (
        'beta',
        'site_a',
        'site_b',
        'axis_a',
        'axis_b',
        'distance',
        'tau',
        'cov_abs',
        'bound',
        'binding',
        'violation',
        'regime_flag',
    )
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 10),
        'grid': {'beta_fraction': [0.5], 'tau': TAU_GRID, 'axes': ['x', 'z']},
    }

    def grid_points(self, config):
        H = build_hamiltonian(self.model(config))
        betas = inverse_temperatures(config['grid'], H, config['bounds'])
        return [{'hamiltonian': H, 'beta': beta} for beta in betas]

    def run_point(self, point, context):
        H, beta = point['hamiltonian'], point['beta']
        bounds = context.bounds
        params = ClusteringBoundParams.for_hamiltonian(H, beta, bounds['L0'], bounds['alpha'])
        floor = context.tolerances['numerical_floor']
        rows = []
        for row in covariance_sweep(
            H, beta, context.grid['tau'], tuple(context.grid['axes']), params, context.workers
        ):
            violation = row.binding and row.cov_abs > row.bound + floor
            rows.append(
                {
                    'beta': beta,
                    'site_a': row.site_a,
                    'site_b': row.site_b,
                    'axis_a': row.axis_a,
                    'axis_b': row.axis_b,
                    'distance': row.distance,
                    'tau': row.tau,
                    'cov_abs': row.cov_abs,
                    'bound': row.bound,
                    'binding': row.binding,
                    'violation': violation,
                    'regime_flag': 'binding' if row.binding else 'non-binding',
                }
            )
        violations = sum(r['violation'] for r in rows)
        if violations:
            context.warn('clustering bound violated by %s rows at beta=%r', violations, beta)
        return rows

    def summarize(self, rows, config):
        binding = [r for r in rows if r['binding'] and r['bound'] > 0]
        return {
            'rows': len(rows),
            'violations': sum(r['violation'] for r in rows),
            'max_ratio': max((r['cov_abs'] / r['bound'] for r in binding), default=0.0),
        }


class GroundStateDecay(BaseExperiment):
    name = 'ground_state_decay'
    anchor = 'clustering in gapped ground states'
    description = 'ground-state covariances versus distance with an exponential fit'
    columns = ('n', 'axis', 'site_a', 'site_b', 'distance', 'cov_abs', 'gap', 'xi_fit', 'regime_flag')
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 2.0}, 10),
        'grid': {'n': [8, 10], 'axes': ['z']},
    }

    def grid_points(self, config):
        return [{'n': n} for n in config['grid']['n']]

    def run_point(self, point, context):
        H = build_hamiltonian(self.model(context.config), point['n'])
        reference = H.graph.vertices[0]
        rows = []
        for axis in context.grid['axes']:
            pairs = [
                (pauli_operator(reference, axis), pauli_operator(v, axis))
                for v in H.graph.vertices[1:]
            ]
            result = ground_state_covariance_experiment(H, pairs)
            xi_fit = result.fit.xi_fit if result.fit is not None else None
            for (_, B), (distance, value) in zip(pairs, result.covariances):
                rows.append(
                    {
                        'n': point['n'],
                        'axis': axis,
                        'site_a': reference,
                        'site_b': B.support[0],
                        'distance': distance,
                        'cov_abs': value,
                        'gap': result.gap,
                        'xi_fit': xi_fit,
                        'regime_flag': 'fitted' if result.fit is not None else 'no-fit',
                    }
                )
        return rows

    def summarize(self, rows, config):
        summary = {'rows': len(rows)}
        try:
            fit = fit_decay([(r['n'], r['distance'], r['cov_abs']) for r in rows])
        except InsufficientDataError as e:
            logger.info('no joint decay fit: %s', e.message)
            return summary
        summary.update(xi_fit=fit.xi_fit, z_fit=fit.z_fit, residual=fit.residual)
        return summary


class GapScaling(BaseExperiment):
    name = 'gap_scaling'
    anchor = 'finite-size spectral gap'
    description = 'spectral gap against system size with a power-law fit'
    columns = ('n', 'gap', 'regime_flag')
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 10),
        'grid': {'n': [4, 6, 8, 10]},
    }

    def grid_points(self, config):
        return [{'n': n} for n in config['grid']['n']]

    def run_point(self, point, context):
        H = build_hamiltonian(self.model(context.config), point['n'])
        gap = spectral_gap(H)
        flag = 'gapped' if gap > context.tolerances['numerical_floor'] else 'closed'
        return [{'n': point['n'], 'gap': gap, 'regime_flag': flag}]

    def summarize(self, rows, config):
        summary = {'rows': len(rows)}
        try:
            fit = fit_gap_scaling([r['n'] for r in rows], [r['gap'] for r in rows])
        except InsufficientDataError as e:
            logger.info('no gap scaling fit: %s', e.message)
            return summary
        summary.update(exponent=fit.exponent, prefactor=fit.prefactor, residual=fit.residual)
        return summary


class MutualInformationAreaLaw(BaseExperiment):
    name = 'mutual_information_area_law'
    anchor = 'thermal area law for mutual information'
    description = 'I(S:rest) of Gibbs states against the boundary-term bound'
    columns = (
        'beta',
        'region_size',
        'mutual_information',
        'identity_value',
        'relative_entropy',
        'bound',
        'area_law_bound',
        'cut_terms',
        'regime_flag',
    )
    defaults = {
        'model': chain_model('heisenberg', {'J': 1.0}, 8),
        'grid': {'beta': [0.1, 0.5, 1.0, 2.0]},
    }

    def grid_points(self, config):
        H = build_hamiltonian(self.model(config))
        region = H.graph.vertices[: H.graph.n_sites // 2]
        return [{'hamiltonian': H, 'region': region, 'beta': beta} for beta in config['grid']['beta']]

    def run_point(self, point, context):
        result = thermal_mutual_information(point['hamiltonian'], point['region'], point['beta'])
        within = result.mutual_information <= result.bound + context.tolerances['numerical_floor']
        if not within:
            context.warn('mutual information above its bound at beta=%r', point['beta'])
        return [
            {
                'beta': point['beta'],
                'region_size': len(point['region']),
                'mutual_information': result.mutual_information,
                'identity_value': result.identity_value,
                'relative_entropy': result.relative_entropy,
                'bound': result.bound,
                'area_law_bound': result.area_law_bound,
                'cut_terms': result.cut_terms,
                'regime_flag': 'within-bound' if within else 'violation',
            }
        ]

    def summarize(self, rows, config):
        return {
            'rows': len(rows),
            'max_identity_error': max(
                (abs(r['mutual_information'] - r['identity_value']) for r in rows), default=0.0
            ),
        }
