# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import itertools
import logging

from ...correlations import xi_of_beta
from ...densequantum import DenseOperator, gibbs_state, partial_trace, trace_distance
from ...hamiltonian import (
    LocalHamiltonian,
    LocalTerm,
    assemble_dense,
    combine,
    interaction_strength,
    random_hermitian,
    random_local_hamiltonian,
)
from ...lattice import build_chain, growth_constant_bound
from ...stability import (
    InterpolationPath,
    locality_of_temperature_experiment,
    perturbation_lhs,
    perturbation_rhs,
    thermal_lr_bound,
)
from ..experiment import BaseExperiment, build_hamiltonian, chain_model, inverse_temperatures

logger = logging.getLogger(__name__)

MIN_ABS_BETA = 1e-3


def _alpha(bounds, graph):
    if bounds.get('alpha') is not None:
        return bounds['alpha']
    return growth_constant_bound(max(graph.spatial_dim, 1))


class PerturbationIdentity(BaseExperiment):
    name = 'perturbation_identity'
    anchor = 'perturbation formula for thermal expectation values'
    description = 'Tr[A g0] - Tr[A g] against the double covariance integral on random instances'
    columns = (
        'instance',
        'n',
        'beta',
        'lhs',
        'rhs',
        'abs_diff',
        'quadrature_error',
        's_nodes',
        'regime_flag',
    )
    defaults = {'grid': {'instances': 50, 'sites': [2, 3]}}

    def grid_points(self, config):
        sizes = config['grid']['sites']
        return [
            {'instance': i, 'n': sizes[i % len(sizes)]}
            for i in range(config['grid']['instances'])
        ]

    def run_point(self, point, context):
        rng = context.rng
        graph = build_chain(point['n'])
        H0 = assemble_dense(random_local_hamiltonian(graph, rng))
        dims, sites = H0.dims, H0.sites
        V = random_hermitian(H0.dim, rng, norm=rng.uniform(0.1, 1.0))
        H = DenseOperator(H0.matrix + V, dims, hermitian=True, sites=sites)
        A = DenseOperator(random_hermitian(H0.dim, rng, norm=1.0), dims, hermitian=True, sites=sites)
        beta = 0.0
        while abs(beta) < MIN_ABS_BETA:
            beta = rng.uniform(-1.0, 1.0)
        lhs = perturbation_lhs(H0, H, A, beta)
        estimate = perturbation_rhs(
            InterpolationPath(H0, H), A, beta, tolerance=context.tolerances['quadrature']
        )
        difference = abs(lhs - estimate.value)
        passed = difference <= context.tolerances['identity']
        if not passed:
            context.warn('perturbation identity off by %.3e on instance %s', difference, point['instance'])
        return [
            {
                'instance': point['instance'],
                'n': point['n'],
                'beta': beta,
                'lhs': lhs,
                'rhs': estimate.value,
                'abs_diff': difference,
                'quadrature_error': estimate.error,
                's_nodes': estimate.nodes,
                'regime_flag': 'pass' if passed else 'fail',
            }
        ]

    def summarize(self, rows, config):
        return {
            'rows': len(rows),
            'max_abs_diff': max((r['abs_diff'] for r in rows), default=0.0),
            'failures': sum(r['regime_flag'] == 'fail' for r in rows),
        }


class ThermalLiebRobinson(BaseExperiment):
    name = 'thermal_lr'
    anchor = 'thermal Lieb-Robinson stability'
    description = 'change of the reduced Gibbs state on S under a field at distance d, against the bound'
    columns = ('beta', 'distance', 'trace_distance', 'bound', 'binding', 'regime_flag')
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 9),
        'grid': {'beta_fraction': [0.5], 'distance': [1, 2, 3, 4, 5]},
    }

    def grid_points(self, config):
        H = build_hamiltonian(self.model(config))
        betas = inverse_temperatures(config['grid'], H, config['bounds'])
        distances = [d for d in config['grid']['distance'] if d < H.graph.n_sites]
        return [
            {'hamiltonian': H, 'beta': beta, 'distance': d}
            for beta, d in itertools.product(betas, distances)
        ]

    def run_point(self, point, context):
        H, beta, d = point['hamiltonian'], point['beta'], point['distance']
        graph = H.graph
        S = {graph.vertices[0]}
        site = graph.vertices[d]
        field = LocalTerm((site,), random_hermitian(H.local_dim, context.rng, norm=1.0), H.local_dim)
        perturbed = combine(H, LocalHamiltonian(graph, [field], H.local_dim))
        J = max(interaction_strength(H), interaction_strength(perturbed), field.norm)
        xi = xi_of_beta(_alpha(context.bounds, graph), J, beta)
        bound = thermal_lr_bound(
            graph, S, {site}, xi, beta, J, context.bounds['L0'], allow_non_binding=True
        )
        reduced = partial_trace(gibbs_state(assemble_dense(H), beta), S)
        reduced_perturbed = partial_trace(gibbs_state(assemble_dense(perturbed), beta), S)
        distance = trace_distance(reduced, reduced_perturbed)
        if not bound.binding:
            flag = 'non-binding'
        elif distance <= bound.value + context.tolerances['numerical_floor']:
            flag = 'binding'
        else:
            flag = 'violation'
            context.warn('thermal Lieb-Robinson bound violated at distance %s', d)
        return [
            {
                'beta': beta,
                'distance': d,
                'trace_distance': distance,
                'bound': bound.value,
                'binding': bound.binding,
                'regime_flag': flag,
            }
        ]

    def summarize(self, rows, config):
        return {'rows': len(rows), 'violations': sum(r['regime_flag'] == 'violation' for r in rows)}


class LocalTemperature(BaseExperiment):
    name = 'local_temperature'
    anchor = 'locality of temperature'
    description = 'reduced Gibbs state of a buffered region against the global one, per buffer radius'
    columns = (
        'beta',
        'r',
        'ring_size',
        'perturbation_size',
        'J',
        'distance_S_E',
        'trace_distance',
        'bound',
        'binding',
        'trivial',
        'regime_flag',
    )
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 13),
        'grid': {'beta_fraction': [0.5], 'r': [1, 2, 3, 4, 5, 6]},
    }

    def grid_points(self, config):
        H = build_hamiltonian(self.model(config))
        betas = inverse_temperatures(config['grid'], H, config['bounds'])
        return [{'hamiltonian': H, 'beta': beta} for beta in betas]

    def run_point(self, point, context):
        H, beta = point['hamiltonian'], point['beta']
        vertices = H.graph.vertices
        S = {vertices[len(vertices) // 2]}
        floor = context.tolerances['numerical_floor']
        rows = []
        results = locality_of_temperature_experiment(
            H, S, context.grid['r'], beta, context.bounds['L0'], context.bounds['alpha']
        )
        for result in results:
            if result.trivial:
                flag = 'trivial'
            elif not result.binding:
                flag = 'non-binding'
            elif result.trace_distance <= result.bound + floor:
                flag = 'binding'
            else:
                flag = 'violation'
                context.warn('locality of temperature bound violated at r=%s', result.r)
            rows.append(
                {
                    'beta': beta,
                    'r': result.r,
                    'ring_size': result.ring_size,
                    'perturbation_size': result.perturbation_size,
                    'J': result.J,
                    'distance_S_E': result.distance_S_E,
                    'trace_distance': result.trace_distance,
                    'bound': result.bound,
                    'binding': result.binding,
                    'trivial': result.trivial,
                    'regime_flag': flag,
                }
            )
        return rows

    def summarize(self, rows, config):
        floor = config['tolerances']['numerical_floor']
        monotone = True
        by_beta = {}
        for row in rows:
            by_beta.setdefault(row['beta'], []).append(row['trace_distance'])
        for distances in by_beta.values():
            monotone = monotone and all(b <= a + floor for a, b in zip(distances, distances[1:]))
        return {
            'rows': len(rows),
            'violations': sum(r['regime_flag'] == 'violation' for r in rows),
            'weakly_decreasing': monotone,
        }
