# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import itertools

import numpy as np
import scipy.linalg

from ...clusterexp import (
    mpo_from_truncation,
    order_truncation_bound,
    squaring_with_error,
    truncated_series_dense,
)
from ...clusterexp.series import letters
from ...densequantum import gibbs_state, trace_norm
from ...hamiltonian import assemble_dense, interaction_strength
from ..experiment import BaseExperiment, build_hamiltonian, chain_model


def _exponential(dense, beta):
    '''e^{-beta H} through the eigenbasis of H.'''
    energies, basis = dense.eigh
    return basis.assemble(np.exp(-beta * energies), dense.dims, dense.sites).matrix


class ClusterTruncation(BaseExperiment):
    name = 'cluster_truncation'
    anchor = 'truncated cluster expansion'
    description = 'error of the cluster-size truncated series of e^{-beta H} and of its MPO form'
    columns = (
        'beta',
        'L',
        'j_max',
        'retained',
        'dropped',
        'trace_distance',
        'order_bound',
        'mpo_distance',
        'max_bond_dim',
        'regime_flag',
    )
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 4),
        'grid': {'beta': [0.2], 'L': [2, 3, 4, 5], 'j_max': [20]},
    }

    def grid_points(self, config):
        H = build_hamiltonian(self.model(config))
        grid = config['grid']
        return [
            {'hamiltonian': H, 'beta': beta, 'L': L, 'j_max': j_max}
            for beta, L, j_max in itertools.product(grid['beta'], grid['L'], grid['j_max'])
        ]

    def run_point(self, point, context):
        H, beta, L, j_max = point['hamiltonian'], point['beta'], point['L'], point['j_max']
        dense = assemble_dense(H)
        series = truncated_series_dense(H, beta, L, j_max)
        difference = series.operator.matrix - _exponential(dense, beta)
        row = {
            'beta': beta,
            'L': L,
            'j_max': j_max,
            'retained': series.retained,
            'dropped': series.dropped,
            'trace_distance': trace_norm(difference),
            'order_bound': order_truncation_bound(
                beta, interaction_strength(H), len(letters(H)), j_max
            ),
            'mpo_distance': None,
            'max_bond_dim': None,
            'regime_flag': 'all-clusters' if L > H.graph.n_sites else 'truncated',
        }
        if H.graph.is_chain():
            mpo = mpo_from_truncation(H, beta, L, j_max)
            row['mpo_distance'] = trace_norm(mpo.to_dense() - series.operator.matrix)
            row['max_bond_dim'] = mpo.max_bond_dim
        return [row]


class MPOPositivity(BaseExperiment):
    name = 'mpo_positivity'
    anchor = 'positive MPO approximation by squaring'
    description = 'spectrum and accuracy of the squared half-temperature MPO per bond cap'
    columns = (
        'beta',
        'L',
        'j_max',
        'max_bond',
        'min_eigenvalue',
        'relative_min_eigenvalue',
        'compression_error',
        'max_bond_dim',
        'gibbs_distance',
        'regime_flag',
    )
    defaults = {
        'model': chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 6),
        'grid': {'beta': [0.5], 'L': [3], 'j_max': [12], 'max_bond': [2, 4, 8, 16]},
    }

    def grid_points(self, config):
        H = build_hamiltonian(self.model(config))
        grid = config['grid']
        return [
            {'hamiltonian': H, 'beta': beta, 'L': L, 'j_max': j_max, 'max_bond': max_bond}
            for beta, L, j_max, max_bond in itertools.product(
                grid['beta'], grid['L'], grid['j_max'], grid['max_bond']
            )
        ]

    def run_point(self, point, context):
        H, beta = point['hamiltonian'], point['beta']
        compression = squaring_with_error(H, beta, point['L'], point['j_max'], point['max_bond'])
        square = compression.mpo.to_dense()
        square = (square + square.conj().T) / 2
        eigenvalues = scipy.linalg.eigvalsh(square)
        trace = float(np.sum(eigenvalues))
        relative = float(eigenvalues[0]) / trace
        thermal = gibbs_state(assemble_dense(H), beta)
        flag = 'positive' if relative >= -context.tolerances['numerical_floor'] else 'negative'
        if flag == 'negative':
            context.warn('squared MPO has eigenvalue %.3e at bond cap %s', eigenvalues[0], point['max_bond'])
        return [
            {
                'beta': beta,
                'L': point['L'],
                'j_max': point['j_max'],
                'max_bond': point['max_bond'],
                'min_eigenvalue': float(eigenvalues[0]),
                'relative_min_eigenvalue': relative,
                'compression_error': compression.error,
                'max_bond_dim': compression.mpo.max_bond_dim,
                'gibbs_distance': trace_norm(square / trace - thermal.matrix),
                'regime_flag': flag,
            }
        ]
