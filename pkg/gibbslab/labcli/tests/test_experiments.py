# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import copy
import unittest

from hamcrest import (
    assert_that,
    contains_exactly,
    equal_to,
    greater_than,
    has_entries,
    has_key,
    has_length,
    is_not,
    less_than,
    only_contains,
)

from ..experiment import RunContext, point_generators
from ..runner import create_registry, resolve_config


def _run(name, n=None, **raw):
    raw = dict({'experiment': name, 'bounds': {}, 'tolerances': {}, 'output': {}}, **raw)
    if n is not None:
        raw['model'] = _resized_default_model(name, n)
    experiment, config = resolve_config(raw)
    points = experiment.grid_points(config)
    rows = []
    for point, rng in zip(points, point_generators(config['seed'], len(points))):
        rows.extend(experiment.run_point(point, RunContext(config, rng)))
    for row in rows:
        assert_that(set(experiment.columns) - set(row), equal_to(set()))
    return rows, experiment.summarize(rows, config)


def _resized_default_model(name, n):
    model = copy.deepcopy(create_registry().get_experiment(name).defaults['model'])
    model['lattice']['n'] = n
    return model


class TestClusteringExperiments(unittest.TestCase):
    def test_clustering_sweep(self):
        rows, summary = _run(
            'clustering_sweep', n=4, grid={'tau': [0.0, 0.5], 'axes': ['z']}
        )

        assert_that(rows, is_not(has_length(0)))
        assert_that(summary, has_entries(violations=0))

    def test_ground_state_decay(self):
        rows, _ = _run('ground_state_decay', grid={'n': [6], 'axes': ['z']})

        assert_that([r['distance'] for r in rows], contains_exactly(1, 2, 3, 4, 5))
        assert_that([r['gap'] for r in rows], only_contains(greater_than(0.0)))

    def test_gap_scaling(self):
        rows, _ = _run('gap_scaling', grid={'n': [4, 6, 8]})

        gaps = [r['gap'] for r in rows]
        assert_that(gaps[1], less_than(gaps[0]))
        assert_that(gaps[2], less_than(gaps[1]))

    def test_mutual_information_area_law(self):
        rows, summary = _run('mutual_information_area_law', n=4, grid={'beta': [0.5]})

        assert_that(rows[0], has_entries(region_size=2, regime_flag='within-bound'))
        assert_that(summary['max_identity_error'], less_than(1e-8))


class TestStabilityExperiments(unittest.TestCase):
    def test_perturbation_identity(self):
        rows, summary = _run('perturbation_identity', grid={'instances': 2, 'sites': [2]})

        assert_that(rows, has_length(2))
        assert_that(summary, has_entries(failures=0))

    def test_thermal_lr(self):
        rows, summary = _run('thermal_lr', n=5, grid={'distance': [1, 2, 3, 7]})

        assert_that([r['distance'] for r in rows], contains_exactly(1, 2, 3))
        assert_that(summary, has_entries(violations=0))

    def test_local_temperature(self):
        rows, summary = _run('local_temperature', n=7, grid={'r': [1, 2]})

        assert_that(rows, has_length(2))
        assert_that(summary, has_entries(violations=0))
        assert_that({r['J'] for r in rows}, has_length(1))


class TestClusterExpansionExperiments(unittest.TestCase):
    def test_cluster_truncation(self):
        rows, _ = _run(
            'cluster_truncation', n=3, grid={'beta': [0.2], 'L': [2, 4], 'j_max': [14]}
        )

        truncated, complete = rows
        assert_that(truncated['regime_flag'], equal_to('truncated'))
        assert_that(complete['regime_flag'], equal_to('all-clusters'))
        assert_that(complete['trace_distance'], less_than(1e-8))
        assert_that(complete['mpo_distance'], less_than(1e-8))
        assert_that(complete['dropped'], equal_to(0))

    def test_mpo_positivity(self):
        rows, _ = _run('mpo_positivity', n=4, grid={'j_max': [8], 'max_bond': [4]})

        assert_that(rows[0], has_entries(regime_flag='positive', max_bond=4))


class TestStatisticalMechanicsExperiments(unittest.TestCase):
    def test_energy_gaussianity(self):
        rows, summary = _run('energy_gaussianity', grid={'n': [4, 6, 8, 10]})

        assert_that([r['levels'] for r in rows], contains_exactly(4, 6, 8, 10))
        assert_that(summary, has_entries(strictly_decreasing=True))
        assert_that(summary, has_key('power'))

    def test_heat_capacity(self):
        rows, summary = _run('heat_capacity', grid={'T': [1.0, 2.0]})

        assert_that(rows, has_length(6))
        assert_that([r['regime_flag'] for r in rows], only_contains(equal_to('consistent')))

    def test_eoe_sweep(self):
        rows, summary = _run('eoe_sweep', grid={'n': [6], 'l': [1]})

        statistics = [r['statistic'] for r in rows]
        assert_that(statistics[:3], contains_exactly('mean_distance', 'relative_entropy_bits', 'window_size'))
        assert_that(statistics.count('translate_distance'), equal_to(6))
        assert_that(summary['mean_distances'], has_length(1))
