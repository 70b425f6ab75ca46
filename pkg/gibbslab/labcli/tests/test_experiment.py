# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest

import numpy as np

from hamcrest import (
    assert_that,
    calling,
    close_to,
    contains_exactly,
    equal_to,
    raises,
)

from ...exceptions import ConfigError
from ..experiment import (
    BaseExperiment,
    RunContext,
    build_hamiltonian,
    chain_model,
    critical_beta,
    inverse_temperatures,
    point_generators,
)


class TestPointGenerators(unittest.TestCase):
    def test_same_seed_same_streams(self):
        first = [g.random(3) for g in point_generators(7, 4)]
        second = [g.random(3) for g in point_generators(7, 4)]

        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)

    def test_points_get_independent_streams(self):
        streams = [g.random() for g in point_generators(7, 3)]

        assert_that(len(set(streams)), equal_to(3))

    def test_streams_do_not_depend_on_the_grid_size(self):
        small = point_generators(3, 2)[0].random()
        large = point_generators(3, 10)[0].random()

        assert_that(small, equal_to(large))


class TestRunContext(unittest.TestCase):
    def test_warn_keeps_the_formatted_message(self):
        context = RunContext({'grid': {}}, np.random.default_rng(0))

        context.warn('off by %.2f at %s', 0.25, 'beta=1')

        assert_that(context.warnings, contains_exactly('off by 0.25 at beta=1'))

    def test_grid_defaults_to_empty(self):
        context = RunContext({}, np.random.default_rng(0))

        assert_that(context.grid, equal_to({}))


class TestBuildHamiltonian(unittest.TestCase):
    def test_size_from_the_lattice(self):
        H = build_hamiltonian(chain_model('heisenberg', {'J': 1.0}, 4))

        assert_that(H.graph.n_sites, equal_to(4))

    def test_explicit_size_wins(self):
        H = build_hamiltonian(chain_model('heisenberg', {'J': 1.0}, 4), 6)

        assert_that(H.graph.n_sites, equal_to(6))

    def test_square_lattice(self):
        model = {'name': 'ising', 'couplings': {'J_zz': 1.0}, 'lattice': {'n': 3, 'D': 2}}

        H = build_hamiltonian(model)

        assert_that(H.graph.n_sites, equal_to(9))
        assert_that(H.graph.spatial_dim, equal_to(2))

    def test_missing_size(self):
        model = {'name': 'ising', 'couplings': {'J_zz': 1.0}, 'lattice': {'n': None}}

        assert_that(calling(build_hamiltonian).with_args(model), raises(ConfigError))


class TestInverseTemperatures(unittest.TestCase):
    def setUp(self):
        self.H = build_hamiltonian(chain_model('transverse_ising', {'J_zz': 1.0, 'h_x': 1.0}, 4))
        self.bounds = {'L0': 1, 'alpha': None}

    def test_explicit_values(self):
        assert_that(
            inverse_temperatures({'beta': [0.1, 0.2]}, self.H, self.bounds), contains_exactly(0.1, 0.2)
        )

    def test_fractions_of_the_critical_value(self):
        beta_star = critical_beta(self.H, self.bounds)

        betas = inverse_temperatures({'beta_fraction': [0.25, 0.5]}, self.H, self.bounds)

        assert_that(betas[0], close_to(0.25 * beta_star, 1e-15))
        assert_that(betas[1], close_to(0.5 * beta_star, 1e-15))

    def test_half_the_critical_value_by_default(self):
        betas = inverse_temperatures({}, self.H, self.bounds)

        assert_that(betas, contains_exactly(close_to(0.5 * critical_beta(self.H, self.bounds), 1e-15)))


class TestBaseExperiment(unittest.TestCase):
    def test_model_block_is_required(self):
        experiment = BaseExperiment()

        assert_that(calling(experiment.model).with_args({}), raises(ConfigError))

    def test_default_summary(self):
        assert_that(BaseExperiment().summarize([{}, {}], {}), equal_to({'rows': 2}))

    def test_points_must_be_provided(self):
        assert_that(
            calling(BaseExperiment().grid_points).with_args({}), raises(NotImplementedError)
        )
        assert_that(
            calling(BaseExperiment().run_point).with_args({}, None), raises(NotImplementedError)
        )
