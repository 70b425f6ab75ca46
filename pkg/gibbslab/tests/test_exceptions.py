# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest

from hamcrest import assert_that, equal_to, has_entries, instance_of

from ..exceptions import (
    EXIT_CONFIG,
    EXIT_CONVERGENCE,
    EXIT_REGIME,
    EXIT_RESOURCE,
    ConfigError,
    ConvergenceError,
    DomainError,
    EmptyWindowError,
    NonBindingBoundError,
    RegimeError,
    ResourceError,
    UnknownExperimentError,
    handle_lab_exception,
)


class TestExitCodes(unittest.TestCase):
    def test_each_family_has_its_exit_code(self):
        assert_that(ConvergenceError('no', 1.0, 0.1).exit_code, equal_to(EXIT_CONVERGENCE))
        assert_that(ConfigError('bad').exit_code, equal_to(EXIT_CONFIG))
        assert_that(DomainError('bad').exit_code, equal_to(EXIT_CONFIG))
        assert_that(NonBindingBoundError('near').exit_code, equal_to(EXIT_REGIME))
        assert_that(ResourceError('limit', 4, 8).exit_code, equal_to(EXIT_RESOURCE))

    def test_domain_errors_are_value_errors(self):
        assert_that(DomainError('bad'), instance_of(ValueError))

    def test_non_binding_is_a_regime_error(self):
        assert_that(NonBindingBoundError('near'), instance_of(RegimeError))


class TestErrorDetails(unittest.TestCase):
    def test_as_dict(self):
        error = ResourceError('GIBBSLAB_MAX_DIMENSION', 16, 32)

        assert_that(
            error.as_dict(),
            has_entries(
                error_id='resource-exceeded',
                exit_code=EXIT_RESOURCE,
                details={'limit_name': 'GIBBSLAB_MAX_DIMENSION', 'limit': 16, 'requested': 32},
            ),
        )

    def test_unknown_experiment_lists_valid_names(self):
        error = UnknownExperimentError('nope', ['b', 'a'])

        assert_that(error.details, equal_to({'name': 'nope', 'valid_names': ['a', 'b']}))
        assert_that(error.message, equal_to('Unknown experiment "nope"; valid experiments are: a, b'))

    def test_empty_window_keeps_the_nearest_level(self):
        error = EmptyWindowError(1.0, 0.1, 2.0)

        assert_that(error.nearest, equal_to(2.0))

    def test_convergence_keeps_the_best_estimate(self):
        error = ConvergenceError('no', 0.5, 1e-3)

        assert_that(error.best_estimate, equal_to(0.5))
        assert_that(error.error_estimate, equal_to(1e-3))


class TestHandleLabException(unittest.TestCase):
    def test_returns_the_exit_code(self):
        @handle_lab_exception
        def run():
            raise RegimeError('too cold')

        assert_that(run(), equal_to(EXIT_REGIME))

    def test_results_pass_through(self):
        @handle_lab_exception
        def run():
            return 0

        assert_that(run(), equal_to(0))

    def test_other_exceptions_propagate(self):
        @handle_lab_exception
        def run():
            raise KeyError('x')

        self.assertRaises(KeyError, run)
