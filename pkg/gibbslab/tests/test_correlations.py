# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import math
import unittest

import numpy as np
import scipy.linalg

from hamcrest import (
    assert_that,
    calling,
    close_to,
    equal_to,
    greater_than,
    has_length,
    is_,
    less_than,
    less_than_or_equal_to,
    none,
    not_none,
    raises,
)

from ..correlations import (
    ClusteringBoundParams,
    beta_star,
    clustering_bound,
    covariance,
    covariance_sweep,
    duhamel_covariance,
    exponential_bound,
    fit_decay,
    fit_gap_scaling,
    generalized_covariance,
    ground_state_covariance_experiment,
    spectral_gap,
    thermal_mutual_information,
    xi_of_beta,
)
from ..densequantum import DenseOperator, DensityMatrix, gibbs_state
from ..exceptions import (
    DegenerateGroundStateError,
    DomainError,
    InsufficientDataError,
    NonBindingBoundError,
    RegimeError,
)
from ..hamiltonian import assemble_dense, build_model, pauli_operator, random_hermitian
from ..lattice import build_chain

ALPHA_1D = 2 * math.e


def _transverse_ising(n, h=1.0):
    return build_model('transverse_ising', build_chain(n), {'J_zz': 1.0, 'h_x': h})


def _power(rho, tau):
    values, vectors = np.linalg.eigh(rho)
    return (vectors * np.clip(values, 0, None) ** tau) @ vectors.conj().T


class TestGeneralizedCovariance(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(21)
        vectors = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        matrix = vectors @ vectors.conj().T
        self.matrix = matrix / np.trace(matrix).real
        self.rho = DensityMatrix(self.matrix, (2, 2))
        self.A = DenseOperator(random_hermitian(4, rng), (2, 2))
        self.B = DenseOperator(random_hermitian(4, rng), (2, 2))

    def test_matches_explicit_powers(self):
        tau = 0.3
        expected = np.trace(_power(self.matrix, tau) @ self.A.matrix @ _power(self.matrix, 1 - tau) @ self.B.matrix)
        expected -= np.trace(self.matrix @ self.A.matrix) * np.trace(self.matrix @ self.B.matrix)

        value = generalized_covariance(self.rho, self.A, self.B, tau)

        assert_that(abs(value - expected), less_than(1e-12))

    def test_swapping_operators_mirrors_tau(self):
        for tau in (0.0, 0.25, 0.8):
            assert_that(
                abs(
                    generalized_covariance(self.rho, self.A, self.B, tau)
                    - generalized_covariance(self.rho, self.B, self.A, 1 - tau)
                ),
                less_than(1e-12),
            )

    def test_standard_covariance(self):
        expected = np.trace(self.matrix @ self.A.matrix @ self.B.matrix) - np.trace(
            self.matrix @ self.A.matrix
        ) * np.trace(self.matrix @ self.B.matrix)

        assert_that(abs(covariance(self.rho, self.A, self.B) - expected), less_than(1e-12))

    def test_rank_deficient_endpoints(self):
        rho = DensityMatrix.pure(np.array([1.0, 1.0, 0.0, 0.0]), (2, 2))
        expected = np.trace(rho.matrix @ self.A.matrix @ self.B.matrix) - np.trace(
            rho.matrix @ self.A.matrix
        ) * np.trace(rho.matrix @ self.B.matrix)

        assert_that(abs(generalized_covariance(rho, self.A, self.B, 1) - expected), less_than(1e-12))

    def test_tau_range(self):
        assert_that(
            calling(generalized_covariance).with_args(self.rho, self.A, self.B, 1.2),
            raises(DomainError),
        )

    def test_duhamel_covariance_is_real_and_converged(self):
        estimate = duhamel_covariance(self.rho, self.A, self.B)

        assert_that(estimate.error, less_than(1e-8))
        assert_that(estimate.nodes, equal_to(32))


class TestCriticalTemperature(unittest.TestCase):
    def test_beta_star_in_one_dimension(self):
        assert_that(beta_star(ALPHA_1D, 1.0), close_to(0.073667, 1e-6))

    def test_xi_vanishes_at_infinite_temperature(self):
        assert_that(xi_of_beta(ALPHA_1D, 1.0, 0.0), equal_to(0.0))

    def test_xi_grows_towards_beta_star(self):
        critical = beta_star(ALPHA_1D, 1.0)

        assert_that(
            xi_of_beta(ALPHA_1D, 1.0, 0.9 * critical),
            greater_than(xi_of_beta(ALPHA_1D, 1.0, 0.5 * critical)),
        )

    def test_outside_the_high_temperature_regime(self):
        critical = beta_star(ALPHA_1D, 1.0)

        assert_that(calling(xi_of_beta).with_args(ALPHA_1D, 1.0, critical), raises(RegimeError))

    def test_params_from_hamiltonian(self):
        params = ClusteringBoundParams.for_hamiltonian(_transverse_ising(4), 0.01)

        assert_that(params.alpha, close_to(ALPHA_1D, 1e-12))
        assert_that(params.J, greater_than(1.0))
        assert_that(params.beta_star, close_to(beta_star(ALPHA_1D, params.J), 1e-15))

    def test_invalid_params(self):
        assert_that(calling(ClusteringBoundParams).with_args(0.0, 1.0, 0.1), raises(DomainError))


class TestClusteringBound(unittest.TestCase):
    def setUp(self):
        self.graph = build_chain(6)
        self.params = ClusteringBoundParams(ALPHA_1D, 1.0, 0.03, L0=2)

    def test_decays_with_distance(self):
        A, B, C = pauli_operator(1, 'z'), pauli_operator(3, 'z'), pauli_operator(5, 'z')

        near = clustering_bound(self.params, A, B, 2, self.graph)
        far = clustering_bound(self.params, A, C, 4, self.graph)

        assert_that(far.value, less_than(near.value))
        assert_that(near.binding, is_(True))

    def test_below_minimal_distance(self):
        A, B = pauli_operator(1, 'z'), pauli_operator(2, 'z')

        assert_that(
            calling(clustering_bound).with_args(self.params, A, B, 1, self.graph),
            raises(NonBindingBoundError),
        )
        result = clustering_bound(self.params, A, B, 1, self.graph, allow_non_binding=True)
        assert_that(result.binding, is_(False))

    def test_exponential_bound_at_zero_length(self):
        assert_that(exponential_bound(1.0, 0.0, 3), equal_to(0.0))
        assert_that(exponential_bound(1.0, 0.0, 0), close_to(4 / math.log(3), 1e-12))


class TestCovarianceSweep(unittest.TestCase):
    def test_bound_holds_at_high_temperature(self):
        H = _transverse_ising(5)
        params = ClusteringBoundParams.for_hamiltonian(H, 0.0)
        beta = 0.5 * params.beta_star
        params = ClusteringBoundParams.for_hamiltonian(H, beta)

        rows = covariance_sweep(H, beta, [0.0, 0.5, 1.0], params=params, workers=2)

        assert_that(rows, has_length(10 * 4 * 3))
        for row in rows:
            if row.binding:
                assert_that(row.cov_abs, less_than_or_equal_to(row.bound + 1e-12))

    def test_matches_direct_covariance(self):
        H = _transverse_ising(3)
        beta = 0.02
        rho = gibbs_state(assemble_dense(H), beta)

        rows = covariance_sweep(H, beta, [0.5], axes=('z',))

        row = [r for r in rows if (r.site_a, r.site_b) == (1, 3)][0]
        expected = generalized_covariance(
            rho, pauli_operator(1, 'z').embed(H.graph), pauli_operator(3, 'z').embed(H.graph), 0.5
        )
        assert_that(row.cov_abs, close_to(abs(expected), 1e-12))
        assert_that(row.distance, equal_to(2))


class TestFitDecay(unittest.TestCase):
    def test_recovers_correlation_length(self):
        points = [(d, 3.0 * math.exp(-d / 1.7)) for d in range(1, 6)]

        fit = fit_decay(points)

        assert_that(fit.xi_fit, close_to(1.7, 1e-10))
        assert_that(fit.residual, less_than(1e-10))

    def test_joint_fit_over_sizes(self):
        points = [
            (n, d, n ** -0.5 * math.exp(-d / 2.0)) for n in (6, 8, 10) for d in (1, 2, 3)
        ]

        fit = fit_decay(points)

        assert_that(fit.xi_fit, close_to(2.0, 1e-9))
        assert_that(fit.z_fit, close_to(-0.5, 1e-9))

    def test_points_below_the_floor_are_dropped(self):
        points = [(1, 0.1), (2, 0.01), (3, 1e-20)]

        assert_that(calling(fit_decay).with_args(points), raises(InsufficientDataError))

    def test_growing_correlations(self):
        points = [(1, 0.1), (2, 0.2), (3, 0.4)]

        assert_that(calling(fit_decay).with_args(points), raises(InsufficientDataError))


class TestGroundState(unittest.TestCase):
    def test_gapped_chain(self):
        H = _transverse_ising(6, h=2.0)
        pairs = [(pauli_operator(1, 'z'), pauli_operator(v, 'z')) for v in range(2, 7)]

        result = ground_state_covariance_experiment(H, pairs)

        assert_that(result.gap, greater_than(1.0))
        assert_that(result.covariances, has_length(5))
        assert_that(result.fit, not_none())
        assert_that(result.covariances[-1][1], less_than(result.covariances[0][1]))

    def test_degenerate_ground_state(self):
        H = build_model('ising', build_chain(3), {'J_zz': 1.0})

        assert_that(
            calling(ground_state_covariance_experiment).with_args(H, []),
            raises(DegenerateGroundStateError),
        )

    def test_no_fit_without_enough_pairs(self):
        H = _transverse_ising(3, h=2.0)

        result = ground_state_covariance_experiment(H, [(pauli_operator(1, 'z'), pauli_operator(2, 'z'))])

        assert_that(result.fit, none())


class TestGapScaling(unittest.TestCase):
    def test_paramagnet_gap(self):
        H = build_model('transverse_ising', build_chain(4), {'J_zz': 0.0, 'h_x': 1.0})

        assert_that(spectral_gap(H), close_to(2.0, 1e-10))

    def test_power_law(self):
        sizes = [4, 8, 16]

        fit = fit_gap_scaling(sizes, [3.0 * n ** -1.0 for n in sizes])

        assert_that(fit.exponent, close_to(1.0, 1e-10))
        assert_that(fit.prefactor, close_to(3.0, 1e-9))

    def test_needs_two_points(self):
        assert_that(calling(fit_gap_scaling).with_args([4], [0.5]), raises(InsufficientDataError))


class TestThermalMutualInformation(unittest.TestCase):
    def test_identity_and_area_law(self):
        H = build_model('heisenberg', build_chain(4), {'J': 1.0})

        result = thermal_mutual_information(H, {1, 2}, 0.7)

        assert_that(result.cut_terms, equal_to(1))
        assert_that(result.identity_value, close_to(result.mutual_information, 1e-9))
        assert_that(result.mutual_information, less_than_or_equal_to(result.bound + 1e-12))
        assert_that(result.area_law_bound, close_to(2 * 0.7 * 3 / math.log(2), 1e-9))

    def test_infinite_temperature(self):
        H = build_model('heisenberg', build_chain(4), {'J': 1.0})

        result = thermal_mutual_information(H, {1}, 0.0)

        assert_that(result.mutual_information, close_to(0.0, 1e-12))

    def test_cut_must_split(self):
        H = build_model('heisenberg', build_chain(2), {'J': 1.0})

        assert_that(
            calling(thermal_mutual_information).with_args(H, {1, 2}, 0.5), raises(DomainError)
        )


class TestMatrixExponentialCrossCheck(unittest.TestCase):
    def test_gibbs_covariance_from_expm(self):
        H = _transverse_ising(3)
        dense = assemble_dense(H)
        beta = 0.04
        expected_rho = scipy.linalg.expm(-beta * dense.matrix)
        expected_rho /= np.trace(expected_rho)
        A = pauli_operator(1, 'x').embed(H.graph)
        B = pauli_operator(2, 'x').embed(H.graph)
        expected = np.trace(expected_rho @ A.matrix @ B.matrix) - np.trace(
            expected_rho @ A.matrix
        ) * np.trace(expected_rho @ B.matrix)

        value = covariance(gibbs_state(dense, beta), A, B)

        assert_that(abs(value - expected), less_than(1e-12))
