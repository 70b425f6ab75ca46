# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import itertools
import logging
import math

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from .densequantum import (
    BITS_TO_NATS,
    ZERO_EIGENVALUE,
    DensityMatrix,
    as_state,
    expectation,
    gibbs_state,
    mutual_information,
    partial_trace,
    relative_entropy,
    spectral_norm,
    tensor_product,
)
from .exceptions import (
    DegenerateGroundStateError,
    DomainError,
    InsufficientDataError,
    NonBindingBoundError,
    RegimeError,
)
from .hamiltonian import (
    LocalHamiltonian,
    assemble_dense,
    interaction_strength,
    pauli_operator,
)
from .lattice import boundary, graph_distance, growth_constant_bound
from .quadrature import integrate_with_doubling

logger = logging.getLogger(__name__)

COVARIANCE_FLOOR = 1e-14
GAP_TOLERANCE = 1e-10
DEFAULT_DUHAMEL_NODES = 16
DEFAULT_DUHAMEL_TOLERANCE = 1e-9


def _check_same_space(rho, *operators):
    for operator in operators:
        if operator.dims != rho.dims:
            raise DomainError(
                'Operator on {} does not act on the state space {}'.format(operator.dims, rho.dims)
            )


class CovarianceTerms:
    '''Eigenbasis data of rho shared by all tau values for one operator pair.'''

    def __init__(self, rho, A, B):
        rho = as_state(rho)
        _check_same_space(rho, A, B)
        self.rho = rho
        self.A = A
        self.B = B
        a = rho.basis.matrix_elements(A)
        b = rho.basis.matrix_elements(B)
        self.products = a * b.T
        self.populations = np.where(rho.populations > ZERO_EIGENVALUE, rho.populations, 0.0)
        self.means = (
            np.dot(rho.populations, np.diagonal(a)),
            np.dot(rho.populations, np.diagonal(b)),
        )
        self.full_rank = rho.basis.rank == rho.dim and bool(np.all(self.populations > 0))

    def _endpoint(self, tau):
        # rho^0 is the identity, kernel included
        basis = self.rho.basis
        if tau == 1:
            left, right = self.A.adjoint(), self.B
        else:
            left, right = self.B.adjoint(), self.A
        values = np.einsum('ij,ij->j', basis.applied(left).conj(), basis.applied(right))
        return complex(np.dot(self.rho.populations, values))

    def correlator(self, tau):
        '''Tr(rho^tau A rho^(1-tau) B).'''
        if tau in (0, 1) and not self.full_rank:
            return self._endpoint(tau)
        left = self.populations ** tau
        right = self.populations ** (1 - tau)
        return complex(left @ self.products @ right)

    def covariance(self, tau):
        return self.correlator(tau) - self.means[0] * self.means[1]


def generalized_covariance(rho, A, B, tau):
    '''Tr(rho^tau A rho^(1-tau) B) - Tr(rho A) Tr(rho B), as a complex number.'''
    if not 0 <= tau <= 1:
        raise DomainError('tau must lie in [0, 1], got {}'.format(tau))
    return CovarianceTerms(rho, A, B).covariance(tau)


def covariance(rho, A, B):
    '''Standard covariance Tr(rho A B) - Tr(rho A) Tr(rho B).'''
    return generalized_covariance(rho, A, B, 1)


def duhamel_covariance(rho, A, B, n_nodes=DEFAULT_DUHAMEL_NODES):
    '''Average of the generalized covariance over tau in [0, 1].'''
    if n_nodes < 2:
        raise DomainError('Duhamel quadrature needs at least 2 nodes, got {}'.format(n_nodes))
    terms = CovarianceTerms(rho, A, B)
    estimate = integrate_with_doubling(lambda tau: terms.covariance(tau).real, n_nodes)
    if estimate.error > DEFAULT_DUHAMEL_TOLERANCE:
        logger.warning(
            'Duhamel quadrature with %s nodes has error estimate %.3e',
            estimate.nodes,
            estimate.error,
        )
    return estimate


def beta_star(alpha, J):
    '''Inverse temperature below which high-temperature clustering is guaranteed.'''
    if alpha <= 0 or J <= 0:
        raise DomainError('alpha and J must be positive, got alpha={}, J={}'.format(alpha, J))
    return math.log((1 + math.sqrt(1 + 4 / alpha)) / 2) / (2 * J)


def xi_of_beta(alpha, J, beta):
    '''Correlation length of the clustering bound; zero at infinite temperature.'''
    if beta == 0:
        return 0.0
    critical = beta_star(alpha, J)
    if abs(beta) >= critical:
        raise RegimeError(
            'bound inapplicable above critical temperature',
            details={'beta': beta, 'beta_star': critical},
        )
    x = math.exp(2 * abs(beta) * J)
    return 1.0 / abs(math.log(alpha * x * (x - 1)))


@dataclass(frozen=True)
class ClusteringBoundParams:
    alpha: float
    J: float
    beta: float
    L0: int = 1

    def __post_init__(self):
        if self.alpha <= 0 or self.J <= 0:
            raise DomainError('alpha and J must be positive')
        if self.L0 < 0:
            raise DomainError('L0 must be non-negative, got {}'.format(self.L0))

    @classmethod
    def for_dimension(cls, D, J, beta, L0=1):
        return cls(growth_constant_bound(D), J, beta, L0)

    @classmethod
    def for_hamiltonian(cls, H, beta, L0=1, alpha=None):
        if alpha is None:
            alpha = growth_constant_bound(max(H.graph.spatial_dim, 1))
        return cls(alpha, interaction_strength(H), beta, L0)

    @property
    def beta_star(self):
        return beta_star(self.alpha, self.J)

    @property
    def xi(self):
        return xi_of_beta(self.alpha, self.J, self.beta)


@dataclass(frozen=True)
class BoundEvaluation:
    value: float
    binding: bool
    xi: float


def exponential_bound(prefactor, xi, distance):
    '''4 a e^{-dist/xi} / (ln 3 (1 - e^{-1/xi})).'''
    if xi == 0:
        return 0.0 if distance > 0 else 4 * prefactor / math.log(3)
    return 4 * prefactor / (math.log(3) * (1 - math.exp(-1 / xi))) * math.exp(-distance / xi)


def prefactor(A, B, graph):
    '''||A|| ||B|| min(|dA|, |dB|) for local observables on graph.'''
    return A.norm * B.norm * min(len(boundary(graph, A.support)), len(boundary(graph, B.support)))


def clustering_bound(params, A, B, dist, graph, allow_non_binding=False):
    binding = dist >= params.L0
    if not binding:
        if not allow_non_binding:
            raise NonBindingBoundError(
                'bound not asserted below minimal distance',
                details={'distance': dist, 'L0': params.L0},
            )
        logger.debug('clustering bound at distance %s < L0=%s is non-binding', dist, params.L0)
    xi = params.xi
    return BoundEvaluation(exponential_bound(prefactor(A, B, graph), xi, dist), binding, xi)


@dataclass(frozen=True)
class DecayFit:
    xi_fit: float
    z_fit: float
    residual: float
    intercept: float
    points: Tuple = field(default=())


def _normalize_points(points, N):
    normalized = []
    for point in points:
        if len(point) == 3:
            normalized.append(tuple(float(v) for v in point))
        elif len(point) == 2:
            if N is None:
                normalized.append((1.0, float(point[0]), float(point[1])))
            else:
                normalized.append((float(N), float(point[0]), float(point[1])))
        else:
            raise DomainError('Decay points are (distance, |cov|) or (N, distance, |cov|)')
    return normalized


def fit_decay(points, N=None, z=None, floor=COVARIANCE_FLOOR):
    '''
    Least squares of ln|cov| - z ln N against distance. With several system
    sizes and z left unset, z is fitted jointly.
    '''
    normalized = _normalize_points(points, N)
    usable = [(n, d, c) for n, d, c in normalized if abs(c) > floor]
    if len(usable) < 3:
        raise InsufficientDataError(
            'Decay fit needs at least 3 points above {}, got {}'.format(floor, len(usable)),
            details={'usable': len(usable), 'total': len(normalized)},
        )
    sizes = np.array([n for n, _, _ in usable])
    distances = np.array([d for _, d, _ in usable])
    logs = np.log(np.abs([c for _, _, c in usable]))
    joint = z is None and len(set(sizes)) > 1
    if joint:
        design = np.column_stack([distances, np.log(sizes), np.ones_like(distances)])
        coefficients, _, _, _ = scipy.linalg.lstsq(design, logs)
        slope, z_fit, intercept = coefficients
    else:
        z_fit = 0.0 if z is None else z
        design = np.column_stack([distances, np.ones_like(distances)])
        target = logs - z_fit * np.log(sizes)
        coefficients, _, _, _ = scipy.linalg.lstsq(design, target)
        slope, intercept = coefficients
        logs = target
    predicted = design @ coefficients
    residual = float(np.sqrt(np.mean((predicted - logs) ** 2)))
    if slope >= 0:
        raise InsufficientDataError(
            'Correlations do not decay with distance (slope {:.3e})'.format(slope),
            details={'slope': float(slope)},
        )
    return DecayFit(-1.0 / slope, float(z_fit), residual, float(intercept), tuple(usable))


@dataclass(frozen=True)
class GroundStateDecay:
    gap: float
    covariances: List[Tuple[int, float]]
    fit: Optional[DecayFit]


def ground_state(H):
    '''Ground state projector and spectral gap of H; rejects degenerate ground states.'''
    dense = assemble_dense(H)
    energies, basis = dense.eigh
    gap = float(energies[1] - energies[0]) if len(energies) > 1 else math.inf
    if gap <= GAP_TOLERANCE:
        raise DegenerateGroundStateError(gap)
    vector = basis.dense(slice(0, 1))[:, 0]
    return DensityMatrix.pure(vector, dense.dims, dense.sites), gap


def ground_state_covariance_experiment(H, pairs, floor=COVARIANCE_FLOOR):
    '''
    Covariances <AB> - <A><B> in the ground state for each (A, B) pair of
    local observables, with an exponential fit when enough of them are
    above the floor.
    '''
    psi, gap = ground_state(H)
    covariances = []
    for A, B in pairs:
        distance = graph_distance(H.graph, A.support, B.support)
        value = covariance(psi, A.embed(H.graph), B.embed(H.graph))
        covariances.append((distance, abs(value)))
    try:
        fit = fit_decay(covariances, N=H.graph.n_sites, z=0.0, floor=floor)
    except InsufficientDataError as e:
        logger.info('ground state covariances: no decay fit (%s)', e.message)
        fit = None
    return GroundStateDecay(gap, covariances, fit)


@dataclass(frozen=True)
class CovarianceRow:
    site_a: int
    site_b: int
    axis_a: str
    axis_b: str
    distance: float
    tau: float
    cov_abs: float
    bound: float
    binding: bool


def covariance_sweep(H, beta, taus, axes=('x', 'z'), params=None, workers=1):
    '''
    |cov^tau| of single-site Pauli observables for every pair of distinct
    sites, axis pair and tau, next to the clustering bound.
    '''
    graph = H.graph
    if params is None:
        params = ClusteringBoundParams.for_hamiltonian(H, beta)
    rho = gibbs_state(assemble_dense(H), beta)
    observables = {
        (v, axis): pauli_operator(v, axis) for v in graph.vertices for axis in axes
    }
    elements = {
        key: rho.basis.matrix_elements(op.embed(graph)) for key, op in observables.items()
    }
    populations = np.where(rho.populations > ZERO_EIGENVALUE, rho.populations, 0.0)
    powers = {tau: (populations ** tau, populations ** (1 - tau)) for tau in taus}
    means = {key: np.dot(rho.populations, np.diagonal(a)) for key, a in elements.items()}

    def sweep_pair(pair):
        u, v = pair
        distance = graph_distance(graph, {u}, {v})
        rows = []
        for axis_a, axis_b in itertools.product(axes, repeat=2):
            A, B = observables[(u, axis_a)], observables[(v, axis_b)]
            bound = clustering_bound(params, A, B, distance, graph, allow_non_binding=True)
            products = elements[(u, axis_a)] * elements[(v, axis_b)].T
            mean = means[(u, axis_a)] * means[(v, axis_b)]
            for tau in taus:
                left, right = powers[tau]
                value = left @ products @ right - mean
                rows.append(
                    CovarianceRow(
                        u, v, axis_a, axis_b, distance, tau, float(abs(value)), bound.value, bound.binding
                    )
                )
        return rows

    pairs = list(itertools.combinations(graph.vertices, 2))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        return [row for rows in executor.map(sweep_pair, pairs) for row in rows]


def spectral_gap(H):
    energies = assemble_dense(H).eigenvalues
    return float(energies[1] - energies[0])


@dataclass(frozen=True)
class GapScalingFit:
    exponent: float
    prefactor: float
    residual: float


def fit_gap_scaling(sizes, gaps):
    '''Power law gap ~ prefactor N^(-exponent).'''
    points = [(n, g) for n, g in zip(sizes, gaps) if g > GAP_TOLERANCE]
    if len(points) < 2:
        raise InsufficientDataError('Gap scaling needs at least 2 positive gaps')
    design = np.column_stack([np.log([n for n, _ in points]), np.ones(len(points))])
    target = np.log([g for _, g in points])
    (slope, intercept), _, _, _ = scipy.linalg.lstsq(design, target)
    residual = float(np.sqrt(np.mean((design @ [slope, intercept] - target) ** 2)))
    return GapScalingFit(float(-slope), float(math.exp(intercept)), residual)


@dataclass(frozen=True)
class ThermalMutualInformation:
    mutual_information: float
    identity_value: float
    relative_entropy: float
    bound: float
    area_law_bound: float
    cut_terms: int


def thermal_mutual_information(H, S, beta):
    '''
    Mutual information between S and its complement in the Gibbs state, with
    the free-energy identity
        I = beta Tr[H_I (g_S (x) g_rest - g)] / ln 2 - S(g_S (x) g_rest || g)
    and the area-law bound 2 beta ||H_I|| / ln 2, where H_I collects the terms
    crossing the cut and g_S, g_rest are reductions of g.
    '''
    if beta < 0:
        raise DomainError('Thermal area law needs beta >= 0, got {}'.format(beta))
    graph = H.graph
    S = graph.check_region(S)
    rest = frozenset(graph.vertices) - S
    if not S or not rest:
        raise DomainError('Cut must split the system into two nonempty parts')
    crossing = [t for t in H.terms if set(t.support) & S and set(t.support) & rest]
    H_I = LocalHamiltonian(graph, crossing, H.local_dim)
    H_dense = assemble_dense(H)
    g = gibbs_state(H_dense, beta)
    information = mutual_information(g, S, rest)
    product = tensor_product(partial_trace(g, S), partial_trace(g, rest))
    divergence = relative_entropy(product, g)
    interaction = assemble_dense(H_I)
    energy_gap = expectation(product, interaction) - expectation(g, interaction)
    interaction_norm = spectral_norm(interaction) if crossing else 0.0
    area_law = 2 * beta * interaction_norm / BITS_TO_NATS
    return ThermalMutualInformation(
        information,
        beta * energy_gap / BITS_TO_NATS - divergence,
        divergence,
        area_law - divergence,
        area_law,
        len(crossing),
    )

