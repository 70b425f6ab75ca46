# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Stability of local thermal expectation values under a change H0 -> H:

    Tr[A g0] - Tr[A g] = beta int_0^1 ds int_0^1 dtau cov^tau_{g_s}(H - H0, A)

with g_s the Gibbs state of H(s) = H0 + s (H - H0), and the buffer-region
construction built on top of it.
'''

import logging
import math

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import FrozenSet

from .correlations import CovarianceTerms, xi_of_beta
from .debug import trace_duration
from .densequantum import (
    DensityMatrix,
    expectation,
    gibbs_state,
    partial_trace,
    reduced_gibbs_state,
    spectral_norm,
    tensor_product,
    trace_distance,
)
from .exceptions import ConvergenceError, DomainError, NonBindingBoundError, RegimeError
from .hamiltonian import (
    LocalHamiltonian,
    assemble_dense,
    assemble_sparse,
    combine,
    difference_support,
    interaction_strength,
    truncate_to_region,
)
from .lattice import boundary, graph_distance, growth_constant_bound
from .quadrature import QuadratureEstimate, gauss_legendre

logger = logging.getLogger(__name__)

DEFAULT_S_NODES = 12
DEFAULT_TAU_NODES = 16
DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_S_NODES = 96
DEFAULT_BETA_NORM_CAP = 200.0
# dimension from which reduced Gibbs states skip the dense eigendecomposition
SPARSE_GIBBS_DIMENSION = 2 ** 10


def _dense(H):
    if isinstance(H, LocalHamiltonian):
        return assemble_dense(H)
    return H


class InterpolationPath:
    def __init__(self, H0, H, s_nodes=DEFAULT_S_NODES, tau_nodes=DEFAULT_TAU_NODES):
        self.H0 = _dense(H0)
        self.H = _dense(H)
        if self.H0.dims != self.H.dims:
            raise DomainError('Endpoints act on different spaces')
        if s_nodes < 1 or tau_nodes < 1:
            raise DomainError('Quadrature grids need at least one node')
        self.perturbation = self.H - self.H0
        self.s_nodes = s_nodes
        self.tau_nodes = tau_nodes

    def at(self, s):
        if s == 0:
            return self.H0
        if s == 1:
            return self.H
        return self.H0 + s * self.perturbation

    @property
    def norm(self):
        return max(spectral_norm(self.H0), spectral_norm(self.H))


def _s_integrand(path, A, beta, s, tau_nodes):
    terms = CovarianceTerms(gibbs_state(path.at(s), beta), path.perturbation, A)
    nodes, weights = gauss_legendre(tau_nodes)
    return sum(w * terms.covariance(tau).real for tau, w in zip(nodes, weights))


def _outer_sum(path, A, beta, s_nodes, workers):
    nodes, weights = gauss_legendre(s_nodes)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        values = list(
            executor.map(lambda s: _s_integrand(path, A, beta, s, path.tau_nodes), nodes)
        )
    total = 0.0
    for w, value in zip(weights, values):
        total += w * value
    return beta * total


@trace_duration
def perturbation_rhs(
    path,
    A,
    beta,
    tolerance=DEFAULT_TOLERANCE,
    max_s_nodes=DEFAULT_MAX_S_NODES,
    beta_norm_cap=DEFAULT_BETA_NORM_CAP,
    workers=1,
):
    '''
    Double quadrature of the perturbation formula. The s grid is doubled
    until two successive estimates agree within tolerance.
    '''
    if not math.isfinite(beta):
        raise DomainError('beta must be finite, got {}'.format(beta))
    if abs(beta) * path.norm > beta_norm_cap:
        raise RegimeError(
            'beta ||H|| = {:.1f} exceeds the cap {}'.format(abs(beta) * path.norm, beta_norm_cap),
            details={'beta': beta, 'norm': path.norm, 'cap': beta_norm_cap},
        )
    if beta == 0:
        return QuadratureEstimate(0.0, 0.0, 0)
    s_nodes = path.s_nodes
    coarse = _outer_sum(path, A, beta, s_nodes, workers)
    while True:
        fine = _outer_sum(path, A, beta, 2 * s_nodes, workers)
        error = abs(fine - coarse)
        logger.debug('perturbation formula with %s s-nodes: %r (error %.3e)', 2 * s_nodes, fine, error)
        if error <= tolerance:
            return QuadratureEstimate(fine, error, 2 * s_nodes)
        s_nodes *= 2
        if 2 * s_nodes > max_s_nodes:
            raise ConvergenceError(
                'perturbation quadrature did not converge below {}'.format(tolerance),
                best_estimate=fine,
                error_estimate=error,
            )
        coarse = fine


def perturbation_lhs(H0, H, A, beta):
    '''Tr[A g0] - Tr[A g].'''
    return expectation(gibbs_state(_dense(H0), beta), A) - expectation(gibbs_state(_dense(H), beta), A)


@dataclass(frozen=True)
class LRBound:
    value: float
    binding: bool
    distance: float


def thermal_lr_value(boundary_s, boundary_e, size_e, xi, beta, J, distance):
    '''w |beta| J e^{-dist/xi} / (1 - e^{-1/xi}) with w = 4 min(|dS|, |dE|) |E| / ln 3.'''
    if size_e == 0:
        return 0.0
    w = 4 * min(boundary_s, boundary_e) * size_e / math.log(3)
    if xi == 0:
        return 0.0 if distance > 0 else w * abs(beta) * J
    return w * abs(beta) * J / (1 - math.exp(-1 / xi)) * math.exp(-distance / xi)


def thermal_lr_bound(graph, S, E, xi, beta, J, L0=1, allow_non_binding=False):
    '''Trace-norm bound on the change of the reduced Gibbs state on S caused by terms on E.'''
    S = graph.check_region(S)
    E = graph.check_region(E)
    if not E:
        return LRBound(0.0, True, math.inf)
    distance = graph_distance(graph, S, E)
    binding = distance >= L0
    if not binding and not allow_non_binding:
        raise NonBindingBoundError(
            'bound not asserted below minimal distance',
            details={'distance': distance, 'L0': L0},
        )
    value = thermal_lr_value(
        len(boundary(graph, S)), len(boundary(graph, E)), len(E), xi, beta, J, distance
    )
    return LRBound(value, binding, distance)


@dataclass(frozen=True)
class BufferPartition:
    S: FrozenSet[int]
    B: FrozenSet[int]
    E: FrozenSet[int]
    F: FrozenSet[int]
    r: int


def build_buffer_partition(graph, S, r):
    '''B = {dist(v, S) < r}, E = {dist(v, S) = r}, F the remaining sites.'''
    if r < 1:
        raise DomainError('Buffer radius must be positive, got {}'.format(r))
    distances = graph.distances_from(S)
    B = frozenset(v for v, d in distances.items() if d < r)
    E = frozenset(v for v, d in distances.items() if d == r)
    F = frozenset(graph.vertices) - B - E
    return BufferPartition(frozenset(S), B, E, F, r)


def local_hamiltonians(H, partition):
    '''H0 = H_B + H_F on the full graph.'''
    return combine(truncate_to_region(H, partition.B), truncate_to_region(H, partition.F))


@dataclass(frozen=True)
class LocalityRow:
    r: int
    ring_size: int
    perturbation_size: int
    distance_S_E: float
    trace_distance: float
    bound: float
    binding: bool
    trivial: bool
    J: float


def _reduced_gibbs(H, S, beta):
    if H.dim < SPARSE_GIBBS_DIMENSION:
        return partial_trace(gibbs_state(assemble_dense(H), beta), S)
    return reduced_gibbs_state(assemble_sparse(H), H.dims, S, beta, sites=H.graph.vertices)


@trace_duration
def locality_of_temperature_experiment(H, S, r_values, beta, L0=1, alpha=None):
    '''
    For each radius r, distance between the reduction to S of the global
    Gibbs state and that of the Gibbs state of H_B alone, next to the
    thermal Lieb-Robinson bound for the perturbation H - (H_B + H_F). The
    bound uses the interaction strength J of H for every r, so it moves with
    r only through the distance and the size of the perturbation.
    '''
    graph = H.graph
    S = graph.check_region(S)
    if alpha is None:
        alpha = growth_constant_bound(max(graph.spatial_dim, 1))
    J = interaction_strength(H)
    reference = _reduced_gibbs(H, S, beta)
    rows = []
    for r in r_values:
        partition = build_buffer_partition(graph, S, r)
        perturbation = difference_support(H, local_hamiltonians(H, partition))
        local = _reduced_gibbs(truncate_to_region(H, partition.B, restrict_graph=True), S, beta)
        distance = trace_distance(reference, local)
        if perturbation:
            xi = xi_of_beta(alpha, J, beta)
            bound = thermal_lr_bound(graph, S, perturbation, xi, beta, J, L0, allow_non_binding=True)
        else:
            bound = LRBound(0.0, True, math.inf)
        logger.debug('buffer radius %s: trace distance %.3e, bound %.3e', r, distance, bound.value)
        rows.append(
            LocalityRow(
                r,
                len(partition.E),
                len(perturbation),
                bound.distance,
                distance,
                bound.value,
                bound.binding,
                not partition.F,
                J,
            )
        )
    return rows


def factorized_gibbs_check(H, partition, beta):
    '''||g[H_B + H_F] - g[H_B] (x) g[H_F]||_1 on the full space, E sites maximally mixed.'''
    H0 = local_hamiltonians(H, partition)
    joint = gibbs_state(assemble_dense(H0), beta)
    states = [
        gibbs_state(assemble_dense(truncate_to_region(H, region, restrict_graph=True)), beta)
        for region in (partition.B, partition.F)
        if region
    ]
    if partition.E:
        ring = sorted(partition.E)
        states.append(DensityMatrix.maximally_mixed((H.local_dim,) * len(ring), ring))
    return trace_distance(joint, tensor_product(*states))
