# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Energy statistics of thermal states, Gaussian approximation of the energy
distribution, microcanonical states and their local agreement with Gibbs
states.
'''

import logging
import math

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import scipy.stats

from .debug import trace_duration
from .densequantum import (
    DensityMatrix,
    gibbs_state,
    partial_trace,
    trace_distance,
)
from .exceptions import DegenerateDistributionError, DomainError, EmptyWindowError, InsufficientDataError
from .hamiltonian import LocalHamiltonian, assemble_dense
from .lattice import cube_translates

logger = logging.getLogger(__name__)

LEVEL_MERGE_TOLERANCE = 1e-10
DEFAULT_FD_STEP = 1e-4
VARIANCE_FLOOR = 1e-14


def _dense_and_size(H):
    if isinstance(H, LocalHamiltonian):
        return assemble_dense(H), H.graph.n_sites
    return H, len(H.dims)


def _thermal_weights(energies, beta):
    exponents = -beta * energies
    weights = np.exp(exponents - exponents.max())
    return weights / weights.sum()


def _moments(energies, beta):
    weights = _thermal_weights(energies, beta)
    mean = float(np.dot(weights, energies))
    variance = float(np.dot(weights, (energies - mean) ** 2))
    return mean, variance


def _beta(T):
    if not T > 0:
        raise DomainError('Temperature must be positive, got {}'.format(T))
    return 0.0 if math.isinf(T) else 1.0 / T


@dataclass(frozen=True)
class EnergyObservables:
    T: float
    n_sites: int
    U: float
    u: float
    C_finite_difference: float
    C_fluctuation: float
    c: float
    variance: float
    fd_step: float

    @property
    def discrepancy(self):
        '''Relative disagreement of the two heat-capacity routes.'''
        scale = max(abs(self.C_fluctuation), VARIANCE_FLOOR)
        return abs(self.C_finite_difference - self.C_fluctuation) / scale


def energy_observables(H, T, fd_step=DEFAULT_FD_STEP):
    '''
    U, u = U/N, the heat capacity by a centered difference of U(T) with step
    fd_step * T and by the fluctuation identity Var(E)/T^2, and c = C/N.
    T = inf is the maximally mixed limit, where C vanishes.
    '''
    beta = _beta(T)
    dense, n_sites = _dense_and_size(H)
    energies = dense.eigenvalues
    U, variance = _moments(energies, beta)
    if beta == 0:
        fluctuation = 0.0
        finite_difference = 0.0
        step = 0.0
    else:
        fluctuation = variance / T ** 2
        step = fd_step * T
        upper, _ = _moments(energies, 1.0 / (T + step))
        lower, _ = _moments(energies, 1.0 / (T - step))
        finite_difference = (upper - lower) / (2 * step)
    observables = EnergyObservables(
        T, n_sites, U, U / n_sites, finite_difference, fluctuation, fluctuation / n_sites, variance, step
    )
    logger.debug(
        'T=%s: U=%r, C=%r (finite difference %r)', T, U, fluctuation, finite_difference
    )
    return observables


@dataclass(frozen=True)
class EnergyDistribution:
    energies: np.ndarray
    weights: np.ndarray
    mu: float
    sigma2: float

    def cdf(self, x):
        '''F(x) = sum of the weights of levels E_k <= x.'''
        cumulative = np.cumsum(self.weights)
        index = np.searchsorted(self.energies, x, side='right')
        return np.where(index > 0, cumulative[np.maximum(index - 1, 0)], 0.0)

    def gaussian_cdf(self, x):
        return scipy.stats.norm.cdf(x, loc=self.mu, scale=math.sqrt(self.sigma2))


def _merge_levels(energies, weights, tolerance=LEVEL_MERGE_TOLERANCE):
    levels = []
    merged = []
    for energy, weight in zip(energies, weights):
        if levels and energy - levels[-1] <= tolerance:
            merged[-1] += weight
        else:
            levels.append(energy)
            merged.append(weight)
    return np.array(levels), np.array(merged)


def energy_cdf(rho, H):
    '''Distribution of the energy of rho in the eigenbasis of H.'''
    H, _ = _dense_and_size(H)
    if rho.dims != H.dims:
        raise DomainError('State and Hamiltonian act on different spaces')
    energies, basis = H.eigh
    weights = np.clip(np.real(basis.expectations(rho)), 0.0, None)
    weights = weights / weights.sum()
    energies, weights = _merge_levels(np.asarray(energies, dtype=float), weights)
    mu = float(np.dot(weights, energies))
    sigma2 = float(np.dot(weights, (energies - mu) ** 2))
    energies.setflags(write=False)
    weights.setflags(write=False)
    return EnergyDistribution(energies, weights, mu, sigma2)


@dataclass(frozen=True)
class JumpDiscrepancy:
    energy: float
    left: float
    right: float


def jump_discrepancies(dist):
    '''|F - G| on both sides of every jump of F.'''
    if dist.sigma2 <= VARIANCE_FLOOR:
        raise DegenerateDistributionError(
            'Energy distribution has zero variance', details={'sigma2': dist.sigma2}
        )
    gaussian = dist.gaussian_cdf(dist.energies)
    right = np.cumsum(dist.weights)
    left = right - dist.weights
    return [
        JumpDiscrepancy(float(e), float(abs(l - g)), float(abs(r - g)))
        for e, l, r, g in zip(dist.energies, left, right, gaussian)
    ]


def berry_esseen_distance(dist):
    '''sup_x |F(x) - G(x)| with G the Gaussian of the same mean and variance.'''
    return max(max(j.left, j.right) for j in jump_discrepancies(dist))


@dataclass(frozen=True)
class BerryEsseenFit:
    C: float
    power: float
    residual: float


def fit_berry_esseen_scaling(sizes, distances):
    '''Least squares for distance = C ln(N)^power / sqrt(N).'''
    points = [(n, d) for n, d in zip(sizes, distances) if n >= 3 and d > 0]
    if len(points) < 3:
        raise InsufficientDataError(
            'Scaling fit needs 3 sizes N >= 3 with positive distance, got {}'.format(len(points))
        )
    n = np.array([p[0] for p in points], dtype=float)
    d = np.array([p[1] for p in points])
    design = np.column_stack([np.ones_like(n), np.log(np.log(n))])
    target = np.log(d) + 0.5 * np.log(n)
    coefficients, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    residual = float(np.sqrt(np.mean((design @ coefficients - target) ** 2)))
    return BerryEsseenFit(float(np.exp(coefficients[0])), float(coefficients[1]), residual)


@dataclass(frozen=True)
class MicrocanonicalWindow:
    E: float
    Delta: float
    member_indices: Tuple[int, ...]

    @property
    def size(self):
        return len(self.member_indices)


def microcanonical_state(H, E, Delta):
    '''Uniform mixture of the eigenvectors of H with |E_k - E| <= Delta.'''
    if not Delta > 0:
        raise DomainError('Window half-width must be positive, got {}'.format(Delta))
    H, _ = _dense_and_size(H)
    energies, basis = H.eigh
    inside = np.abs(energies - E) <= Delta + LEVEL_MERGE_TOLERANCE
    members = np.nonzero(inside)[0]
    if not len(members):
        nearest = float(energies[np.argmin(np.abs(energies - E))])
        raise EmptyWindowError(E, Delta, nearest)
    populations = np.full(len(members), 1.0 / len(members))
    state = DensityMatrix.from_spectrum(populations, basis.select(members), H.dims, H.sites)
    return state, MicrocanonicalWindow(float(E), float(Delta), tuple(int(m) for m in members))


@dataclass
class EoEReport:
    n_sites: int
    T: float
    e: float
    delta: float
    window: MicrocanonicalWindow
    distances: Dict[Tuple[int, ...], float]
    mean_distance: float
    relative_entropy: float
    energy_condition: bool
    delta_condition: bool
    warnings: list = field(default_factory=list)

    @property
    def in_regime(self):
        return self.energy_condition and self.delta_condition


def _window_relative_entropy(window, thermal):
    '''S(rho_mc || thermal) in bits, both states diagonal in the eigenbasis of H.'''
    populations = thermal.populations[list(window.member_indices)]
    if populations.min() <= 0:
        return math.inf
    return max(-float(np.mean(np.log2(populations))) - math.log2(window.size), 0.0)


@trace_duration
def eoe_experiment(H, T, delta=None, l=1, e=None, c1=1.0):
    '''
    Compares the microcanonical state of energy e N and half-width delta sqrt(N)
    with the Gibbs state at T on every translate of the l-cube. e defaults to
    u(T) and delta to the thermal energy spread per sqrt(site).
    '''
    dense = assemble_dense(H)
    observables = energy_observables(dense, T)
    N = H.graph.n_sites
    spread = math.sqrt(observables.variance / N)
    if e is None:
        e = observables.u
    if delta is None:
        delta = spread
    D = max(H.graph.spatial_dim, 1)
    energy_condition = abs(e - observables.u) <= spread / math.sqrt(N) + LEVEL_MERGE_TOLERANCE
    lower = c1 * math.log(N) ** (2 * D) / math.sqrt(N) * spread
    delta_condition = lower <= delta <= spread + LEVEL_MERGE_TOLERANCE
    warnings = []
    if not energy_condition:
        warnings.append('energy density outside theorem regime')
    if not delta_condition:
        warnings.append('window width outside theorem regime')
    for warning in warnings:
        logger.warning('N=%s, T=%s: %s', N, T, warning)

    state, window = microcanonical_state(dense, e * N, delta * math.sqrt(N))
    thermal = gibbs_state(dense, _beta(T))
    distances = {}
    for translate in cube_translates(H.graph, l):
        distances[translate] = trace_distance(
            partial_trace(state, translate), partial_trace(thermal, translate)
        )
    mean_distance = float(np.mean(list(distances.values())))
    logger.info(
        'N=%s, T=%s: window of %s levels, mean local distance %.3e', N, T, window.size, mean_distance
    )
    return EoEReport(
        N,
        T,
        e,
        delta,
        window,
        distances,
        mean_distance,
        _window_relative_entropy(window, thermal),
        energy_condition,
        delta_condition,
        warnings,
    )
