# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import DomainError


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    error: float
    nodes: int


@lru_cache(maxsize=64)
def gauss_legendre(n_nodes):
    '''Nodes and weights of the n-point Gauss-Legendre rule on [0, 1].'''
    if n_nodes < 1:
        raise DomainError('Quadrature needs at least one node, got {}'.format(n_nodes))
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    nodes = (nodes + 1.0) / 2.0
    weights = weights / 2.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrate(function, n_nodes):
    nodes, weights = gauss_legendre(n_nodes)
    return sum(w * function(x) for x, w in zip(nodes, weights))


def integrate_with_doubling(function, n_nodes):
    '''Estimate with 2n nodes; the error is its distance to the n-node estimate.'''
    coarse = integrate(function, n_nodes)
    fine = integrate(function, 2 * n_nodes)
    return QuadratureEstimate(fine, abs(fine - coarse), 2 * n_nodes)
