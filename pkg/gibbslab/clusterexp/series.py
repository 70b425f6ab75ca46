# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Truncated cluster expansion of e^{-beta H}.

The Taylor series sums (-beta)^j / j! h(w) over words w = (w_1, ..., w_j) of
terms, h(w) = h_{w_1} ... h_{w_j}. A word is dropped when some connected
component of its support, taken in the interaction graph, has L sites or
more. Words are grouped by support: every extension of a dropped support is
dropped as well, so only retained supports are carried from one order to the
next.
'''

import logging
import math

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.special

from .. import budget
from ..debug import trace_duration
from ..densequantum import DenseOperator
from ..exceptions import DomainError, ResourceError
from ..hamiltonian import folded_edge_terms

logger = logging.getLogger(__name__)

DEFAULT_MAX_CELLS = 20000


@dataclass(frozen=True)
class ClusterWord:
    word: Tuple[Tuple[int, ...], ...]

    @property
    def order(self):
        return len(self.word)

    @property
    def support(self):
        return frozenset(v for letter in self.word for v in letter)

    def components(self, graph):
        return graph.components(self.support) if self.word else []

    def is_retained(self, graph, L):
        return all(len(c) < L for c in self.components(graph))


def expand_local(matrix, sites, target_sites, local_dim):
    '''Matrix acting on sorted sites, extended by identities to sorted target_sites.'''
    sites = list(sites)
    extra = [s for s in target_sites if s not in sites]
    if not extra:
        return matrix
    expanded = np.kron(matrix, np.eye(local_dim ** len(extra)))
    current = sites + extra
    n = len(current)
    permutation = [current.index(s) for s in target_sites]
    tensor = expanded.reshape((local_dim,) * (2 * n))
    tensor = tensor.transpose(permutation + [n + p for p in permutation])
    return tensor.reshape(local_dim ** n, local_dim ** n)


def letters(H):
    '''Folded terms used as the alphabet of the series.'''
    return folded_edge_terms(H)


class _ComponentCache:
    def __init__(self, graph, L):
        self._graph = graph
        self._L = L
        self._retained = {}

    def retained(self, support):
        if support not in self._retained:
            self._retained[support] = all(
                len(c) < self._L for c in self._graph.components(support)
            )
        return self._retained[support]


@dataclass
class SupportSeries:
    '''
    Retained part of the series grouped by support: operators[U] is a matrix
    on the sorted sites of U, with the empty support holding the identity
    coefficient.
    '''

    operators: dict
    retained: int
    dropped: int
    local_dim: int


@trace_duration
def series_by_support(H, beta, L, j_max, max_cells=DEFAULT_MAX_CELLS):
    if L < 1:
        raise DomainError('Cluster size L must be positive, got {}'.format(L))
    if j_max < 0:
        raise DomainError('Series order must be non-negative, got {}'.format(j_max))
    d = H.local_dim
    alphabet = [(frozenset(t.support), tuple(t.support), t.matrix) for t in letters(H)]
    cache = _ComponentCache(H.graph, L)
    empty = frozenset()
    totals = {empty: np.eye(1, dtype=complex)}
    layer = {empty: (np.eye(1, dtype=complex), 1)}
    retained_words = 1
    for order in range(1, j_max + 1):
        coefficient = (-beta) ** order / math.factorial(order)
        next_layer = {}
        for support, (matrix, count) in layer.items():
            sites = tuple(sorted(support))
            for letter_support, letter_sites, letter_matrix in alphabet:
                union = support | letter_support
                if not cache.retained(union):
                    continue
                target = tuple(sorted(union))
                product = expand_local(matrix, sites, target, d) @ expand_local(
                    letter_matrix, letter_sites, target, d
                )
                if union in next_layer:
                    accumulated, accumulated_count = next_layer[union]
                    next_layer[union] = (accumulated + product, accumulated_count + count)
                else:
                    next_layer[union] = (product, count)
        if len(next_layer) > max_cells:
            raise ResourceError('cluster series cells', max_cells, len(next_layer))
        for union, (matrix, count) in next_layer.items():
            retained_words += count
            if union in totals:
                totals[union] = totals[union] + coefficient * matrix
            else:
                totals[union] = coefficient * matrix
        layer = next_layer
        logger.debug('cluster series order %s: %s supports', order, len(layer))
    total_words = sum(len(alphabet) ** j for j in range(j_max + 1))
    return SupportSeries(totals, retained_words, total_words - retained_words, d)


@dataclass(frozen=True)
class TruncatedSeries:
    operator: DenseOperator
    retained: int
    dropped: int


def truncated_series_dense(H, beta, L, j_max, max_cells=DEFAULT_MAX_CELLS):
    '''Sum of the retained words up to order j_max as a dense operator.'''
    budget.check_dimension(H.dim)
    series = series_by_support(H, beta, L, j_max, max_cells)
    sites = H.graph.vertices
    dim = H.dim
    total = np.zeros((dim, dim), dtype=complex)
    for support, matrix in series.operators.items():
        if not support:
            total += matrix[0, 0] * np.eye(dim)
            continue
        total += expand_local(matrix, sorted(support), sites, H.local_dim)
    if np.max(np.abs(total.imag), initial=0) <= 1e-14:
        total = total.real
    operator = DenseOperator(total, H.dims, hermitian=None, sites=sites)
    return TruncatedSeries(operator, series.retained, series.dropped)


def order_truncation_bound(beta, J, n_terms, j_max):
    '''Tail sum_{j > j_max} x^j / j! with x = |beta| J n_terms.'''
    x = abs(beta) * J * n_terms
    if x == 0:
        return 0.0
    return float(math.exp(x) * scipy.special.gammainc(j_max + 1, x))
