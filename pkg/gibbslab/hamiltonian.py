# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Local Hamiltonians H = sum_e h_e on an interaction graph. A term acts on its
support sites in ascending label order.
'''

import logging

from collections import defaultdict

import numpy as np
import scipy.sparse

from . import budget
from .densequantum import (
    HERMITIAN_TOLERANCE,
    DenseOperator,
    embed_operator,
    hermitian_deviation,
    spectral_norm,
)
from .exceptions import ConfigError, DomainError, NonHermitianError

logger = logging.getLogger(__name__)

PAULI_I = np.eye(2)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])

PAULIS = {'x': PAULI_X, 'y': PAULI_Y, 'z': PAULI_Z}

MODELS = ('ising', 'transverse_ising', 'heisenberg', 'xx')

TERM_MATCH_TOLERANCE = 1e-12


class LocalOperator:
    def __init__(self, support, matrix, local_dim=2):
        self.support = tuple(sorted(int(v) for v in support))
        if len(set(self.support)) != len(self.support) or not self.support:
            raise DomainError('Support {} must be a nonempty set of sites'.format(support))
        matrix = np.array(matrix)
        size = local_dim ** len(self.support)
        if matrix.shape != (size, size):
            raise DomainError(
                'Matrix of shape {} does not act on {} sites of dimension {}'.format(
                    matrix.shape, len(self.support), local_dim
                )
            )
        if np.iscomplexobj(matrix) and np.max(np.abs(matrix.imag)) <= HERMITIAN_TOLERANCE:
            matrix = matrix.real
        matrix.setflags(write=False)
        self.matrix = matrix
        self.local_dim = local_dim

    def __repr__(self):
        return '{}(support={})'.format(type(self).__name__, self.support)

    @property
    def norm(self):
        return spectral_norm(self.matrix)

    def embed(self, graph, hermitian=None):
        dims = (self.local_dim,) * graph.n_sites
        return DenseOperator.from_local(
            self.matrix, graph.positions(self.support), dims, hermitian, graph.vertices
        )


class LocalTerm(LocalOperator):
    def __init__(self, support, matrix, local_dim=2):
        super().__init__(support, matrix, local_dim)
        deviation = hermitian_deviation(self.matrix)
        if deviation > HERMITIAN_TOLERANCE:
            raise NonHermitianError(deviation)

    def embed(self, graph, hermitian=True):
        return super().embed(graph, hermitian)


def pauli_operator(site, axis):
    return LocalTerm((site,), PAULIS[axis])


def same_graph(g1, g2):
    return g1.vertices == g2.vertices and g1.edges == g2.edges


class LocalHamiltonian:
    def __init__(self, graph, terms, local_dim=2):
        self.graph = graph
        self.local_dim = local_dim
        edges = set(graph.edges)
        vertices = set(graph.vertices)
        for term in terms:
            if term.local_dim != local_dim:
                raise DomainError('Term {!r} has local dimension {}'.format(term, term.local_dim))
            if not vertices.issuperset(term.support):
                raise DomainError('Term {!r} is supported outside the graph'.format(term))
            if len(term.support) == 2 and term.support not in edges:
                raise DomainError('Term {!r} does not sit on an edge'.format(term))
            if len(term.support) > 2:
                raise DomainError('Term {!r} is not two-local'.format(term))
        self.terms = tuple(terms)

    def __repr__(self):
        return 'LocalHamiltonian({!r}, terms={})'.format(self.graph, len(self.terms))

    @property
    def dims(self):
        return (self.local_dim,) * self.graph.n_sites

    @property
    def dim(self):
        return self.local_dim ** self.graph.n_sites

    def terms_by_support(self):
        grouped = {}
        for term in self.terms:
            if term.support in grouped:
                grouped[term.support] = grouped[term.support] + term.matrix
            else:
                grouped[term.support] = np.array(term.matrix)
        return grouped

    def edge_terms(self):
        return [t for t in self.terms if len(t.support) == 2]

    def site_terms(self):
        return [t for t in self.terms if len(t.support) == 1]


def _check_couplings(name, params, required):
    missing = [key for key in required if key not in params]
    if missing:
        raise ConfigError(
            'Model {} is missing couplings: {}'.format(name, ', '.join(missing)),
            details={'model': name, 'missing': missing},
        )


def _field_terms(graph, axis, strength):
    if strength == 0:
        return []
    return [LocalTerm((v,), strength * PAULIS[axis]) for v in graph.vertices]


def build_model(name, g, params):
    '''
    Nearest-neighbour spin-1/2 models; every coupling enters with a plus sign:
      ising            J_zz zz (+ h_z z)
      transverse_ising J_zz zz + h_x x (+ h_z z)
      heisenberg       J (xx + yy + zz)
      xx               J (xx + yy) (+ h_z z)
    Edge terms are kept even at zero coupling.
    '''
    if name not in MODELS:
        raise ConfigError(
            'Unknown model "{}"; valid models are: {}'.format(name, ', '.join(MODELS)),
            details={'model': name},
        )
    params = dict(params)
    zz = np.kron(PAULI_Z, PAULI_Z)
    xx = np.kron(PAULI_X, PAULI_X)
    yy = np.kron(PAULI_Y, PAULI_Y).real
    if name == 'ising':
        _check_couplings(name, params, ['J_zz'])
        edge, fields = params['J_zz'] * zz, [('z', params.get('h_z', 0.0))]
    elif name == 'transverse_ising':
        _check_couplings(name, params, ['J_zz', 'h_x'])
        edge = params['J_zz'] * zz
        fields = [('x', params['h_x']), ('z', params.get('h_z', 0.0))]
    elif name == 'heisenberg':
        _check_couplings(name, params, ['J'])
        edge, fields = params['J'] * (xx + yy + zz), []
    else:
        _check_couplings(name, params, ['J'])
        edge, fields = params['J'] * (xx + yy), [('z', params.get('h_z', 0.0))]

    terms = [LocalTerm(e, edge) for e in g.edges]
    for axis, strength in fields:
        terms.extend(_field_terms(g, axis, strength))
    logger.debug('built %s model with %s terms on %r', name, len(terms), g)
    return LocalHamiltonian(g, terms)


def folded_edge_terms(H):
    '''
    Single-site terms split evenly among the term-carrying edges at their site
    and added to those edge terms; a site without such edges keeps its own term.
    '''
    grouped = H.terms_by_support()
    edges = [s for s in grouped if len(s) == 2]
    incident = defaultdict(list)
    for edge in edges:
        for v in edge:
            incident[v].append(edge)
    identity = np.eye(H.local_dim)
    folded = {s: np.array(m, dtype=complex) for s, m in grouped.items() if len(s) == 2}
    lonely = []
    for support, matrix in grouped.items():
        if len(support) != 1:
            continue
        (v,) = support
        if not incident[v]:
            lonely.append(LocalTerm(support, matrix, H.local_dim))
            continue
        share = matrix / len(incident[v])
        for edge in incident[v]:
            if edge[0] == v:
                folded[edge] = folded[edge] + np.kron(share, identity)
            else:
                folded[edge] = folded[edge] + np.kron(identity, share)
    return [LocalTerm(s, m, H.local_dim) for s, m in sorted(folded.items())] + lonely


def interaction_strength(H):
    '''J = max_e ||h_e|| over the folded edge terms.'''
    norms = [term.norm for term in folded_edge_terms(H)]
    return max(norms) if norms else 0.0


def assemble_sparse(H):
    '''H as a CSR matrix on the full tensor-product space, real when H is.'''
    dim = H.dim
    total = scipy.sparse.csr_matrix((dim, dim))
    for support, matrix in H.terms_by_support().items():
        total = total + embed_operator(matrix, H.graph.positions(support), H.dims)
    total = total.tocsr()
    if np.iscomplexobj(total.data) and np.max(np.abs(total.data.imag), initial=0) <= HERMITIAN_TOLERANCE:
        total = total.real
    total.eliminate_zeros()
    return total


def assemble_dense(H):
    budget.check_dimension(H.dim)
    total = assemble_sparse(H)
    off_diagonal = total - scipy.sparse.diags(total.diagonal())
    off_diagonal.eliminate_zeros()
    if off_diagonal.nnz == 0:
        return DenseOperator.from_diagonal(total.diagonal(), H.dims, H.graph.vertices)
    return DenseOperator(
        total.toarray(), H.dims, hermitian=True, sites=H.graph.vertices, validate=False
    )


def truncate_to_region(H, B, restrict_graph=False):
    '''
    Terms supported inside B. The result lives on the same graph unless
    restrict_graph is set, in which case it lives on the subgraph induced by B.
    '''
    B = H.graph.check_region(B)
    terms = [t for t in H.terms if B.issuperset(t.support)]
    graph = H.graph.subgraph(B) if restrict_graph else H.graph
    return LocalHamiltonian(graph, terms, H.local_dim)


def combine(*hamiltonians):
    first = hamiltonians[0]
    for other in hamiltonians[1:]:
        if not same_graph(first.graph, other.graph) or other.local_dim != first.local_dim:
            raise DomainError('Hamiltonians live on different graphs')
    terms = [t for H in hamiltonians for t in H.terms]
    return LocalHamiltonian(first.graph, terms, first.local_dim)


def _differences(H, H0):
    if not same_graph(H.graph, H0.graph) or H.local_dim != H0.local_dim:
        raise DomainError('Hamiltonians live on different graphs')
    grouped = H.terms_by_support()
    grouped0 = H0.terms_by_support()
    differences = {}
    for support in set(grouped) | set(grouped0):
        size = H.local_dim ** len(support)
        difference = grouped.get(support, np.zeros((size, size))) - grouped0.get(
            support, np.zeros((size, size))
        )
        if np.max(np.abs(difference)) > TERM_MATCH_TOLERANCE:
            differences[support] = difference
    return differences


def difference_support(H, H0):
    return frozenset(v for support in _differences(H, H0) for v in support)


def difference_terms(H, H0):
    '''The local Hamiltonian H - H0.'''
    terms = [LocalTerm(s, m, H.local_dim) for s, m in sorted(_differences(H, H0).items())]
    return LocalHamiltonian(H.graph, terms, H.local_dim)


def random_hermitian(dim, rng, norm=None):
    matrix = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    matrix = (matrix + matrix.conj().T) / 2
    if norm is not None:
        matrix = matrix * (norm / spectral_norm(matrix))
    return matrix


def random_local_hamiltonian(graph, rng, strength=1.0, fields=True, local_dim=2):
    terms = [
        LocalTerm(e, random_hermitian(local_dim ** 2, rng, strength * rng.uniform(0.5, 1.0)), local_dim)
        for e in graph.edges
    ]
    if fields:
        terms.extend(
            LocalTerm((v,), random_hermitian(local_dim, rng, strength * rng.uniform(0.0, 0.5)), local_dim)
            for v in graph.vertices
        )
    return LocalHamiltonian(graph, terms, local_dim)
