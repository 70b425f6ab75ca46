# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Dense operator algebra on tensor products of site spaces.

Every matrix function goes through one Hermitian eigendecomposition. Site
factors are ordered by site label, the first factor being the most
significant one. Entropies are in bits.

Operators keep one of three representations until a full matrix is asked
for: a dense matrix, a diagonal, or a small matrix acting on a few sites.
'''

import logging
import math

from functools import cached_property, reduce

import numpy as np
import opt_einsum as oe
import pandas as pd
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg
import scipy.special

from . import budget
from .debug import trace_duration
from .exceptions import DomainError, NonHermitianError, NotAStateError

logger = logging.getLogger(__name__)

HERMITIAN_TOLERANCE = 1e-12
ZERO_EIGENVALUE = 1e-14
NEGATIVE_EIGENVALUE = -1e-12
TRACE_TOLERANCE = 1e-10
BITS_TO_NATS = math.log(2)
# below this the ground energy comes from a dense eigenvalue solve
DENSE_GROUND_DIMENSION = 64

_CHUNK_ELEMENTS = 2 ** 22


def _product(values):
    return int(np.prod(values, dtype=np.int64)) if len(values) else 1


def hermitian_deviation(matrix):
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def _maybe_real(array, tolerance=HERMITIAN_TOLERANCE):
    if np.iscomplexobj(array) and (array.size == 0 or np.max(np.abs(array.imag)) <= tolerance):
        return np.ascontiguousarray(array.real)
    return array


def _sparse_unit(d, a, b):
    return scipy.sparse.csr_matrix(([1.0], ([a], [b])), shape=(d, d))


def kron_on_sites(factors, dims):
    '''
    Sparse tensor product placing factors[position] on the given positions and
    identities elsewhere. Consecutive identities are merged into one factor.
    '''
    chain = []
    identity_dim = 1
    for position, d in enumerate(dims):
        factor = factors.get(position)
        if factor is None:
            identity_dim *= d
            continue
        if identity_dim > 1:
            chain.append(scipy.sparse.identity(identity_dim, format='csr'))
            identity_dim = 1
        chain.append(scipy.sparse.csr_matrix(factor))
    if identity_dim > 1 or not chain:
        chain.append(scipy.sparse.identity(identity_dim, format='csr'))
    return reduce(lambda x, y: scipy.sparse.kron(x, y, format='csr'), chain)


def embed_operator(matrix, positions, dims):
    '''
    Sparse embedding of a matrix acting on the factors at positions (in that
    order) into the full space, identity on all other factors.
    '''
    dims = tuple(dims)
    positions = list(positions)
    if len(set(positions)) != len(positions) or any(
        p < 0 or p >= len(dims) for p in positions
    ):
        raise DomainError('Invalid site positions {} for {} sites'.format(positions, len(dims)))
    local_dims = [dims[p] for p in positions]
    matrix = np.asarray(matrix)
    size = _product(local_dims)
    if matrix.shape != (size, size):
        raise DomainError(
            'Local matrix of shape {} does not act on sites of dimensions {}'.format(
                matrix.shape, local_dims
            )
        )
    dim = _product(dims)
    dtype = np.result_type(matrix.dtype, np.float64)
    result = scipy.sparse.csr_matrix((dim, dim), dtype=dtype)
    rows, cols = np.nonzero(matrix)
    for row, col in zip(rows, cols):
        out_digits = np.unravel_index(row, local_dims)
        in_digits = np.unravel_index(col, local_dims)
        factors = {
            p: _sparse_unit(dims[p], a, b) for p, a, b in zip(positions, out_digits, in_digits)
        }
        result = result + matrix[row, col] * kron_on_sites(factors, dims)
    return result.tocsr()


def _apply_local(matrix, positions, dims, vectors):
    n = len(dims)
    columns = vectors.shape[1]
    local_dims = tuple(dims[p] for p in positions)
    tensor = vectors.reshape(tuple(dims) + (columns,))
    op = np.asarray(matrix).reshape(local_dims * 2)
    state_idx = [oe.get_symbol(i) for i in range(n + 1)]
    out_idx = list(state_idx)
    for j, p in enumerate(positions):
        out_idx[p] = oe.get_symbol(n + 1 + j)
    op_idx = [out_idx[p] for p in positions] + [state_idx[p] for p in positions]
    expression = '{},{}->{}'.format(''.join(op_idx), ''.join(state_idx), ''.join(out_idx))
    return oe.contract(expression, op, tensor).reshape(vectors.shape[0], columns)


class EigenBasis:
    '''
    Orthonormal columns: either a dense (dim, rank) array or a selection of
    computational basis vectors given by their indices.
    '''

    def __init__(self, dim, vectors=None, order=None):
        if (vectors is None) == (order is None):
            raise DomainError('EigenBasis needs exactly one of vectors or order')
        self.dim = dim
        self._vectors = vectors
        self._order = None if order is None else np.asarray(order, dtype=np.int64)

    @property
    def rank(self):
        if self._order is not None:
            return len(self._order)
        return self._vectors.shape[1]

    @property
    def is_computational(self):
        return self._order is not None

    @property
    def order(self):
        return self._order

    def dense(self, columns=None):
        if self._order is None:
            return self._vectors if columns is None else self._vectors[:, columns]
        order = self._order if columns is None else self._order[columns]
        vectors = np.zeros((self.dim, len(order)))
        vectors[order, np.arange(len(order))] = 1.0
        return vectors

    def select(self, columns):
        columns = np.asarray(columns, dtype=np.int64)
        if self._order is not None:
            return EigenBasis(self.dim, order=self._order[columns])
        return EigenBasis(self.dim, vectors=self._vectors[:, columns])

    def column_chunks(self):
        step = max(1, _CHUNK_ELEMENTS // max(self.dim, 1))
        for start in range(0, self.rank, step):
            yield slice(start, min(start + step, self.rank))

    def applied(self, operator, columns=None):
        '''operator @ V for the selected columns.'''
        if self._order is not None and operator.is_diagonal:
            order = self._order if columns is None else self._order[columns]
            result = np.zeros((self.dim, len(order)), dtype=operator.diagonal().dtype)
            result[order, np.arange(len(order))] = operator.diagonal()[order]
            return result
        return operator.apply(self.dense(columns))

    def matrix_elements(self, operator):
        '''V^dagger operator V.'''
        if self._order is not None:
            if operator.is_diagonal:
                return np.diag(operator.diagonal()[self._order])
            return operator.apply(self.dense())[self._order, :]
        return self._vectors.conj().T @ operator.apply(self._vectors)

    def expectations(self, operator):
        '''Diagonal of V^dagger operator V.'''
        if self._order is not None:
            return operator.diagonal()[self._order]
        values = []
        for chunk in self.column_chunks():
            block = self._vectors[:, chunk]
            values.append(np.einsum('ij,ij->j', block.conj(), operator.apply(block)))
        return np.concatenate(values) if values else np.zeros(0)

    def populations_of(self, vector):
        '''|<v_j|psi>|^2 for every column.'''
        if self._order is not None:
            return np.abs(vector[self._order]) ** 2
        return np.abs(self._vectors.conj().T @ vector) ** 2

    def overlap(self, other):
        '''V^dagger W.'''
        if self._order is not None and other._order is not None:
            return (self._order[:, None] == other._order[None, :]).astype(float)
        if self._order is not None:
            return other.dense()[self._order, :]
        if other._order is not None:
            return self._vectors.conj()[other._order, :].T
        return self._vectors.conj().T @ other._vectors

    def assemble(self, values, dims, sites=None, hermitian=True):
        '''The operator sum_j values_j |v_j><v_j|.'''
        values = np.asarray(values)
        if self._order is not None:
            diagonal = np.zeros(self.dim, dtype=values.dtype)
            diagonal[self._order] = values
            return DenseOperator.from_diagonal(diagonal, dims, sites)
        matrix = (self._vectors * values) @ self._vectors.conj().T
        return DenseOperator(matrix, dims, hermitian=hermitian, sites=sites, validate=False)


class DenseOperator:
    '''
    Square matrix on the tensor product of site spaces of dimensions dims.
    Read-only once built.
    '''

    def __init__(self, matrix, dims=None, hermitian=None, sites=None, validate=True):
        matrix = np.array(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DomainError('Operator matrix must be square, got shape {}'.format(matrix.shape))
        dims = tuple(dims) if dims is not None else (matrix.shape[0],)
        if _product(dims) != matrix.shape[0]:
            raise DomainError(
                'Matrix size {} does not match site dimensions {}'.format(matrix.shape[0], dims)
            )
        if hermitian is None:
            hermitian = hermitian_deviation(matrix) <= HERMITIAN_TOLERANCE
        elif hermitian and validate:
            deviation = hermitian_deviation(matrix)
            if deviation > HERMITIAN_TOLERANCE:
                raise NonHermitianError(deviation)
        matrix.setflags(write=False)
        self._init(dims, hermitian, sites)
        self.__dict__['matrix'] = matrix

    def _init(self, dims, hermitian, sites):
        self.dims = tuple(dims)
        self.hermitian = bool(hermitian)
        self.sites = tuple(sites) if sites is not None else tuple(range(1, len(dims) + 1))
        if len(self.sites) != len(self.dims):
            raise DomainError('{} site labels for {} factors'.format(len(self.sites), len(self.dims)))
        self._diagonal = None
        self._local = None

    @classmethod
    def from_diagonal(cls, diagonal, dims=None, sites=None):
        diagonal = np.array(diagonal)
        dims = tuple(dims) if dims is not None else (len(diagonal),)
        if _product(dims) != len(diagonal):
            raise DomainError('Diagonal of length {} does not match {}'.format(len(diagonal), dims))
        operator = cls.__new__(cls)
        hermitian = not np.iscomplexobj(diagonal) or np.max(np.abs(diagonal.imag), initial=0) <= HERMITIAN_TOLERANCE
        operator._init(dims, hermitian, sites)
        diagonal.setflags(write=False)
        operator._diagonal = diagonal
        return operator

    @classmethod
    def from_local(cls, matrix, positions, dims, hermitian=None, sites=None):
        '''Operator acting as matrix on the factors at positions, identity elsewhere.'''
        matrix = np.array(matrix)
        local_dims = [dims[p] for p in positions]
        if matrix.shape != (_product(local_dims),) * 2:
            raise DomainError('Local matrix shape {} does not fit {}'.format(matrix.shape, local_dims))
        if hermitian is None:
            hermitian = hermitian_deviation(matrix) <= HERMITIAN_TOLERANCE
        operator = cls.__new__(cls)
        operator._init(dims, hermitian, sites)
        matrix.setflags(write=False)
        operator._local = (matrix, tuple(positions))
        return operator

    @classmethod
    def identity(cls, dims, sites=None):
        return cls.from_diagonal(np.ones(_product(dims)), dims, sites)

    def __repr__(self):
        return '{}(dims={}, hermitian={})'.format(type(self).__name__, self.dims, self.hermitian)

    @property
    def dim(self):
        return _product(self.dims)

    @property
    def is_diagonal(self):
        return self._diagonal is not None

    @cached_property
    def matrix(self):
        budget.check_dimension(self.dim)
        if self._diagonal is not None:
            matrix = np.diag(self._diagonal)
        else:
            local, positions = self._local
            matrix = _maybe_real(embed_operator(local, positions, self.dims).toarray())
        matrix.setflags(write=False)
        return matrix

    def diagonal(self):
        if self._diagonal is not None:
            return self._diagonal
        if self._local is not None:
            local, positions = self._local
            return embed_operator(local, positions, self.dims).diagonal()
        return np.diagonal(self.matrix)

    def apply(self, vectors):
        '''operator @ vectors for a (dim, k) array.'''
        if self._diagonal is not None:
            return self._diagonal[:, None] * vectors
        if self._local is not None:
            local, positions = self._local
            return _apply_local(local, positions, self.dims, vectors)
        return self.matrix @ vectors

    def adjoint(self):
        if self.hermitian:
            return self
        if self._diagonal is not None:
            return DenseOperator.from_diagonal(self._diagonal.conj(), self.dims, self.sites)
        if self._local is not None:
            local, positions = self._local
            return DenseOperator.from_local(local.conj().T, positions, self.dims, False, self.sites)
        return DenseOperator(self.matrix.conj().T, self.dims, False, self.sites)

    def trace(self):
        return complex(np.sum(self.diagonal()))

    @cached_property
    def eigh(self):
        '''Ascending eigenvalues and the matching EigenBasis.'''
        if not self.hermitian:
            raise NonHermitianError(hermitian_deviation(self.matrix))
        if self.is_diagonal:
            order = np.argsort(self._diagonal.real, kind='stable')
            return self._diagonal.real[order], EigenBasis(self.dim, order=order)
        return _eigh(self.matrix)

    @property
    def eigenvalues(self):
        return self.eigh[0]

    @property
    def eigenbasis(self):
        return self.eigh[1]

    def _check_compatible(self, other):
        if self.dims != other.dims:
            raise DomainError('Operators on different spaces: {} vs {}'.format(self.dims, other.dims))

    def __add__(self, other):
        self._check_compatible(other)
        hermitian = self.hermitian and other.hermitian
        if self.is_diagonal and other.is_diagonal:
            return DenseOperator.from_diagonal(self.diagonal() + other.diagonal(), self.dims, self.sites)
        return DenseOperator(self.matrix + other.matrix, self.dims, hermitian or None, self.sites, False)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        hermitian = self.hermitian and np.imag(scalar) == 0
        if self.is_diagonal:
            return DenseOperator.from_diagonal(scalar * self.diagonal(), self.dims, self.sites)
        if self._local is not None:
            local, positions = self._local
            return DenseOperator.from_local(scalar * local, positions, self.dims, hermitian, self.sites)
        return DenseOperator(scalar * self.matrix, self.dims, hermitian, self.sites, False)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def __matmul__(self, other):
        self._check_compatible(other)
        return DenseOperator(self.matrix @ other.matrix, self.dims, None, self.sites)


@trace_duration
def _eigh(matrix):
    budget.check_dimension(matrix.shape[0])
    logger.debug('dense eigendecomposition of dimension %s', matrix.shape[0])
    values, vectors = scipy.linalg.eigh(matrix)
    return values, EigenBasis(matrix.shape[0], vectors=vectors)


class DensityMatrix(DenseOperator):
    '''
    Positive semidefinite operator of unit trace, held through its spectral
    decomposition: populations[j] belongs to column j of basis. Columns not
    stored span the kernel.
    '''

    def __init__(self, matrix, dims=None, sites=None):
        operator = DenseOperator(matrix, dims, hermitian=True, sites=sites)
        values, basis = operator.eigh
        self._init(operator.dims, True, operator.sites)
        self._set_spectrum(values, basis)
        self.__dict__['matrix'] = operator.matrix
        self.log_partition_function = None
        self.beta = None

    @classmethod
    def from_spectrum(
        cls, populations, basis, dims, sites=None, log_partition_function=None, beta=None
    ):
        state = cls.__new__(cls)
        state._init(dims, True, sites)
        if basis.dim != state.dim:
            raise DomainError('Basis dimension {} does not match {}'.format(basis.dim, dims))
        state._set_spectrum(np.asarray(populations, dtype=float), basis)
        state.log_partition_function = log_partition_function
        state.beta = beta
        return state

    @classmethod
    def from_diagonal(cls, diagonal, dims=None, sites=None):
        diagonal = np.asarray(diagonal, dtype=float)
        dims = tuple(dims) if dims is not None else (len(diagonal),)
        order = np.nonzero(diagonal != 0)[0]
        return cls.from_spectrum(diagonal[order], EigenBasis(len(diagonal), order=order), dims, sites)

    @classmethod
    def pure(cls, vector, dims=None, sites=None):
        vector = np.asarray(vector)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise NotAStateError('Zero vector is not a state')
        vector = _maybe_real(vector / norm)
        dims = tuple(dims) if dims is not None else (len(vector),)
        basis = EigenBasis(len(vector), vectors=vector.reshape(-1, 1))
        return cls.from_spectrum([1.0], basis, dims, sites)

    @classmethod
    def maximally_mixed(cls, dims, sites=None):
        dim = _product(dims)
        return cls.from_spectrum(
            np.full(dim, 1.0 / dim), EigenBasis(dim, order=np.arange(dim)), dims, sites
        )

    def _set_spectrum(self, populations, basis):
        if len(populations) and populations.min() < NEGATIVE_EIGENVALUE:
            raise NotAStateError(
                'Operator has negative eigenvalue {:.3e}'.format(populations.min()),
                details={'min_eigenvalue': float(populations.min())},
            )
        populations = np.clip(populations, 0.0, None)
        total = populations.sum()
        if abs(total - 1.0) > TRACE_TOLERANCE:
            raise NotAStateError(
                'Operator has trace {!r}, expected 1'.format(total), details={'trace': float(total)}
            )
        self.populations = populations / total
        self.populations.setflags(write=False)
        self.basis = basis

    @cached_property
    def matrix(self):
        budget.check_dimension(self.dim)
        return self.basis.assemble(self.populations, self.dims, self.sites).matrix

    @property
    def is_diagonal(self):
        return self.basis.is_computational

    def diagonal(self):
        if self.basis.is_computational:
            diagonal = np.zeros(self.dim)
            diagonal[self.basis.order] = self.populations
            return diagonal
        diagonal = np.zeros(self.dim)
        for chunk in self.basis.column_chunks():
            block = self.basis.dense(chunk)
            diagonal += (np.abs(block) ** 2) @ self.populations[chunk]
        return diagonal

    def apply(self, vectors):
        if self.basis.is_computational:
            return self.diagonal()[:, None] * vectors
        dense = self.basis.dense()
        return (dense * self.populations) @ (dense.conj().T @ vectors)

    @property
    def eigh(self):
        order = np.argsort(self.populations, kind='stable')
        return self.populations[order], self.basis.select(order)

    @property
    def eigenvalues(self):
        '''All eigenvalues in ascending order, kernel included.'''
        kernel = np.zeros(self.dim - len(self.populations))
        return np.concatenate([kernel, np.sort(self.populations)])

    @property
    def rank(self):
        return int(np.count_nonzero(self.populations > ZERO_EIGENVALUE))

    def expectation(self, operator):
        return complex(np.dot(self.populations, self.basis.expectations(operator)))


def as_state(rho):
    if isinstance(rho, DensityMatrix):
        return rho
    if isinstance(rho, DenseOperator):
        return DensityMatrix(rho.matrix, rho.dims, rho.sites)
    return DensityMatrix(rho)


def expectation(rho, operator):
    value = as_state(rho).expectation(operator)
    return value.real if operator.hermitian else value


def gibbs_state(H, beta):
    '''e^{-beta H}/Z through the eigenbasis of H, with log Z kept alongside.'''
    if not np.isfinite(beta):
        raise DomainError('Inverse temperature must be finite, got {}'.format(beta))
    if not H.hermitian:
        raise NonHermitianError(hermitian_deviation(H.matrix))
    energies, basis = H.eigh
    exponents = -beta * energies
    shift = exponents.max()
    weights = np.exp(exponents - shift)
    total = weights.sum()
    log_z = float(shift + np.log(total))
    return DensityMatrix.from_spectrum(
        weights / total, basis, H.dims, H.sites, log_partition_function=log_z, beta=beta
    )


def fractional_power(rho, tau):
    '''rho^tau; eigenvalues at or below 1e-14 map to 0 for tau > 0 and to 1 for tau = 0.'''
    if not 0 <= tau <= 1:
        raise DomainError('Exponent tau must lie in [0, 1], got {}'.format(tau))
    rho = as_state(rho)
    if tau == 0:
        return DenseOperator.identity(rho.dims, rho.sites)
    if tau == 1:
        return rho
    populations = rho.populations
    values = np.where(populations > ZERO_EIGENVALUE, populations, 0.0) ** tau
    return rho.basis.assemble(values, rho.dims, rho.sites)


def _split_positions(operator, keep):
    keep = set(keep)
    missing = keep.difference(operator.sites)
    if missing:
        raise DomainError('Sites {} are not factors of the operator'.format(sorted(missing)))
    keep_positions = [i for i, s in enumerate(operator.sites) if s in keep]
    rest_positions = [i for i, s in enumerate(operator.sites) if s not in keep]
    keep_dims = tuple(operator.dims[i] for i in keep_positions)
    keep_sites = tuple(operator.sites[i] for i in keep_positions)
    return keep_positions, rest_positions, keep_dims, keep_sites


def _reduce_diagonal(diagonal, dims, keep_positions, rest_positions):
    tensor = np.asarray(diagonal).reshape(dims)
    reduced = tensor.transpose(keep_positions + rest_positions)
    keep_dim = _product([dims[i] for i in keep_positions])
    return reduced.reshape(keep_dim, -1).sum(axis=1)


def _reduce_columns(block, dims, permutation, keep_dim):
    '''Tr over the rest factors of block block^dagger; permutation puts the kept factors first.'''
    tensor = block.reshape(dims + (block.shape[1],)).transpose(permutation)
    tensor = tensor.reshape(keep_dim, -1, block.shape[1])
    return oe.contract('arc,brc->ab', tensor, tensor.conj())


def _reduce_spectral(state, keep_positions, rest_positions, keep_dim):
    permutation = keep_positions + rest_positions + [len(state.dims)]
    reduced = np.zeros((keep_dim, keep_dim), dtype=complex)
    for chunk in state.basis.column_chunks():
        weights = np.sqrt(state.populations[chunk])
        reduced += _reduce_columns(state.basis.dense(chunk) * weights, state.dims, permutation, keep_dim)
    return _maybe_real(reduced)


def partial_trace(rho, keep):
    '''Trace out every site factor not in keep; keep holds site labels.'''
    keep_positions, rest_positions, keep_dims, keep_sites = _split_positions(rho, keep)
    if not rest_positions:
        return rho
    keep_dim = _product(keep_dims)
    if isinstance(rho, DensityMatrix):
        if rho.is_diagonal:
            diagonal = _reduce_diagonal(rho.diagonal(), rho.dims, keep_positions, rest_positions)
            return DensityMatrix.from_diagonal(diagonal, keep_dims, keep_sites)
        reduced = _reduce_spectral(rho, keep_positions, rest_positions, keep_dim)
        return DensityMatrix(reduced, keep_dims, keep_sites)
    if rho.is_diagonal:
        diagonal = _reduce_diagonal(rho.diagonal(), rho.dims, keep_positions, rest_positions)
        return DenseOperator.from_diagonal(diagonal, keep_dims, keep_sites)
    n = len(rho.dims)
    tensor = rho.matrix.reshape(rho.dims * 2)
    row_idx = [oe.get_symbol(i) for i in range(n)]
    col_idx = [oe.get_symbol(n + i) for i in range(n)]
    for i in rest_positions:
        col_idx[i] = row_idx[i]
    out_idx = [row_idx[i] for i in keep_positions] + [col_idx[i] for i in keep_positions]
    expression = '{}->{}'.format(''.join(row_idx + col_idx), ''.join(out_idx))
    reduced = oe.contract(expression, tensor).reshape(keep_dim, keep_dim)
    return DenseOperator(reduced, keep_dims, rho.hermitian or None, keep_sites, validate=False)


def reduced_gibbs_state(matrix, dims, keep, beta, sites=None, block_columns=None):
    '''
    Reduction to the sites in keep of e^{-beta H}/Z, H a sparse Hermitian
    matrix on factors of dimensions dims. e^{-beta (H - E0) / 2}, E0 the
    lowest eigenvalue, is applied to blocks of basis vectors: H is neither
    diagonalized nor made dense.
    '''
    if not np.isfinite(beta):
        raise DomainError('Inverse temperature must be finite, got {}'.format(beta))
    layout = DenseOperator.identity(dims, sites)
    keep_positions, rest_positions, keep_dims, keep_sites = _split_positions(layout, keep)
    if beta == 0:
        return DensityMatrix.maximally_mixed(keep_dims, keep_sites)
    dim = layout.dim
    matrix = scipy.sparse.csr_matrix(matrix)
    if matrix.shape != (dim, dim):
        raise DomainError('Matrix shape {} does not match site dimensions {}'.format(matrix.shape, dims))
    if dim <= DENSE_GROUND_DIMENSION:
        ground = scipy.linalg.eigvalsh(matrix.toarray(), subset_by_index=[0, 0])[0]
    else:
        ground = scipy.sparse.linalg.eigsh(matrix, k=1, which='SA', return_eigenvectors=False)[0]
    generator = (-beta / 2) * (matrix - ground * scipy.sparse.identity(dim, format='csr'))
    keep_dim = _product(keep_dims)
    permutation = keep_positions + rest_positions + [len(layout.dims)]
    step = block_columns or max(1, _CHUNK_ELEMENTS // dim)
    reduced = np.zeros((keep_dim, keep_dim), dtype=complex)
    for start in range(0, dim, step):
        columns = np.eye(dim, min(step, dim - start), k=-start)
        block = scipy.sparse.linalg.expm_multiply(generator, columns)
        reduced += _reduce_columns(block, layout.dims, permutation, keep_dim)
    logger.debug(
        'reduced Gibbs state on %s from %s blocks of dimension %s', keep_sites, -(-dim // step), dim
    )
    reduced = _maybe_real(reduced)
    return DensityMatrix(reduced / np.trace(reduced).real, keep_dims, keep_sites)


def tensor_product(*operators):
    '''Tensor product of operators on disjoint sites, factors sorted by site label.'''
    sites = [s for op in operators for s in op.sites]
    if len(set(sites)) != len(sites):
        raise DomainError('Operators share sites: {}'.format(sites))
    dims = [d for op in operators for d in op.dims]
    matrix = reduce(np.kron, [op.matrix for op in operators])
    order = sorted(range(len(sites)), key=lambda i: sites[i])
    n = len(sites)
    tensor = matrix.reshape(tuple(dims) * 2).transpose(order + [n + i for i in order])
    sorted_dims = tuple(dims[i] for i in order)
    sorted_sites = tuple(sites[i] for i in order)
    matrix = tensor.reshape(_product(sorted_dims), -1)
    if all(isinstance(op, DensityMatrix) for op in operators):
        return DensityMatrix(matrix, sorted_dims, sorted_sites)
    hermitian = all(op.hermitian for op in operators) or None
    return DenseOperator(matrix, sorted_dims, hermitian, sorted_sites, validate=False)


def _singular_values(operator):
    if isinstance(operator, DenseOperator):
        if operator.hermitian:
            return np.abs(operator.eigenvalues)
        operator = operator.matrix
    matrix = np.atleast_2d(np.asarray(operator))
    return scipy.linalg.svdvals(matrix)


def spectral_norm(operator):
    values = _singular_values(operator)
    return float(values.max()) if len(values) else 0.0


def trace_norm(operator):
    return float(np.sum(_singular_values(operator)))


def trace_distance(rho, sigma):
    '''||rho - sigma||_1, without the factor one half.'''
    return trace_norm(rho - sigma)


def trace_norm_dual_observable(delta):
    '''The observable sign(delta): unit spectral norm and Tr[A delta] = ||delta||_1.'''
    if not delta.hermitian:
        raise NonHermitianError(hermitian_deviation(delta.matrix))
    values, basis = delta.eigh
    signs = np.where(np.abs(values) > ZERO_EIGENVALUE, np.sign(values), 0.0)
    return basis.assemble(signs, delta.dims, delta.sites)


def von_neumann_entropy(rho):
    rho = as_state(rho)
    return float(np.sum(scipy.special.entr(rho.populations)) / BITS_TO_NATS)


def relative_entropy(rho, sigma):
    '''S(rho||sigma) in bits; +inf when the support of rho is not inside that of sigma.'''
    rho = as_state(rho)
    sigma = as_state(sigma)
    if rho.dims != sigma.dims:
        raise DomainError('States on different spaces: {} vs {}'.format(rho.dims, sigma.dims))
    support = sigma.populations > ZERO_EIGENVALUE
    overlap = sigma.basis.select(np.nonzero(support)[0]).overlap(rho.basis)
    weights = (np.abs(overlap) ** 2) @ rho.populations
    if 1.0 - weights.sum() > 1e-10:
        logger.debug('relative entropy: %.3e of the weight outside the support', 1 - weights.sum())
        return math.inf
    cross = -np.dot(weights, np.log2(sigma.populations[support]))
    return max(float(cross) - von_neumann_entropy(rho), 0.0)


def _complement(rho, A):
    return [s for s in rho.sites if s not in set(A)]


def mutual_information(rho, A, B=None):
    '''S(rho_A) + S(rho_B) - S(rho_AB) in bits; B defaults to the complement of A.'''
    rho = as_state(rho)
    B = _complement(rho, A) if B is None else list(B)
    if set(A) & set(B):
        raise DomainError('Bipartition parts overlap')
    rho_ab = partial_trace(rho, set(A) | set(B))
    return (
        von_neumann_entropy(partial_trace(rho_ab, A))
        + von_neumann_entropy(partial_trace(rho_ab, B))
        - von_neumann_entropy(rho_ab)
    )


def mutual_information_relative(rho, A, B=None):
    '''S(rho_AB || rho_A (x) rho_B) in bits.'''
    rho = as_state(rho)
    B = _complement(rho, A) if B is None else list(B)
    rho_ab = partial_trace(rho, set(A) | set(B))
    product = tensor_product(partial_trace(rho_ab, A), partial_trace(rho_ab, B))
    return relative_entropy(rho_ab, product)


def free_energy(rho, H, beta):
    '''Tr(rho H) - S(rho)/beta with the entropy in nats.'''
    if beta == 0 or not np.isfinite(beta):
        raise DomainError('Free energy needs a finite nonzero beta, got {}'.format(beta))
    rho = as_state(rho)
    return expectation(rho, H) - von_neumann_entropy(rho) * BITS_TO_NATS / beta


def dump_spectrum_csv(operator, path):
    eigenvalues = [repr(float(value)) for value in operator.eigenvalues]
    table = pd.DataFrame({'index': range(len(eigenvalues)), 'eigenvalue': eigenvalues})
    table.to_csv(path, index=False, lineterminator='\n')
