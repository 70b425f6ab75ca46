# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Matrix product operators on a chain.

Site tensors have shape (left bond, out, in, right bond); the outer bonds
have dimension 1. Site 1 is the most significant tensor factor.
'''

import json
import logging

from dataclasses import dataclass

import numpy as np

from marshmallow import fields

from .. import budget
from ..exceptions import DomainError, ResourceError
from ..mallow_helpers import NonEmpty, OneOf, Range, Schema, handle_validation_exception

logger = logging.getLogger(__name__)

FILE_FORMAT = 'gibbslab-mpo'
FILE_VERSION = 1
PAYLOAD_DTYPE = '<c16'
LOSSLESS_FLOOR = 1e-14


class MPOHeaderSchema(Schema):
    format = fields.String(required=True, validate=OneOf([FILE_FORMAT]))
    version = fields.Integer(required=True, validate=OneOf([FILE_VERSION]))
    dtype = fields.String(required=True, validate=OneOf([PAYLOAD_DTYPE]))
    local_dims = fields.List(fields.Integer(validate=Range(min=1)), required=True, validate=NonEmpty())
    bond_dims = fields.List(fields.Integer(validate=Range(min=1)), required=True)


@dataclass(frozen=True)
class Compression:
    mpo: 'MPO'
    error: float


def _check_bond(dimension):
    limit = budget.max_bond()
    if dimension > limit:
        raise ResourceError(budget.MAX_BOND_ENV, limit, dimension)


def _kept(singular_values, max_bond, svd_floor):
    if singular_values.size == 0 or singular_values[0] == 0:
        return 1
    keep = int(np.count_nonzero(singular_values > svd_floor * singular_values[0]))
    return max(1, min(keep, max_bond))


class MPO:
    def __init__(self, tensors):
        tensors = [np.asarray(t, dtype=complex) for t in tensors]
        if not tensors:
            raise DomainError('An MPO needs at least one site')
        for k, tensor in enumerate(tensors):
            if tensor.ndim != 4 or tensor.shape[1] != tensor.shape[2]:
                raise DomainError('Site {} tensor has shape {}'.format(k + 1, tensor.shape))
            if k and tensors[k - 1].shape[3] != tensor.shape[0]:
                raise DomainError('Bond mismatch between sites {} and {}'.format(k, k + 1))
            _check_bond(tensor.shape[3])
        if tensors[0].shape[0] != 1 or tensors[-1].shape[3] != 1:
            raise DomainError('Outer bonds of an MPO must have dimension 1')
        self.tensors = tensors

    def __repr__(self):
        return 'MPO(sites={}, bond_dims={})'.format(self.n_sites, self.bond_dims)

    @property
    def n_sites(self):
        return len(self.tensors)

    @property
    def local_dims(self):
        return tuple(t.shape[1] for t in self.tensors)

    @property
    def bond_dims(self):
        '''Inner bond dimensions, one per pair of neighbouring sites.'''
        return tuple(t.shape[3] for t in self.tensors[:-1])

    @property
    def max_bond_dim(self):
        return max(self.bond_dims, default=1)

    @classmethod
    def identity(cls, local_dims):
        return cls([np.eye(d).reshape(1, d, d, 1) for d in local_dims])

    @classmethod
    def from_product(cls, matrices):
        return cls([np.asarray(m).reshape(1, m.shape[0], m.shape[1], 1) for m in matrices])

    @classmethod
    def from_dense(cls, matrix, local_dims, max_bond=None, svd_floor=LOSSLESS_FLOOR):
        '''Tensor-train decomposition by successive SVDs.'''
        return cls(_tensor_train(np.asarray(matrix), tuple(local_dims), max_bond, svd_floor))

    @classmethod
    def from_dense_on_sites(cls, matrix, positions, local_dims, svd_floor=LOSSLESS_FLOOR):
        '''Operator acting as matrix on the sites at sorted positions, identity elsewhere.'''
        positions = list(positions)
        local = _tensor_train(np.asarray(matrix), tuple(local_dims[p] for p in positions), None, svd_floor)
        by_position = dict(zip(positions, local))
        tensors = []
        bond = 1
        for p, d in enumerate(local_dims):
            if p in by_position:
                tensor = by_position[p]
                bond = tensor.shape[3]
            else:
                tensor = np.einsum('ab,ij->aijb', np.eye(bond), np.eye(d))
            tensors.append(tensor)
        return cls(tensors)

    def to_dense(self):
        budget.check_dimension(int(np.prod(self.local_dims)))
        first = self.tensors[0]
        result = first[0]
        for tensor in self.tensors[1:]:
            out_dim, in_dim = result.shape[0], result.shape[1]
            d = tensor.shape[1]
            result = np.einsum('abx,xcdy->acbdy', result, tensor)
            result = result.reshape(out_dim * d, in_dim * d, tensor.shape[3])
        return result[:, :, 0]

    def trace(self):
        environment = np.ones((1,), dtype=complex)
        for tensor in self.tensors:
            environment = environment @ np.einsum('aiib->ab', tensor)
        return environment[0]

    def dagger(self):
        return MPO([t.conj().transpose(0, 2, 1, 3) for t in self.tensors])

    def scale(self, factor):
        tensors = list(self.tensors)
        tensors[0] = tensors[0] * factor
        return MPO(tensors)

    def _check_compatible(self, other):
        if self.local_dims != other.local_dims:
            raise DomainError('MPOs act on different chains')

    def __add__(self, other):
        self._check_compatible(other)
        if self.n_sites == 1:
            return MPO([self.tensors[0] + other.tensors[0]])
        tensors = []
        last = self.n_sites - 1
        for k, (a, b) in enumerate(zip(self.tensors, other.tensors)):
            d = a.shape[1]
            left = 1 if k == 0 else a.shape[0] + b.shape[0]
            right = 1 if k == last else a.shape[3] + b.shape[3]
            tensor = np.zeros((left, d, d, right), dtype=complex)
            if k == 0:
                tensor[:, :, :, : a.shape[3]] = a
                tensor[:, :, :, a.shape[3]:] = b
            elif k == last:
                tensor[: a.shape[0]] = a
                tensor[a.shape[0]:] = b
            else:
                tensor[: a.shape[0], :, :, : a.shape[3]] = a
                tensor[a.shape[0]:, :, :, a.shape[3]:] = b
            tensors.append(tensor)
        return MPO(tensors)

    def __matmul__(self, other):
        self._check_compatible(other)
        tensors = []
        for a, b in zip(self.tensors, other.tensors):
            product = np.einsum('aikb,ckjd->acijbd', a, b)
            d = a.shape[1]
            tensors.append(product.reshape(a.shape[0] * b.shape[0], d, d, a.shape[3] * b.shape[3]))
        return MPO(tensors)

    def compress(self, max_bond=None, svd_floor=0.0):
        '''
        Left-orthogonalize with QRs, then truncate with SVDs from the right.
        The reported error is the Frobenius distance to the input.
        '''
        if max_bond is None:
            max_bond = budget.max_bond()
        if max_bond < 1:
            raise DomainError('Bond dimension cap must be at least 1, got {}'.format(max_bond))
        if svd_floor < 0:
            raise DomainError('SVD floor must be non-negative, got {}'.format(svd_floor))
        tensors = [t.copy() for t in self.tensors]
        for k in range(self.n_sites - 1):
            left, d, _, right = tensors[k].shape
            q, r = np.linalg.qr(tensors[k].reshape(left * d * d, right))
            tensors[k] = q.reshape(left, d, d, q.shape[1])
            tensors[k + 1] = np.einsum('xa,aijb->xijb', r, tensors[k + 1])
        discarded = 0.0
        for k in range(self.n_sites - 1, 0, -1):
            left, d, _, right = tensors[k].shape
            u, s, vh = np.linalg.svd(tensors[k].reshape(left, d * d * right), full_matrices=False)
            keep = _kept(s, max_bond, svd_floor)
            discarded += float(np.sum(s[keep:] ** 2))
            tensors[k] = vh[:keep].reshape(keep, d, d, right)
            tensors[k - 1] = np.einsum('aijx,xb->aijb', tensors[k - 1], u[:, :keep] * s[:keep])
        compressed = MPO(tensors)
        error = float(np.sqrt(discarded))
        logger.debug('compressed %r -> %r with error %.3e', self, compressed, error)
        return Compression(compressed, error)

    def save(self, path):
        '''One JSON header line followed by the little-endian complex payload.'''
        header = {
            'format': FILE_FORMAT,
            'version': FILE_VERSION,
            'dtype': PAYLOAD_DTYPE,
            'local_dims': list(self.local_dims),
            'bond_dims': list(self.bond_dims),
        }
        with open(path, 'wb') as f:
            f.write(json.dumps(header, sort_keys=True).encode('utf-8'))
            f.write(b'\n')
            for tensor in self.tensors:
                f.write(np.ascontiguousarray(tensor, dtype=PAYLOAD_DTYPE).tobytes())

    @classmethod
    @handle_validation_exception
    def load(cls, path):
        with open(path, 'rb') as f:
            header_line = f.readline()
            payload = f.read()
        try:
            raw_header = json.loads(header_line.decode('utf-8'))
        except ValueError as e:
            raise DomainError('{} is not an MPO file: {}'.format(path, e))
        header = MPOHeaderSchema().load(raw_header)
        local_dims = header['local_dims']
        bonds = [1] + header['bond_dims'] + [1]
        if len(bonds) != len(local_dims) + 1:
            raise DomainError('{} lists {} bonds for {} sites'.format(path, len(bonds) - 2, len(local_dims)))
        data = np.frombuffer(payload, dtype=PAYLOAD_DTYPE)
        tensors = []
        offset = 0
        for k, d in enumerate(local_dims):
            shape = (bonds[k], d, d, bonds[k + 1])
            size = int(np.prod(shape))
            if offset + size > data.size:
                raise DomainError('{} is truncated'.format(path))
            tensors.append(data[offset:offset + size].reshape(shape).astype(complex))
            offset += size
        if offset != data.size:
            raise DomainError('{} has {} trailing values'.format(path, data.size - offset))
        return cls(tensors)


def _tensor_train(matrix, local_dims, max_bond, svd_floor):
    n = len(local_dims)
    dim = int(np.prod(local_dims))
    if matrix.shape != (dim, dim):
        raise DomainError('Matrix of shape {} does not act on {}'.format(matrix.shape, local_dims))
    if max_bond is None:
        max_bond = budget.max_bond()
    tensor = matrix.reshape(local_dims + local_dims)
    interleaved = [axis for k in range(n) for axis in (k, n + k)]
    remainder = tensor.transpose(interleaved).reshape(1, -1)
    tensors = []
    for k, d in enumerate(local_dims[:-1]):
        left = remainder.shape[0]
        u, s, vh = np.linalg.svd(remainder.reshape(left * d * d, -1), full_matrices=False)
        keep = _kept(s, max_bond, svd_floor)
        tensors.append(u[:, :keep].reshape(left, d, d, keep))
        remainder = s[:keep, None] * vh[:keep]
    d = local_dims[-1]
    tensors.append(remainder.reshape(remainder.shape[0], d, d, 1))
    return tensors
