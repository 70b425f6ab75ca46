# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging

from ..debug import trace_duration
from ..exceptions import UnsupportedGeometryError
from .mpo import LOSSLESS_FLOOR, MPO, Compression
from .series import DEFAULT_MAX_CELLS, series_by_support

logger = logging.getLogger(__name__)

# direct sums accumulated before a lossless recompression
COMPRESS_EVERY = 8


def mpo_compress(mpo, max_bond, svd_floor=0.0):
    return mpo.compress(max_bond, svd_floor)


@trace_duration
def mpo_from_truncation(H, beta, L, j_max, max_cells=DEFAULT_MAX_CELLS):
    '''
    The truncated series on a chain as an MPO: each retained support block is
    decomposed on its own sites and the blocks are summed with lossless
    recompression.
    '''
    graph = H.graph
    if not graph.is_chain():
        raise UnsupportedGeometryError(
            'MPO construction needs a chain geometry, got {!r}'.format(graph),
            details={'spatial_dim': graph.spatial_dim, 'sites': graph.n_sites},
        )
    series = series_by_support(H, beta, L, j_max, max_cells)
    local_dims = H.dims
    total = None
    pending = 0
    for support, matrix in sorted(series.operators.items(), key=lambda item: sorted(item[0])):
        if support:
            block = MPO.from_dense_on_sites(matrix, graph.positions(sorted(support)), local_dims)
        else:
            block = MPO.identity(local_dims).scale(matrix[0, 0])
        total = block if total is None else total + block
        pending += 1
        if pending == COMPRESS_EVERY:
            total = total.compress(svd_floor=LOSSLESS_FLOOR).mpo
            pending = 0
    total = total.compress(svd_floor=LOSSLESS_FLOOR).mpo
    logger.info(
        'cluster MPO for L=%s, j_max=%s: %s supports, bond dimensions %s',
        L,
        j_max,
        len(series.operators),
        total.bond_dims,
    )
    return total


@trace_duration
def squaring_with_error(H, beta, L, j_max, max_bond, max_cells=DEFAULT_MAX_CELLS):
    '''
    M^dagger M with M the truncated series at beta / 2, compressed to max_bond
    before squaring; the square is recompressed losslessly. The error is the
    Frobenius distance between M and its compressed form.
    '''
    half = mpo_from_truncation(H, beta / 2, L, j_max, max_cells).compress(max_bond)
    square = half.mpo.dagger() @ half.mpo
    return Compression(square.compress(svd_floor=LOSSLESS_FLOOR).mpo, half.error)


def positivity_by_squaring(H, beta, L, j_max, max_bond, max_cells=DEFAULT_MAX_CELLS):
    '''The squared MPO, positive semidefinite up to rounding.'''
    return squaring_with_error(H, beta, L, j_max, max_bond, max_cells).mpo
