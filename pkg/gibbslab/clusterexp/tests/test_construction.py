# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import unittest

import numpy as np
import scipy.linalg

from hamcrest import (
    assert_that,
    calling,
    close_to,
    greater_than,
    greater_than_or_equal_to,
    less_than,
    raises,
)

from ...densequantum import gibbs_state, trace_norm
from ...exceptions import UnsupportedGeometryError
from ...hamiltonian import assemble_dense, build_model
from ...lattice import build_chain, build_cubic
from ..construction import mpo_from_truncation, positivity_by_squaring, squaring_with_error
from ..series import truncated_series_dense


def _tfim(graph):
    return build_model('transverse_ising', graph, {'J_zz': 1.0, 'h_x': 0.6})


class TestMPOFromTruncation(unittest.TestCase):
    def test_matches_the_dense_series(self):
        H = _tfim(build_chain(5))

        mpo = mpo_from_truncation(H, 0.4, 3, 6)

        expected = truncated_series_dense(H, 0.4, 3, 6).operator.matrix
        np.testing.assert_allclose(mpo.to_dense(), expected, atol=1e-10)

    def test_periodic_chain(self):
        H = _tfim(build_chain(4, periodic=True))

        assert_that(
            calling(mpo_from_truncation).with_args(H, 0.2, 3, 3), raises(UnsupportedGeometryError)
        )

    def test_square_lattice(self):
        H = _tfim(build_cubic(2, 2))

        assert_that(
            calling(mpo_from_truncation).with_args(H, 0.2, 3, 3), raises(UnsupportedGeometryError)
        )


class TestPositivityBySquaring(unittest.TestCase):
    def test_square_is_positive(self):
        H = _tfim(build_chain(4))

        dense = positivity_by_squaring(H, 0.6, 3, 6, 4).to_dense()

        hermitian_part = (dense + dense.conj().T) / 2
        np.testing.assert_allclose(dense, dense.conj().T, atol=1e-10)
        assert_that(float(np.linalg.eigvalsh(hermitian_part).min()), greater_than_or_equal_to(-1e-10))

    def test_approaches_the_gibbs_operator(self):
        H = _tfim(build_chain(4))
        expected = scipy.linalg.expm(-0.4 * assemble_dense(H).matrix)

        mpo = positivity_by_squaring(H, 0.4, 5, 16, 16)

        np.testing.assert_allclose(mpo.to_dense(), expected, atol=1e-8)

    def test_distance_to_the_gibbs_state_shrinks_with_L(self):
        H = _tfim(build_chain(5))
        thermal = gibbs_state(assemble_dense(H), 0.6).matrix
        distances = []
        for L in (2, 3, 4):
            square = positivity_by_squaring(H, 0.6, L, 16, 64).to_dense()
            distances.append(trace_norm(square / np.trace(square).real - thermal))

        assert_that(distances[1], less_than(distances[0]))
        assert_that(distances[2], less_than(distances[1]))


class TestSquaringWithError(unittest.TestCase):
    def test_lossless_cap(self):
        H = _tfim(build_chain(4))

        compression = squaring_with_error(H, 0.6, 3, 6, 64)

        assert_that(compression.error, close_to(0.0, 1e-10))
        np.testing.assert_allclose(
            compression.mpo.to_dense(), positivity_by_squaring(H, 0.6, 3, 6, 64).to_dense(), atol=1e-12
        )

    def test_error_of_the_half_temperature_cap(self):
        H = _tfim(build_chain(5))
        half = mpo_from_truncation(H, 0.3, 4, 12)

        compression = squaring_with_error(H, 0.6, 4, 12, 1)

        assert_that(compression.error, close_to(half.compress(1).error, 1e-12))
        assert_that(compression.error, greater_than(0.0))
