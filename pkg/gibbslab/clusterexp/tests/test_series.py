# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import itertools
import math
import unittest

import numpy as np
import scipy.linalg

from hamcrest import (
    assert_that,
    calling,
    close_to,
    equal_to,
    greater_than,
    has_length,
    is_,
    less_than,
    less_than_or_equal_to,
    raises,
)

from ...densequantum import embed_operator
from ...exceptions import DomainError, ResourceError
from ...hamiltonian import assemble_dense, build_model, folded_edge_terms
from ...lattice import build_chain
from ..series import (
    ClusterWord,
    order_truncation_bound,
    truncated_series_dense,
)


def _tfim(n):
    return build_model('transverse_ising', build_chain(n), {'J_zz': 1.0, 'h_x': 0.8})


class TestTruncatedSeries(unittest.TestCase):
    def test_no_truncation_matches_the_exponential(self):
        for n in (3, 4):
            H = _tfim(n)
            expected = scipy.linalg.expm(-0.2 * assemble_dense(H).matrix)

            series = truncated_series_dense(H, 0.2, n + 1, 20)

            np.testing.assert_allclose(series.operator.matrix, expected, atol=1e-8)
            assert_that(series.dropped, equal_to(0))

    def test_single_site_clusters_leave_the_identity(self):
        H = _tfim(3)

        series = truncated_series_dense(H, 0.5, 1, 4)

        np.testing.assert_allclose(series.operator.matrix, np.eye(8))
        assert_that(series.retained, equal_to(1))
        assert_that(series.dropped, equal_to(2 + 4 + 8 + 16))

    def test_word_counts_add_up(self):
        H = _tfim(4)

        series = truncated_series_dense(H, 0.3, 3, 3)

        assert_that(series.retained + series.dropped, equal_to(1 + 3 + 9 + 27))
        assert_that(series.dropped, greater_than(0))

    def test_truncation_error_shrinks_with_cluster_size(self):
        H = _tfim(4)
        expected = scipy.linalg.expm(-0.3 * assemble_dense(H).matrix)

        errors = [
            np.linalg.norm(truncated_series_dense(H, 0.3, L, 20).operator.matrix - expected)
            for L in (2, 3, 4, 5)
        ]

        assert_that(errors[3], less_than(1e-8))
        for smaller, larger in zip(errors[1:], errors):
            assert_that(larger, greater_than(smaller))

    def test_result_is_hermitian(self):
        series = truncated_series_dense(_tfim(4), 0.4, 3, 6)

        assert_that(series.operator.hermitian, is_(True))

    def test_invalid_arguments(self):
        H = _tfim(2)

        assert_that(calling(truncated_series_dense).with_args(H, 0.1, 0, 3), raises(DomainError))
        assert_that(calling(truncated_series_dense).with_args(H, 0.1, 2, -1), raises(DomainError))

    def test_cell_budget(self):
        assert_that(
            calling(truncated_series_dense).with_args(_tfim(4), 0.1, 5, 4, max_cells=2),
            raises(ResourceError),
        )


class TestClusterWord(unittest.TestCase):
    def setUp(self):
        self.graph = build_chain(5)

    def test_support_and_order(self):
        word = ClusterWord(((1, 2), (2, 3), (1, 2)))

        assert_that(word.order, equal_to(3))
        assert_that(word.support, equal_to(frozenset({1, 2, 3})))

    def test_retained_below_the_cluster_size(self):
        word = ClusterWord(((1, 2), (4, 5)))

        assert_that(word.components(self.graph), has_length(2))
        assert_that(word.is_retained(self.graph, 3), is_(True))
        assert_that(word.is_retained(self.graph, 2), is_(False))

    def test_connected_supports_merge(self):
        word = ClusterWord(((1, 2), (3, 4)))

        assert_that(word.is_retained(self.graph, 4), is_(False))
        assert_that(word.is_retained(self.graph, 5), is_(True))

    def test_empty_word(self):
        assert_that(ClusterWord(()).is_retained(self.graph, 1), is_(True))


def _words(H, order):
    alphabet = [tuple(t.support) for t in folded_edge_terms(H)]
    return [ClusterWord(word) for word in itertools.product(alphabet, repeat=order)]


def _brute_force_series(H, beta, L, j_max):
    '''Word-by-word sum of the retained terms of the exponential series.'''
    full = {
        tuple(t.support): embed_operator(t.matrix, [s - 1 for s in t.support], H.dims).toarray()
        for t in folded_edge_terms(H)
    }
    total = np.zeros((H.dim, H.dim), dtype=complex)
    retained = 0
    for order in range(j_max + 1):
        coefficient = (-beta) ** order / math.factorial(order)
        for word in _words(H, order):
            if not word.is_retained(H.graph, L):
                continue
            retained += 1
            product = np.eye(H.dim, dtype=complex)
            for letter in word.word:
                product = product @ full[letter]
            total += coefficient * product
    return total, retained


class TestWordByWordSum(unittest.TestCase):
    def test_words_of_an_order(self):
        words = _words(_tfim(3), 2)

        assert_that(words, has_length(4))
        assert_that(words[1], equal_to(ClusterWord(((1, 2), (2, 3)))))

    def test_grouped_series_matches_the_word_sum(self):
        for n, j_max in ((3, 4), (4, 3)):
            H = _tfim(n)
            for L in (2, 3, 4):
                expected, retained = _brute_force_series(H, 0.3, L, j_max)

                series = truncated_series_dense(H, 0.3, L, j_max)

                np.testing.assert_allclose(series.operator.matrix, expected, atol=1e-12)
                assert_that(series.retained, equal_to(retained))

    def test_heisenberg_letters_do_not_commute(self):
        H = build_model('heisenberg', build_chain(3), {'J': 1.0})
        expected, _ = _brute_force_series(H, -0.4, 3, 4)

        series = truncated_series_dense(H, -0.4, 3, 4)

        np.testing.assert_allclose(series.operator.matrix, expected, atol=1e-12)


class TestOrderTruncationBound(unittest.TestCase):
    def test_tail_of_the_exponential(self):
        expected = math.e - sum(1 / math.factorial(j) for j in range(4))

        assert_that(order_truncation_bound(0.5, 1.0, 2, 3), close_to(expected, 1e-12))

    def test_zero_beta(self):
        assert_that(order_truncation_bound(0.0, 1.0, 3, 2), equal_to(0.0))

    def test_bounds_the_untruncated_series(self):
        H = _tfim(3)
        J = max(np.linalg.norm(t.matrix, 2) for t in folded_edge_terms(H))
        expected = scipy.linalg.expm(-0.2 * assemble_dense(H).matrix)

        series = truncated_series_dense(H, 0.2, 4, 3)
        error = np.linalg.norm(series.operator.matrix - expected, 2)

        assert_that(error, less_than_or_equal_to(order_truncation_bound(0.2, J, 2, 3)))
