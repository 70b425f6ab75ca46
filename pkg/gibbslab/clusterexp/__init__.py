# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from .construction import (
    mpo_compress,
    mpo_from_truncation,
    positivity_by_squaring,
    squaring_with_error,
)
from .mpo import MPO
from .series import ClusterWord, TruncatedSeries, order_truncation_bound, truncated_series_dense

__all__ = [
    'ClusterWord',
    'MPO',
    'TruncatedSeries',
    'mpo_compress',
    'mpo_from_truncation',
    'order_truncation_bound',
    'positivity_by_squaring',
    'squaring_with_error',
    'truncated_series_dense',
]
