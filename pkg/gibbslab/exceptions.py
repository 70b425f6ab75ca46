# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

import logging

from functools import wraps

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_CONVERGENCE = 1
EXIT_CONFIG = 2
EXIT_REGIME = 3
EXIT_RESOURCE = 4


class LabError(Exception):

    exit_code = EXIT_CONVERGENCE
    error_id = 'lab-error'

    def __init__(self, message, error_id=None, details=None):
        super().__init__(message)
        self.message = message
        if error_id is not None:
            self.error_id = error_id
        self.details = details or {}

    def as_dict(self):
        return {
            'message': self.message,
            'error_id': self.error_id,
            'details': self.details,
            'exit_code': self.exit_code,
        }


class ConfigError(LabError):
    exit_code = EXIT_CONFIG
    error_id = 'invalid-config'


class DomainError(ConfigError, ValueError):
    error_id = 'invalid-argument'


class UnknownExperimentError(ConfigError):
    error_id = 'unknown-experiment'

    def __init__(self, name, valid_names):
        super().__init__(
            'Unknown experiment "{}"; valid experiments are: {}'.format(
                name, ', '.join(sorted(valid_names))
            ),
            details={'name': name, 'valid_names': sorted(valid_names)},
        )


class ExperimentAlreadyRegisteredError(ConfigError):
    error_id = 'duplicate-experiment'

    def __init__(self, name):
        super().__init__(
            'Experiment "{}" is already registered'.format(name), details={'name': name}
        )


class NonHermitianError(DomainError):
    error_id = 'non-hermitian'

    def __init__(self, deviation):
        super().__init__(
            'Operator is not Hermitian (max deviation {:.3e})'.format(deviation),
            details={'deviation': float(deviation)},
        )


class NotAStateError(DomainError):
    error_id = 'not-a-state'


class EmptyWindowError(DomainError):
    error_id = 'empty-window'

    def __init__(self, energy, delta, nearest):
        super().__init__(
            'No eigenvalue within {} of energy {}; nearest eigenvalue is {}'.format(
                delta, energy, nearest
            ),
            details={'energy': energy, 'delta': delta, 'nearest': nearest},
        )
        self.nearest = nearest


class DegenerateDistributionError(DomainError):
    error_id = 'degenerate-distribution'


class InsufficientDataError(DomainError):
    error_id = 'insufficient-data'


class UnsupportedGeometryError(DomainError):
    error_id = 'unsupported-geometry'


class RegimeError(LabError):
    exit_code = EXIT_REGIME
    error_id = 'outside-regime'


class NonBindingBoundError(RegimeError):
    error_id = 'non-binding-bound'


class DegenerateGroundStateError(RegimeError):
    error_id = 'degenerate-ground-state'

    def __init__(self, gap):
        super().__init__(
            'degenerate ground state (gap {:.3e})'.format(gap),
            details={'gap': float(gap)},
        )


class ResourceError(LabError):
    exit_code = EXIT_RESOURCE
    error_id = 'resource-exceeded'

    def __init__(self, limit_name, limit, requested):
        super().__init__(
            'Size budget {} exceeded: requested {}, limit {}'.format(
                limit_name, requested, limit
            ),
            details={'limit_name': limit_name, 'limit': limit, 'requested': requested},
        )


class ConvergenceError(LabError):
    exit_code = EXIT_CONVERGENCE
    error_id = 'no-convergence'

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(
            message,
            details={'best_estimate': best_estimate, 'error_estimate': error_estimate},
        )
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


def handle_lab_exception(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except LabError as error:
            logger.error('%s: %s', error.message, error.details)
            return error.exit_code

    return wrapper
