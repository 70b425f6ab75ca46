# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from ..exceptions import ExperimentAlreadyRegisteredError, UnknownExperimentError


class ExperimentRegistry:
    def __init__(self):
        self._experiments = {}

    def get_experiment(self, name):
        try:
            return self._experiments[name]
        except KeyError:
            raise UnknownExperimentError(name, self.names())

    def get_experiments(self):
        return [self._experiments[name] for name in self.names()]

    def names(self):
        return sorted(self._experiments)

    def register_experiment(self, experiment):
        if experiment.name in self._experiments:
            raise ExperimentAlreadyRegisteredError(experiment.name)
        self._experiments[experiment.name] = experiment

    def format_listing(self):
        width = max((len(name) for name in self._experiments), default=0)
        return [
            '{0:<{1}} -> {2}: {3}'.format(e.name, width, e.anchor, e.description)
            for e in self.get_experiments()
        ]

    def __len__(self):
        return len(self._experiments)

    def __contains__(self, name):
        return name in self._experiments
