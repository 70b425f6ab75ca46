# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from .clusterexp import ClusterTruncation, MPOPositivity
from .clustering import ClusteringSweep, GapScaling, GroundStateDecay, MutualInformationAreaLaw
from .stability import LocalTemperature, PerturbationIdentity, ThermalLiebRobinson
from .statmech import EnergyGaussianity, EnsembleEquivalence, HeatCapacity

BUILTIN_EXPERIMENTS = (
    ClusteringSweep,
    GroundStateDecay,
    GapScaling,
    MutualInformationAreaLaw,
    PerturbationIdentity,
    ThermalLiebRobinson,
    LocalTemperature,
    ClusterTruncation,
    MPOPositivity,
    EnergyGaussianity,
    HeatCapacity,
    EnsembleEquivalence,
)


def register_builtin_experiments(registry):
    for experiment_class in BUILTIN_EXPERIMENTS:
        registry.register_experiment(experiment_class())
    return registry
