# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

from marshmallow import fields

from ..hamiltonian import MODELS
from ..mallow_helpers import NonEmpty, OneOf, Range, Schema, handle_validation_exception


def _float_grid(**kwargs):
    return fields.List(fields.Float(**kwargs), validate=NonEmpty())


def _integer_grid(minimum):
    return fields.List(fields.Integer(validate=Range(min=minimum)), validate=NonEmpty())


class LatticeSchema(Schema):
    n = fields.Integer(validate=Range(min=1), load_default=None)
    D = fields.Integer(validate=Range(min=1), load_default=1)
    periodic = fields.Boolean(load_default=False)


class ModelSchema(Schema):
    name = fields.String(required=True, validate=OneOf(MODELS))
    couplings = fields.Dict(keys=fields.String(), values=fields.Float(), load_default=dict)
    lattice = fields.Nested(LatticeSchema, required=True)


class GridSchema(Schema):
    beta = _float_grid()
    beta_fraction = _float_grid()
    T = _float_grid(allow_nan=True)
    tau = _float_grid(validate=Range(min=0, max=1))
    r = _integer_grid(1)
    L = _integer_grid(1)
    j_max = _integer_grid(0)
    l = _integer_grid(1)
    delta = _float_grid()
    n = _integer_grid(1)
    distance = _integer_grid(1)
    max_bond = _integer_grid(1)
    sites = _integer_grid(1)
    axes = fields.List(fields.String(validate=OneOf(['x', 'y', 'z'])), validate=NonEmpty())
    instances = fields.Integer(validate=Range(min=1))


class BoundsSchema(Schema):
    alpha = fields.Float(validate=Range(min=0, min_inclusive=False), load_default=None)
    L0 = fields.Integer(validate=Range(min=0), load_default=1)
    c1 = fields.Float(validate=Range(min=0), load_default=1.0)


class TolerancesSchema(Schema):
    identity = fields.Float(validate=Range(min=0), load_default=1e-6)
    fluctuation = fields.Float(validate=Range(min=0), load_default=1e-4)
    trend = fields.Float(validate=Range(min=0), load_default=0.05)
    quadrature = fields.Float(validate=Range(min=0), load_default=1e-8)
    numerical_floor = fields.Float(validate=Range(min=0), load_default=1e-12)


class OutputSchema(Schema):
    dir = fields.String(load_default='results')


class ExperimentConfigSchema(Schema):
    experiment = fields.String(required=True)
    seed = fields.Integer(validate=Range(min=0, max=2 ** 64 - 1), load_default=0)
    model = fields.Nested(ModelSchema)
    models = fields.List(fields.Nested(ModelSchema), validate=NonEmpty())
    grid = fields.Nested(GridSchema, load_default=dict)
    bounds = fields.Nested(BoundsSchema, required=True)
    tolerances = fields.Nested(TolerancesSchema, required=True)
    output = fields.Nested(OutputSchema, required=True)
    workers = fields.Integer(validate=Range(min=1), load_default=1)
    enabled_plugins = fields.Dict(keys=fields.String(), values=fields.Boolean(), load_default=dict)
    extra_config_files = fields.String(allow_none=True, load_default=None)


@handle_validation_exception
def load_config(raw_config):
    return ExperimentConfigSchema().load(raw_config)
