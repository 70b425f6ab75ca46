# Copyright 2026 The gibbslab Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0-or-later

'''
Interaction graphs: vertices are the lattice sites, edges the supports of
two-body terms. Vertex labels are positive integers; the position of a site
in the sorted label list is its tensor-factor index, position 0 being the
most significant factor of the full Hilbert space.
'''

import itertools
import json
import logging
import math

import networkx as nx

from marshmallow import fields, validates_schema, ValidationError as _ValidationError

from . import budget
from .exceptions import DomainError
from .mallow_helpers import Length, Range, Schema, handle_validation_exception

logger = logging.getLogger(__name__)

INFINITY = math.inf


class GraphSchema(Schema):
    vertices = fields.List(fields.Integer(validate=Range(min=1)), required=True)
    edges = fields.List(
        fields.List(fields.Integer(), validate=Length(equal=2)), load_default=list
    )
    spatial_dim = fields.Integer(validate=Range(min=0), load_default=0)
    periodic = fields.Boolean(load_default=False)

    @validates_schema
    def validate_edges(self, data, **kwargs):
        vertices = set(data['vertices'])
        for u, v in data.get('edges', []):
            if u == v or u not in vertices or v not in vertices:
                raise _ValidationError(
                    {
                        'message': 'Edge {} is not a pair of distinct vertices'.format(
                            [u, v]
                        ),
                        'constraint_id': 'edge',
                        'constraint': 'two-element vertex subset',
                    },
                    'edges',
                )


class InteractionGraph:
    def __init__(self, vertices, edges, spatial_dim=0, periodic=False, coordinates=None):
        self.vertices = tuple(sorted(set(int(v) for v in vertices)))
        budget.check_sites(len(self.vertices))
        vertex_set = set(self.vertices)
        normalized = set()
        for edge in edges:
            pair = tuple(sorted(set(int(v) for v in edge)))
            if len(pair) != 2 or not vertex_set.issuperset(pair):
                raise DomainError(
                    'Edge {} is not a two-element subset of the vertices'.format(edge)
                )
            normalized.add(pair)
        self.edges = tuple(sorted(normalized))
        self.spatial_dim = spatial_dim
        self.periodic = periodic
        self.coordinates = dict(coordinates) if coordinates else None
        self._position = {v: i for i, v in enumerate(self.vertices)}
        self._graph = nx.Graph()
        self._graph.add_nodes_from(self.vertices)
        self._graph.add_edges_from(self.edges)
        self._distance_cache = {}

    def __repr__(self):
        return 'InteractionGraph(N={}, edges={}, spatial_dim={})'.format(
            self.n_sites, len(self.edges), self.spatial_dim
        )

    @property
    def n_sites(self):
        return len(self.vertices)

    def position(self, vertex):
        try:
            return self._position[vertex]
        except KeyError:
            raise DomainError('{} is not a vertex of {!r}'.format(vertex, self))

    def positions(self, region):
        return [self.position(v) for v in sorted(region)]

    def neighbors(self, vertex):
        return set(self._graph.neighbors(vertex))

    def degree(self, vertex):
        return self._graph.degree(vertex)

    def check_region(self, region):
        region = frozenset(region)
        outside = region.difference(self.vertices)
        if outside:
            raise DomainError(
                'Region contains sites outside the graph: {}'.format(sorted(outside))
            )
        return region

    def distances_from(self, region):
        region = self.check_region(region)
        if not region:
            raise DomainError('Distance to an empty region is undefined')
        lengths = nx.multi_source_dijkstra_path_length(self._graph, region)
        return {v: lengths.get(v, INFINITY) for v in self.vertices}

    def components(self, region):
        '''Connected components of the subgraph induced by region.'''
        region = self.check_region(region)
        induced = self._graph.subgraph(region)
        return [frozenset(c) for c in nx.connected_components(induced)]

    def is_connected_region(self, region):
        return len(self.components(region)) <= 1

    def is_chain(self):
        '''True when every edge joins sites adjacent in the site ordering.'''
        return all(self.position(v) - self.position(u) == 1 for u, v in self.edges)

    def subgraph(self, region):
        region = self.check_region(region)
        edges = [e for e in self.edges if region.issuperset(e)]
        coordinates = None
        if self.coordinates:
            coordinates = {v: self.coordinates[v] for v in region}
        return InteractionGraph(region, edges, self.spatial_dim, self.periodic, coordinates)

    def to_dict(self):
        return {
            'vertices': list(self.vertices),
            'edges': [list(e) for e in self.edges],
            'spatial_dim': self.spatial_dim,
            'periodic': self.periodic,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    @handle_validation_exception
    def from_dict(cls, data):
        loaded = GraphSchema().load(data)
        return cls(
            loaded['vertices'],
            loaded['edges'],
            loaded['spatial_dim'],
            loaded['periodic'],
        )

    @classmethod
    def from_json(cls, document):
        return cls.from_dict(json.loads(document))


def build_cubic(n, D, periodic=False):
    if n < 1 or D < 1:
        raise DomainError('Cubic lattice needs n >= 1 and D >= 1, got n={}, D={}'.format(n, D))
    budget.check_sites(n ** D)

    def label(coords):
        return 1 + sum(c * n ** (D - 1 - k) for k, c in enumerate(coords))

    coordinates = {}
    edges = []
    for coords in itertools.product(range(n), repeat=D):
        site = label(coords)
        coordinates[site] = coords
        for axis in range(D):
            if coords[axis] + 1 < n:
                shifted = coords[:axis] + (coords[axis] + 1,) + coords[axis + 1:]
                edges.append((site, label(shifted)))
            elif periodic and n > 2:
                wrapped = coords[:axis] + (0,) + coords[axis + 1:]
                edges.append((site, label(wrapped)))

    logger.debug('built cubic lattice n=%s D=%s with %s edges', n, D, len(edges))
    return InteractionGraph(coordinates.keys(), edges, D, periodic, coordinates)


def build_chain(n, periodic=False):
    return build_cubic(n, 1, periodic)


def graph_distance(g, S, E):
    S = g.check_region(S)
    E = g.check_region(E)
    if not S or not E:
        raise DomainError('Graph distance requires nonempty regions')
    key = (S, E) if hash(S) <= hash(E) else (E, S)
    cached = g._distance_cache.get(key)
    if cached is not None:
        return cached
    if S & E:
        distance = 0
    else:
        lengths = nx.multi_source_dijkstra_path_length(g._graph, S)
        reachable = [lengths[v] for v in E if v in lengths]
        distance = min(reachable) if reachable else INFINITY
    g._distance_cache[key] = distance
    return distance


def boundary(g, S):
    S = g.check_region(S)
    return frozenset(v for v in S if any(u not in S for u in g.neighbors(v)))


def growth_constant_bound(D):
    if D < 1:
        raise DomainError('Spatial dimension must be positive, got {}'.format(D))
    return 2 * D * math.e


def cube_translates(g, l):
    '''Vertex sets of all cubes of side l inside a cubic lattice.'''
    if not g.coordinates or g.spatial_dim < 1:
        raise DomainError('Translates are only defined on cubic lattices')
    D = g.spatial_dim
    n = round(g.n_sites ** (1.0 / D))
    if l < 1 or l > n:
        raise DomainError('Cube side {} outside [1, {}]'.format(l, n))
    by_coords = {c: v for v, c in g.coordinates.items()}
    last_origin = n if g.periodic and l < n else n - l + 1
    translates = []
    for origin in itertools.product(range(last_origin), repeat=D):
        sites = set()
        for offset in itertools.product(range(l), repeat=D):
            coords = tuple((o + k) % n for o, k in zip(origin, offset))
            sites.add(by_coords[coords])
        translates.append(tuple(sorted(sites)))
    return translates
