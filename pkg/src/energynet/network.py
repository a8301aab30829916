"""Resistance networks: validated weighted graphs, generators, and file I/O.

A network is a finite connected graph with symmetric positive conductances
and a distinguished origin vertex.  Vertices keep their insertion order and
all matrix-valued quantities downstream index vertices by that order.
"""

from __future__ import annotations

import csv
import json
import threading
from dataclasses import dataclass

import numpy as np

from .errors import (
    AsymmetricInput,
    Disconnected,
    InvalidSize,
    NonPositiveConductance,
    OriginMissing,
    ParseError,
    SelfLoop,
    UnknownVertex,
)


class Network:
    """Immutable weighted graph with origin.

    Use :func:`build_network`, :func:`generate` or :func:`load_network` to
    construct one; the constructor itself assumes pre-validated input.
    """

    def __init__(self, vertices, origin, edges):
        # edges: list of (x, y, w) with vertex ids, one entry per edge
        self.vertices = tuple(vertices)
        self.origin = origin
        self._index = {v: k for k, v in enumerate(self.vertices)}
        self.n = len(self.vertices)
        self.edges = tuple((x, y, float(w)) for x, y, w in edges)
        self.edge_i = np.array([self._index[x] for x, _, _ in edges], dtype=np.intp)
        self.edge_j = np.array([self._index[y] for _, y, _ in edges], dtype=np.intp)
        self.edge_w = np.array([w for _, _, w in edges], dtype=float)
        # adjacency: per-vertex neighbor indices and weights
        nbrs = [[] for _ in range(self.n)]
        for i, j, w in zip(self.edge_i, self.edge_j, self.edge_w):
            nbrs[i].append((j, w))
            nbrs[j].append((i, w))
        self.neighbor_idx = [np.array([k for k, _ in a], dtype=np.intp) for a in nbrs]
        self.neighbor_w = [np.array([w for _, w in a], dtype=float) for a in nbrs]
        self.conductance = np.array([a.sum() for a in self.neighbor_w])
        self._lock = threading.RLock()
        self._laplacian = None
        self._kernel_cache = {}
        self._grounded_cho = None
        self._gram_full = None

    def index(self, x):
        try:
            return self._index[x]
        except KeyError:
            raise UnknownVertex(f"vertex {x!r} not in network") from None

    @property
    def origin_index(self):
        return self._index[self.origin]

    def laplacian_matrix(self):
        """Dense Laplacian, physics sign convention (nonnegative spectrum)."""
        with self._lock:
            if self._laplacian is None:
                L = np.zeros((self.n, self.n))
                for i, j, w in zip(self.edge_i, self.edge_j, self.edge_w):
                    L[i, j] -= w
                    L[j, i] -= w
                    L[i, i] += w
                    L[j, j] += w
                self._laplacian = L
            return self._laplacian

    def edge_dict(self):
        return {frozenset((x, y)): w for x, y, w in self.edges}

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.origin == other.origin
            and self.edge_dict() == other.edge_dict()
        )

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"Network(n={self.n}, edges={len(self.edges)}, origin={self.origin!r})"


@dataclass(frozen=True)
class VertexFunction:
    """Scalar function on the vertices, stored in vertex order."""

    net: Network
    values: np.ndarray

    def __getitem__(self, x):
        return self.values[self.net.index(x)]

    @classmethod
    def from_dict(cls, net, mapping, default=0.0):
        vals = np.full(net.n, default, dtype=complex)
        for x, v in mapping.items():
            vals[net.index(x)] = v
        if np.isrealobj(np.asarray(list(mapping.values()))) or not np.any(vals.imag):
            vals = vals.real
        return cls(net, vals)

    @classmethod
    def delta(cls, net, x):
        vals = np.zeros(net.n)
        vals[net.index(x)] = 1.0
        return cls(net, vals)

    @classmethod
    def ones(cls, net):
        return cls(net, np.ones(net.n))


def build_network(edge_list, origin):
    """Validate an edge list and return a Network.

    Duplicate (x, y)/(y, x) entries with equal weight are merged; unequal
    weights on the same pair are rejected (pre-add parallel conductors).
    """
    if not edge_list:
        raise InvalidSize("edge list is empty")
    order = []
    seen = {}
    weights = {}
    for x, y, w in edge_list:
        if x == y:
            raise SelfLoop(f"self-loop at vertex {x!r}")
        if not (float(w) > 0):
            raise NonPositiveConductance(f"edge ({x!r},{y!r}) has weight {w!r}")
        for v in (x, y):
            if v not in seen:
                seen[v] = len(order)
                order.append(v)
        key = frozenset((x, y))
        if key in weights:
            if float(w) != weights[key][2]:
                raise AsymmetricInput(
                    f"edge ({x!r},{y!r}) given weights {weights[key][2]} and {w}"
                )
        else:
            weights[key] = (x, y, float(w))
    if origin not in seen:
        raise OriginMissing(f"origin {origin!r} does not appear in the edge list")
    edges = list(weights.values())

    # connectivity by BFS over positive-conductance edges
    adj = {v: [] for v in order}
    for x, y, _ in edges:
        adj[x].append(y)
        adj[y].append(x)
    reached = {order[0]}
    stack = [order[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in reached:
                reached.add(nb)
                stack.append(nb)
    if len(reached) != len(order):
        missing = [v for v in order if v not in reached]
        raise Disconnected(f"vertices {missing!r} unreachable from {order[0]!r}")
    return Network(order, origin, edges)


def total_conductance(net, x):
    """c(x) = sum of edge weights at x."""
    return float(net.conductance[net.index(x)])


def laplacian_apply(net, u):
    """Apply the graph Laplacian pointwise: (Lu)(x) = sum c_xy (u(x) - u(y))."""
    vals = np.asarray(u.values if hasattr(u, "values") else u)
    out = net.laplacian_matrix() @ vals
    return VertexFunction(net, out)


def generate(family, size, conductance=1.0):
    """Build a canonical network: path(n), cycle(n), integer_segment(n),
    binary_tree(depth).  Origin is vertex 0 (the root for trees).

    ``conductance`` is a constant weight or a callable (x, y) -> weight.
    """
    w = conductance if callable(conductance) else (lambda x, y: conductance)
    if family == "path":
        if size < 2:
            raise InvalidSize("path needs at least 2 vertices")
        edges = [(k, k + 1, w(k, k + 1)) for k in range(size - 1)]
    elif family == "cycle":
        if size < 3:
            raise InvalidSize("cycle needs at least 3 vertices")
        edges = [(k, (k + 1) % size, w(k, (k + 1) % size)) for k in range(size)]
    elif family == "integer_segment":
        if size < 2:
            raise InvalidSize("integer_segment needs n >= 2")
        edges = [(k, k + 1, w(k, k + 1)) for k in range(size)]
    elif family == "binary_tree":
        if size < 1:
            raise InvalidSize("binary_tree needs depth >= 1")
        nverts = 2 ** (size + 1) - 1
        edges = []
        for k in range(nverts):
            for child in (2 * k + 1, 2 * k + 2):
                if child < nverts:
                    edges.append((k, child, w(k, child)))
    else:
        raise InvalidSize(f"unknown family {family!r}")
    return build_network(edges, origin=0)


def _coerce_id(v):
    if isinstance(v, str) or isinstance(v, int):
        return v
    if isinstance(v, float) and v.is_integer():
        return int(v)
    raise ParseError(f"vertex id {v!r} must be a string or integer")


def save_network(net, path):
    doc = {"origin": net.origin, "edges": [[x, y, w] for x, y, w in net.edges]}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _load_json(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "origin" not in doc:
        raise ParseError(f"{path}: missing required key 'origin'")
    if "edges" not in doc:
        raise ParseError(f"{path}: missing required key 'edges'")
    edges = []
    for k, e in enumerate(doc["edges"]):
        if not (isinstance(e, (list, tuple)) and len(e) == 3):
            raise ParseError(f"{path}: edges[{k}] must be [x, y, c]")
        try:
            weight = float(e[2])
        except (TypeError, ValueError):
            raise ParseError(f"{path}: edges[{k}] weight {e[2]!r} is not a number") from None
        edges.append((_coerce_id(e[0]), _coerce_id(e[1]), weight))
    return build_network(edges, origin=_coerce_id(doc["origin"]))


def _load_csv(path, origin):
    if origin is None:
        raise ParseError(f"{path}: CSV networks need the origin passed explicitly")
    edges = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["x", "y", "c"]:
            raise ParseError(f"{path}: expected CSV header 'x,y,c'")
        for k, row in enumerate(reader, start=2):
            try:
                weight = float(row["c"])
            except (TypeError, ValueError):
                raise ParseError(f"{path}: line {k}: bad weight {row['c']!r}") from None
            edges.append((_parse_vertex(row["x"]), _parse_vertex(row["y"]), weight))
    return build_network(edges, origin=origin)


def _parse_vertex(token):
    token = token.strip() if isinstance(token, str) else token
    if isinstance(token, str):
        try:
            return int(token)
        except ValueError:
            return token
    return token


def load_network(path, origin=None):
    """Load a network from JSON (canonical) or CSV (header x,y,c + origin)."""
    if str(path).endswith(".csv"):
        return _load_csv(path, origin)
    return _load_json(path)
