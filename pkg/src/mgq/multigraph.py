"""Finite multigraphs (directed, or undirected via an inversion map) and the
derived structures everything else consumes: adjacency matrices, underlying
weighted graphs, uniform components and canonical edge labelings.

Vertices and edge ids are opaque strings; every canonical ordering used here
is lexicographic on those strings, so all outputs are deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


class MultigraphError(Exception):
    """An operation was handed a multigraph that does not satisfy its precondition."""


class NotUndirectedError(MultigraphError):
    """Operation requires an undirected multigraph (one carrying an inversion map)."""


class RepresentationError(MultigraphError):
    """The inversion map is incompatible with an inversion-aware edge labeling."""


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    tgt: str

    @property
    def is_loop(self) -> bool:
        return self.src == self.tgt


@dataclass(frozen=True)
class Multigraph:
    """A finite quiver: vertices, edges with source/target, optional inversion.

    ``inversion`` lists unordered pairs of mutually reversed non-loop edge ids;
    loops are implicitly self-paired.  Its presence is what classifies the
    graph as undirected (adjacency symmetry alone never does).
    """

    vertices: tuple
    edges: tuple
    inversion: tuple | None = None

    @classmethod
    def build(cls, vertices, edges, inversion=None) -> "Multigraph":
        """Construct from plain data: edges as (id, src, tgt) triples or Edge values."""
        es = tuple(e if isinstance(e, Edge) else Edge(str(e[0]), str(e[1]), str(e[2]))
                   for e in edges)
        inv = None
        if inversion is not None:
            inv = tuple((str(a), str(b)) for a, b in inversion)
        return cls(tuple(str(v) for v in vertices), es, inv)

    # -- JSON wire format -------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "Multigraph":
        if not isinstance(data, dict):
            raise MultigraphError("multigraph document must be a JSON object")
        for key in ("vertices", "edges"):
            if key not in data:
                raise MultigraphError(f"missing field: {key}")
        vertices = data["vertices"]
        if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
            raise MultigraphError("vertices: expected a list of strings")
        edges = []
        for pos, rec in enumerate(data["edges"]):
            if not isinstance(rec, dict):
                raise MultigraphError(f"edges[{pos}]: expected an object")
            for fld in ("id", "src", "tgt"):
                if fld not in rec or not isinstance(rec[fld], str):
                    raise MultigraphError(f"edges[{pos}].{fld}: missing or not a string")
            edges.append(Edge(rec["id"], rec["src"], rec["tgt"]))
        inversion = None
        if "inversion" in data and data["inversion"] is not None:
            inversion = []
            for pos, pair in enumerate(data["inversion"]):
                if (not isinstance(pair, list) or len(pair) != 2
                        or not all(isinstance(x, str) for x in pair)):
                    raise MultigraphError(f"inversion[{pos}]: expected a pair of edge ids")
                inversion.append((pair[0], pair[1]))
            inversion = tuple(inversion)
        return cls(tuple(vertices), tuple(edges), inversion)

    def to_dict(self) -> dict:
        data = {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in self.edges],
        }
        if self.inversion is not None:
            data["inversion"] = [[a, b] for a, b in self.inversion]
        return data

    @classmethod
    def from_json(cls, text: str) -> "Multigraph":
        return cls.from_dict(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    # -- basic structure ---------------------------------------------------

    @property
    def is_undirected(self) -> bool:
        return self.inversion is not None

    def vertex_order(self) -> tuple:
        return tuple(sorted(self.vertices))

    def edge_ids(self) -> tuple:
        return tuple(sorted(e.id for e in self.edges))

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise MultigraphError(f"unknown edge id: {eid}")

    def edge_map(self) -> dict:
        return {e.id: e for e in self.edges}

    def loops(self) -> tuple:
        return tuple(sorted(e.id for e in self.edges if e.is_loop))

    def source_vertices(self) -> tuple:
        """Vertices that are the source of at least one edge."""
        return tuple(sorted({e.src for e in self.edges}))

    def target_vertices(self) -> tuple:
        return tuple(sorted({e.tgt for e in self.edges}))

    def bundles(self) -> dict:
        """Nonempty bundles: (src, tgt) -> edge ids sorted lexicographically."""
        out: dict = {}
        for e in self.edges:
            out.setdefault((e.src, e.tgt), []).append(e.id)
        return {k: tuple(sorted(v)) for k, v in sorted(out.items())}

    def bundle(self, k: str, l: str) -> tuple:
        return self.bundles().get((k, l), ())

    def out_edges(self, k: str) -> tuple:
        return tuple(sorted(e.id for e in self.edges if e.src == k))

    def in_edges(self, l: str) -> tuple:
        return tuple(sorted(e.id for e in self.edges if e.tgt == l))

    def inversion_map(self) -> dict:
        """Total inversion: edge id -> reversed partner id (loops map to themselves)."""
        if self.inversion is None:
            raise NotUndirectedError("graph has no inversion map")
        inv = {e.id: e.id for e in self.edges if e.is_loop}
        for a, b in self.inversion:
            inv[a] = b
            inv[b] = a
        return inv

    def require_valid(self) -> None:
        report = validate(self)
        if not report.ok:
            raise MultigraphError("invalid multigraph: " + "; ".join(report.violations))


@dataclass(frozen=True)
class ValidationReport:
    kind: str                 # "directed" or "undirected", from the inversion field
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


@lru_cache(maxsize=None)
def validate(g: Multigraph) -> ValidationReport:
    """Check every structural invariant; collects violations instead of raising."""
    violations = []
    vset = set(g.vertices)
    if len(vset) != len(g.vertices):
        violations.append("duplicate vertex ids")

    seen = set()
    for e in g.edges:
        if e.id in seen:
            violations.append(f"duplicate edge id {e.id}")
        seen.add(e.id)
        if e.src not in vset:
            violations.append(f"edge {e.id}: unknown src {e.src}")
        if e.tgt not in vset:
            violations.append(f"edge {e.id}: unknown tgt {e.tgt}")

    touched = {e.src for e in g.edges} | {e.tgt for e in g.edges}
    for v in g.vertices:
        if v not in touched:
            violations.append(f"isolated vertex {v}")

    if g.inversion is not None:
        edge_by_id = {e.id: e for e in g.edges}
        counts: dict = {}
        for a, b in g.inversion:
            for x in (a, b):
                if x not in edge_by_id:
                    violations.append(f"inversion references unknown edge id {x}")
            if a == b:
                violations.append(f"inversion pairs edge {a} with itself")
            if a in edge_by_id and edge_by_id[a].is_loop:
                violations.append(f"inversion pairs loop {a}; loops are implicitly fixed")
            if b in edge_by_id and edge_by_id[b].is_loop:
                violations.append(f"inversion pairs loop {b}; loops are implicitly fixed")
            for x in (a, b):
                counts[x] = counts.get(x, 0) + 1
            if a in edge_by_id and b in edge_by_id:
                ea, eb = edge_by_id[a], edge_by_id[b]
                if not (ea.src == eb.tgt and ea.tgt == eb.src):
                    violations.append(f"inversion pair ({a},{b}) does not swap source and target")
        for x, c in sorted(counts.items()):
            if c > 1:
                violations.append(f"edge {x} appears in {c} inversion pairs; not an involution")
        for e in g.edges:
            if not e.is_loop and e.id not in counts:
                violations.append(f"non-loop edge {e.id} not covered by the inversion map")
        if not violations:
            W = adjacency_matrix(g)
            if not np.array_equal(W.entries, W.entries.T):
                violations.append("adjacency matrix is not symmetric")

    kind = "undirected" if g.inversion is not None else "directed"
    return ValidationReport(kind, tuple(violations))


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Edge-count matrix over the canonical (sorted) vertex order."""

    vertices: tuple
    entries_flat: tuple = field(repr=False)

    @property
    def entries(self) -> np.ndarray:
        n = len(self.vertices)
        return np.array(self.entries_flat, dtype=int).reshape(n, n)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[self.vertices.index(i)][self.vertices.index(j)]


@lru_cache(maxsize=None)
def adjacency_matrix(g: Multigraph) -> AdjacencyMatrix:
    """W[i][j] = number of edges from i to j."""
    order = g.vertex_order()
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    W = np.zeros((n, n), dtype=int)
    for e in g.edges:
        W[idx[e.src]][idx[e.tgt]] += 1
    return AdjacencyMatrix(order, tuple(int(x) for x in W.reshape(-1)))


@dataclass(frozen=True)
class WeightedSimpleGraph:
    """Support of the adjacency matrix, weighted by edge multiplicities."""

    vertices: tuple
    edges: tuple             # ordered pairs (i, j), sorted
    weights: tuple           # aligned with edges

    def weight(self, i: str, j: str) -> int:
        try:
            return self.weights[self.edges.index((i, j))]
        except ValueError:
            return 0

    def support(self) -> frozenset:
        """The underlying simple graph: weights forgotten."""
        return frozenset(self.edges)

    def weight_map(self) -> dict:
        return dict(zip(self.edges, self.weights))


def underlying_weighted_graph(g: Multigraph) -> WeightedSimpleGraph:
    g.require_valid()
    W = adjacency_matrix(g)
    pairs = []
    weights = []
    for (k, l), ids in g.bundles().items():
        pairs.append((k, l))
        weights.append(len(ids))
    return WeightedSimpleGraph(g.vertex_order(), tuple(pairs), tuple(weights))


@dataclass(frozen=True)
class UniformComponent:
    """All edges whose bundle has one fixed size, with their endpoints."""

    degree: int
    vertices: tuple
    edges: tuple
    sources: tuple
    targets: tuple


def uniform_decompose(g: Multigraph) -> list:
    """Split the edge set by bundle size; components come back sorted by degree."""
    g.require_valid()
    by_degree: dict = {}
    for (k, l), ids in g.bundles().items():
        by_degree.setdefault(len(ids), []).extend(ids)
    comps = []
    edge_by_id = g.edge_map()
    for m in sorted(by_degree):
        ids = tuple(sorted(by_degree[m]))
        vs = sorted({edge_by_id[i].src for i in ids} | {edge_by_id[i].tgt for i in ids})
        srcs = sorted({edge_by_id[i].src for i in ids})
        tgts = sorted({edge_by_id[i].tgt for i in ids})
        comps.append(UniformComponent(m, tuple(vs), ids, tuple(srcs), tuple(tgts)))
    return comps


@dataclass(frozen=True)
class EdgeRepresentation:
    """Bijection edge id <-> (src, tgt, local index 1..bundle size).

    For undirected graphs the labeling is inversion-compatible: the reversed
    partner of the edge labeled (k,l)r is the edge labeled (l,k)r.
    """

    labels: tuple            # sorted pairs (edge_id, (src, tgt, r))

    def label_of(self, eid: str):
        return self._forward()[eid]

    def edge_of(self, src: str, tgt: str, r: int) -> str:
        return self._backward()[(src, tgt, r)]

    def _forward(self) -> dict:
        return dict(self.labels)

    def _backward(self) -> dict:
        return {lab: eid for eid, lab in self.labels}

    def items(self):
        return self.labels


@lru_cache(maxsize=None)
def canonical_edge_representation(g: Multigraph) -> EdgeRepresentation:
    """Deterministic local indices: within each bundle, edges sorted by id get 1..m.

    Undirected graphs index one orientation of each unordered pair (the
    lexicographically smaller (src, tgt)) and copy indices through the
    inversion map, so reversed partners share their local index.
    """
    g.require_valid()
    labels = {}
    bundles = g.bundles()
    if not g.is_undirected:
        for (k, l), ids in bundles.items():
            for r, eid in enumerate(ids, start=1):
                labels[eid] = (k, l, r)
    else:
        inv = g.inversion_map()
        for (k, l), ids in bundles.items():
            if (k, l) > (l, k):
                continue
            for r, eid in enumerate(ids, start=1):
                labels[eid] = (k, l, r)
                partner = inv[eid]
                if k == l:
                    if partner != eid:
                        raise RepresentationError(f"loop {eid} has a distinct partner")
                    continue
                ps, pt, _ = (g.edge(partner).src, g.edge(partner).tgt, None)
                if (ps, pt) != (l, k):
                    raise RepresentationError(
                        f"partner {partner} of {eid} is not in the reversed bundle")
                labels[partner] = (l, k, r)
    return EdgeRepresentation(tuple(sorted(labels.items())))


def underlying_undirected_multigraph(g: Multigraph) -> Multigraph:
    """Forget directions: every non-loop edge gains a fresh reversed partner."""
    g.require_valid()
    if g.is_undirected:
        raise MultigraphError("graph is already undirected")
    existing = {e.id for e in g.edges}
    edges = list(g.edges)
    pairs = []
    for e in g.edges:
        if e.is_loop:
            continue
        rid = e.id + "_rev"
        while rid in existing:
            rid += "_rev"
        existing.add(rid)
        edges.append(Edge(rid, e.tgt, e.src))
        pairs.append((e.id, rid))
    out = Multigraph(g.vertices, tuple(edges), tuple(pairs))
    out.require_valid()
    return out


def undirected_edge_classes(g: Multigraph) -> list:
    """The unordered edges {tau, tau-bar}; loops are singletons."""
    if not g.is_undirected:
        raise NotUndirectedError("undirected edge classes need an inversion map")
    g.require_valid()
    inv = g.inversion_map()
    classes = {frozenset((eid, partner)) for eid, partner in inv.items()}
    return sorted(classes, key=lambda c: min(c))


def path_classes(component: UniformComponent, g: Multigraph) -> list:
    """Partition the component's vertices by mutual reachability inside it.

    The inversion map of an undirected graph makes reachability symmetric, so
    there the classes are plain connected components of the component's edges.
    """
    g.require_valid()
    edge_by_id = g.edge_map()
    succ: dict = {v: set() for v in component.vertices}
    for eid in component.edges:
        e = edge_by_id[eid]
        succ[e.src].add(e.tgt)

    def reachable(start):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    reach = {v: reachable(v) for v in component.vertices}
    classes = []
    assigned = set()
    for v in component.vertices:
        if v in assigned:
            continue
        cls = {w for w in component.vertices if w in reach[v] and v in reach[w]}
        assigned |= cls
        classes.append(frozenset(cls))
    return sorted(classes, key=min)
