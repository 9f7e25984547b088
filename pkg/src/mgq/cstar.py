"""Finite-dimensional Cuntz-Krieger families for acyclic multigraphs and the
induced coaction relations on them.

The family lives on the path space: basis vectors are directed paths that end
at sinks (including the empty path at each sink), edge operators prepend and
vertex operators project onto paths by their start vertex.  All family
invariants hold exactly over integer matrices; only the coaction checks are
tolerance-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .multigraph import Multigraph, MultigraphError
from .matrixreps import MagicUnitaryRep, derived_vertex_matrix, DEFAULT_TOL
from .ncpoly import q_, u_


class CyclicGraphError(MultigraphError):
    """The graph has a directed cycle, so the path-space model is infinite."""


def find_directed_cycle(g: Multigraph):
    """A list of edge ids forming a directed cycle, or None."""
    edge_by_id = g.edge_map()
    out: dict = {}
    for e in g.edges:
        out.setdefault(e.src, []).append(e.id)
    state = {v: 0 for v in g.vertices}   # 0 unseen, 1 on stack, 2 done
    trail = []

    def dfs(v):
        state[v] = 1
        for eid in sorted(out.get(v, ())):
            w = edge_by_id[eid].tgt
            if state[w] == 1:
                trail.append(eid)
                return w
            if state[w] == 0:
                trail.append(eid)
                found = dfs(w)
                if found is not None:
                    return found
                trail.pop()
        state[v] = 2
        return None

    for v in sorted(g.vertices):
        if state[v] == 0:
            start = dfs(v)
            if start is not None:
                cut = next(i for i, eid in enumerate(trail)
                           if edge_by_id[eid].src == start)
                return trail[cut:]
            trail.clear()
    return None


@dataclass(frozen=True)
class CKFamily:
    graph: Multigraph
    paths: tuple             # tuples of edge ids; () is a sink's empty path
    starts: tuple            # start vertex per path
    s_ops: tuple             # pairs (edge id, flattened 0/1 matrix)
    p_ops: tuple             # pairs (vertex id, flattened 0/1 matrix)

    @property
    def dim(self) -> int:
        return len(self.paths)

    def s(self, eid: str) -> np.ndarray:
        mats = dict(self.s_ops)
        return np.array(mats[eid], dtype=int).reshape(self.dim, self.dim)

    def p(self, vid: str) -> np.ndarray:
        mats = dict(self.p_ops)
        return np.array(mats[vid], dtype=int).reshape(self.dim, self.dim)


def build_ck_family(g: Multigraph) -> CKFamily:
    """Path-space edge isometries and vertex projections for an acyclic graph."""
    g.require_valid()
    if g.is_undirected:
        raise CyclicGraphError(
            "undirected multigraphs carry directed cycles; family undefined")
    cycle = find_directed_cycle(g)
    if cycle is not None:
        raise CyclicGraphError(f"graph has a directed cycle: {' -> '.join(cycle)}")

    edge_by_id = g.edge_map()
    sinks = [v for v in sorted(g.vertices) if not g.out_edges(v)]
    paths = [() for _ in sinks]
    starts = list(sinks)
    frontier = list(zip(paths, starts))
    while frontier:
        new = []
        for word, start in frontier:
            for eid in g.in_edges(start):
                e = edge_by_id[eid]
                new.append(((eid,) + word, e.src))
        paths.extend(w for w, _ in new)
        starts.extend(s for _, s in new)
        frontier = new

    def end_vertex(word, start):
        return edge_by_id[word[-1]].tgt if word else start

    keyed = sorted(zip(paths, starts), key=lambda ps: (end_vertex(*ps), ps[0]))
    paths = tuple(w for w, _ in keyed)
    starts = tuple(s for _, s in keyed)
    index = {w: i for i, w in enumerate(paths)}
    n = len(paths)

    s_ops = []
    for eid in g.edge_ids():
        e = edge_by_id[eid]
        mat = np.zeros((n, n), dtype=int)
        for i, (word, start) in enumerate(zip(paths, starts)):
            if start == e.tgt:
                mat[index[(eid,) + word]][i] = 1
        s_ops.append((eid, tuple(int(x) for x in mat.reshape(-1))))

    p_ops = []
    for v in g.vertex_order():
        mat = np.zeros((n, n), dtype=int)
        for i, start in enumerate(starts):
            if start == v:
                mat[i][i] = 1
        p_ops.append((v, tuple(int(x) for x in mat.reshape(-1))))

    fam = CKFamily(g, paths, starts, tuple(s_ops), tuple(p_ops))
    _check_family_exact(fam)
    return fam


def _check_family_exact(fam: CKFamily) -> None:
    g = fam.graph
    n = fam.dim
    eye = np.eye(n, dtype=int)
    total = np.zeros((n, n), dtype=int)
    for v in g.vertex_order():
        total = total + fam.p(v)
        for w in g.vertex_order():
            if v < w and np.any(fam.p(v) @ fam.p(w)):
                raise MultigraphError(f"vertex projections {v}, {w} not orthogonal")
    if not np.array_equal(total, eye):
        raise MultigraphError("vertex projections do not sum to the identity")
    for eid in g.edge_ids():
        s = fam.s(eid)
        if not np.array_equal(s.T @ s, fam.p(g.edge(eid).tgt)):
            raise MultigraphError(f"isometry relation fails at edge {eid}")
    for v in g.source_vertices():
        acc = np.zeros((n, n), dtype=int)
        for eid in g.out_edges(v):
            s = fam.s(eid)
            acc = acc + s @ s.T
        if not np.array_equal(acc, fam.p(v)):
            raise MultigraphError(f"range relation fails at vertex {v}")


def _rep_vertex_matrices(rep: MagicUnitaryRep, g: Multigraph) -> dict:
    order = g.vertex_order()
    if all(rep.has(q_(i, j)) for i in order for j in order):
        return {(i, j): rep.matrix(q_(i, j)) for i in order for j in order}
    derived = derived_vertex_matrix(rep, g)
    if not derived.qban_valid:
        raise MultigraphError("representation has no trustworthy vertex family")
    return derived.entries


def coaction_matrices(ck: CKFamily, rep: MagicUnitaryRep) -> tuple:
    """The transformed family: S over edges and P over vertices, on dim * d."""
    g = ck.graph
    d = rep.dim
    qmats = _rep_vertex_matrices(rep, g)
    S = {}
    for tau in g.edge_ids():
        acc = np.zeros((ck.dim * d, ck.dim * d), dtype=complex)
        for sigma in g.edge_ids():
            acc = acc + np.kron(ck.s(sigma).astype(complex), rep.matrix(u_(sigma, tau)))
        S[tau] = acc
    P = {}
    for i in g.vertex_order():
        acc = np.zeros((ck.dim * d, ck.dim * d), dtype=complex)
        for k in g.vertex_order():
            acc = acc + np.kron(ck.p(k).astype(complex), qmats[(k, i)])
        P[i] = acc
    return S, P


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    worst: str
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def verify_ck_coaction(ck: CKFamily, rep: MagicUnitaryRep) -> ResidualReport:
    """Cuntz-Krieger relations for the transformed family."""
    g = ck.graph
    S, P = coaction_matrices(ck, rep)
    worst, where = 0.0, "none"

    def track(r, label):
        nonlocal worst, where
        if r > worst:
            worst, where = r, label

    for tau in g.edge_ids():
        r = float(np.linalg.norm(S[tau].conj().T @ S[tau] - P[g.edge(tau).tgt], 2))
        track(r, f"isometry relation at {tau}")
    for i in g.source_vertices():
        acc = np.zeros_like(P[i])
        for tau in g.out_edges(i):
            acc = acc + S[tau] @ S[tau].conj().T
        track(float(np.linalg.norm(acc - P[i], 2)), f"range relation at {i}")
    order = g.vertex_order()
    for i in order:
        for j in order:
            prod = P[i] @ P[j]
            expect = P[i] if i == j else np.zeros_like(prod)
            track(float(np.linalg.norm(prod - expect, 2)), f"orthogonality at ({i},{j})")
    return ResidualReport(worst, where, rep.tol)


def verify_correspondence_covariance(g: Multigraph, rep: MagicUnitaryRep) -> ResidualReport:
    """Inner-product covariance of the edge representation.

    For every target vertex j and edges tau1, tau2: the in-bundle sum
    over sigma of u[sigma][tau1]^* u[sigma][tau2] equals
    [tau1 = tau2] q[j][t(tau1)].
    """
    g.require_valid()
    qmats = _rep_vertex_matrices(rep, g)
    E = g.edge_ids()
    edge = g.edge_map()
    d = rep.dim
    worst, where = 0.0, "none"
    for j in g.target_vertices():
        in_edges = g.in_edges(j)
        for t1 in E:
            for t2 in E:
                acc = np.zeros((d, d), dtype=complex)
                for sigma in in_edges:
                    acc = acc + rep.matrix(u_(sigma, t1)).conj().T @ rep.matrix(u_(sigma, t2))
                if t1 == t2:
                    acc = acc - qmats[(j, edge[t1].tgt)]
                r = float(np.linalg.norm(acc, 2))
                if r > worst:
                    worst, where = r, f"covariance at (tau1={t1}, tau2={t2}, j={j})"
    return ResidualReport(worst, where, rep.tol)
