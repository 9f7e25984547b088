"""Finite-dimensional matrix representations of the presentations: build
them (from classical automorphisms, from wreath-product data, or as the
square-graph gap witness) and verify them numerically against relation
systems.

All verdicts are operator-norm residual checks against a tolerance; nothing
here ever claims anything about infinite-dimensional behavior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classical import MultigraphAutomorphism
from .multigraph import (
    Multigraph,
    MultigraphError,
    adjacency_matrix,
    canonical_edge_representation,
    uniform_decompose,
)
from .ncpoly import (
    MissingSymbolError,
    Sym,
    eval_matrix,
    gamma_,
    nu_,
    parse_symbol,
    q_,
    u_,
    x_,
    P_,
)
from .presentations import Presentation, emit_presentation

DEFAULT_TOL = 1e-9


class RepresentationError(MultigraphError):
    pass


@dataclass
class MagicUnitaryRep:
    """An assignment of complex d x d matrices to generator symbols."""

    dim: int
    assign: dict
    tol: float = DEFAULT_TOL
    _verified: dict = field(default_factory=dict, repr=False, compare=False)

    def matrix(self, sym: Sym) -> np.ndarray:
        try:
            return self.assign[sym]
        except KeyError:
            raise MissingSymbolError(f"representation assigns nothing to {sym.text()}") from None

    def has(self, sym: Sym) -> bool:
        return sym in self.assign

    def to_dict(self) -> dict:
        out = {}
        for sym, mat in sorted(self.assign.items(), key=lambda kv: kv[0].key()):
            m = np.asarray(mat, dtype=complex)
            out[sym.text()] = [[[float(z.real), float(z.imag)] for z in row] for row in m]
        return {"dim": self.dim, "assign": out}

    @classmethod
    def from_dict(cls, data: dict, tol: float = DEFAULT_TOL) -> "MagicUnitaryRep":
        dim = int(data["dim"])
        assign = {}
        for text, rows in data["assign"].items():
            sym = parse_symbol(text)
            mat = np.array([[complex(re, im) for re, im in row] for row in rows])
            if mat.shape != (dim, dim):
                raise RepresentationError(f"{text}: expected {dim}x{dim} matrix")
            assign[sym] = mat
        return cls(dim, assign, tol)


@dataclass(frozen=True)
class VerifyResult:
    max_residual: float
    failing: tuple            # (Relation, residual) above tolerance
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def verify_rep(rep: MagicUnitaryRep, p: Presentation) -> VerifyResult:
    """Evaluate every relation; the verdict is the worst operator-norm residual."""
    for gen in p.generators:
        if not rep.has(gen):
            raise MissingSymbolError(f"representation does not assign {gen.text()}")
    cached = rep._verified.get(p.kind)
    if cached is not None:
        return cached
    worst = 0.0
    failing = []
    for rel in p.relations:
        r = eval_matrix(rel, rep.assign)
        worst = max(worst, r)
        if r > rep.tol:
            failing.append((rel, r))
    result = VerifyResult(worst, tuple(failing), rep.tol)
    rep._verified[p.kind] = result
    return result


# -- representations from classical automorphisms -------------------------------


def _one() -> np.ndarray:
    return np.ones((1, 1), dtype=complex)


def _zero() -> np.ndarray:
    return np.zeros((1, 1), dtype=complex)


def rep_from_automorphism(a: MultigraphAutomorphism) -> MagicUnitaryRep:
    """The one-dimensional representation carried by a classical automorphism.

    u[sigma][tau] is 1 exactly when the edge map sends tau to sigma and
    q[i][j] is 1 exactly when the vertex map sends j to i.  Bundle families
    gamma and nu are filled in from the local permutations read at a canonical
    bundle per vertex, so the source (resp. target) factorization check passes
    exactly when the automorphism really is source (resp. target) dependent.
    """
    g = a.graph
    E = g.edge_ids()
    order = g.vertex_order()
    f_v = a.vertex_map()
    f_inv = {w: v for v, w in f_v.items()}
    assign = {}
    images = {eid: a.edge_image(eid) for eid in E}
    for sigma in E:
        for tau in E:
            assign[u_(sigma, tau)] = _one() if images[tau] == sigma else _zero()
    for i in order:
        for j in order:
            assign[q_(i, j)] = _one() if f_v[j] == i else _zero()

    bundles = g.bundles()
    for comp in uniform_decompose(g):
        m = comp.degree
        out_targets: dict = {}
        in_sources: dict = {}
        for (k, l), ids in bundles.items():
            if len(ids) != m:
                continue
            out_targets.setdefault(k, []).append(l)
            in_sources.setdefault(l, []).append(k)
        for k in sorted(out_targets):
            k0 = f_inv[k]
            l0 = min(out_targets[k0]) if k0 in out_targets else min(out_targets[k])
            perm = a.gamma(k0, l0)
            for s in range(1, m + 1):
                for r in range(1, m + 1):
                    assign[gamma_(m, k, s, r)] = _one() if perm[r - 1] == s else _zero()
        for l in sorted(in_sources):
            j0 = f_inv[l]
            i0 = min(in_sources[j0]) if j0 in in_sources else min(in_sources[l])
            perm = a.gamma(i0, j0)
            for s in range(1, m + 1):
                for r in range(1, m + 1):
                    assign[nu_(m, l, s, r)] = _one() if perm[r - 1] == s else _zero()
    return MagicUnitaryRep(1, assign)


# -- wreath-product representations ---------------------------------------------


def angle_projection(theta: float) -> np.ndarray:
    """Rank-one projection onto span(cos t, sin t)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c * c, c * s], [c * s, s * s]], dtype=complex)


def block_pair_family(m: int, projections) -> np.ndarray:
    """An m x m magic family with 2x2-block structure from given projections.

    Rows and columns are grouped in consecutive pairs; pair b uses
    projections[b] as [[p, 1-p], [1-p, p]].  An odd leftover row/column gets
    the identity on the diagonal.  Entry dtype is (m, m, d, d).
    """
    d = projections[0].shape[0] if projections else 2
    fam = np.zeros((m, m, d, d), dtype=complex)
    eye = np.eye(d, dtype=complex)
    for b in range(m // 2):
        p = np.asarray(projections[b], dtype=complex)
        i = 2 * b
        fam[i][i] = p
        fam[i][i + 1] = eye - p
        fam[i + 1][i] = eye - p
        fam[i + 1][i + 1] = p
    if m % 2:
        fam[m - 1][m - 1] = eye
    return fam


def classical_x_assign(a: MultigraphAutomorphism) -> dict:
    """Base-copy matrices of a classical symmetry: 1x1 indicator entries."""
    f_v = a.vertex_map()
    order = a.graph.vertex_order()
    return {(i, j): (_one() if f_v[j] == i else _zero()) for i in order for j in order}


def build_wreath_rep(g: Multigraph, x_assign: dict, p_families: dict,
                     tol: float = DEFAULT_TOL) -> MagicUnitaryRep:
    """Assemble u[(i,j)r][(k,l)s] = P(i,j)[r][s] (x) x[i][k] x[j][l].

    ``x_assign`` maps vertex pairs to d1 x d1 matrices of a representation of
    the base system on the underlying simple graph; ``p_families`` maps each
    ordered support pair to an (m, m, d2, d2) magic family (for an undirected
    graph the two orientations must carry the same family; a missing
    orientation is filled from its mirror).  Fibers act on the first tensor
    factor and the base on the second, which hands the construction the
    commutations it needs.
    """
    g.require_valid()
    comps = uniform_decompose(g)
    if len(comps) != 1:
        raise RepresentationError("wreath representation needs a uniform multigraph")
    m = comps[0].degree
    pairs = sorted(g.bundles().keys())

    fams = {pair: np.asarray(fam, dtype=complex) for pair, fam in p_families.items()}
    if g.is_undirected:
        for (i, j) in pairs:
            if (i, j) not in fams and (j, i) in fams:
                fams[(i, j)] = fams[(j, i)]
        for (i, j) in pairs:
            if i < j and (j, i) in fams and (i, j) in fams:
                if not np.allclose(fams[(i, j)], fams[(j, i)], atol=tol):
                    raise RepresentationError(
                        f"orientations ({i},{j}) and ({j},{i}) carry different families")
    for pair in pairs:
        if pair not in fams:
            raise RepresentationError(f"no fiber family for bundle {pair}")
        if fams[pair].shape[:2] != (m, m):
            raise RepresentationError(
                f"fiber family for {pair} is {fams[pair].shape[:2]}, wanted ({m}, {m})")

    order = g.vertex_order()
    d1 = next(iter(x_assign.values())).shape[0]
    d2 = next(iter(fams.values())).shape[2]
    dim = d2 * d1
    eye1 = np.eye(d1, dtype=complex)
    eye2 = np.eye(d2, dtype=complex)

    def x(i, j):
        return np.asarray(x_assign[(i, j)], dtype=complex)

    rep_map = canonical_edge_representation(g)
    assign = {}
    for sid, (i, j, r) in rep_map.items():
        for tid, (k, l, s) in rep_map.items():
            assign[u_(sid, tid)] = np.kron(fams[(i, j)][r - 1][s - 1], x(i, k) @ x(j, l))
    for i in order:
        for j in order:
            assign[q_(i, j)] = np.kron(eye2, x(i, j))
            assign[x_(i, j)] = np.kron(eye2, x(i, j))
    for (i, j) in pairs:
        for r in range(1, m + 1):
            for s in range(1, m + 1):
                assign[P_(i, j, r, s)] = np.kron(fams[(i, j)][r - 1][s - 1], eye1)
    return MagicUnitaryRep(dim, assign, tol)


def default_wreath_rep(g: Multigraph, angle: float = math.pi / 4,
                       base: MultigraphAutomorphism | None = None,
                       tol: float = DEFAULT_TOL) -> MagicUnitaryRep:
    """Wreath representation with a classical base and nontrivial 2x2 fibers.

    Each bundle family gets pairs of non-commuting rank-one projections at
    deterministic angles derived from ``angle``, so distinct families fail to
    commute as soon as the graph has more than one bundle.
    """
    from .classical import identity_automorphism

    comps = uniform_decompose(g)
    if len(comps) != 1:
        raise RepresentationError("wreath representation needs a uniform multigraph")
    m = comps[0].degree
    base = base or identity_automorphism(g)
    x_assign = classical_x_assign(base)
    pairs = sorted(g.bundles().keys())
    if g.is_undirected:
        keys = sorted({(min(p), max(p)) for p in pairs})
    else:
        keys = pairs
    fams = {}
    for fi, key in enumerate(keys):
        thetas = [angle / (1 + fi + 2 * b) for b in range(m // 2)]
        fams[key] = block_pair_family(m, [angle_projection(t) for t in thetas])
    p_families = {}
    for pair in pairs:
        key = (min(pair), max(pair)) if g.is_undirected else pair
        p_families[pair] = fams[key]
    return build_wreath_rep(g, x_assign, p_families, tol)


# -- derived vertex matrices and block invariance --------------------------------


@dataclass(frozen=True)
class DerivedVertexMatrix:
    entries: dict
    sigma_independence: float
    qban_valid: bool


def derived_vertex_matrix(rep: MagicUnitaryRep, g: Multigraph,
                          tol: float | None = None) -> DerivedVertexMatrix:
    """Read the vertex family off the edge family via bundle sums.

    Source-vertex pairs use out-edge sums, remaining target pairs use in-edge
    sums, and mixed pure-source/pure-target pairs vanish.  The family is only
    trusted when every choice of reference edge gives the same matrix within
    tolerance; otherwise the representation is flagged invalid for the
    bi-unitary system rather than guessing.
    """
    tol = rep.tol if tol is None else tol
    d = rep.dim
    order = g.vertex_order()
    Vs = set(g.source_vertices())
    Vt = set(g.target_vertices())
    entries = {}
    worst = 0.0

    def edge_sum(sigma, taus):
        total = np.zeros((d, d), dtype=complex)
        for tau in taus:
            total = total + rep.matrix(u_(sigma, tau))
        return total

    for i in order:
        for k in order:
            if i in Vs and k in Vs:
                sigmas = g.out_edges(i)
                mats = [edge_sum(s, g.out_edges(k)) for s in sigmas]
            elif i in Vt and k in Vt:
                sigmas = g.in_edges(i)
                mats = [edge_sum(s, g.in_edges(k)) for s in sigmas]
            else:
                entries[(i, k)] = np.zeros((d, d), dtype=complex)
                continue
            ref = mats[0]
            for other in mats[1:]:
                worst = max(worst, float(np.linalg.norm(ref - other, 2)))
            entries[(i, k)] = ref

    for i in order:
        for k in order:
            if i in Vs and k in Vs and i in Vt and k in Vt:
                alt = [edge_sum(s, g.in_edges(k)) for s in g.in_edges(i)]
                for other in alt:
                    worst = max(worst, float(np.linalg.norm(entries[(i, k)] - other, 2)))

    return DerivedVertexMatrix(entries, worst, worst <= tol)


@dataclass(frozen=True)
class BlockReport:
    ok: bool
    max_residual: float
    violations: tuple


def block_invariance_check(rep: MagicUnitaryRep, g: Multigraph) -> BlockReport:
    """Numerical block structure of an edge representation.

    Checks that entries vanish across distinct uniform components and from
    non-loops into loops, that the loop block consists of projections, and
    that the derived vertex family commutes with the adjacency matrix.
    """
    g.require_valid()
    tol = rep.tol
    violations = []
    worst = 0.0
    comp_of = {}
    for comp in uniform_decompose(g):
        for eid in comp.edges:
            comp_of[eid] = comp.degree
    E = g.edge_ids()
    loops = set(g.loops())

    for sigma in E:
        for tau in E:
            mat = rep.matrix(u_(sigma, tau))
            if comp_of[sigma] != comp_of[tau]:
                r = float(np.linalg.norm(mat, 2))
                worst = max(worst, r)
                if r > tol:
                    violations.append(f"component mixing at ({sigma},{tau}): {r:.3e}")
            if sigma not in loops and tau in loops:
                r = float(np.linalg.norm(mat, 2))
                worst = max(worst, r)
                if r > tol:
                    violations.append(f"non-loop into loop at ({sigma},{tau}): {r:.3e}")
            if sigma in loops and tau in loops:
                r = max(float(np.linalg.norm(mat - mat.conj().T, 2)),
                        float(np.linalg.norm(mat @ mat - mat, 2)))
                worst = max(worst, r)
                if r > tol:
                    violations.append(f"loop block entry not a projection at ({sigma},{tau}): {r:.3e}")

    derived = derived_vertex_matrix(rep, g)
    worst = max(worst, derived.sigma_independence)
    if not derived.qban_valid:
        violations.append(
            f"derived vertex family is reference-edge dependent: {derived.sigma_independence:.3e}")
    order = g.vertex_order()
    W = adjacency_matrix(g).entries
    idx = {v: i for i, v in enumerate(order)}
    n_entries = len(order) * len(order)
    comm_tol = len(order) * len(E) * tol if n_entries else tol
    for i in order:
        for j in order:
            left = sum((int(W[idx[k]][idx[j]]) * derived.entries[(i, k)] for k in order),
                       np.zeros((rep.dim, rep.dim), dtype=complex))
            right = sum((int(W[idx[i]][idx[k]]) * derived.entries[(k, j)] for k in order),
                        np.zeros((rep.dim, rep.dim), dtype=complex))
            r = float(np.linalg.norm(left - right, 2))
            worst = max(worst, r)
            if r > comm_tol:
                violations.append(f"derived family fails adjacency commutation at ({i},{j}): {r:.3e}")

    return BlockReport(not violations, worst, tuple(violations))


# -- source/target factorization checks ------------------------------------------


@dataclass(frozen=True)
class FactorizationReport:
    source_residual: float | None
    target_residual: float | None
    link_residual: float | None
    failures: tuple

    def passed(self, tol: float) -> bool:
        vals = [v for v in (self.source_residual, self.target_residual,
                            self.link_residual) if v is not None]
        return all(v <= tol for v in vals)


def st_form_check(rep: MagicUnitaryRep, g: Multigraph) -> FactorizationReport:
    """Product-form identities of dependent representations.

    Source side: u[(k,l)s][(i,j)r] = gamma[m][k][s][r] q[k][i] q[l][j]; target
    side replaces the bundle factor by nu on the right; when both families are
    assigned the bundle factors must agree along every bundle.  Sides whose
    symbols are absent are skipped and reported as None.
    """
    g.require_valid()
    rep_map = canonical_edge_representation(g)
    bundles = g.bundles()
    comp_of = {}
    for comp in uniform_decompose(g):
        for (k, l), ids in bundles.items():
            if len(ids) == comp.degree:
                comp_of[(k, l)] = comp.degree

    have_gamma = any(s.family == "gamma" for s in rep.assign)
    have_nu = any(s.family == "nu" for s in rep.assign)
    src_res = tgt_res = link_res = None
    failures = []

    by_comp: dict = {}
    for eid, (k, l, r) in rep_map.items():
        by_comp.setdefault(comp_of[(k, l)], []).append((eid, k, l, r))

    for m, labeled in sorted(by_comp.items()):
        for tid, i, j, r in labeled:
            for sid, k, l, s in labeled:
                usym = rep.matrix(u_(sid, tid))
                qq = rep.matrix(q_(k, i)) @ rep.matrix(q_(l, j))
                if have_gamma:
                    gmat = rep.matrix(gamma_(m, k, s, r))
                    res = float(np.linalg.norm(usym - gmat @ qq, 2))
                    src_res = res if src_res is None else max(src_res, res)
                    if res > rep.tol:
                        failures.append(f"source form fails at u[{sid}][{tid}]: {res:.3e}")
                if have_nu:
                    nmat = rep.matrix(nu_(m, l, s, r))
                    res = float(np.linalg.norm(usym - qq @ nmat, 2))
                    tgt_res = res if tgt_res is None else max(tgt_res, res)
                    if res > rep.tol:
                        failures.append(f"target form fails at u[{sid}][{tid}]: {res:.3e}")
        if have_gamma and have_nu:
            for (k, l) in sorted(bundles):
                if comp_of[(k, l)] != m:
                    continue
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        res = float(np.linalg.norm(
                            rep.matrix(gamma_(m, k, s, r)) - rep.matrix(nu_(m, l, s, r)), 2))
                        link_res = res if link_res is None else max(link_res, res)
                        if res > rep.tol:
                            failures.append(
                                f"bundle factors disagree along ({k},{l}) at (s={s},r={r}): {res:.3e}")

    return FactorizationReport(src_res, tgt_res, link_res, tuple(failures))


# -- the square-graph witness ------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    angle: float
    sban_residual: float
    qst_residual: float
    commutator_norm: float
    degenerate: bool

    def passed(self, tol: float) -> bool:
        return self.sban_residual <= tol and self.qst_residual <= tol


def _four_cycle_roles(g: Multigraph):
    """Role labels (a, b, c, d): the two diagonals of an underlying 4-cycle."""
    order = g.vertex_order()
    if len(order) != 4:
        raise RepresentationError("witness needs a graph on four vertices")
    support = {pair for pair in g.bundles()}
    def adjacent(x, y):
        return (x, y) in support
    a = order[0]
    non_neighbors = [v for v in order[1:] if not adjacent(a, v) and not adjacent(v, a)]
    if len(non_neighbors) != 1:
        raise RepresentationError("underlying simple graph is not a 4-cycle")
    b = non_neighbors[0]
    c, d = [v for v in order if v not in (a, b)]
    for x in (c, d):
        if not (adjacent(a, x) and adjacent(b, x)):
            raise RepresentationError("underlying simple graph is not a 4-cycle")
    if adjacent(c, d) or adjacent(d, c):
        raise RepresentationError("underlying simple graph is not a 4-cycle")
    return a, b, c, d


def example_square_witness(g: Multigraph, angle: float,
                           tol: float = DEFAULT_TOL) -> tuple:
    """A 4-dimensional representation separating the bi-unitary system from
    the quantum-permutation one on a doubled square.

    Built from commuting-with-t projections p = p0 (x) I and q = q0(angle) (x) I
    with t = I (x) diag(1,0); the vertex family has the standard 4-cycle shape
    and the bundle family is the magic 2x2 family over t.  Reports the
    adjacency-system residual, the dependent-system residual, and the norm of
    the commutator between the two diagonal entries that witnesses
    non-commutativity (sin(angle) cos(angle) at the exact solution).
    """
    if not 0 < angle < math.pi / 2:
        raise ValueError("angle must lie strictly between 0 and pi/2")
    g.require_valid()
    a, b, c, d = _four_cycle_roles(g)

    eye = np.eye(2, dtype=complex)
    p0 = np.array([[1, 0], [0, 0]], dtype=complex)
    q0 = angle_projection(angle)
    p = np.kron(p0, eye)
    q = np.kron(q0, eye)
    t = np.kron(eye, p0)
    one = np.eye(4, dtype=complex)

    rows = {
        (a, a): p @ t, (a, b): (one - p) @ t, (a, c): p @ (one - t), (a, d): (one - p) @ (one - t),
        (b, a): (one - p) @ t, (b, b): p @ t, (b, c): (one - p) @ (one - t), (b, d): p @ (one - t),
        (c, a): q @ (one - t), (c, b): (one - q) @ (one - t), (c, c): q @ t, (c, d): (one - q) @ t,
        (d, a): (one - q) @ (one - t), (d, b): q @ (one - t), (d, c): (one - q) @ t, (d, d): q @ t,
    }
    assign = {q_(i, j): rows[(i, j)] for (i, j) in rows}

    comps = uniform_decompose(g)
    if len(comps) != 1:
        raise RepresentationError("witness needs a uniform doubled square")
    m = comps[0].degree
    if m == 2:
        fam = {(1, 1): t, (1, 2): one - t, (2, 1): one - t, (2, 2): t}
    else:
        fam = {(s, r): (one if s == r else np.zeros((4, 4), dtype=complex))
               for s in range(1, m + 1) for r in range(1, m + 1)}
    for k in g.vertex_order():
        for (s, r), mat in fam.items():
            assign[gamma_(m, k, s, r)] = mat

    rep = MagicUnitaryRep(4, assign, tol)
    sban = verify_rep(rep, emit_presentation(g, "sban"))
    qst = verify_rep(rep, emit_presentation(g, "qst"))
    comm = rows[(a, d)] @ rows[(c, b)] - rows[(c, b)] @ rows[(a, d)]
    comm_norm = float(np.linalg.norm(comm, 2))
    report = WitnessReport(angle, sban.max_residual, qst.max_residual,
                           comm_norm, comm_norm < 1e-12)
    return rep, report
