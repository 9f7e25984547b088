"""Finitely presented generator/relation systems for the quantum symmetry
objects attached to a multigraph, plus their coproduct tables.

Edge-generator kinds (qban, qsym, qbic) present algebras on the |E| x |E|
family u[sigma][tau]; the vertex family q is never a generator there, it is
derived (see derived_vertex_relations).  The dependent kinds (qs, qt, qst and
the undirected variant) and the simple-graph kinds (sban, sbic) present
algebras on q plus bundle families gamma/nu; free_wreath presents the fiber
families P over a base copy x of the sbic system.

On an undirected input the edge kinds automatically pick up the inversion
compatibility relations u[s][t] = u[s-bar][t-bar]^*, and the dependent kinds
resolve to the path-class variant; a doubly directed multigraph with no
declared inversion map is treated as directed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .multigraph import (
    Multigraph,
    MultigraphError,
    adjacency_matrix,
    canonical_edge_representation,
    path_classes,
    uniform_decompose,
)
from .ncpoly import (
    Relation,
    Sym,
    dedup_relations,
    fs,
    fs_one,
    fs_sym,
    fs_zero,
    gamma_,
    mono,
    nu_,
    q_,
    u_,
    x_,
    P_,
)


EDGE_KINDS = ("qban", "qsym", "qbic", "qbic_undirected")
VERTEX_KINDS = ("sban", "sbic")
DEPENDENT_KINDS = ("qs", "qt", "qst", "qst_undirected")
ALL_KINDS = EDGE_KINDS + VERTEX_KINDS + DEPENDENT_KINDS + ("free_wreath",)


class PresentationError(MultigraphError):
    pass


@dataclass(frozen=True)
class Presentation:
    kind: str
    generators: tuple
    relations: tuple
    coproduct: tuple          # pairs (Sym, tensor sum); tensor term = (GQ, mono, mono)

    def relations_with_note_prefix(self, prefix: str) -> tuple:
        return tuple(r for r in self.relations if r.note.startswith(prefix))

    def generator_set(self) -> set:
        return set(self.generators)


def resolve_kind(g: Multigraph, kind: str) -> str:
    """Normalize a kind name against the graph's directedness."""
    k = kind.strip().lower().replace("-", "_")
    if k not in ALL_KINDS:
        raise PresentationError(f"unknown presentation kind: {kind}")
    if g.is_undirected:
        if k == "qbic":
            return "qbic_undirected"
        if k in ("qs", "qt", "qst"):
            return "qst_undirected"
        return k
    if k in ("qbic_undirected", "qst_undirected"):
        raise PresentationError(f"{kind} needs an undirected multigraph")
    return k


# -- small builders -----------------------------------------------------------


def _rel(left, right, note):
    return Relation(fs(*left), fs(*right), note)


def _nontrivial(rel: Relation) -> bool:
    return rel.left != rel.right


def _magic_relations(rows, note: str):
    """Quantum permutation relations for a square array of symbols.

    rows[a][b] is the symbol in row a, column b; emits projection relations
    per entry and unit row/column sums.
    """
    out = []
    n = len(rows)
    for a in range(n):
        for b in range(n):
            s = rows[a][b]
            out.append(_rel([(1, mono(s))], [(1, mono((s, True)))], note))
            out.append(_rel([(1, mono(s, s))], [(1, mono(s))], note))
    for a in range(n):
        out.append(_rel([(1, mono(rows[a][b])) for b in range(n)], [(1, ())], note))
    for b in range(n):
        out.append(_rel([(1, mono(rows[a][b])) for a in range(n)], [(1, ())], note))
    return out


def _adjacency_commutation(g: Multigraph, sym, note: str):
    """Entrywise S W = W S for a vertex family, W the edge-count matrix."""
    order = g.vertex_order()
    W = adjacency_matrix(g).entries
    idx = {v: i for i, v in enumerate(order)}
    out = []
    for i in order:
        for j in order:
            left = [(int(W[idx[k]][idx[j]]), mono(sym(i, k)))
                    for k in order if W[idx[k]][idx[j]]]
            right = [(int(W[idx[i]][idx[k]]), mono(sym(k, j)))
                     for k in order if W[idx[i]][idx[k]]]
            rel = _rel(left, right, note)
            if _nontrivial(rel):
                out.append(rel)
    return out


def _inversion_star_relations(g: Multigraph, note: str):
    inv = g.inversion_map()
    out = []
    for sigma in g.edge_ids():
        for tau in g.edge_ids():
            out.append(_rel([(1, mono(u_(sigma, tau)))],
                            [(1, mono((u_(inv[sigma], inv[tau]), True)))], note))
    return out


# -- edge-generator kinds ------------------------------------------------------


def _qban_relations(g: Multigraph):
    E = g.edge_ids()
    edge = g.edge_map()
    Vs, Vt = g.source_vertices(), g.target_vertices()
    both = [v for v in Vs if v in Vt]
    only_s = [v for v in Vs if v not in Vt]
    only_t = [v for v in Vt if v not in Vs]
    rels = []

    for s1, s2 in itertools.product(E, E):
        delta = [(1, ())] if s1 == s2 else []
        rels.append(_rel([(1, mono(u_(s1, t), (u_(s2, t), True))) for t in E],
                         delta, "qban(1) bi-unitarity"))
        rels.append(_rel([(1, mono((u_(t, s1), True), u_(t, s2))) for t in E],
                         delta, "qban(1) bi-unitarity"))
        rels.append(_rel([(1, mono((u_(s1, t), True), u_(s2, t))) for t in E],
                         delta, "qban(1) bi-unitarity"))
        rels.append(_rel([(1, mono(u_(t, s1), (u_(t, s2), True))) for t in E],
                         delta, "qban(1) bi-unitarity"))

    for s in E:
        rels.append(_rel([(1, mono(u_(s, t))) for t in E], [(1, ())],
                         "qban(2) row sums"))

    for k in Vs:
        Ek = g.out_edges(k)
        for s1, s2 in itertools.product(E, E):
            if s1 == s2:
                continue
            rels.append(_rel([(1, mono(u_(s1, t), (u_(s2, t), True))) for t in Ek],
                             [], "qban(3) source orthogonality"))
        for s1, s2 in itertools.combinations(E, 2):
            if edge[s1].src == edge[s2].src:
                rels.append(_rel(
                    [(1, mono(u_(s1, t), (u_(s1, t), True))) for t in Ek],
                    [(1, mono(u_(s2, t), (u_(s2, t), True))) for t in Ek],
                    "qban(3) source uniformity"))

    for l in Vt:
        El = g.in_edges(l)
        for s1, s2 in itertools.product(E, E):
            if s1 == s2:
                continue
            rels.append(_rel([(1, mono((u_(s1, t), True), u_(s2, t))) for t in El],
                             [], "qban(4) target orthogonality"))
        for s1, s2 in itertools.combinations(E, 2):
            if edge[s1].tgt == edge[s2].tgt:
                rels.append(_rel(
                    [(1, mono((u_(s1, t), True), u_(s1, t))) for t in El],
                    [(1, mono((u_(s2, t), True), u_(s2, t))) for t in El],
                    "qban(4) target uniformity"))

    for i in only_s:
        for k in both:
            for s1 in g.out_edges(i):
                for t1 in g.out_edges(k):
                    rels.append(_rel([(1, mono(u_(s1, t1)))], [],
                                     "qban(5) source/target separation"))
    for j in only_t:
        for k in both:
            for s2 in g.in_edges(j):
                for t2 in g.in_edges(k):
                    rels.append(_rel([(1, mono(u_(s2, t2)))], [],
                                     "qban(5) source/target separation"))

    for i in both:
        for k in both:
            for s1 in g.out_edges(i):
                for s2 in g.in_edges(i):
                    rels.append(_rel(
                        [(1, mono(u_(s1, t), (u_(s1, t), True))) for t in g.out_edges(k)],
                        [(1, mono((u_(s2, t), True), u_(s2, t))) for t in g.in_edges(k)],
                        "qban(6) source/target agreement"))
    return rels


def _qsym_extra_relations(g: Multigraph):
    rels = []
    for (_k, _l), ids in g.bundles().items():
        for s1, s2 in itertools.product(ids, ids):
            if s1 == s2:
                continue
            for t in g.edge_ids():
                rels.append(_rel([(1, mono(u_(s1, t), (u_(s2, t), True)))], [],
                                 "qsym(7) restricted orthogonality"))
                rels.append(_rel([(1, mono((u_(s1, t), True), u_(s2, t)))], [],
                                 "qsym(7) restricted orthogonality"))
    return rels


def _qbic_relations(g: Multigraph):
    E = g.edge_ids()
    edge = g.edge_map()
    Vs, Vt = g.source_vertices(), g.target_vertices()
    both = [v for v in Vs if v in Vt]
    only_s = [v for v in Vs if v not in Vt]
    only_t = [v for v in Vt if v not in Vs]
    rels = []

    for s in E:
        for t in E:
            rels.append(_rel([(1, mono(u_(s, t)))], [(1, mono((u_(s, t), True)))],
                             "qbic(1) projection entries"))
            rels.append(_rel([(1, mono(u_(s, t), u_(s, t)))], [(1, mono(u_(s, t)))],
                             "qbic(1) projection entries"))

    for s in E:
        rels.append(_rel([(1, mono(u_(s, t))) for t in E], [(1, ())],
                         "qbic(2) row and column sums"))
        rels.append(_rel([(1, mono(u_(t, s))) for t in E], [(1, ())],
                         "qbic(2) row and column sums"))

    for k in Vs:
        Ek = g.out_edges(k)
        for s1, s2 in itertools.combinations(E, 2):
            if edge[s1].src == edge[s2].src:
                rels.append(_rel([(1, mono(u_(s1, t))) for t in Ek],
                                 [(1, mono(u_(s2, t))) for t in Ek],
                                 "qbic(3) source bundle sums"))
    for l in Vt:
        El = g.in_edges(l)
        for s1, s2 in itertools.combinations(E, 2):
            if edge[s1].tgt == edge[s2].tgt:
                rels.append(_rel([(1, mono(u_(s1, t))) for t in El],
                                 [(1, mono(u_(s2, t))) for t in El],
                                 "qbic(3) target bundle sums"))

    for i in only_s:
        for k in both:
            for s1 in g.out_edges(i):
                for t1 in g.out_edges(k):
                    rels.append(_rel([(1, mono(u_(s1, t1)))], [],
                                     "qbic(4) source/target separation"))
    for j in only_t:
        for k in both:
            for s2 in g.in_edges(j):
                for t2 in g.in_edges(k):
                    rels.append(_rel([(1, mono(u_(s2, t2)))], [],
                                     "qbic(4) source/target separation"))

    for i in both:
        for k in both:
            for s1 in g.out_edges(i):
                for s2 in g.in_edges(i):
                    rels.append(_rel([(1, mono(u_(s1, t))) for t in g.out_edges(k)],
                                     [(1, mono(u_(s2, t))) for t in g.in_edges(k)],
                                     "qbic(5) source/target agreement"))
    return rels


# -- dependent kinds -----------------------------------------------------------


def _vertex_block(g: Multigraph, tag: str):
    order = g.vertex_order()
    rows = [[q_(i, j) for j in order] for i in order]
    rels = _magic_relations(rows, f"{tag} vertex quantum permutation")
    rels += _adjacency_commutation(g, q_, f"{tag} vertex adjacency commutation")
    return rels


def _gamma_magic(m: int, k, degree: int, family, tag: str):
    rows = [[family(degree, k, s, r) for r in range(1, m + 1)] for s in range(1, m + 1)]
    return _magic_relations(rows, tag)


def _qs_relations(g: Multigraph):
    rels = _vertex_block(g, "qs(1)")
    for comp in uniform_decompose(g):
        m = comp.degree
        for k in comp.sources:
            rels += _gamma_magic(m, k, m, gamma_, "qs(2) bundle quantum permutation")
        for k in comp.sources:
            for i in comp.sources:
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        gg = gamma_(m, k, s, r)
                        rels.append(_rel([(1, mono(gg, q_(k, i)))],
                                         [(1, mono(q_(k, i), gg))],
                                         "qs(2) source wreath commutation"))
    return rels


def _qt_relations(g: Multigraph):
    rels = _vertex_block(g, "qt(1)")
    for comp in uniform_decompose(g):
        m = comp.degree
        for l in comp.targets:
            rels += _gamma_magic(m, l, m, nu_, "qt(2) bundle quantum permutation")
        for l in comp.targets:
            for j in comp.targets:
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        nn = nu_(m, l, s, r)
                        rels.append(_rel([(1, mono(nn, q_(l, j)))],
                                         [(1, mono(q_(l, j), nn))],
                                         "qt(2) target wreath commutation"))
    return rels


def _component_bundle_pairs(g: Multigraph, comp):
    return [(k, l) for (k, l), ids in g.bundles().items() if len(ids) == comp.degree]


def _qst_relations(g: Multigraph):
    rels = _vertex_block(g, "qst(1)")
    for comp in uniform_decompose(g):
        m = comp.degree
        pairs = _component_bundle_pairs(g, comp)
        for k in comp.sources:
            rels += _gamma_magic(m, k, m, gamma_, "qst(2) bundle quantum permutation")
        by_target: dict = {}
        for k, l in pairs:
            by_target.setdefault(l, []).append(k)
        for l, ks in sorted(by_target.items()):
            for k1, k2 in itertools.combinations(sorted(ks), 2):
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        rels.append(_rel([(1, mono(gamma_(m, k1, s, r)))],
                                         [(1, mono(gamma_(m, k2, s, r)))],
                                         "qst(2) shared-target identification"))
        for k in comp.sources:
            for i in comp.sources:
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        gg = gamma_(m, k, s, r)
                        rels.append(_rel([(1, mono(gg, q_(k, i)))],
                                         [(1, mono(q_(k, i), gg))],
                                         "qst(2) source commutation"))
        for k, l in pairs:
            for j in comp.targets:
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        gg = gamma_(m, k, s, r)
                        rels.append(_rel([(1, mono(gg, q_(l, j)))],
                                         [(1, mono(q_(l, j), gg))],
                                         "qst(2) target commutation"))
    return rels


def _qst_undirected_relations(g: Multigraph):
    rels = _vertex_block(g, "qstu(1)")
    for comp in uniform_decompose(g):
        m = comp.degree
        for k in comp.vertices:
            rels += _gamma_magic(m, k, m, gamma_, "qstu(2) bundle quantum permutation")
        for cls in path_classes(comp, g):
            for k1, k2 in itertools.combinations(sorted(cls), 2):
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        rels.append(_rel([(1, mono(gamma_(m, k1, s, r)))],
                                         [(1, mono(gamma_(m, k2, s, r)))],
                                         "qstu(2) path-class identification"))
        for k in comp.vertices:
            for i in comp.vertices:
                for s in range(1, m + 1):
                    for r in range(1, m + 1):
                        gg = gamma_(m, k, s, r)
                        rels.append(_rel([(1, mono(gg, q_(k, i)))],
                                         [(1, mono(q_(k, i), gg))],
                                         "qstu(2) vertex commutation"))
    return rels


# -- simple-graph and wreath kinds ---------------------------------------------


def _sban_relations(g: Multigraph, sym=q_, tag: str = "sban"):
    order = g.vertex_order()
    rows = [[sym(i, j) for j in order] for i in order]
    rels = _magic_relations(rows, f"{tag}(1) quantum permutation")
    rels += _adjacency_commutation(g, sym, f"{tag}(2) adjacency commutation")
    return rels


def _edge_pair_commutation(g: Multigraph, sym, note: str):
    pairs = sorted(g.bundles().keys())
    rels = []
    for (i, j) in pairs:
        for (k, l) in pairs:
            rel = _rel([(1, mono(sym(i, k), sym(j, l)))],
                       [(1, mono(sym(j, l), sym(i, k)))], note)
            if _nontrivial(rel):
                rels.append(rel)
    return rels


def _free_wreath_relations(g: Multigraph):
    comps = uniform_decompose(g)
    if len(comps) != 1:
        raise PresentationError("free_wreath needs a uniform multigraph")
    m = comps[0].degree
    order = g.vertex_order()
    rows = [[x_(i, j) for j in order] for i in order]
    rels = _magic_relations(rows, "wreath(1) base quantum permutation")
    rels += _adjacency_commutation(g, x_, "wreath(1) base adjacency commutation")
    rels += _edge_pair_commutation(g, x_, "wreath(2) base edge-pair commutation")
    pairs = sorted(g.bundles().keys())
    for (i, j) in pairs:
        rows = [[P_(i, j, r, s) for s in range(1, m + 1)] for r in range(1, m + 1)]
        rels += _magic_relations(rows, "wreath(3) fiber quantum permutation")
    for (i, j) in pairs:
        for (k, l) in pairs:
            for r in range(1, m + 1):
                for s in range(1, m + 1):
                    p = P_(i, j, r, s)
                    rels.append(_rel([(1, mono(p, x_(i, k), x_(j, l)))],
                                     [(1, mono(x_(i, k), x_(j, l), p))],
                                     "wreath(4) fiber-base commutation"))
    if g.is_undirected:
        for (i, j) in pairs:
            if i < j:
                for r in range(1, m + 1):
                    for s in range(1, m + 1):
                        rels.append(_rel([(1, mono(P_(i, j, r, s)))],
                                         [(1, mono(P_(j, i, r, s)))],
                                         "wreath(5) orientation identification"))
    return rels


# -- generators and coproducts ---------------------------------------------------


def _generators(g: Multigraph, kind: str):
    order = g.vertex_order()
    E = g.edge_ids()
    if kind in ("qban", "qsym", "qbic", "qbic_undirected"):
        return tuple(u_(s, t) for s in E for t in E)
    if kind in ("sban", "sbic"):
        return tuple(q_(i, j) for i in order for j in order)
    if kind == "free_wreath":
        m = uniform_decompose(g)[0].degree
        gens = [x_(i, j) for i in order for j in order]
        gens += [P_(i, j, r, s) for (i, j) in sorted(g.bundles().keys())
                 for r in range(1, m + 1) for s in range(1, m + 1)]
        return tuple(gens)
    gens = [q_(i, j) for i in order for j in order]
    for comp in uniform_decompose(g):
        m = comp.degree
        if kind == "qs":
            ks = comp.sources
            fam = gamma_
        elif kind == "qt":
            ks = comp.targets
            fam = nu_
        elif kind == "qst":
            ks = comp.sources
            fam = gamma_
        elif kind == "qst_undirected":
            ks = comp.vertices
            fam = gamma_
        else:
            raise PresentationError(f"unknown kind: {kind}")
        gens += [fam(m, k, s, r) for k in ks
                 for s in range(1, m + 1) for r in range(1, m + 1)]
    return tuple(gens)


def _coproduct(g: Multigraph, kind: str):
    order = g.vertex_order()
    E = g.edge_ids()
    table = []
    one = fs_one()[0][0]

    def tens(entries):
        return tuple((one, ml, mr) for ml, mr in entries)

    if kind in ("qban", "qsym", "qbic", "qbic_undirected"):
        for s in E:
            for t in E:
                table.append((u_(s, t),
                              tens([(mono(u_(s, tp)), mono(u_(tp, t))) for tp in E])))
        return tuple(table)

    if kind in ("sban", "sbic", "free_wreath"):
        sym = x_ if kind == "free_wreath" else q_
        for i in order:
            for j in order:
                table.append((sym(i, j),
                              tens([(mono(sym(i, k)), mono(sym(k, j))) for k in order])))
        if kind == "free_wreath":
            m = uniform_decompose(g)[0].degree
            pairs = sorted(g.bundles().keys())
            for (i, j) in pairs:
                for r in range(1, m + 1):
                    for s in range(1, m + 1):
                        entries = [(mono(P_(i, j, r, sp), x_(i, k), x_(j, l)),
                                    mono(P_(k, l, sp, s)))
                                   for sp in range(1, m + 1) for (k, l) in pairs]
                        table.append((P_(i, j, r, s), tens(entries)))
        return tuple(table)

    for i in order:
        for j in order:
            table.append((q_(i, j),
                          tens([(mono(q_(i, k)), mono(q_(k, j))) for k in order])))
    for comp in uniform_decompose(g):
        m = comp.degree
        if kind == "qs":
            ks, others, fam = comp.sources, comp.sources, gamma_
        elif kind == "qt":
            ks, others, fam = comp.targets, comp.targets, nu_
        elif kind == "qst":
            ks, others, fam = comp.sources, comp.sources, gamma_
        else:
            ks, others, fam = comp.vertices, comp.vertices, gamma_
        for k in ks:
            for s in range(1, m + 1):
                for r in range(1, m + 1):
                    entries = [(mono(fam(m, k, s, sp), q_(k, kp)),
                                mono(fam(m, kp, sp, r)))
                               for sp in range(1, m + 1) for kp in others]
                    table.append((fam(m, k, s, r), tens(entries)))
    return tuple(table)


def emit_presentation(g: Multigraph, kind: str) -> Presentation:
    """The complete relation system of the requested kind for this graph."""
    g.require_valid()
    k = resolve_kind(g, kind)
    if k == "qban":
        rels = _qban_relations(g)
    elif k == "qsym":
        rels = _qban_relations(g) + _qsym_extra_relations(g)
    elif k in ("qbic", "qbic_undirected"):
        rels = _qbic_relations(g)
    elif k == "qs":
        rels = _qs_relations(g)
    elif k == "qt":
        rels = _qt_relations(g)
    elif k == "qst":
        rels = _qst_relations(g)
    elif k == "qst_undirected":
        rels = _qst_undirected_relations(g)
    elif k == "sban":
        rels = _sban_relations(g)
    elif k == "sbic":
        rels = _sban_relations(g, q_, "sbic") + _edge_pair_commutation(
            g, q_, "sbic(3) edge-pair commutation")
    elif k == "free_wreath":
        rels = _free_wreath_relations(g)
    else:
        raise PresentationError(f"unknown kind: {kind}")

    if g.is_undirected and k in ("qban", "qsym", "qbic_undirected"):
        rels = rels + _inversion_star_relations(g, f"{k}(J) inversion compatibility")

    return Presentation(k, _generators(g, k), dedup_relations(rels), _coproduct(g, k))


def derived_vertex_relations(g: Multigraph, kind: str = "qban") -> tuple:
    """The identities expressing the vertex family q through edge sums.

    For every pair of source vertices i, k and every edge out of i there is
    one identity q[i][k] = sum of u over the out-bundle union at k; the whole
    family over edges out of i must agree (sigma-independence), which is what
    representation verification asserts.  Target analog included.
    """
    k0 = resolve_kind(g, kind)
    if k0 not in EDGE_KINDS:
        raise PresentationError("derived vertex relations need an edge-generator kind")
    rels = []
    for i in g.source_vertices():
        for k in g.source_vertices():
            for sigma in g.out_edges(i):
                rels.append(_rel([(1, mono(q_(i, k)))],
                                 [(1, mono(u_(sigma, tau))) for tau in g.out_edges(k)],
                                 "derived-q source (sigma-independent family)"))
    for j in g.target_vertices():
        for l in g.target_vertices():
            for sigma in g.in_edges(j):
                rels.append(_rel([(1, mono(q_(j, l)))],
                                 [(1, mono(u_(sigma, tau))) for tau in g.in_edges(l)],
                                 "derived-q target (sigma-independent family)"))
    return dedup_relations(rels)


def bimodule_relations(g: Multigraph) -> tuple:
    """Left/right compatibility of the vertex family with the edge family:
    q[s(sigma)][i] u[sigma][tau] = [i = s(tau)] u[sigma][tau], and the target
    mirror.  Used as the bimodule leg of correspondence covariance checks."""
    edge = g.edge_map()
    rels = []
    for sigma in g.edge_ids():
        for tau in g.edge_ids():
            usym = u_(sigma, tau)
            for i in g.source_vertices():
                right = [(1, mono(usym))] if edge[tau].src == i else []
                rels.append(_rel([(1, mono(q_(edge[sigma].src, i), usym))], right,
                                 "bimodule source"))
            for j in g.target_vertices():
                right = [(1, mono(usym))] if edge[tau].tgt == j else []
                rels.append(_rel([(1, mono(usym, q_(edge[sigma].tgt, j)))], right,
                                 "bimodule target"))
    return dedup_relations(rels)


def coproduct_table(p: Presentation) -> dict:
    """Generator -> formal sum of (coefficient, left monomial, right monomial)."""
    return dict(p.coproduct)
