"""Classical points of a presentation: complete enumeration of its Boolean
commutative solutions, and cross-checks against the classical automorphism
groups.

The search never walks the raw {0,1}^generators cube.  Candidates are built
structurally (vertex symmetry plus local bundle permutations, or plus one
permutation per bundle family) and then every candidate is verified against
every relation of the presentation, so correctness does not depend on the
candidate analysis being sharp.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

from .classical import (
    AutomorphismGroup,
    MultigraphAutomorphism,
    SizeGuardError,
    _shared_target_source_classes,
    automorphism_from_maps,
    enumerate_vertex_symmetries,
)
from .multigraph import (
    Multigraph,
    canonical_edge_representation,
    path_classes,
    uniform_decompose,
)
from .ncpoly import Sym, eval_boolean_commutative, q_, u_
from .presentations import Presentation, PresentationError

DEFAULT_MAX_CANDIDATES = 10_000_000


def _max_candidates(override=None) -> int:
    if override is not None:
        return override
    env = os.environ.get("MGQ_MAX_CANDIDATES")
    return int(env) if env else DEFAULT_MAX_CANDIDATES


@dataclass(frozen=True)
class ClassicalPoint:
    """A Boolean commutative solution: every generator pinned to 0 or 1."""

    assignment: tuple        # sorted pairs (Sym, 0/1)

    def as_dict(self) -> dict:
        return dict(self.assignment)

    def value(self, sym: Sym) -> int:
        return self.as_dict()[sym]

    def sort_key(self):
        return tuple(v for _s, v in self.assignment)


def _point(assign: dict) -> ClassicalPoint:
    return ClassicalPoint(tuple(sorted(assign.items(), key=lambda kv: kv[0].key())))


def _perms(m: int):
    return list(itertools.permutations(range(1, m + 1)))


def _edge_kind_candidates(g: Multigraph, vertex_syms):
    """Assignments induced by (vertex symmetry, local bundle permutations)."""
    rep = canonical_edge_representation(g)
    bundles = g.bundles()
    E = g.edge_ids()
    undirected = g.is_undirected
    slot_keys = []
    slot_of_bundle = {}
    if undirected:
        seen = {}
        for (k, l), ids in bundles.items():
            key = (min(k, l), max(k, l))
            if key not in seen:
                seen[key] = len(slot_keys)
                slot_keys.append((len(ids), key))
            slot_of_bundle[(k, l)] = seen[key]
    else:
        for pair, ids in bundles.items():
            slot_of_bundle[pair] = len(slot_keys)
            slot_keys.append((len(ids), pair))

    count = len(vertex_syms)
    for m, _ in slot_keys:
        count *= math.factorial(m)

    def generate():
        for f_v in vertex_syms:
            for choice in itertools.product(*[_perms(m) for m, _ in slot_keys]):
                images = {}
                for (k, l), ids in bundles.items():
                    perm = choice[slot_of_bundle[(k, l)]]
                    for eid in ids:
                        _, _, r = rep.label_of(eid)
                        images[eid] = rep.edge_of(f_v[k], f_v[l], perm[r - 1])
                assign = {u_(s, t): 0 for s in E for t in E}
                for tau, sigma in images.items():
                    assign[u_(sigma, tau)] = 1
                yield assign

    return count, generate


def _gamma_classes(g: Multigraph, kind: str):
    """Identification classes of the bundle-family index per uniform component."""
    classes = []
    for comp in uniform_decompose(g):
        if kind == "qs":
            groups = [frozenset((k,)) for k in comp.sources]
        elif kind == "qt":
            groups = [frozenset((l,)) for l in comp.targets]
        elif kind == "qst":
            groups = _shared_target_source_classes(g, comp)
        elif kind == "qst_undirected":
            groups = path_classes(comp, g)
        else:
            raise PresentationError(f"not a dependent kind: {kind}")
        for grp in sorted(groups, key=min):
            classes.append((comp.degree, grp))
    return classes


def _dependent_kind_candidates(g: Multigraph, kind: str, vertex_syms, generators):
    family = "nu" if kind == "qt" else "gamma"
    classes = _gamma_classes(g, kind)
    order = g.vertex_order()

    count = len(vertex_syms)
    for m, _ in classes:
        count *= math.factorial(m)

    def generate():
        for f_v in vertex_syms:
            q_assign = {q_(i, j): 1 if f_v[j] == i else 0 for i in order for j in order}
            for choice in itertools.product(*[_perms(m) for m, _ in classes]):
                assign = dict(q_assign)
                for (m, grp), perm in zip(classes, choice):
                    for k in grp:
                        for s in range(1, m + 1):
                            for r in range(1, m + 1):
                                assign[Sym(family, (m, k, s, r))] = 1 if perm[r - 1] == s else 0
                yield assign

    return count, generate


def _vertex_kind_candidates(g: Multigraph, vertex_syms, sym_family="q"):
    order = g.vertex_order()

    def generate():
        for f_v in vertex_syms:
            yield {Sym(sym_family, (i, j)): 1 if f_v[j] == i else 0
                   for i in order for j in order}

    return len(vertex_syms), generate


def _free_wreath_candidates(g: Multigraph, vertex_syms):
    comp = uniform_decompose(g)[0]
    m = comp.degree
    pairs = sorted(g.bundles().keys())
    if g.is_undirected:
        slots = sorted({(min(p), max(p)) for p in pairs})
        slot_of = {p: slots.index((min(p), max(p))) for p in pairs}
    else:
        slots = pairs
        slot_of = {p: i for i, p in enumerate(pairs)}

    count = len(vertex_syms) * math.factorial(m) ** len(slots)
    order = g.vertex_order()

    def generate():
        for f_v in vertex_syms:
            x_assign = {Sym("x", (i, j)): 1 if f_v[j] == i else 0
                        for i in order for j in order}
            for choice in itertools.product(*[_perms(m)] * len(slots)):
                assign = dict(x_assign)
                for (i, j) in pairs:
                    perm = choice[slot_of[(i, j)]]
                    for r in range(1, m + 1):
                        for s in range(1, m + 1):
                            assign[Sym("P", (i, j, r, s))] = 1 if perm[r - 1] == s else 0
                yield assign

    return count, generate


def classical_points(p: Presentation, g: Multigraph, max_candidates=None) -> list:
    """All Boolean commutative solutions of the presentation, sorted canonically."""
    g.require_valid()
    limit = _max_candidates(max_candidates)
    vertex_syms = enumerate_vertex_symmetries(g)

    if p.kind in ("qban", "qsym", "qbic", "qbic_undirected"):
        count, generate = _edge_kind_candidates(g, vertex_syms)
    elif p.kind in ("qs", "qt", "qst", "qst_undirected"):
        count, generate = _dependent_kind_candidates(g, p.kind, vertex_syms, p.generators)
    elif p.kind in ("sban", "sbic"):
        count, generate = _vertex_kind_candidates(g, vertex_syms)
    elif p.kind == "free_wreath":
        count, generate = _free_wreath_candidates(g, vertex_syms)
    else:
        raise PresentationError(f"classical points not supported for kind {p.kind}")

    if count > limit:
        raise SizeGuardError(
            f"classical point search would test {count} candidates (limit {limit})")

    points = []
    seen = set()
    for assign in generate():
        if all(eval_boolean_commutative(rel, assign) for rel in p.relations):
            pt = _point(assign)
            if pt.assignment not in seen:
                seen.add(pt.assignment)
                points.append(pt)
    points.sort(key=lambda pt: pt.sort_key())
    return points


@dataclass(frozen=True)
class MatchReport:
    ok: bool
    matched: int
    message: str


def point_to_automorphism(pt: ClassicalPoint, g: Multigraph,
                          kind: str) -> MultigraphAutomorphism:
    """Read the automorphism encoded by a classical point.

    Convention: u[sigma][tau] = 1 exactly when the edge map sends tau to
    sigma, and q[i][j] = 1 exactly when the vertex map sends j to i.
    """
    rep = canonical_edge_representation(g)
    assign = pt.as_dict()
    order = g.vertex_order()

    if kind in ("qban", "qsym", "qbic", "qbic_undirected"):
        E = g.edge_ids()
        f_e = {}
        for tau in E:
            images = [sigma for sigma in E if assign[u_(sigma, tau)] == 1]
            if len(images) != 1:
                raise PresentationError(f"point has no unique image for edge {tau}")
            f_e[tau] = images[0]
        edge = g.edge_map()
        f_v = {}
        for tau in E:
            f_v[edge[tau].src] = edge[f_e[tau]].src
            f_v[edge[tau].tgt] = edge[f_e[tau]].tgt
        gammas = {}
        for (k, l), ids in g.bundles().items():
            m = len(ids)
            perm = [0] * m
            for eid in ids:
                _, _, r = rep.label_of(eid)
                _, _, s = rep.label_of(f_e[eid])
                perm[r - 1] = s
            gammas[(k, l)] = tuple(perm)
        return automorphism_from_maps(g, f_v, gammas, rep)

    if kind in ("qs", "qt", "qst", "qst_undirected"):
        family = "nu" if kind == "qt" else "gamma"
        f_v = {}
        for j in order:
            images = [i for i in order if assign[q_(i, j)] == 1]
            if len(images) != 1:
                raise PresentationError(f"point has no unique image for vertex {j}")
            f_v[j] = images[0]
        gammas = {}
        for (k, l), ids in g.bundles().items():
            m = len(ids)
            anchor = f_v[l] if kind == "qt" else f_v[k]
            perm = [0] * m
            for r in range(1, m + 1):
                ss = [s for s in range(1, m + 1)
                      if assign[Sym(family, (m, anchor, s, r))] == 1]
                if len(ss) != 1:
                    raise PresentationError("bundle family entry is not a permutation")
                perm[r - 1] = ss[0]
            gammas[(k, l)] = tuple(perm)
        return automorphism_from_maps(g, f_v, gammas, rep)

    raise PresentationError(f"no automorphism reading for kind {kind}")


def match_against_aut(points: list, group: AutomorphismGroup, g: Multigraph,
                      kind: str) -> MatchReport:
    """Check that the points biject with the group via the edge-map convention."""
    if len(points) != group.order:
        return MatchReport(False, 0,
                           f"{len(points)} classical points vs group order {group.order}")
    group_keys = group.edge_permutations()
    seen = set()
    for pt in points:
        try:
            aut = point_to_automorphism(pt, g, kind)
        except PresentationError as exc:
            return MatchReport(False, len(seen), f"unreadable point: {exc}")
        key = aut.edge_permutation()
        if key not in group_keys:
            return MatchReport(False, len(seen),
                               f"point maps to an edge permutation outside the group: {key}")
        if key in seen:
            return MatchReport(False, len(seen),
                               f"two points map to the same automorphism: {key}")
        seen.add(key)
    return MatchReport(True, len(seen), "bijection established")
