"""Classical automorphism groups of multigraphs and their source/target
dependent subgroups.

An automorphism factors as a weight-preserving vertex permutation together
with one local permutation per edge bundle; enumeration works through that
factorization.  A raw definition-checking oracle over all edge permutations
is kept alongside for cross-validation on small graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .multigraph import (
    Multigraph,
    MultigraphError,
    EdgeRepresentation,
    adjacency_matrix,
    canonical_edge_representation,
    path_classes,
    uniform_decompose,
)


class SizeGuardError(MultigraphError):
    """Enumeration refused: the search space exceeds the configured guard."""


FLAVORS = ("all", "source", "target", "both")


@dataclass(frozen=True)
class MultigraphAutomorphism:
    """A vertex permutation plus one local permutation per nonempty bundle.

    ``vertex_images`` lists images in canonical (sorted) vertex order;
    ``gammas`` maps each ordered bundle (k, l) to a permutation of 1..m in
    one-line notation (the tuple entry at position r-1 is the image of r).
    """

    graph: Multigraph
    rep: EdgeRepresentation
    vertex_images: tuple
    gammas: tuple            # sorted pairs ((k, l), one-line tuple)

    # -- lookups -----------------------------------------------------------

    def vertex_map(self) -> dict:
        return dict(zip(self.graph.vertex_order(), self.vertex_images))

    def vertex_image(self, v: str) -> str:
        return self.vertex_map()[v]

    def gamma(self, k: str, l: str) -> tuple:
        return dict(self.gammas)[(k, l)]

    def edge_image(self, eid: str) -> str:
        k, l, r = self.rep.label_of(eid)
        fv = self.vertex_map()
        s = self.gamma(k, l)[r - 1]
        return self.rep.edge_of(fv[k], fv[l], s)

    def edge_permutation(self) -> tuple:
        """Images of all edges in sorted-id order; the group element's identity."""
        return tuple(self.edge_image(eid) for eid in self.graph.edge_ids())

    def is_identity(self) -> bool:
        return (all(v == w for v, w in zip(self.graph.vertex_order(), self.vertex_images))
                and all(g == tuple(range(1, len(g) + 1)) for _, g in self.gammas))

    def sort_key(self):
        return (self.vertex_images, self.gammas)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "f_V": self.vertex_map(),
            "gammas": {f"({k},{l})": list(perm) for (k, l), perm in self.gammas},
        }


def automorphism_from_maps(g: Multigraph, f_v: dict, gammas: dict,
                           rep: EdgeRepresentation | None = None) -> MultigraphAutomorphism:
    rep = rep or canonical_edge_representation(g)
    order = g.vertex_order()
    images = tuple(f_v[v] for v in order)
    gs = tuple(sorted((pair, tuple(perm)) for pair, perm in gammas.items()))
    return MultigraphAutomorphism(g, rep, images, gs)


def identity_automorphism(g: Multigraph,
                          rep: EdgeRepresentation | None = None) -> MultigraphAutomorphism:
    rep = rep or canonical_edge_representation(g)
    gammas = {pair: tuple(range(1, len(ids) + 1)) for pair, ids in g.bundles().items()}
    return automorphism_from_maps(g, {v: v for v in g.vertices}, gammas, rep)


def compose(a1: MultigraphAutomorphism, a2: MultigraphAutomorphism) -> MultigraphAutomorphism:
    """a1 after a2, on vertices and on edges alike."""
    if a1.graph != a2.graph or a1.rep != a2.rep:
        raise MultigraphError("cannot compose automorphisms of different graphs")
    f1, f2 = a1.vertex_map(), a2.vertex_map()
    f_v = {v: f1[f2[v]] for v in a1.graph.vertices}
    gammas = {}
    for (k, l), g2 in a2.gammas:
        g1 = a1.gamma(f2[k], f2[l])
        gammas[(k, l)] = tuple(g1[g2[r - 1] - 1] for r in range(1, len(g2) + 1))
    return automorphism_from_maps(a1.graph, f_v, gammas, a1.rep)


def invert(a: MultigraphAutomorphism) -> MultigraphAutomorphism:
    fv = a.vertex_map()
    f_inv = {w: v for v, w in fv.items()}
    gammas = {}
    for (k, l), perm in a.gammas:
        inv_perm = [0] * len(perm)
        for r, s in enumerate(perm, start=1):
            inv_perm[s - 1] = r
        gammas[(fv[k], fv[l])] = tuple(inv_perm)
    return automorphism_from_maps(a.graph, f_inv, gammas, a.rep)


@dataclass(frozen=True)
class AutomorphismGroup:
    elements: tuple
    order: int

    def __post_init__(self):
        keys = {a.edge_permutation() for a in self.elements}
        if len(keys) != len(self.elements):
            raise MultigraphError("duplicate group elements")
        if not any(a.is_identity() for a in self.elements):
            raise MultigraphError("group does not contain the identity")
        for a in self.elements:
            if invert(a).edge_permutation() not in keys:
                raise MultigraphError("group not closed under inverse")

    def edge_permutations(self) -> frozenset:
        return frozenset(a.edge_permutation() for a in self.elements)

    def verify_group_laws(self) -> bool:
        """Full closure check; quadratic in the order, so kept out of __post_init__."""
        keys = self.edge_permutations()
        for a in self.elements:
            for b in self.elements:
                if compose(a, b).edge_permutation() not in keys:
                    return False
        return True


def _group(elements) -> AutomorphismGroup:
    elems = tuple(sorted(elements, key=lambda a: a.sort_key()))
    return AutomorphismGroup(elems, len(elems))


def enumerate_vertex_symmetries(g: Multigraph) -> list:
    """All vertex permutations whose permutation matrix commutes with W.

    Equivalently the permutations preserving every weight level of the
    adjacency matrix.  Backtracking assigns images in sorted vertex order and
    prunes on partial weight preservation; output is in lexicographic order
    of the image tuple.
    """
    g.require_valid()
    order = g.vertex_order()
    n = len(order)
    W = adjacency_matrix(g).entries
    out = []

    def extend(images):
        k = len(images)
        if k == n:
            out.append({order[i]: order[images[i]] for i in range(n)})
            return
        used = set(images)
        for cand in range(n):
            if cand in used:
                continue
            ok = W[cand][cand] == W[k][k]
            if ok:
                for i, im in enumerate(images):
                    if W[im][cand] != W[i][k] or W[cand][im] != W[k][i]:
                        ok = False
                        break
            if ok:
                extend(images + [cand])

    extend([])
    return out


def _gamma_slots(g: Multigraph, flavor: str):
    """The independent local-permutation choices for a flavor.

    Returns (slots, assign) where ``slots`` is a list of (degree, key) and
    ``assign`` maps a choice per slot to the full bundle -> permutation map.
    """
    comps = uniform_decompose(g)
    bundles = g.bundles()
    undirected = g.is_undirected
    slot_of_bundle = {}
    slots = []

    def new_slot(m, key):
        slots.append((m, key))
        return len(slots) - 1

    if flavor == "all":
        if not undirected:
            for pair, ids in bundles.items():
                slot_of_bundle[pair] = new_slot(len(ids), pair)
        else:
            seen = {}
            for (k, l), ids in bundles.items():
                key = (min(k, l), max(k, l))
                if key not in seen:
                    seen[key] = new_slot(len(ids), key)
                slot_of_bundle[(k, l)] = seen[key]
    else:
        for comp in comps:
            m = comp.degree
            if undirected:
                classes = path_classes(comp, g)
                cls_of = {v: i for i, c in enumerate(classes) for v in c}
                made = {}
                for (k, l), ids in bundles.items():
                    if len(ids) != m:
                        continue
                    c = cls_of[k]
                    if c not in made:
                        made[c] = new_slot(m, (m, "class", min(classes[c])))
                    slot_of_bundle[(k, l)] = made[c]
            elif flavor == "source":
                made = {}
                for (k, l), ids in bundles.items():
                    if len(ids) != m:
                        continue
                    if k not in made:
                        made[k] = new_slot(m, (m, "src", k))
                    slot_of_bundle[(k, l)] = made[k]
            elif flavor == "target":
                made = {}
                for (k, l), ids in bundles.items():
                    if len(ids) != m:
                        continue
                    if l not in made:
                        made[l] = new_slot(m, (m, "tgt", l))
                    slot_of_bundle[(k, l)] = made[l]
            elif flavor == "both":
                classes = _shared_target_source_classes(g, comp)
                cls_of = {k: i for i, c in enumerate(classes) for k in c}
                made = {}
                for (k, l), ids in bundles.items():
                    if len(ids) != m:
                        continue
                    c = cls_of[k]
                    if c not in made:
                        made[c] = new_slot(m, (m, "class", min(classes[c])))
                    slot_of_bundle[(k, l)] = made[c]
            else:
                raise MultigraphError(f"unknown flavor: {flavor}")

    def assign(choice):
        return {pair: choice[slot_of_bundle[pair]] for pair in bundles}

    return slots, assign


def _shared_target_source_classes(g: Multigraph, comp) -> list:
    """Sources of a uniform component, merged whenever two of them hit a common target."""
    edge_by_id = g.edge_map()
    by_target: dict = {}
    for eid in comp.edges:
        e = edge_by_id[eid]
        by_target.setdefault(e.tgt, set()).add(e.src)
    parent = {k: k for k in comp.sources}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for srcs in by_target.values():
        srcs = sorted(srcs)
        for other in srcs[1:]:
            ra, rb = find(srcs[0]), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    classes: dict = {}
    for k in comp.sources:
        classes.setdefault(find(k), set()).add(k)
    return [frozenset(c) for _, c in sorted(classes.items())]


def gamma_choice_count(g: Multigraph, flavor: str) -> int:
    import math
    slots, _ = _gamma_slots(g, flavor)
    total = 1
    for m, _key in slots:
        total *= math.factorial(m)
    return total


def enumerate_automorphisms(g: Multigraph, flavor: str = "all",
                            rep: EdgeRepresentation | None = None) -> AutomorphismGroup:
    """The automorphism group, or its source/target/both dependent subgroup.

    Dependence is judged relative to the given edge labeling (canonical by
    default): source dependence makes the local permutation a function of the
    uniform component and the source vertex, target dependence of the target
    vertex.  For undirected graphs all three constrained flavors coincide and
    force one local permutation per path class of each component.
    """
    if flavor not in FLAVORS:
        raise MultigraphError(f"unknown flavor: {flavor}")
    g.require_valid()
    rep = rep or canonical_edge_representation(g)
    slots, assign = _gamma_slots(g, flavor)
    perms_by_degree = {m: list(itertools.permutations(range(1, m + 1)))
                       for m in {m for m, _ in slots}}
    elements = []
    for f_v in enumerate_vertex_symmetries(g):
        for choice in itertools.product(*[perms_by_degree[m] for m, _ in slots]):
            gammas = assign(choice)
            elements.append(automorphism_from_maps(g, f_v, gammas, rep))
    return _group(elements)


def brute_force_oracle(g: Multigraph, max_edges: int = 8) -> AutomorphismGroup:
    """Definition-checking enumeration over all edge permutations.

    Keeps no cleverness beyond one forced step: with no isolated vertices the
    vertex map is determined by the edge map, so candidate pairs are generated
    by running over edge permutations alone and reading the vertex map off.
    Guarded, and used only to validate the factorized enumeration.
    """
    g.require_valid()
    if len(g.edges) > max_edges:
        raise SizeGuardError(f"oracle guard: |E| = {len(g.edges)} > {max_edges}")
    rep = canonical_edge_representation(g)
    edge_ids = g.edge_ids()
    edge_by_id = g.edge_map()
    inv = g.inversion_map() if g.is_undirected else None
    elements = []
    for images in itertools.permutations(edge_ids):
        f_e = dict(zip(edge_ids, images))
        f_v = {}
        ok = True
        for eid in edge_ids:
            e, im = edge_by_id[eid], edge_by_id[f_e[eid]]
            if f_v.setdefault(e.src, im.src) != im.src:
                ok = False
                break
            if f_v.setdefault(e.tgt, im.tgt) != im.tgt:
                ok = False
                break
        if not ok or len(set(f_v.values())) != len(f_v):
            continue
        if inv is not None:
            if any(f_e[inv[eid]] != inv[f_e[eid]] for eid in edge_ids):
                continue
        gammas = {}
        for (k, l), ids in g.bundles().items():
            m = len(ids)
            perm = [0] * m
            for eid in ids:
                _, _, r = rep.label_of(eid)
                _, _, s = rep.label_of(f_e[eid])
                perm[r - 1] = s
            gammas[(k, l)] = tuple(perm)
        elements.append(automorphism_from_maps(g, f_v, gammas, rep))
    return _group(elements)


def order_formula(g: Multigraph) -> int:
    """Vertex-symmetry count times the product of bundle factorials.

    Undirected graphs contribute one factorial per unordered non-loop pair
    (reversed bundles share their local permutation) and one per loop bundle.
    """
    import math
    n_vertex = len(enumerate_vertex_symmetries(g))
    total = n_vertex
    if not g.is_undirected:
        for _pair, ids in g.bundles().items():
            total *= math.factorial(len(ids))
    else:
        for (k, l), ids in g.bundles().items():
            if k <= l:
                total *= math.factorial(len(ids))
    return total
