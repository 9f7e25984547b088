"""The worked multigraphs used across tests, demos and the command line.

Builders mirror the JSON files shipped under fixtures/ at the repository
root; ``write_all`` regenerates those files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .multigraph import Multigraph


def four_loops() -> Multigraph:
    """One vertex carrying four loops (directed)."""
    return Multigraph.build(["a"], [(f"l{i}", "a", "a") for i in range(1, 5)])


def doubled_arrow() -> Multigraph:
    """Two vertices with a doubled directed edge 1 -> 2."""
    return Multigraph.build(["1", "2"], [("t1", "1", "2"), ("t2", "1", "2")])


def doubled_segment() -> Multigraph:
    """Two vertices joined by two undirected edges."""
    return Multigraph.build(
        ["1", "2"],
        [("e1", "1", "2"), ("e2", "2", "1"), ("e3", "1", "2"), ("e4", "2", "1")],
        [("e1", "e2"), ("e3", "e4")],
    )


def quadruple_segment() -> Multigraph:
    """Two vertices joined by four undirected edges."""
    edges = []
    inversion = []
    for i in range(1, 5):
        edges.append((f"ab{i}", "a", "b"))
        edges.append((f"ba{i}", "b", "a"))
        inversion.append((f"ab{i}", f"ba{i}"))
    return Multigraph.build(["a", "b"], edges, inversion)


def _doubled_undirected(vertices, pairs) -> Multigraph:
    edges = []
    inversion = []
    for (x, y) in pairs:
        for i in (1, 2):
            edges.append((f"{x}{y}{i}", x, y))
            edges.append((f"{y}{x}{i}", y, x))
            inversion.append((f"{x}{y}{i}", f"{y}{x}{i}"))
    return Multigraph.build(vertices, edges, inversion)


def doubled_triangle() -> Multigraph:
    """Three vertices, every pair joined by two undirected edges."""
    return _doubled_undirected(["a", "b", "c"], [("a", "b"), ("a", "c"), ("b", "c")])


def two_doubled_segments() -> Multigraph:
    """Disjoint union of two doubled undirected edges."""
    return _doubled_undirected(["a", "b", "c", "d"], [("a", "b"), ("c", "d")])


def doubled_square() -> Multigraph:
    """A 4-cycle with every side doubled; the diagonals {a,b} and {c,d} are non-edges."""
    return _doubled_undirected(["a", "b", "c", "d"],
                               [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def doubled_path() -> Multigraph:
    """Acyclic directed path a -> b -> c with both steps doubled."""
    return Multigraph.build(
        ["a", "b", "c"],
        [("p1", "a", "b"), ("p2", "a", "b"), ("p3", "b", "c"), ("p4", "b", "c")],
    )


def source_fork() -> Multigraph:
    """Two doubled bundles s1 -> t and s2 -> t sharing their target.

    Carries automorphisms whose local permutations depend on the source but
    not on the target; the asymmetric negative control for the dependent
    factorization checks.
    """
    return Multigraph.build(
        ["s1", "s2", "t"],
        [("f1", "s1", "t"), ("f2", "s1", "t"), ("g1", "s2", "t"), ("g2", "s2", "t")],
    )


BUILDERS = {
    "g1": four_loops,
    "g2": doubled_arrow,
    "g2u": doubled_segment,
    "g3": quadruple_segment,
    "g4": doubled_triangle,
    "g5": two_doubled_segments,
    "g6": doubled_square,
    "path3": doubled_path,
    "fork": source_fork,
}


def fixture(name: str) -> Multigraph:
    return BUILDERS[name]()


def fixtures_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "fixtures"


def write_all(target: Path | None = None) -> list:
    target = Path(target) if target else fixtures_dir()
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, builder in BUILDERS.items():
        path = target / f"{name}.json"
        path.write_text(json.dumps(builder().to_dict(), indent=2) + "\n")
        written.append(path)
    return written
