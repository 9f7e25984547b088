"""Command line entry point.

Every verb is a thin wrapper over the library; exit code 0 means success or
a passing verification, 1 means a verification failed (residual above
tolerance or a mismatch), 2 means the input or usage was bad.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import abelianization, classical, cstar, matrixreps, presentations
from .multigraph import (
    Multigraph,
    MultigraphError,
    adjacency_matrix,
    canonical_edge_representation,
    uniform_decompose,
    validate,
)

EDGE_WARNING_LIMIT = 64

KIND_CHOICES = sorted(presentations.ALL_KINDS)


def parse_multigraph(path: str) -> Multigraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MultigraphError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MultigraphError(f"{path}: malformed JSON: {exc}") from exc
    g = Multigraph.from_dict(data)
    if len(g.edges) > EDGE_WARNING_LIMIT:
        print(f"warning: {len(g.edges)} edges; enumeration-based verbs may be infeasible",
              file=sys.stderr)
    return g


def parse_rep(path: str, tol: float) -> matrixreps.MagicUnitaryRep:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise MultigraphError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MultigraphError(f"{path}: malformed JSON: {exc}") from exc
    return matrixreps.MagicUnitaryRep.from_dict(data, tol)


def _emit(data, as_json: bool, text_lines) -> None:
    if as_json:
        print(json.dumps(data, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_validate(args) -> int:
    g = parse_multigraph(args.graph)
    report = validate(g)
    data = {"kind": report.kind, "ok": report.ok, "violations": list(report.violations)}
    lines = [f"{report.kind}, {'valid' if report.ok else 'INVALID'}"]
    lines += [f"  violation: {v}" for v in report.violations]
    _emit(data, args.json, lines)
    return 0 if report.ok else 1


def cmd_decompose(args) -> int:
    g = parse_multigraph(args.graph)
    g.require_valid()
    comps = uniform_decompose(g)
    data = {"components": [{"degree": c.degree, "vertices": list(c.vertices),
                            "edges": list(c.edges), "sources": list(c.sources),
                            "targets": list(c.targets)} for c in comps]}
    lines = []
    for c in comps:
        lines.append(f"degree {c.degree}: {len(c.edges)} edges on vertices "
                     f"{{{', '.join(c.vertices)}}}")
    _emit(data, args.json, lines)
    return 0


def cmd_aut(args) -> int:
    g = parse_multigraph(args.graph)
    group = classical.enumerate_automorphisms(g, args.flavor)
    data = {"flavor": args.flavor, "order": group.order}
    lines = [f"order {group.order}"]
    if args.list:
        data["elements"] = [a.to_dict() for a in group.elements]
        lines += [json.dumps(a.to_dict(), sort_keys=True) for a in group.elements]
    _emit(data, args.json, lines)
    return 0


def cmd_present(args) -> int:
    g = parse_multigraph(args.graph)
    p = presentations.emit_presentation(g, args.kind)
    if args.format == "json":
        data = {
            "kind": p.kind,
            "generators": [s.text() for s in p.generators],
            "relations": [r.to_dict() for r in p.relations],
        }
        print(json.dumps(data, sort_keys=True))
    else:
        print(f"kind: {p.kind}")
        print(f"generators ({len(p.generators)}): "
              + " ".join(s.text() for s in p.generators))
        print(f"relations ({len(p.relations)}):")
        for r in p.relations:
            print(f"  {_relation_text(r)}    # {r.note}")
    return 0


def _side_text(side) -> str:
    if not side:
        return "0"
    parts = []
    for coeff, m in side:
        factors = "".join(s.text() + ("*" if star else "") for s, star in m) or "1"
        c = coeff.to_complex()
        if c == 1:
            parts.append(factors)
        elif c == -1:
            parts.append("-" + factors)
        else:
            parts.append(f"({c.real:g}{c.imag:+g}i)*{factors}")
    return " + ".join(parts)


def _relation_text(rel) -> str:
    return f"{_side_text(rel.left)} = {_side_text(rel.right)}"


def cmd_classical_points(args) -> int:
    g = parse_multigraph(args.graph)
    p = presentations.emit_presentation(g, args.kind)
    points = abelianization.classical_points(p, g)
    data = {"kind": p.kind, "count": len(points)}
    lines = [f"{len(points)}"]
    if args.list:
        listing = [{s.text(): v for s, v in pt.assignment if v} for pt in points]
        data["points"] = listing
        lines += [json.dumps(entry, sort_keys=True) for entry in listing]
    _emit(data, args.json, lines)
    return 0


def cmd_verify_rep(args) -> int:
    g = parse_multigraph(args.graph)
    rep = parse_rep(args.rep, args.tol)
    p = presentations.emit_presentation(g, args.kind)
    result = matrixreps.verify_rep(rep, p)
    data = {"kind": p.kind, "max_residual": result.max_residual,
            "passed": result.passed, "failing": len(result.failing)}
    lines = [f"max residual {result.max_residual:.3e} "
             f"({'PASS' if result.passed else 'FAIL'})"]
    for rel, res in result.failing[:10]:
        lines.append(f"  {res:.3e}  {rel.note}")
    _emit(data, args.json, lines)
    return 0 if result.passed else 1


def cmd_wreath_rep(args) -> int:
    g = parse_multigraph(args.graph)
    rep = matrixreps.default_wreath_rep(g, args.angle, tol=args.tol)
    payload = json.dumps(rep.to_dict(), sort_keys=True)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
        print(f"wrote dimension-{rep.dim} representation to {args.output}")
    else:
        print(payload)
    kind = "qbic" if not g.is_undirected else "qbic_undirected"
    result = matrixreps.verify_rep(rep, presentations.emit_presentation(g, kind))
    print(f"{kind} residual {result.max_residual:.3e} "
          f"({'PASS' if result.passed else 'FAIL'})")
    return 0 if result.passed else 1


def cmd_witness(args) -> int:
    g = parse_multigraph(args.graph)
    rep, report = matrixreps.example_square_witness(g, args.angle, args.tol)
    data = {
        "angle": report.angle,
        "sban_residual": report.sban_residual,
        "qst_residual": report.qst_residual,
        "commutator_norm": report.commutator_norm,
        "degenerate": report.degenerate,
        "passed": report.passed(args.tol),
    }
    lines = [
        f"adjacency-system residual {report.sban_residual:.3e}",
        f"dependent-system residual {report.qst_residual:.3e}",
        f"commutator norm {report.commutator_norm:.6f}"
        + (" (degenerate)" if report.degenerate else ""),
    ]
    _emit(data, args.json, lines)
    return 0 if report.passed(args.tol) else 1


def cmd_cstar(args) -> int:
    g = parse_multigraph(args.graph)
    fam = cstar.build_ck_family(g)
    lines = [f"path-space dimension {fam.dim}"]
    data = {"dim": fam.dim}
    code = 0
    if args.rep:
        rep = parse_rep(args.rep, args.tol)
        co = cstar.verify_ck_coaction(fam, rep)
        cov = cstar.verify_correspondence_covariance(g, rep)
        data.update({"coaction_residual": co.max_residual,
                     "covariance_residual": cov.max_residual,
                     "passed": co.passed and cov.passed})
        lines.append(f"coaction residual {co.max_residual:.3e} (worst: {co.worst})")
        lines.append(f"covariance residual {cov.max_residual:.3e} (worst: {cov.worst})")
        code = 0 if (co.passed and cov.passed) else 1
    else:
        data["ok"] = True
        lines.append("family relations hold exactly")
    _emit(data, args.json, lines)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mgq",
        description="classical and quantum symmetry structures of finite multigraphs")
    sub = ap.add_subparsers(dest="verb", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("graph", help="multigraph JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="residual tolerance (default 1e-9)")
        return p

    add("validate", cmd_validate, help="check structural invariants")
    add("decompose", cmd_decompose, help="uniform components by bundle size")

    p = add("aut", cmd_aut, help="classical automorphism group order")
    p.add_argument("--flavor", choices=classical.FLAVORS, default="all")
    p.add_argument("--list", action="store_true", help="print the elements")

    p = add("present", cmd_present, help="emit a generator/relation system")
    p.add_argument("--kind", required=True, choices=KIND_CHOICES)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("classical-points", cmd_classical_points,
            help="Boolean commutative solutions of a presentation")
    p.add_argument("--kind", required=True, choices=KIND_CHOICES)
    p.add_argument("--list", action="store_true", help="print the assignments")

    p = add("verify-rep", cmd_verify_rep, help="check a representation file")
    p.add_argument("rep", help="representation JSON file")
    p.add_argument("--kind", required=True, choices=KIND_CHOICES)

    p = add("wreath-rep", cmd_wreath_rep,
            help="build a wreath-product representation for a uniform multigraph")
    p.add_argument("--angle", type=float, default=math.pi / 4)
    p.add_argument("-o", "--output", help="write the representation JSON here")

    p = add("witness", cmd_witness,
            help="square-style non-commutativity gap witness")
    p.add_argument("--angle", type=float, default=math.pi / 4)

    p = add("cstar", cmd_cstar, help="path-space family and coaction checks")
    p.add_argument("--rep", help="representation JSON file")

    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except (MultigraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
