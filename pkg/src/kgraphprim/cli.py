"""Command surface: deterministic JSON answers over document inputs.

Exit code 0 covers every verdict, including negative ones; nonzero means
the input itself was unusable (syntax error, dangling reference, query
against a nonexistent tail, unverified hypotheses).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .action import SelfSimilarAction, restrict_action
from .errors import DocumentError, InvalidQuery, KGraphError
from .infinite import cofinal_infinite_path
from .kgraph import KGraph, Path
from .lattice import (
    CharacterSet,
    RationalCharacter,
    extend_character,
    finite_set,
    full_set,
    subgroup_set,
    trivial_character,
)
from .primspace import PrimSpace, PrimStratum, enumerate_prim, check_hypotheses
from .repmat import TruncatedRepresentation, build_orbit
from .tails import MaximalTail, maximal_tails, restrict_to_tail
from .textio import GraphDocument, build_action, build_graph, build_group, parse

COMMANDS = ("validate", "tails", "per", "prim", "hypotheses", "closure",
            "spec-order", "repr-check")


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _path_json(p: Path) -> str:
    return p.range_vertex + ":" + ".".join(p.edges)


def _tail_json(t: MaximalTail) -> List[str]:
    return list(t.vertices)


def _class_json(s: PrimStratum) -> dict:
    cls = s.tail_class
    witness = None
    if cls.witness is not None:
        witness = {
            "mu": _path_json(cls.witness.mu),
            "g": cls.witness.g,
            "nu": _path_json(cls.witness.nu),
        }
    return {
        "vertices": _tail_json(s.tail),
        "class": cls.kind,
        "exact": cls.exact,
        "witness": witness,
    }


def _lattice_json(s: PrimStratum) -> dict:
    return {
        "hnf": [list(r) for r in s.lattice.hnf],
        "rank": s.lattice.rank,
        "invariants": list(s.lattice.invariants),
    }


def run_command(command: str, text: str,
                bound: Optional[Tuple[int, ...]] = None,
                depth: Optional[int] = None,
                dot: Optional[str] = None) -> Tuple[dict, int]:
    """Execute one command against one document; returns (json dict, exit code)."""
    if command not in COMMANDS:
        return {"error": {"type": "UnknownCommand", "message": command}}, 2
    try:
        doc = parse(text)
    except DocumentError as exc:
        return {"error": exc.payload()}, 2

    if command == "validate":
        try:
            graph = build_graph(doc)
            group = build_group(doc)
            build_action(doc, graph, group)
        except KGraphError as exc:
            return {"command": "validate", "valid": False,
                    "error": exc.payload()}, 0
        return {"command": "validate", "valid": True, "k": doc.k,
                "vertices": len(doc.vertices), "edges": len(doc.edges)}, 0

    try:
        graph = build_graph(doc)
        group = build_group(doc)
        action = build_action(doc, graph, group)
        if bound is None:
            bound = (4,) * graph.k
        if len(bound) != graph.k:
            raise InvalidQuery(
                f"--bound needs {graph.k} components, got {len(bound)}")
        return _dispatch(command, doc, graph, action, bound, depth, dot), 0
    except KGraphError as exc:
        return {"error": exc.payload()}, 2


def _dispatch(command: str, doc: GraphDocument, graph: KGraph,
              action: SelfSimilarAction, bound: Tuple[int, ...],
              depth: Optional[int], dot: Optional[str]) -> dict:
    if command == "hypotheses":
        report = check_hypotheses(graph, action, bound)
        return {
            "command": "hypotheses",
            "bound": list(bound),
            "items": [
                {"name": i.name, "verdict": i.verdict, "detail": i.detail}
                for i in report.items
            ],
            "ok": report.ok,
            "caveats": list(report.caveats),
        }

    space = enumerate_prim(graph, action, bound)

    if command == "tails":
        return {
            "command": "tails",
            "bound": list(bound),
            "tails": [_class_json(s) for s in space.strata],
        }
    if command == "per":
        return {
            "command": "per",
            "bound": list(bound),
            "tails": [
                {"vertices": _tail_json(s.tail), "per": _lattice_json(s)}
                for s in space.strata
            ],
        }
    if command == "prim":
        return {
            "command": "prim",
            "bound": list(bound),
            "caveats": list(space.caveats()),
            "strata": [
                {
                    **_class_json(s),
                    "per": _lattice_json(s),
                    "core": list(s.core),
                    "core_exact": s.core_exact,
                }
                for s in space.strata
            ],
        }
    if command == "closure":
        if not doc.closure_queries:
            raise InvalidQuery("document has no closure blocks")
        results = [_run_closure(space, q) for q in doc.closure_queries]
        return {"command": "closure", "bound": list(bound), "results": results}
    if command == "spec-order":
        pre = space.specialization_preorder()
        out = {
            "command": "spec-order",
            "bound": list(bound),
            "caveats": list(pre.caveats),
            "nodes": [pre.node_name(i) for i in range(len(pre.strata))],
            "edges": [
                {"from": pre.node_name(a), "to": pre.node_name(b), "label": label}
                for a, b, label in pre.edges
            ],
        }
        if dot:
            with open(dot, "w", encoding="utf-8") as fh:
                fh.write(pre.to_dot())
            out["dot_written"] = dot
        return out
    if command == "repr-check":
        blocks = doc.repr_blocks
        if not blocks:
            from .textio import ReprBlockDoc
            blocks = tuple(
                ReprBlockDoc(s.tail.vertices, None, None) for s in space.strata
            )
        return {
            "command": "repr-check",
            "bound": list(bound),
            "results": [_run_repr(space, b, depth) for b in blocks],
        }
    raise AssertionError(command)


def _resolve_stratum(space: PrimSpace, vertices: Sequence[str]) -> PrimStratum:
    try:
        return space.stratum(vertices)
    except KeyError:
        raise InvalidQuery(
            f"{sorted(vertices)} is not a maximal tail of this graph")


def _character(space: PrimSpace, stratum: PrimStratum,
               angles: Optional[Tuple[Fraction, ...]]) -> RationalCharacter:
    if angles is None:
        return trivial_character(stratum.lattice)
    if len(angles) != stratum.lattice.rank:
        raise InvalidQuery(
            f"character {angles} has {len(angles)} angles, lattice rank is "
            f"{stratum.lattice.rank}")
    return RationalCharacter(stratum.lattice, angles)


def _descriptor(space: PrimSpace, stratum: PrimStratum, kind: str,
                chars: Tuple[Tuple[Fraction, ...], ...]) -> CharacterSet:
    if kind == "full":
        return full_set()
    members = tuple(_character(space, stratum, c) for c in chars)
    return finite_set(members) if kind == "finite" else subgroup_set(members)


def _run_closure(space: PrimSpace, q) -> dict:
    stratum = _resolve_stratum(space, q.point_tail)
    if stratum.kind == "gamma":
        if q.point_char:
            raise InvalidQuery(
                f"gamma tail {sorted(q.point_tail)} has only the trivial character")
        point = space.point(stratum)
    else:
        point = space.point(stratum, _character(space, stratum, q.point_char))
    w = tuple(_resolve_stratum(space, ts).tail for ts in q.w)
    y = tuple(_resolve_stratum(space, ts).tail for ts in q.y)
    d = {}
    for ts, kind, chars in q.d:
        s = _resolve_stratum(space, ts)
        d[s.tail] = _descriptor(space, s, kind, chars)
    verdict = space.closure_membership(point, w, y, d)
    return {
        "query": {
            "point": {
                "tail": _tail_json(point.tail),
                "char": [_frac(a) for a in point.character.angles]
                if point.character else None,
            },
            "W": [_tail_json(t) for t in w],
            "Y": [_tail_json(t) for t in y],
            "D": {
                ",".join(t.vertices): d[t].kind for t in d
            },
        },
        "verdict": verdict.verdict,
        "case": verdict.case,
        "witness": [_tail_json(t) for t in verdict.witness]
        if verdict.witness else None,
        "caveats": list(verdict.caveats),
    }


def _run_repr(space: PrimSpace, block, depth_flag: Optional[int]) -> dict:
    stratum = _resolve_stratum(space, block.tail)
    char = _character(space, stratum, block.char)
    depth = block.depth or depth_flag or 6
    sub = restrict_to_tail(space.graph, stratum.tail)
    sub_action = restrict_action(space.action, sub)
    x = cofinal_infinite_path(sub)
    basis = build_orbit(sub, sub_action, x, depth)
    rep = TruncatedRepresentation(sub, sub_action, basis, extend_character(char))
    relations = rep.check_relations()
    presentation = space.ideal_presentation(stratum, char)
    annih = rep.check_annihilation(presentation.relations, stratum.core)
    probes = {v: rep.probe_vertex(v) for v in space.graph.vertices}
    return {
        "tail": _tail_json(stratum.tail),
        "char": [_frac(a) for a in char.angles],
        "depth": depth,
        "basis_size": len(basis),
        "relations": {
            "families": len(relations.items),
            "checked": sum(i.checked for i in relations.items),
            "skipped_boundary": sum(i.skipped for i in relations.items),
            "violations": [v for i in relations.items for v in i.violations],
        },
        "relations_ok": relations.ok,
        "annihilation_ok": annih.ok,
        "probes": probes,
        "probes_match_tail": all(
            probes[v] == (v not in stratum.tail.vertex_set)
            for v in space.graph.vertices
        ),
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="kgraphprim",
        description="primitive ideal strata and closure queries for "
                    "self-similar k-graphs",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("document", help="input document path, or - for stdin")
    parser.add_argument("--bound", help="enumeration bound, e.g. 4 or 4,4")
    parser.add_argument("--depth", type=int, help="orbit truncation depth")
    parser.add_argument("--dot", help="write the specialization preorder as DOT")
    args = parser.parse_args(argv)

    if args.document == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.document, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(json.dumps({"error": {"type": "IOError", "message": str(exc)}},
                             indent=2, sort_keys=True))
            return 2
    bound = None
    if args.bound:
        try:
            bound = tuple(int(b) for b in args.bound.split(","))
        except ValueError:
            print(json.dumps({"error": {"type": "BadFlag",
                                        "message": f"--bound {args.bound!r}"}},
                             indent=2, sort_keys=True))
            return 2
    result, code = run_command(args.command, text, bound=bound,
                               depth=args.depth, dot=args.dot)
    print(json.dumps(result, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
