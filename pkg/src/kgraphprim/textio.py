"""Line-oriented input format for graphs, actions and queries.

Every non-blank, non-comment line is a keyword statement; `closure` and
`repr` open indented-free blocks terminated by `end`.  The grammar:

    k <int>
    vertex <id> [<id> ...]
    edge <id> <color> <range-vertex> <source-vertex>
    square <e> <f> = <f'> <e'>        # color(e) < color(f), e f == f' e'
    group <identity-id> [<id> ...]
    mult <a> <b> = <c>                # identity products may be omitted
    action <g> <e> = <e'> <g'>        # g . e = e'   and   g|_e = g'
    closure
      point <tailset> [<char>]
      W <tailset> [<tailset> ...]
      Y <tailset> [<tailset> ...]
      D <tailset> FULL | finite <char> ... | subgroup <char> ...
    end
    repr
      tail <tailset>
      char <char>
      depth <int>
    end

with <tailset> a comma-joined vertex list (no spaces) and <char> a
colon-joined list of fractions, or `-` for the empty angle vector.
Comments run from `#` to end of line.  Diagnostics carry 1-based line
and column of the offending token.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .action import FiniteGroup, SelfSimilarAction, validate_action
from .errors import DanglingReference, DocumentSyntaxError, DuplicateId
from .kgraph import Edge, KGraph, Skeleton, validate_kgraph


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class ClosureQueryDoc:
    point_tail: Tuple[str, ...]
    point_char: Optional[Tuple[Fraction, ...]]
    w: Tuple[Tuple[str, ...], ...]
    y: Tuple[Tuple[str, ...], ...]
    d: Tuple[Tuple[Tuple[str, ...], str, Tuple[Tuple[Fraction, ...], ...]], ...]


@dataclass(frozen=True)
class ReprBlockDoc:
    tail: Tuple[str, ...]
    char: Optional[Tuple[Fraction, ...]]
    depth: Optional[int]


@dataclass(frozen=True)
class GraphDocument:
    k: int
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    squares: Tuple[Tuple[str, str, str, str], ...]
    group_elements: Tuple[str, ...]
    mult: Tuple[Tuple[str, str, str], ...]
    action_rows: Tuple[Tuple[str, str, str, str], ...]
    closure_queries: Tuple[ClosureQueryDoc, ...] = ()
    repr_blocks: Tuple[ReprBlockDoc, ...] = ()


def _tokenize(text: str) -> List[List[Token]]:
    lines: List[List[Token]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks: List[Token] = []
        col = 1
        for piece in body.split(" "):
            if piece.strip():
                stripped = piece.strip()
                off = piece.index(stripped)
                toks.append(Token(stripped, ln, col + off))
            col += len(piece) + 1
        lines.append(toks)
    return lines


def _want_int(tok: Token) -> int:
    try:
        return int(tok.text)
    except ValueError:
        raise DocumentSyntaxError(
            f"expected an integer, got {tok.text!r}", tok.line, tok.column)


def _want_fraction(tok: Token, text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DocumentSyntaxError(
            f"expected a fraction, got {text!r}", tok.line, tok.column)


def _parse_char(tok: Token) -> Tuple[Fraction, ...]:
    if tok.text == "-":
        return ()
    return tuple(_want_fraction(tok, part) for part in tok.text.split(":"))


def _parse_tailset(tok: Token) -> Tuple[str, ...]:
    parts = tuple(p for p in tok.text.split(",") if p)
    if not parts:
        raise DocumentSyntaxError("empty vertex set", tok.line, tok.column)
    return parts


def _arity(toks: List[Token], n: int, usage: str):
    if len(toks) != n:
        bad = toks[min(len(toks), n) - 1] if toks else Token("", 1, 1)
        raise DocumentSyntaxError(
            f"usage: {usage}", bad.line, bad.column + len(bad.text))


def _expect_eq(tok: Token):
    if tok.text != "=":
        raise DocumentSyntaxError(f"expected '=', got {tok.text!r}",
                                  tok.line, tok.column)


def parse(text: str) -> GraphDocument:
    """Parse a document; the first problem raises with line and column."""
    k: Optional[Tuple[int, Token]] = None
    vertices: List[Token] = []
    edges: List[Tuple[Token, Token, Token, Token]] = []
    squares: List[Tuple[Token, Token, Token, Token]] = []
    group: Optional[List[Token]] = None
    mult: List[Tuple[Token, Token, Token]] = []
    action_rows: List[Tuple[Token, Token, Token, Token]] = []
    closures: List[ClosureQueryDoc] = []
    reprs: List[ReprBlockDoc] = []

    lines = _tokenize(text)
    i = 0
    while i < len(lines):
        toks = lines[i]
        i += 1
        if not toks:
            continue
        head = toks[0]
        if head.text == "k":
            _arity(toks, 2, "k <int>")
            if k is not None:
                raise DuplicateId("k declared twice", head.line, head.column)
            k = (_want_int(toks[1]), toks[1])
        elif head.text == "vertex":
            if len(toks) < 2:
                raise DocumentSyntaxError("usage: vertex <id> [<id> ...]",
                                          head.line, head.column)
            vertices.extend(toks[1:])
        elif head.text == "edge":
            _arity(toks, 5, "edge <id> <color> <range> <source>")
            edges.append((toks[1], toks[2], toks[3], toks[4]))
        elif head.text == "square":
            _arity(toks, 6, "square <e> <f> = <f'> <e'>")
            _expect_eq(toks[3])
            squares.append((toks[1], toks[2], toks[4], toks[5]))
        elif head.text == "group":
            if len(toks) < 2:
                raise DocumentSyntaxError("usage: group <identity> [<id> ...]",
                                          head.line, head.column)
            if group is not None:
                raise DuplicateId("group declared twice", head.line, head.column)
            group = toks[1:]
        elif head.text == "mult":
            _arity(toks, 5, "mult <a> <b> = <c>")
            _expect_eq(toks[3])
            mult.append((toks[1], toks[2], toks[4]))
        elif head.text == "action":
            _arity(toks, 6, "action <g> <e> = <e'> <g'>")
            _expect_eq(toks[3])
            action_rows.append((toks[1], toks[2], toks[4], toks[5]))
        elif head.text == "closure":
            block, i = _collect_block(lines, i, head)
            closures.append((_parse_closure_block(block, head), head))
        elif head.text == "repr":
            block, i = _collect_block(lines, i, head)
            reprs.append((_parse_repr_block(block, head), head))
        elif head.text == "end":
            raise DocumentSyntaxError("'end' outside a block",
                                      head.line, head.column)
        else:
            raise DocumentSyntaxError(f"unknown keyword {head.text!r}",
                                      head.line, head.column)

    if k is None:
        raise DocumentSyntaxError("missing k", 1, 1)
    return _resolve(k[0], k[1], vertices, edges, squares, group, mult,
                    action_rows, closures, reprs)


def _collect_block(lines, i, head) -> Tuple[List[List[Token]], int]:
    block: List[List[Token]] = []
    while i < len(lines):
        toks = lines[i]
        i += 1
        if not toks:
            continue
        if toks[0].text == "end":
            return block, i
        block.append(toks)
    raise DocumentSyntaxError(f"unterminated {head.text!r} block",
                              head.line, head.column)


def _parse_closure_block(block: List[List[Token]], head: Token) -> ClosureQueryDoc:
    point: Optional[Tuple[Tuple[str, ...], Optional[Tuple[Fraction, ...]]]] = None
    w: List[Tuple[str, ...]] = []
    y: List[Tuple[str, ...]] = []
    d: List[Tuple[Tuple[str, ...], str, Tuple[Tuple[Fraction, ...], ...]]] = []
    for toks in block:
        h = toks[0]
        if h.text == "point":
            if point is not None:
                raise DuplicateId("point given twice", h.line, h.column)
            if len(toks) == 2:
                point = (_parse_tailset(toks[1]), None)
            elif len(toks) == 3:
                point = (_parse_tailset(toks[1]), _parse_char(toks[2]))
            else:
                raise DocumentSyntaxError("usage: point <tailset> [<char>]",
                                          h.line, h.column)
        elif h.text == "W":
            w.extend(_parse_tailset(t) for t in toks[1:])
        elif h.text == "Y":
            y.extend(_parse_tailset(t) for t in toks[1:])
        elif h.text == "D":
            if len(toks) < 3:
                raise DocumentSyntaxError(
                    "usage: D <tailset> FULL | finite <char> ... | subgroup <char> ...",
                    h.line, h.column)
            tailset = _parse_tailset(toks[1])
            kind = toks[2].text
            if kind == "FULL":
                _arity(toks, 3, "D <tailset> FULL")
                d.append((tailset, "full", ()))
            elif kind in ("finite", "subgroup"):
                if len(toks) < 4:
                    raise DocumentSyntaxError(
                        f"{kind} descriptor needs at least one character",
                        toks[2].line, toks[2].column)
                chars = tuple(_parse_char(t) for t in toks[3:])
                d.append((tailset, kind, chars))
            else:
                raise DocumentSyntaxError(
                    f"unknown descriptor {kind!r}", toks[2].line, toks[2].column)
        else:
            raise DocumentSyntaxError(
                f"unknown closure keyword {h.text!r}", h.line, h.column)
    if point is None:
        raise DocumentSyntaxError("closure block has no point",
                                  head.line, head.column)
    return ClosureQueryDoc(point[0], point[1], tuple(w), tuple(y), tuple(d))


def _parse_repr_block(block: List[List[Token]], head: Token) -> ReprBlockDoc:
    tail: Optional[Tuple[str, ...]] = None
    char: Optional[Tuple[Fraction, ...]] = None
    depth: Optional[int] = None
    for toks in block:
        h = toks[0]
        if h.text == "tail":
            _arity(toks, 2, "tail <tailset>")
            tail = _parse_tailset(toks[1])
        elif h.text == "char":
            _arity(toks, 2, "char <char>")
            char = _parse_char(toks[1])
        elif h.text == "depth":
            _arity(toks, 2, "depth <int>")
            depth = _want_int(toks[1])
        else:
            raise DocumentSyntaxError(
                f"unknown repr keyword {h.text!r}", h.line, h.column)
    if tail is None:
        raise DocumentSyntaxError("repr block has no tail",
                                  head.line, head.column)
    return ReprBlockDoc(tail, char, depth)


def _resolve(k: int, ktok: Token, vertices, edges, squares, group, mult,
             action_rows, closures, reprs) -> GraphDocument:
    if k < 1:
        raise DocumentSyntaxError("k must be >= 1", ktok.line, ktok.column)
    vnames: List[str] = []
    for tok in vertices:
        if tok.text in vnames:
            raise DuplicateId(f"vertex {tok.text!r} declared twice",
                              tok.line, tok.column)
        vnames.append(tok.text)

    enames: List[str] = []
    eobjs: List[Edge] = []
    for name, color, rng, src in edges:
        if name.text in enames:
            raise DuplicateId(f"edge {name.text!r} declared twice",
                              name.line, name.column)
        c = _want_int(color)
        if not 1 <= c <= k:
            raise DocumentSyntaxError(f"color {c} out of range 1..{k}",
                                      color.line, color.column)
        for tok in (rng, src):
            if tok.text not in vnames:
                raise DanglingReference(f"unknown vertex {tok.text!r}",
                                        tok.line, tok.column)
        enames.append(name.text)
        eobjs.append(Edge(name.text, c, rng.text, src.text))

    sq: List[Tuple[str, str, str, str]] = []
    seen_sq = set()
    for parts in squares:
        for tok in parts:
            if tok.text not in enames:
                raise DanglingReference(f"unknown edge {tok.text!r}",
                                        tok.line, tok.column)
        key = (parts[0].text, parts[1].text)
        if key in seen_sq:
            raise DuplicateId(f"square for {key} declared twice",
                              parts[0].line, parts[0].column)
        seen_sq.add(key)
        sq.append(tuple(t.text for t in parts))

    if group is None:
        gnames = ["1"]
    else:
        gnames = []
        for tok in group:
            if tok.text in gnames:
                raise DuplicateId(f"group element {tok.text!r} declared twice",
                                  tok.line, tok.column)
            gnames.append(tok.text)

    mrows: List[Tuple[str, str, str]] = []
    seen_m = set()
    for a, b, c in mult:
        for tok in (a, b, c):
            if tok.text not in gnames:
                raise DanglingReference(f"unknown group element {tok.text!r}",
                                        tok.line, tok.column)
        if (a.text, b.text) in seen_m:
            raise DuplicateId(f"product {a.text}*{b.text} declared twice",
                              a.line, a.column)
        seen_m.add((a.text, b.text))
        mrows.append((a.text, b.text, c.text))

    arows: List[Tuple[str, str, str, str]] = []
    seen_a = set()
    for g, e, e2, g2 in action_rows:
        for tok in (g, g2):
            if tok.text not in gnames:
                raise DanglingReference(f"unknown group element {tok.text!r}",
                                        tok.line, tok.column)
        for tok in (e, e2):
            if tok.text not in enames:
                raise DanglingReference(f"unknown edge {tok.text!r}",
                                        tok.line, tok.column)
        if (g.text, e.text) in seen_a:
            raise DuplicateId(f"action row ({g.text}, {e.text}) declared twice",
                              g.line, g.column)
        seen_a.add((g.text, e.text))
        arows.append((g.text, e.text, e2.text, g2.text))

    for q, head in closures:
        for ts in (q.point_tail, *q.w, *q.y, *(t for t, _, _ in q.d)):
            _check_tailset(ts, vnames, head)
    for r, head in reprs:
        _check_tailset(r.tail, vnames, head)

    return GraphDocument(
        k=k, vertices=tuple(vnames), edges=tuple(eobjs), squares=tuple(sq),
        group_elements=tuple(gnames), mult=tuple(mrows),
        action_rows=tuple(arows),
        closure_queries=tuple(q for q, _ in closures),
        repr_blocks=tuple(r for r, _ in reprs),
    )


def _check_tailset(ts: Sequence[str], vnames: Sequence[str], head: Token):
    for v in ts:
        if v not in vnames:
            raise DanglingReference(
                f"unknown vertex {v!r} in vertex set of this block",
                head.line, head.column)


# -- document -> objects ------------------------------------------------------


def build_graph(doc: GraphDocument) -> KGraph:
    skeleton = Skeleton(doc.k, doc.vertices, doc.edges)
    squares = {(e, f): (f2, e2) for (e, f, f2, e2) in doc.squares}
    return validate_kgraph(skeleton, squares)


def build_group(doc: GraphDocument) -> FiniteGroup:
    identity = doc.group_elements[0]
    table = {(a, b): c for (a, b, c) in doc.mult}
    for a in doc.group_elements:
        table.setdefault((identity, a), a)
        table.setdefault((a, identity), a)
    return FiniteGroup(doc.group_elements, identity, table)


def build_action(doc: GraphDocument, graph: KGraph,
                 group: FiniteGroup) -> SelfSimilarAction:
    act = {(g, e): e2 for (g, e, e2, _) in doc.action_rows}
    res = {(g, e): g2 for (g, e, _, g2) in doc.action_rows}
    return validate_action(graph, group, act, res)


def load(text: str):
    """Parse and build (document, graph, group, action) in one go."""
    doc = parse(text)
    graph = build_graph(doc)
    group = build_group(doc)
    action = build_action(doc, graph, group)
    return doc, graph, group, action


# -- serialization ------------------------------------------------------------


def _char_text(angles: Optional[Tuple[Fraction, ...]]) -> str:
    if angles is None or angles == ():
        return "-"
    return ":".join(str(a) for a in angles)


def serialize(doc: GraphDocument) -> str:
    """Canonical text for a document; parse(serialize(doc)) == doc."""
    out: List[str] = [f"k {doc.k}"]
    for v in doc.vertices:
        out.append(f"vertex {v}")
    for e in doc.edges:
        out.append(f"edge {e.name} {e.color} {e.range_vertex} {e.source_vertex}")
    for (e, f, f2, e2) in doc.squares:
        out.append(f"square {e} {f} = {f2} {e2}")
    out.append("group " + " ".join(doc.group_elements))
    for (a, b, c) in doc.mult:
        out.append(f"mult {a} {b} = {c}")
    for (g, e, e2, g2) in doc.action_rows:
        out.append(f"action {g} {e} = {e2} {g2}")
    for q in doc.closure_queries:
        out.append("closure")
        point = f"point {','.join(q.point_tail)}"
        if q.point_char is not None:
            point += f" {_char_text(q.point_char)}"
        out.append(f"  {point}")
        if q.w:
            out.append("  W " + " ".join(",".join(t) for t in q.w))
        if q.y:
            out.append("  Y " + " ".join(",".join(t) for t in q.y))
        for (tail, kind, chars) in q.d:
            if kind == "full":
                out.append(f"  D {','.join(tail)} FULL")
            else:
                chars_text = " ".join(_char_text(c) for c in chars)
                out.append(f"  D {','.join(tail)} {kind} {chars_text}")
        out.append("end")
    for r in doc.repr_blocks:
        out.append("repr")
        out.append(f"  tail {','.join(r.tail)}")
        if r.char is not None:
            out.append(f"  char {_char_text(r.char)}")
        if r.depth is not None:
            out.append(f"  depth {r.depth}")
        out.append("end")
    return "\n".join(out) + "\n"
