"""Eventually periodic infinite paths.

An infinite path is stored as a finite prefix followed by a repeating
cycle whose degree is strictly positive in every coordinate.  This keeps
the data finite while staying closed under every operation used here
(segments, shifts, prepending, group actions).

Equality of two representations is decidable by comparing one segment:
past the join M of the prefix degrees both tails are periodic (with the
respective block degrees P and Q), and two paths that are periodic with
periods P and Q and agree up to P+Q are equal.  So x == y iff their
segments up to M+P+Q coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import degrees as dg
from .errors import ConstructionFailed, NotComposable
from .kgraph import KGraph, Path


@dataclass(frozen=True)
class InfinitePath:
    prefix: Path
    block: Path

    @property
    def base_vertex(self) -> str:
        return self.prefix.range_vertex

    def __repr__(self):
        return f"<inf {self.prefix!r}({self.block!r})^oo>"


def make_infinite(graph: KGraph, prefix: Path, block: Path) -> InfinitePath:
    if block.range_vertex != block.source_vertex:
        raise NotComposable("repeating block must be a cycle")
    if not dg.is_positive(block.degree):
        raise NotComposable("repeating block needs strictly positive degree")
    if prefix.source_vertex != block.range_vertex:
        raise NotComposable("prefix must end where the block starts")
    return InfinitePath(prefix, block)


def from_cycle(graph: KGraph, block: Path) -> InfinitePath:
    return make_infinite(graph, graph.vertex_path(block.range_vertex), block)


def initial_part(graph: KGraph, x: InfinitePath, n: Tuple[int, ...]) -> Path:
    """The segment x(0, n) as a finite path."""
    n = dg.check_length(n, graph.k)
    dp, db = x.prefix.degree, x.block.degree
    m = 0
    for i in range(graph.k):
        if n[i] > dp[i]:
            need = n[i] - dp[i]
            m = max(m, -(-need // db[i]))
    total = graph.compose(x.prefix, graph.power(x.block, m)) if m else x.prefix
    return graph.factor(total, n)[0]


def segment(graph: KGraph, x: InfinitePath, p, q) -> Path:
    """x(p, q) for p <= q."""
    if not dg.le(p, q):
        raise ValueError(f"segment needs p <= q, got {p} and {q}")
    whole = initial_part(graph, x, q)
    return graph.factor(whole, tuple(p))[1]


def vertex_at(graph: KGraph, x: InfinitePath, m) -> str:
    return initial_part(graph, x, tuple(m)).source_vertex


def shift(graph: KGraph, x: InfinitePath, n) -> InfinitePath:
    """sigma^n(x): drop the degree-n initial segment."""
    n = dg.check_length(n, graph.k)
    dp, db = x.prefix.degree, x.block.degree
    m = 0
    for i in range(graph.k):
        if n[i] > dp[i]:
            m = max(m, -(-(n[i] - dp[i]) // db[i]))
    total = graph.compose(x.prefix, graph.power(x.block, m)) if m else x.prefix
    _, beta = graph.factor(total, n)
    return InfinitePath(beta, x.block)


def prepend(graph: KGraph, mu: Path, x: InfinitePath) -> InfinitePath:
    return InfinitePath(graph.compose(mu, x.prefix), x.block)


def equal(graph: KGraph, x: InfinitePath, y: InfinitePath) -> bool:
    """Exact equality of the represented infinite paths."""
    if x.base_vertex != y.base_vertex:
        return False
    m = dg.join(x.prefix.degree, y.prefix.degree)
    n = dg.add(dg.add(m, x.block.degree), y.block.degree)
    return initial_part(graph, x, n) == initial_part(graph, y, n)


def _primitive_block(graph: KGraph, block: Path) -> Path:
    d = block.degree
    g = 0
    for c in d:
        g = _gcd(g, c)
    for m in range(g, 1, -1):
        if any(c % m for c in d):
            continue
        q = tuple(c // m for c in d)
        beta = graph.factor(block, q)[0]
        if beta.source_vertex != beta.range_vertex:
            continue
        if graph.power(beta, m) == block:
            return beta
    return block


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def canonicalize(graph: KGraph, x: InfinitePath) -> InfinitePath:
    """Equivalent representation with primitive block and short prefix.

    Shrinks the representation only; never changes the represented path
    (every move is verified by exact equality where needed).
    """
    prefix, block = x.prefix, x.block
    while True:
        block = _primitive_block(graph, block)
        # strip trailing whole blocks off the prefix
        while dg.le(block.degree, prefix.degree):
            p0, t = graph.factor(prefix, dg.sub(prefix.degree, block.degree))
            if t != block:
                break
            prefix = p0
        # roll the block backwards through the prefix one edge at a time
        improved = False
        for color in range(1, graph.k + 1):
            if prefix.degree[color - 1] == 0:
                continue
            split = dg.sub(prefix.degree, dg.unit(graph.k, color))
            p0, t = graph.factor(prefix, split)
            tail = InfinitePath(t, block)
            if equal(graph, shift(graph, tail, block.degree), tail):
                prefix = p0
                block = initial_part(graph, tail, block.degree)
                improved = True
                break
        if not improved:
            return InfinitePath(prefix, block)


def ancestors(graph: KGraph, v: str) -> frozenset:
    """Vertices w admitting a path from w to v (i.e. v Lambda w nonempty)."""
    seen = {v}
    frontier = [v]
    while frontier:
        cur = frontier.pop()
        for c in range(1, graph.k + 1):
            for e in graph.edges_into(cur, c):
                w = graph.s(e)
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
    return frozenset(seen)


def cofinal_infinite_path(graph: KGraph) -> InfinitePath:
    """An eventually periodic cofinal path of a tail-restricted graph.

    Starts at a vertex every other vertex is reachable from, then walks
    backwards through sources cycling the colors until a (vertex, phase)
    state repeats; that closes a full-support cycle.  Cofinality is
    re-verified afterwards by reachability and ConstructionFailed is
    raised if anything fails (this module does not presume the three
    tail conditions, it only exploits them).
    """
    anc = {v: ancestors(graph, v) for v in graph.vertices}
    common = set(graph.vertices)
    for a in anc.values():
        common &= a
    if not common:
        raise ConstructionFailed("no vertex reaches every vertex of the tail")
    u = min(common)

    edges: List[str] = []
    cur = u
    seen = {(u, 0): 0}
    while True:
        color = (len(edges) % graph.k) + 1
        options = graph.edges_into(cur, color)
        if not options:
            raise ConstructionFailed(f"vertex {cur!r} has no color-{color} edge")
        e = options[0]
        edges.append(e)
        cur = graph.s(e)
        state = (cur, len(edges) % graph.k)
        if state in seen:
            start = seen[state]
            prefix = graph.make_path(u, edges[:start])
            block = graph.make_path(prefix.source_vertex, edges[start:])
            x = make_infinite(graph, prefix, block)
            break
        seen[state] = len(edges)

    visited = {u, cur}
    walk = u
    for e in edges:
        walk = graph.s(e)
        visited.add(walk)
    for v in graph.vertices:
        if not (anc[v] & visited):
            raise ConstructionFailed(f"constructed path never feeds vertex {v!r}")
    return canonicalize(graph, x)
