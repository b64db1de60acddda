"""Hereditary/saturated sets, maximal tails and their periodicity cores.

Vertex-set machinery on a validated graph: closure under the hereditary
and saturation rules, exhaustive enumeration of maximal tails, the
gamma/tau split by periodicity, and the core of a tail (the vertices
whose outgoing paths have unique periodic partners; for rank 1 this is
exactly the vertex set of the unique cycle without entrances).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from . import degrees as dg
from .action import CyclineTriple, SelfSimilarAction, trivial_action
from .errors import InconclusiveResult, TooManyVertices
from .kgraph import KGraph, Path, Skeleton, validate_kgraph


@dataclass(frozen=True, order=True)
class MaximalTail:
    vertices: Tuple[str, ...]  # sorted

    @property
    def vertex_set(self) -> FrozenSet[str]:
        return frozenset(self.vertices)

    def __repr__(self):
        return "{" + ",".join(self.vertices) + "}"


@dataclass(frozen=True)
class TailClass:
    kind: str                       # "gamma" or "tau"
    exact: bool                     # False means "up to bound" only
    witness: Optional[CyclineTriple]
    bound: Tuple[int, ...]


def descendants(graph: KGraph, v: str) -> FrozenSet[str]:
    """Vertices reachable from v walking edges source-to-range."""
    seen = {v}
    frontier = [v]
    while frontier:
        cur = frontier.pop()
        for e in graph.edges_out_of(cur):
            w = graph.r(e)
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return frozenset(seen)


def ancestors(graph: KGraph, v: str) -> FrozenSet[str]:
    """Vertices w with a path from w to v (v Lambda w nonempty)."""
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


def hereditary_saturated_closure(graph: KGraph, seed: Sequence[str]) -> FrozenSet[str]:
    """Smallest hereditary and saturated vertex set containing the seed.

    Least fixed point of two rules: sources of edges leaving the set join
    it, and a vertex all of whose color-i edge sources already lie in the
    set joins it.  Checking single colors suffices; the rule for a general
    degree follows by splitting paths into unit edges.
    """
    h: Set[str] = set(seed)
    for v in h:
        if v not in graph.vertices:
            raise ValueError(f"unknown vertex {v!r}")
    changed = True
    while changed:
        changed = False
        for v in list(h):
            for c in range(1, graph.k + 1):
                for e in graph.edges_into(v, c):
                    if graph.s(e) not in h:
                        h.add(graph.s(e))
                        changed = True
        for v in graph.vertices:
            if v in h:
                continue
            for c in range(1, graph.k + 1):
                if all(graph.s(e) in h for e in graph.edges_into(v, c)):
                    h.add(v)
                    changed = True
                    break
    return frozenset(h)


def maximal_tails(graph: KGraph, max_vertices: int = 22) -> Tuple[MaximalTail, ...]:
    """All maximal tails, by exhaustive subset search with bitmask pruning.

    A nonempty T qualifies iff (1) it contains every vertex reachable from
    its members, (2) every member receives an edge of every color from
    inside T, and (3) any two members have a common ancestor inside T.
    Condition (2) for unit degrees implies it for all degrees by
    composing edges.
    """
    verts = graph.vertices
    n = len(verts)
    if n > max_vertices:
        raise TooManyVertices(f"{n} vertices exceeds the enumeration budget {max_vertices}")
    idx = {v: i for i, v in enumerate(verts)}
    desc_mask = [0] * n
    anc_mask = [0] * n
    src_mask = [[0] * (graph.k + 1) for _ in range(n)]
    for v in verts:
        i = idx[v]
        for w in descendants(graph, v):
            desc_mask[i] |= 1 << idx[w]
        for w in ancestors(graph, v):
            anc_mask[i] |= 1 << idx[w]
        for c in range(1, graph.k + 1):
            for e in graph.edges_into(v, c):
                src_mask[i][c] |= 1 << idx[graph.s(e)]

    tails: List[MaximalTail] = []
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if any(desc_mask[i] & ~mask for i in members):
            continue
        if any(not src_mask[i][c] & mask for i in members
               for c in range(1, graph.k + 1)):
            continue
        if any(not anc_mask[i] & anc_mask[j] & mask
               for i in members for j in members):
            continue
        tails.append(MaximalTail(tuple(verts[i] for i in members)))
    tails.sort()
    return tuple(tails)


def restrict_to_vertices(graph: KGraph, vertices: Sequence[str]) -> KGraph:
    """Full subgraph on a vertex set, re-validated.

    Works for maximal tails and for hereditary subsets: in both cases the
    one-sided defining condition makes the edge set two-sided closed, and
    re-validation catches any misuse.
    """
    vs = sorted(set(vertices))
    vset = set(vs)
    edges = tuple(
        graph.edge_map[e] for e in graph.edge_names
        if graph.s(e) in vset and graph.r(e) in vset
    )
    names = {e.name for e in edges}
    squares = {
        pair: img
        for pair, img in graph._asc.items()
        if set(pair) <= names and set(img) <= names
    }
    return validate_kgraph(Skeleton(graph.k, tuple(vs), edges), squares)


def restrict_to_tail(graph: KGraph, tail: MaximalTail) -> KGraph:
    return restrict_to_vertices(graph, tail.vertices)


def cycles_without_entrance(graph: KGraph) -> List[Tuple[str, ...]]:
    """Rank-1 only: vertex tuples of cycles all of whose vertices receive
    exactly one edge."""
    if graph.k != 1:
        raise ValueError("cycle analysis is a rank-1 notion")
    cycles: Set[Tuple[str, ...]] = set()
    for start in graph.vertices:
        chain = [start]
        pos = {start: 0}
        cur = start
        while True:
            inc = graph.edges_into(cur, 1)
            if len(inc) != 1:
                break
            cur = graph.s(inc[0])
            if cur in pos:
                # walking unique received edges backwards closed a loop;
                # every vertex on it receives exactly its loop edge
                cycles.add(tuple(sorted(chain[pos[cur]:])))
                break
            pos[cur] = len(chain)
            chain.append(cur)
    return sorted(cycles)


def classify_tail(graph: KGraph, tail: MaximalTail,
                  bound: Optional[Tuple[int, ...]] = None) -> TailClass:
    """gamma (no periodicity) or tau (some cycline pair of nonzero degree
    difference in the restricted graph).

    Rank 1 is decided exactly through the cycle-without-entrance
    criterion; higher rank searches pairs up to the bound, so only the
    tau verdict is a certificate there.
    """
    sub = restrict_to_tail(graph, tail)
    if bound is None:
        bound = (4,) * graph.k
    if graph.k == 1:
        cycles = cycles_without_entrance(sub)
        if not cycles:
            return TailClass("gamma", True, None, bound)
        cyc = cycles[0]
        witness = _cycle_pair_witness(sub, cyc)
        return TailClass("tau", True, witness, bound)
    free = trivial_action(sub)
    for t in free.cycline_pairs_up_to(bound):
        if t.difference() != sub.zero_degree:
            return TailClass("tau", True, t, bound)
    return TailClass("gamma", False, None, bound)


def _cycle_pair_witness(sub: KGraph, cycle_vertices: Tuple[str, ...]) -> CyclineTriple:
    base = cycle_vertices[0]
    word = []
    cur = base
    while True:
        e = sub.edges_into(cur, 1)[0]
        word.append(e)
        cur = sub.s(e)
        if cur == base:
            break
    lam = sub.make_path(base, word)
    # reading a no-entrance cycle backwards: (cycle, identity, base vertex)
    return CyclineTriple(lam, "1", sub.vertex_path(base))


def periodicity_core(graph: KGraph, tail: MaximalTail, tail_class: TailClass,
                     lattice, bound: Optional[Tuple[int, ...]] = None
                     ) -> Tuple[FrozenSet[str], bool]:
    """Vertices of the tail where periodic partners are unique.

    ``lattice`` is the periodicity subgroup of the restricted graph (a
    PeriodicityLattice).  Returns the vertex set plus an exactness flag;
    rank 1 is exact, higher ranks are certified only up to the bound.  An
    empty bounded answer raises InconclusiveResult rather than
    contradicting the theory.
    """
    sub = restrict_to_tail(graph, tail)
    if bound is None:
        bound = (4,) * graph.k
    if graph.k == 1:
        if tail_class.kind == "gamma":
            return frozenset(tail.vertices), True
        cycles = cycles_without_entrance(sub)
        if len(cycles) != 1:
            raise InconclusiveResult(
                f"expected one cycle without entrances in {tail!r}, found {len(cycles)}"
            )
        return frozenset(cycles[0]), True
    if lattice.is_zero:
        # partners of equal degree are unique automatically
        return frozenset(tail.vertices), tail_class.exact

    free = trivial_action(sub)
    core: Set[str] = set()
    for v in sub.vertices:
        ok = True
        for p in dg.degrees_upto(bound):
            for q in dg.degrees_upto(bound):
                if not lattice.contains(dg.sub(p, q)):
                    continue
                for mu in sub.paths_of_degree(v, p):
                    partners = [
                        nu for nu in sub.paths_of_degree(v, q)
                        if nu.source_vertex == mu.source_vertex
                        and free.cycline_check(mu, "1", nu)
                    ]
                    if len(partners) != 1:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            core.add(v)
    if not core:
        raise InconclusiveResult(
            f"bounded core computation for {tail!r} came back empty"
        )
    _assert_hereditary(sub, core)
    return frozenset(core), False


def _assert_hereditary(sub: KGraph, h: Set[str]):
    for v in h:
        for c in range(1, sub.k + 1):
            for e in sub.edges_into(v, c):
                if sub.s(e) not in h:
                    raise InconclusiveResult(
                        f"core is not hereditary: edge {e!r} leaves it"
                    )


def strongly_connected(graph: KGraph, vertices: Sequence[str]) -> bool:
    """Every ordered pair of the given vertices joined by a path that stays
    inside the set."""
    vs = set(vertices)
    for start in vs:
        seen = {start}
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            for e in graph.edges_out_of(cur):
                w = graph.r(e)
                if w in vs and w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if seen != vs:
            return False
    return True
