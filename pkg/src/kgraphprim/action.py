"""Finite group actions with restriction cocycle on a validated k-graph.

The group acts on edges and fixes every vertex; a restriction map sends
(g, edge) to the group element that keeps acting further down the path.
Both extend to paths by folding along the edge word, and validation
guarantees the fold is independent of which word of the morphism is used.

The cycline decision asks whether two paths act identically (up to a
group twist) on every infinite path from their common source.  It runs as
a residual-pair search: obligations carry the uncancelled ends of the two
sides, each expansion step consumes one unit edge and cancels one unit of
common prefix, and the uncancelled degrees stay pinned at the positive
and negative parts of d(mu) - d(nu).  The obligation space is therefore
finite and the greatest fixed point (no reachable mismatch) is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import degrees as dg
from .errors import AxiomViolated, BadGroupTable, NotComposable
from .infinite import InfinitePath, canonicalize, make_infinite
from .kgraph import KGraph, Path


class FiniteGroup:
    """A finite group given by an explicit multiplication table."""

    def __init__(self, elements: Sequence[str], identity: str,
                 table: Dict[Tuple[str, str], str]):
        self.elements: Tuple[str, ...] = tuple(elements)
        self.identity = identity
        if len(set(self.elements)) != len(self.elements):
            raise BadGroupTable("duplicate group element ids")
        if identity not in self.elements:
            raise BadGroupTable(f"identity {identity!r} not among elements")
        self._table = dict(table)
        for a in self.elements:
            self._table.setdefault((identity, a), a)
            self._table.setdefault((a, identity), a)
        for a in self.elements:
            for b in self.elements:
                c = self._table.get((a, b))
                if c is None:
                    raise BadGroupTable(f"product {a!r}*{b!r} missing from table")
                if c not in self.elements:
                    raise BadGroupTable(f"product {a!r}*{b!r} = {c!r} is not an element")
        for a in self.elements:
            if self._table[(identity, a)] != a or self._table[(a, identity)] != a:
                raise BadGroupTable(f"identity law fails at {a!r}")
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        raise BadGroupTable(f"associativity fails at ({a!r},{b!r},{c!r})")
        self._inv: Dict[str, str] = {}
        for a in self.elements:
            for b in self.elements:
                if self.mul(a, b) == identity and self.mul(b, a) == identity:
                    self._inv[a] = b
                    break
            else:
                raise BadGroupTable(f"element {a!r} has no inverse")

    def mul(self, a: str, b: str) -> str:
        return self._table[(a, b)]

    def inv(self, a: str) -> str:
        return self._inv[a]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a):
        return a in self.elements


def trivial_group(identity: str = "1") -> FiniteGroup:
    return FiniteGroup((identity,), identity, {(identity, identity): identity})


@dataclass(frozen=True)
class CyclineTriple:
    mu: Path
    g: str
    nu: Path

    def difference(self) -> Tuple[int, ...]:
        return dg.sub(self.mu.degree, self.nu.degree)


class SelfSimilarAction:
    """A validated self-similar action.  Use validate_action() to build."""

    def __init__(self, graph: KGraph, group: FiniteGroup,
                 edge_action: Dict[Tuple[str, str], str],
                 edge_restriction: Dict[Tuple[str, str], str],
                 _token=None):
        if _token is not _ACTION_TOKEN:
            raise TypeError("use validate_action() to build a SelfSimilarAction")
        self.graph = graph
        self.group = group
        self._act = dict(edge_action)
        self._res = dict(edge_restriction)
        self._cycline_cache: Dict[Tuple[Path, str, Path], bool] = {}
        self._trivact_cache: Dict[Tuple[str, str], bool] = {}

    # -- path level -------------------------------------------------------

    def act_edge(self, g: str, e: str) -> str:
        return self._act[(g, e)]

    def restrict_edge(self, g: str, e: str) -> str:
        return self._res[(g, e)]

    def act_path(self, g: str, mu: Path) -> Path:
        h = g
        out: List[str] = []
        for e in mu.edges:
            out.append(self._act[(h, e)])
            h = self._res[(h, e)]
        return Path(mu.range_vertex, tuple(out), mu.degree, mu.source_vertex)

    def restrict_path(self, g: str, mu: Path) -> str:
        h = g
        for e in mu.edges:
            h = self._res[(h, e)]
        return h

    def act_infinite(self, g: str, x: InfinitePath) -> InfinitePath:
        """Image of an eventually periodic path; stays eventually periodic
        because the restrictions along repeated blocks cycle in the group."""
        prefix = self.act_path(g, x.prefix)
        h = self.restrict_path(g, x.prefix)
        seen = {h: 0}
        hs = [h]
        while True:
            h = self.restrict_path(h, x.block)
            if h in seen:
                start = seen[h]
                break
            seen[h] = len(hs)
            hs.append(h)
        graph = self.graph
        for t in range(start):
            prefix = graph.compose(prefix, self.act_path(hs[t], x.block))
        block = self.act_path(hs[start], x.block)
        for t in range(start + 1, len(hs)):
            block = graph.compose(block, self.act_path(hs[t], x.block))
        return canonicalize(graph, make_infinite(graph, prefix, block))

    def edge_path(self, e: str) -> Path:
        g = self.graph
        return Path(g.r(e), (e,), dg.unit(g.k, g.color(e)), g.s(e))

    # -- pseudo-freeness ---------------------------------------------------

    def pseudo_free_check(self) -> "PseudoFreeReport":
        """Exact decision: search the automaton of (group element, vertex)
        states whose transitions follow edges fixed by the current element."""
        graph, group = self.graph, self.group
        for g in group:
            if g == group.identity:
                continue
            for v in graph.vertices:
                parent: Dict[Tuple[str, str], Tuple[Tuple[str, str], str]] = {}
                start = (g, v)
                queue = deque([start])
                visited = {start}
                while queue:
                    h, cur = queue.popleft()
                    for color in range(1, graph.k + 1):
                        for e in graph.edges_into(cur, color):
                            if self._act[(h, e)] != e:
                                continue
                            nxt = (self._res[(h, e)], graph.s(e))
                            if nxt in visited:
                                continue
                            visited.add(nxt)
                            parent[nxt] = ((h, cur), e)
                            if nxt[0] == group.identity:
                                word: List[str] = []
                                node = nxt
                                while node != start:
                                    node, edge = parent[node]
                                    word.append(edge)
                                word.reverse()
                                mu = graph.make_path(v, word)
                                return PseudoFreeReport(False, (g, mu))
                            queue.append(nxt)
        return PseudoFreeReport(True, None)

    # -- the cycline decision ----------------------------------------------

    def fixes_all_infinite_paths(self, g: str, v: str) -> bool:
        """Does g act as the identity on every infinite path based at v?

        Greatest fixed point: g must fix every unit edge at v and each
        restriction must keep fixing everything further down.
        """
        key = (g, v)
        if key in self._trivact_cache:
            return self._trivact_cache[key]
        graph = self.graph
        reached = {key}
        queue = deque([key])
        verdict = True
        while queue:
            h, cur = queue.popleft()
            for color in range(1, graph.k + 1):
                for e in graph.edges_into(cur, color):
                    if self._act[(h, e)] != e:
                        verdict = False
                        queue.clear()
                        break
                    nxt = (self._res[(h, e)], graph.s(e))
                    if nxt not in reached:
                        reached.add(nxt)
                        queue.append(nxt)
                else:
                    continue
                break
        if verdict:
            # every reachable state is violation-free, so all are good
            for state in reached:
                self._trivact_cache[state] = True
        else:
            self._trivact_cache[key] = False
        return verdict

    def cycline_check(self, mu: Path, g: str, nu: Path) -> bool:
        """Exact decision of  mu (g . x) == nu x  for all infinite x from s(nu)."""
        if mu.source_vertex != nu.source_vertex:
            raise NotComposable("cycline candidates need a common source vertex")
        key = (mu, g, nu)
        cached = self._cycline_cache.get(key)
        if cached is not None:
            return cached
        result = self._cycline_decide(mu, g, nu)
        self._cycline_cache[key] = result
        return result

    def _cycline_decide(self, mu: Path, g: str, nu: Path) -> bool:
        graph = self.graph
        n0 = dg.meet(mu.degree, nu.degree)
        a0, arest = graph.factor(mu, n0)
        b0, brest = graph.factor(nu, n0)
        if a0 != b0:
            return False
        if arest.degree == brest.degree:
            # equal degrees force equal residuals, then only the twist remains
            return self.fixes_all_infinite_paths(g, nu.source_vertex)
        seen = set()
        stack: List[Tuple[Path, str, Path]] = [(arest, g, brest)]
        while stack:
            ob = stack.pop()
            if ob in seen:
                continue
            seen.add(ob)
            a, h, b = ob
            w = b.source_vertex
            for color in range(1, graph.k + 1):
                u = dg.unit(graph.k, color)
                for e in graph.edges_into(w, color):
                    he = self._act[(h, e)]
                    big_a = graph.compose(a, self.edge_path(he))
                    big_b = graph.compose(b, self.edge_path(e))
                    ha, arem = graph.factor(big_a, u)
                    hb, brem = graph.factor(big_b, u)
                    if ha != hb:
                        return False
                    stack.append((arem, self._res[(h, e)], brem))
        return True

    # -- enumeration ---------------------------------------------------------

    def cycline_triples_up_to(self, bound: Tuple[int, ...],
                              only_pairs: bool = False) -> List[CyclineTriple]:
        """All certified triples with d(mu), d(nu) <= bound.

        Complete up to the bound; deterministic lexicographic order.
        """
        graph = self.graph
        paths = graph.all_paths_upto(bound)
        by_source: Dict[str, List[Path]] = {}
        for p in paths:
            by_source.setdefault(p.source_vertex, []).append(p)
        gs = [self.group.identity] if only_pairs else list(self.group)
        out: List[CyclineTriple] = []
        for w in sorted(by_source):
            cands = by_source[w]
            for mu in cands:
                for nu in cands:
                    if mu.range_vertex != nu.range_vertex:
                        continue
                    for g in gs:
                        if self.cycline_check(mu, g, nu):
                            out.append(CyclineTriple(mu, g, nu))
        out.sort(key=lambda t: (t.mu.degree, t.nu.degree, t.mu.edges,
                                t.nu.edges, t.g, t.mu.range_vertex))
        return out

    def cycline_pairs_up_to(self, bound: Tuple[int, ...]) -> List[CyclineTriple]:
        return self.cycline_triples_up_to(bound, only_pairs=True)

    def verify_triples_are_pairs(self, bound: Tuple[int, ...]) -> "TriplesArePairsReport":
        """Hypothesis check: no cycline triple with a nontrivial twist, up to bound."""
        for t in self.cycline_triples_up_to(bound):
            if t.g != self.group.identity:
                return TriplesArePairsReport(False, bound, t)
        return TriplesArePairsReport(True, bound, None)


@dataclass(frozen=True)
class PseudoFreeReport:
    pseudo_free: bool
    witness: Optional[Tuple[str, Path]]


@dataclass(frozen=True)
class TriplesArePairsReport:
    passed: bool
    bound: Tuple[int, ...]
    witness: Optional[CyclineTriple]


_ACTION_TOKEN = object()


def validate_action(graph: KGraph, group: FiniteGroup,
                    edge_action: Dict[Tuple[str, str], str],
                    edge_restriction: Dict[Tuple[str, str], str]) -> SelfSimilarAction:
    """Check the seven self-similarity axioms on edges and across squares.

    Rows for the identity element may be omitted; they are filled in as
    forced by the axioms.  Raises AxiomViolated(axiom, witness) on the
    first failure; axiom numbers follow the usual listing:

      1 color (degree) preservation       5 restriction multiplicative
      2 endpoint equivariance             6 identity acts trivially
      3 compatibility with factorization  7 cocycle / action of products
      4 restriction at vertices (holds by construction here)
    """
    act = dict(edge_action)
    res = dict(edge_restriction)
    one = group.identity
    for e in graph.edge_names:
        act.setdefault((one, e), e)
        res.setdefault((one, e), one)
    for g in group:
        for e in graph.edge_names:
            if (g, e) not in act or (g, e) not in res:
                raise AxiomViolated(0, f"action/restriction not total at ({g!r}, {e!r})")
            if act[(g, e)] not in graph.edge_map:
                raise AxiomViolated(1, (g, e, act[(g, e)]))
            if res[(g, e)] not in group:
                raise AxiomViolated(5, (g, e, res[(g, e)]))

    for g in group:
        for e in graph.edge_names:
            img = act[(g, e)]
            if graph.color(img) != graph.color(e):
                raise AxiomViolated(1, (g, e))
            if graph.s(img) != graph.s(e) or graph.r(img) != graph.r(e):
                raise AxiomViolated(2, (g, e))
    for e in graph.edge_names:
        if act[(one, e)] != e or res[(one, e)] != one:
            raise AxiomViolated(6, e)
    for g in group:
        for h in group:
            gh = group.mul(g, h)
            for e in graph.edge_names:
                if act[(gh, e)] != act[(g, act[(h, e)])]:
                    raise AxiomViolated(7, (g, h, e))
                if res[(gh, e)] != group.mul(res[(g, act[(h, e)])], res[(h, e)]):
                    raise AxiomViolated(7, (g, h, e))
    # compatibility across factorization squares: acting on the two words
    # of the same morphism must give the same morphism and restriction
    for (e, f), (f2, e2) in sorted(graph._asc.items()):
        for g in group:
            ge, gf = act[(g, e)], act[(res[(g, e)], f)]
            gf2, ge2 = act[(g, f2)], act[(res[(g, f2)], e2)]
            if graph._asc.get((ge, gf)) != (gf2, ge2):
                raise AxiomViolated(3, (g, e, f))
            left = res[(res[(g, e)], f)]
            right = res[(res[(g, f2)], e2)]
            if left != right:
                raise AxiomViolated(5, (g, e, f))
    return SelfSimilarAction(graph, group, act, res, _token=_ACTION_TOKEN)


def trivial_action(graph: KGraph, identity: str = "1") -> SelfSimilarAction:
    group = trivial_group(identity)
    return validate_action(graph, group, {}, {})


def restrict_action(action: SelfSimilarAction, subgraph: KGraph) -> SelfSimilarAction:
    """Restrict to a subgraph closed under the action (vertex sets of tails
    and hereditary sets are; endpoints and colors are preserved)."""
    act = {}
    res = {}
    for g in action.group:
        for e in subgraph.edge_names:
            img = action.act_edge(g, e)
            if img not in subgraph.edge_map:
                raise NotComposable(f"subgraph not action-closed at ({g!r}, {e!r})")
            act[(g, e)] = img
            res[(g, e)] = action.restrict_edge(g, e)
    return SelfSimilarAction(subgraph, action.group, act, res, _token=_ACTION_TOKEN)
