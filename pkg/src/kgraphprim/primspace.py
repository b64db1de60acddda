"""Strata of the primitive ideal space and the closure truth table.

Points of the ideal space are pairs (maximal tail, character of its
periodicity lattice); gamma tails contribute single points, tau tails a
dual torus.  Closure membership questions against sets of such points
reduce to a four-case truth table over vertex-set inclusions plus, in the
last case, a character closure test; mixed query sets are answered by
disjunction of the two pure cases (closure of a finite union is the union
of the closures in the hull-kernel topology).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import degrees as dg
from .action import CyclineTriple, SelfSimilarAction, restrict_action, trivial_action
from .errors import HypothesisUnverified, InconclusiveResult, InvalidQuery, NotInLattice
from .kgraph import KGraph, Path
from .lattice import (
    CharacterSet,
    PeriodicityLattice,
    RationalCharacter,
    closure_contains,
    evaluate,
    per_lattice,
    trivial_character,
)
from .tails import (
    MaximalTail,
    TailClass,
    classify_tail,
    maximal_tails,
    periodicity_core,
    restrict_to_tail,
    restrict_to_vertices,
    strongly_connected,
)


@dataclass(frozen=True)
class PrimStratum:
    tail: MaximalTail
    tail_class: TailClass
    lattice: PeriodicityLattice
    core: Tuple[str, ...]
    core_exact: bool
    bound: Tuple[int, ...]

    @property
    def kind(self) -> str:
        return self.tail_class.kind

    @property
    def dual_description(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.lattice.rank, self.lattice.invariants)


@dataclass(frozen=True)
class PrimPoint:
    tail: MaximalTail
    kind: str
    character: Optional[RationalCharacter]  # None for gamma (trivial)


@dataclass(frozen=True)
class ClosureQuery:
    point: PrimPoint
    w: Tuple[MaximalTail, ...]
    y: Tuple[MaximalTail, ...]
    d: Mapping[MaximalTail, CharacterSet]
    kinds: Mapping[MaximalTail, str]


@dataclass(frozen=True)
class ClosureVerdict:
    verdict: bool
    case: str
    witness: Optional[Tuple[MaximalTail, ...]]
    caveats: Tuple[str, ...] = ()


def evaluate_closure(query: ClosureQuery) -> ClosureVerdict:
    """Answer a closure membership question by the four-case truth table.

    Cases: (1) gamma point against gamma set and (2) tau point against
    gamma set are inclusion of the point's tail in the union; (3) gamma
    point against tau set likewise; (4) tau point against tau set holds
    iff some other tail of the set contains the point's tail (4a), or no
    such tail exists, the point's tail itself is in the set, and the
    character lies in the closure of its descriptor (4b).
    """
    point = query.point
    if point.kind not in ("gamma", "tau"):
        raise InvalidQuery(f"unknown point class {point.kind!r}")
    if not query.w and not query.y:
        raise InvalidQuery("closure query needs a nonempty set of points")
    for t in query.w:
        if query.kinds.get(t) != "gamma":
            raise InvalidQuery(f"tail {t!r} in W is not a gamma tail")
    for t in query.y:
        if query.kinds.get(t) != "tau":
            raise InvalidQuery(f"tail {t!r} in Y is not a tau tail")
        if t not in query.d:
            raise InvalidQuery(f"tau tail {t!r} has no character-set descriptor")

    t0 = point.tail
    t0set = t0.vertex_set
    branches: List[Tuple[bool, str, Optional[Tuple[MaximalTail, ...]]]] = []

    if query.w:
        union = set()
        for t in query.w:
            union |= t.vertex_set
        ok = t0set <= union
        case = "1" if point.kind == "gamma" else "2"
        witness = tuple(t for t in query.w if t.vertex_set & t0set) if ok else None
        branches.append((ok, case, witness))

    if query.y:
        if point.kind == "gamma":
            union = set()
            for t in query.y:
                union |= t.vertex_set
            ok = t0set <= union
            witness = tuple(t for t in query.y if t.vertex_set & t0set) if ok else None
            branches.append((ok, "3", witness))
        else:
            supersets = sorted(
                t for t in query.y if t != t0 and t0set <= t.vertex_set
            )
            if supersets:
                branches.append((True, "4a", (supersets[0],)))
            elif t0 in query.y and closure_contains(query.d[t0], point.character):
                branches.append((True, "4b", (t0,)))
            else:
                branches.append((False, "4", None))

    for ok, case, witness in branches:
        if ok:
            return ClosureVerdict(True, case, witness)
    case = "|".join(b[1] for b in branches)
    return ClosureVerdict(False, case, None)


# -- hypotheses -------------------------------------------------------------


@dataclass(frozen=True)
class HypothesisItem:
    name: str
    verdict: str  # PASS | FAIL | PASS_UP_TO_BOUND | AUTO_K1 | ASSUMED |
    #               VACUOUS | INCONCLUSIVE
    detail: str


@dataclass(frozen=True)
class HypothesesReport:
    items: Tuple[HypothesisItem, ...]

    @property
    def ok(self) -> bool:
        return all(i.verdict != "FAIL" for i in self.items)

    @property
    def caveats(self) -> Tuple[str, ...]:
        out = []
        for i in self.items:
            if i.verdict in ("PASS_UP_TO_BOUND", "ASSUMED", "INCONCLUSIVE"):
                out.append(f"{i.name}: {i.verdict} ({i.detail})")
        return tuple(out)

    def find(self, name: str) -> HypothesisItem:
        for i in self.items:
            if i.name == name:
                return i
        raise KeyError(name)


def check_hypotheses(graph: KGraph, action: SelfSimilarAction,
                     bound: Optional[Tuple[int, ...]] = None,
                     tails: Optional[Sequence[MaximalTail]] = None) -> HypothesesReport:
    """Verdict per hypothesis of the closure theorem.

    Vertex fixing and pseudo-freeness are exact; "triples are pairs" is
    certified up to the bound; strong connectivity of each tau core is
    exact once the core is known (itself exact for rank 1); the ideal
    presentation hypothesis holds automatically for rank 1 and is an
    assumption otherwise.
    """
    if bound is None:
        bound = (4,) * graph.k
    items: List[HypothesisItem] = []
    items.append(HypothesisItem(
        "vertex_action_trivial", "PASS",
        "group elements fix every vertex by construction"))
    pf = action.pseudo_free_check()
    items.append(HypothesisItem(
        "pseudo_free", "PASS" if pf.pseudo_free else "FAIL",
        "no nontrivial element fixes a path with trivial restriction"
        if pf.pseudo_free else f"witness {pf.witness!r}"))
    if tails is None:
        tails = maximal_tails(graph)
    tau_seen = False
    for tail in tails:
        sub = restrict_to_tail(graph, tail)
        sub_action = restrict_action(action, sub)
        rep = sub_action.verify_triples_are_pairs(bound)
        items.append(HypothesisItem(
            f"triples_are_pairs[{tail!r}]",
            "PASS_UP_TO_BOUND" if rep.passed else "FAIL",
            f"bound {bound}" if rep.passed else f"witness {rep.witness!r}"))
        cls = classify_tail(graph, tail, bound)
        if cls.kind != "tau":
            continue
        tau_seen = True
        lattice = _tail_lattice(graph, tail, bound)
        try:
            core, exact = periodicity_core(graph, tail, cls, lattice, bound)
        except InconclusiveResult as exc:
            items.append(HypothesisItem(
                f"core_strongly_connected[{tail!r}]", "INCONCLUSIVE", str(exc)))
            continue
        sc = strongly_connected(sub, core)
        items.append(HypothesisItem(
            f"core_strongly_connected[{tail!r}]",
            "PASS" if sc else "FAIL",
            f"core {sorted(core)}" + ("" if exact else f", core up to bound {bound}")))
    if not tau_seen:
        items.append(HypothesisItem(
            "core_strongly_connected", "VACUOUS", "no tau tails"))
    if graph.k == 1:
        items.append(HypothesisItem(
            "ideal_presentation_generates", "AUTO_K1",
            "holds automatically for rank 1"))
    else:
        items.append(HypothesisItem(
            "ideal_presentation_generates", "ASSUMED",
            f"not verified for rank {graph.k} >= 2"))
    return HypothesesReport(tuple(items))


def _tail_lattice(graph: KGraph, tail: MaximalTail,
                  bound: Tuple[int, ...]) -> PeriodicityLattice:
    sub = restrict_to_tail(graph, tail)
    free = trivial_action(sub)
    diffs = sorted({
        t.difference() for t in free.cycline_pairs_up_to(bound)
        if t.difference() != sub.zero_degree
    })
    return per_lattice(graph.k, diffs)


# -- the space --------------------------------------------------------------


class PrimSpace:
    """Enumerated strata plus query evaluation for one graph and action."""

    def __init__(self, graph: KGraph, action: SelfSimilarAction,
                 bound: Tuple[int, ...], strata: Tuple[PrimStratum, ...],
                 hypotheses: HypothesesReport):
        self.graph = graph
        self.action = action
        self.bound = bound
        self.strata = strata
        self.hypotheses = hypotheses

    def stratum(self, vertices: Sequence[str]) -> PrimStratum:
        key = tuple(sorted(vertices))
        for s in self.strata:
            if s.tail.vertices == key:
                return s
        raise KeyError(f"no maximal tail with vertices {key}")

    @property
    def kinds(self) -> Dict[MaximalTail, str]:
        return {s.tail: s.kind for s in self.strata}

    def character(self, stratum: PrimStratum,
                  angles: Sequence[Fraction]) -> RationalCharacter:
        return RationalCharacter(stratum.lattice, tuple(Fraction(a) for a in angles))

    def point(self, stratum: PrimStratum,
              character: Optional[RationalCharacter] = None) -> PrimPoint:
        if stratum.kind == "gamma":
            character = None
        elif character is None:
            character = trivial_character(stratum.lattice)
        return PrimPoint(stratum.tail, stratum.kind, character)

    def caveats(self) -> Tuple[str, ...]:
        return self.hypotheses.caveats

    def closure_membership(self, point: PrimPoint,
                           w: Sequence[MaximalTail] = (),
                           y: Sequence[MaximalTail] = (),
                           d: Optional[Mapping[MaximalTail, CharacterSet]] = None
                           ) -> ClosureVerdict:
        query = ClosureQuery(point, tuple(w), tuple(y), dict(d or {}), self.kinds)
        verdict = evaluate_closure(query)
        return ClosureVerdict(verdict.verdict, verdict.case, verdict.witness,
                              self.caveats())

    # -- specialization ------------------------------------------------------

    def specialization_preorder(self) -> "SpecializationPreorder":
        """Directed edges q -> p between strata whenever points of p lie in
        the closure of single points of q; labels say for which characters."""
        edges: List[Tuple[int, int, str]] = []
        for qi, q in enumerate(self.strata):
            for pi, p in enumerate(self.strata):
                label = self._edge_label(q, p)
                if label:
                    edges.append((qi, pi, label))
        return SpecializationPreorder(self.strata, tuple(edges), self.caveats())

    @staticmethod
    def _edge_label(q: PrimStratum, p: PrimStratum) -> Optional[str]:
        inside = p.tail.vertex_set <= q.tail.vertex_set
        if q.kind == "gamma":
            return "always" if inside else None
        if p.tail == q.tail:
            # same tau stratum: singleton descriptor, case 4b
            return "iff f0=f"
        return "always" if inside else None

    # -- ideal presentations ---------------------------------------------------

    def ideal_presentation(self, stratum: PrimStratum,
                           character: Optional[RationalCharacter] = None
                           ) -> "IdealPresentation":
        """Generators of the ideal of a point: vertex projections outside
        the tail plus twisted differences along core cycline pairs."""
        if character is None:
            character = trivial_character(stratum.lattice)
        absent = tuple(v for v in self.graph.vertices
                       if v not in stratum.tail.vertex_set)
        core_graph = restrict_to_vertices(self.graph, stratum.core)
        free = trivial_action(core_graph)
        relations: List[Tuple[Path, Path, Fraction]] = []
        for t in free.cycline_pairs_up_to(self.bound):
            if t.mu == t.nu:
                continue
            try:
                angle = evaluate(character, t.difference())
            except NotInLattice as exc:
                raise InconclusiveResult(
                    f"core pair difference {t.difference()} outside the bounded "
                    f"lattice; raise the bound") from exc
            relations.append((t.mu, t.nu, angle))
        return IdealPresentation(stratum.tail, absent, tuple(relations))


@dataclass(frozen=True)
class IdealPresentation:
    tail: MaximalTail
    absent_vertices: Tuple[str, ...]
    relations: Tuple[Tuple[Path, Path, Fraction], ...]


@dataclass(frozen=True)
class SpecializationPreorder:
    strata: Tuple[PrimStratum, ...]
    edges: Tuple[Tuple[int, int, str], ...]
    caveats: Tuple[str, ...]

    def node_name(self, i: int) -> str:
        s = self.strata[i]
        return "{" + ",".join(s.tail.vertices) + "}:" + s.kind

    def to_dot(self) -> str:
        lines = ["digraph specialization {"]
        for i, s in enumerate(self.strata):
            rank = s.lattice.rank
            lines.append(
                f'  n{i} [label="{self.node_name(i)} rank={rank}"];'
            )
        for a, b, label in self.edges:
            lines.append(f'  n{a} -> n{b} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def enumerate_prim(graph: KGraph, action: SelfSimilarAction,
                   bound: Optional[Tuple[int, ...]] = None) -> PrimSpace:
    """One stratum per maximal tail, with dual-group description.

    Requires pseudo-freeness and the triples-are-pairs hypothesis (checked
    up to the bound); raises HypothesisUnverified otherwise.
    """
    if bound is None:
        bound = (4,) * graph.k
    tails = maximal_tails(graph)
    hypotheses = check_hypotheses(graph, action, bound, tails)
    failed = [i.name for i in hypotheses.items if i.verdict == "FAIL"
              and (i.name == "pseudo_free" or i.name.startswith("triples_are_pairs"))]
    if failed:
        raise HypothesisUnverified(failed)
    strata: List[PrimStratum] = []
    for tail in tails:
        cls = classify_tail(graph, tail, bound)
        lattice = _tail_lattice(graph, tail, bound)
        core, core_exact = periodicity_core(graph, tail, cls, lattice, bound)
        strata.append(PrimStratum(tail, cls, lattice,
                                  tuple(sorted(core)), core_exact, bound))
    return PrimSpace(graph, action, bound, tuple(strata), hypotheses)
