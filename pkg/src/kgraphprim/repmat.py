"""Exact finite truncations of the orbit representations.

A cofinal infinite path spans an orbit under three elementary moves
(prepend an edge, drop a leading unit, act by a group element); the
orbit elements within a move budget form the basis of a truncated
Hilbert space.  Path generators act by matrices with at most one entry
per column, each entry a root of unity stored as a rational angle, so
every relation check is an equality of exact data.  Relations are only
asserted on interior basis vectors (whole neighborhoods inside the
truncation); boundary vectors are excluded and counted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import degrees as dg
from .action import SelfSimilarAction
from .errors import BudgetExceeded
from .infinite import (
    InfinitePath,
    canonicalize,
    cofinal_infinite_path,
    equal,
    initial_part,
    prepend,
    shift,
)
from .kgraph import KGraph, Path
from .lattice import ExtendedCharacter, evaluate_extended


def _norm1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


class OrbitBasis:
    """Deduplicated orbit elements with their discovery depth."""

    def __init__(self, graph: KGraph, elements: List[InfinitePath],
                 depths: List[int], budget: int):
        self.graph = graph
        self.elements = elements
        self.depths = depths
        self.budget = budget
        self._by_rep = {(e.prefix, e.block): i for i, e in enumerate(elements)}

    def __len__(self):
        return len(self.elements)

    def find(self, y: InfinitePath) -> Optional[int]:
        y = canonicalize(self.graph, y)
        hit = self._by_rep.get((y.prefix, y.block))
        if hit is not None:
            return hit
        for i, el in enumerate(self.elements):
            if equal(self.graph, el, y):
                return i
        return None

    def interior(self, margin: int) -> Tuple[int, ...]:
        """Indices whose margin-neighborhood is certainly inside the basis."""
        cut = self.budget - margin
        return tuple(i for i, d in enumerate(self.depths) if d <= cut)


def build_orbit(graph: KGraph, action: SelfSimilarAction, x: InfinitePath,
                depth: int, max_size: int = 4000) -> OrbitBasis:
    """All paths within ``depth`` elementary moves of x, canonicalized.

    Moves, in deterministic order: drop one leading unit of each color,
    prepend each edge at the base vertex, apply each nontrivial group
    element.  Deduplication is by exact path equality.
    """
    start = canonicalize(graph, x)
    elements = [start]
    depths = [0]

    def find(y: InfinitePath) -> Optional[int]:
        for i, el in enumerate(elements):
            if equal(graph, el, y):
                return i
        return None

    frontier = [0]
    while frontier:
        nxt: List[int] = []
        for i in frontier:
            if depths[i] >= depth:
                continue
            y = elements[i]
            moves: List[InfinitePath] = []
            for color in range(1, graph.k + 1):
                moves.append(shift(graph, y, dg.unit(graph.k, color)))
            for e in graph.edges_out_of(y.base_vertex):
                moves.append(prepend(graph, action.edge_path(e), y))
            for g in action.group:
                if g != action.group.identity:
                    moves.append(action.act_infinite(g, y))
            for z in moves:
                z = canonicalize(graph, z)
                if find(z) is None:
                    if len(elements) >= max_size:
                        raise BudgetExceeded(
                            f"orbit truncation exceeded {max_size} elements")
                    elements.append(z)
                    depths.append(depths[i] + 1)
                    nxt.append(len(elements) - 1)
        frontier = nxt
    return OrbitBasis(graph, elements, depths, depth)


@dataclass
class ExactMatrix:
    """Sparse matrix with at most one root-of-unity entry per column."""

    size: int
    entries: Dict[int, Tuple[int, Fraction]]

    def __post_init__(self):
        self.entries = {
            c: (r, _norm1(a)) for c, (r, a) in sorted(self.entries.items())
        }

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and (
            self.size, self.entries) == (other.size, other.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def compose(self, other: "ExactMatrix") -> "ExactMatrix":
        """self applied after other; entries lost to truncation drop out."""
        out: Dict[int, Tuple[int, Fraction]] = {}
        for c, (mid, a1) in other.entries.items():
            hit = self.entries.get(mid)
            if hit is not None:
                row, a2 = hit
                out[c] = (row, _norm1(a1 + a2))
        return ExactMatrix(self.size, out)

    def adjoint(self) -> "ExactMatrix":
        out: Dict[int, Tuple[int, Fraction]] = {}
        for c, (r, a) in self.entries.items():
            if r in out:
                raise ValueError("adjoint needs at most one entry per row")
            out[r] = (c, _norm1(-a))
        return ExactMatrix(self.size, out)

    def scale(self, angle: Fraction) -> "ExactMatrix":
        return ExactMatrix(
            self.size, {c: (r, _norm1(a + angle)) for c, (r, a) in self.entries.items()}
        )

    def column(self, c: int) -> Optional[Tuple[int, Fraction]]:
        return self.entries.get(c)

    @staticmethod
    def identity(size: int) -> "ExactMatrix":
        return ExactMatrix(size, {i: (i, Fraction(0)) for i in range(size)})

    @staticmethod
    def zero(size: int) -> "ExactMatrix":
        return ExactMatrix(size, {})

    @staticmethod
    def sum_disjoint(size: int, parts: Sequence["ExactMatrix"]) -> "ExactMatrix":
        """Sum of matrices with pairwise disjoint column supports."""
        out: Dict[int, Tuple[int, Fraction]] = {}
        for m in parts:
            for c, entry in m.entries.items():
                if c in out:
                    raise ValueError("summands overlap; not representable")
                out[c] = entry
        return ExactMatrix(size, out)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "entries": {
                str(c): {"row": r, "angle": f"{a.numerator}/{a.denominator}"}
                for c, (r, a) in self.entries.items()
            },
        }


@dataclass(frozen=True)
class RelationCheck:
    name: str
    checked: int
    skipped: int
    violations: Tuple[str, ...]


@dataclass(frozen=True)
class RelationsReport:
    items: Tuple[RelationCheck, ...]
    basis_size: int

    @property
    def ok(self) -> bool:
        return all(not i.violations for i in self.items)


class TruncatedRepresentation:
    """Matrices of the path and group generators on one orbit truncation."""

    def __init__(self, graph: KGraph, action: SelfSimilarAction,
                 basis: OrbitBasis, character: ExtendedCharacter):
        if character.k != graph.k:
            raise ValueError("character rank does not match the graph")
        self.graph = graph
        self.action = action
        self.basis = basis
        self.character = character
        self._s_cache: Dict[Path, ExactMatrix] = {}
        self._u_cache: Dict[str, ExactMatrix] = {}

    # -- generator matrices -------------------------------------------------

    def matrix_s(self, mu: Path) -> ExactMatrix:
        if mu in self._s_cache:
            return self._s_cache[mu]
        angle = evaluate_extended(self.character, mu.degree)
        out: Dict[int, Tuple[int, Fraction]] = {}
        for i, y in enumerate(self.basis.elements):
            if y.base_vertex != mu.source_vertex:
                continue
            j = self.basis.find(prepend(self.graph, mu, y))
            if j is not None:
                out[i] = (j, angle)
        m = ExactMatrix(len(self.basis), out)
        self._s_cache[mu] = m
        return m

    def matrix_s_star(self, mu: Path) -> ExactMatrix:
        angle = _norm1(-evaluate_extended(self.character, mu.degree))
        out: Dict[int, Tuple[int, Fraction]] = {}
        for i, y in enumerate(self.basis.elements):
            if initial_part(self.graph, y, mu.degree) != mu:
                continue
            j = self.basis.find(shift(self.graph, y, mu.degree))
            if j is not None:
                out[i] = (j, angle)
        return ExactMatrix(len(self.basis), out)

    def matrix_u(self, g: str) -> ExactMatrix:
        if g in self._u_cache:
            return self._u_cache[g]
        out: Dict[int, Tuple[int, Fraction]] = {}
        for i, y in enumerate(self.basis.elements):
            j = self.basis.find(self.action.act_infinite(g, y))
            if j is not None:
                out[i] = (j, Fraction(0))
        m = ExactMatrix(len(self.basis), out)
        self._u_cache[g] = m
        return m

    def probe_vertex(self, v: str) -> bool:
        """True iff the vertex projection is the zero matrix here, i.e. no
        basis path is based at v."""
        return not any(y.base_vertex == v for y in self.basis.elements)

    # -- relation checking ----------------------------------------------------

    def _compare(self, name: str, left: ExactMatrix, right: ExactMatrix,
                 margin: int, columns: Optional[Sequence[int]] = None
                 ) -> RelationCheck:
        cols = self.basis.interior(margin)
        if columns is not None:
            allowed = set(columns)
            cols = tuple(c for c in cols if c in allowed)
        bad: List[str] = []
        for c in cols:
            if left.column(c) != right.column(c):
                bad.append(
                    f"{name}: column {c}: {left.column(c)} != {right.column(c)}"
                )
        skipped = len(self.basis) - len(cols)
        return RelationCheck(name, len(cols), skipped, tuple(bad))

    def check_relations(self) -> RelationsReport:
        """Every defining relation family, verified entrywise on interior
        vectors: orthogonal vertex projections, multiplicativity over
        edges, the isometry identity, the range decompositions for small
        degrees, the group unitaries and their interaction with edges."""
        graph, action = self.graph, self.action
        items: List[RelationCheck] = []
        size = len(self.basis)

        verts = graph.vertices
        for v in verts:
            pv = self.matrix_s(graph.vertex_path(v))
            for w in verts:
                pw = self.matrix_s(graph.vertex_path(w))
                want = pv if v == w else ExactMatrix.zero(size)
                items.append(self._compare(
                    f"projections[{v},{w}]", pv.compose(pw), want, 0))

        unit_edges = [action.edge_path(e) for e in graph.edge_names]
        for e1 in unit_edges:
            for e2 in unit_edges:
                if e1.source_vertex != e2.range_vertex:
                    continue
                both = graph.compose(e1, e2)
                items.append(self._compare(
                    f"composition[{'.'.join(both.edges)}]",
                    self.matrix_s(e1).compose(self.matrix_s(e2)),
                    self.matrix_s(both), 2))

        for e1 in unit_edges:
            items.append(self._compare(
                f"isometry[{e1.edges[0]}]",
                self.matrix_s_star(e1).compose(self.matrix_s(e1)),
                self.matrix_s(graph.vertex_path(e1.source_vertex)), 2))

        for p in self._decomposition_degrees():
            margin = 2 * sum(p)
            for v in verts:
                parts = [
                    self.matrix_s(mu).compose(self.matrix_s_star(mu))
                    for mu in graph.paths_of_degree(v, p)
                ]
                items.append(self._compare(
                    f"decomposition[{v},{p}]",
                    ExactMatrix.sum_disjoint(size, parts),
                    self.matrix_s(graph.vertex_path(v)), margin))

        for g in action.group:
            for h in action.group:
                items.append(self._compare(
                    f"unitaries[{g},{h}]",
                    self.matrix_u(g).compose(self.matrix_u(h)),
                    self.matrix_u(action.group.mul(g, h)), 2))
            items.append(self._compare(
                f"unitary_inverse[{g}]",
                self.matrix_u(g).compose(self.matrix_u(action.group.inv(g))),
                ExactMatrix.identity(size), 2))

        for g in action.group:
            for e in graph.edge_names:
                lhs = self.matrix_u(g).compose(self.matrix_s(action.edge_path(e)))
                rhs = self.matrix_s(
                    action.edge_path(action.act_edge(g, e))
                ).compose(self.matrix_u(action.restrict_edge(g, e)))
                items.append(self._compare(
                    f"equivariance[{g},{e}]", lhs, rhs, 2))

        return RelationsReport(tuple(items), size)

    def _decomposition_degrees(self) -> List[Tuple[int, ...]]:
        k = self.graph.k
        degs = [dg.unit(k, c) for c in range(1, k + 1)]
        for i in range(1, k + 1):
            for j in range(i, k + 1):
                degs.append(dg.add(dg.unit(k, i), dg.unit(k, j)))
        return degs

    def check_annihilation(self, relations, core: Sequence[str]
                           ) -> RelationsReport:
        """The twisted differences along core cycline pairs kill every
        interior vector based in the core: s_mu and angle * s_nu must agree
        column by column there."""
        core_set = set(core)
        items: List[RelationCheck] = []
        core_cols = [
            i for i, y in enumerate(self.basis.elements)
            if y.base_vertex in core_set
        ]
        for mu, nu, angle in relations:
            margin = max(sum(mu.degree), sum(nu.degree))
            items.append(self._compare(
                f"annihilate[{mu!r},{nu!r}]",
                self.matrix_s(mu),
                self.matrix_s(nu).scale(angle),
                margin, columns=core_cols))
        return RelationsReport(tuple(items), len(self.basis))
