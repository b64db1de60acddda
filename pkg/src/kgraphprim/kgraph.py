"""Finite k-colored graphs with factorization squares.

A graph of rank k is described by a skeleton (vertices plus colored edges)
together with a table of factorization squares: for every composable pair
written with the lower color first, the unique rewriting of the same
morphism with the higher color first.  Validation checks that the table is
a bijection between the two reading orders and, for k >= 3, that the three
pairwise rewritings around any tricolored triple commute.  Once validated,
every morphism has a unique normal form whose edges are grouped by
nondecreasing color, and all path arithmetic (composition, factorization,
enumeration by degree) is done on normal forms.

Edges point from their source vertex to their range vertex; a path
``e1 e2 ... en`` requires ``s(e_i) == r(e_(i+1))``, so enumeration "from" a
vertex v walks backwards through sources.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import degrees as dg
from .errors import (
    CubeConditionFailed,
    NotComposable,
    NotSourceFree,
    SquareNotBijective,
)


@dataclass(frozen=True)
class Edge:
    name: str
    color: int
    range_vertex: str
    source_vertex: str


@dataclass(frozen=True)
class Skeleton:
    """Raw input data: vertex ids and colored edges, not yet validated."""

    k: int
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]


# (e, f) with color(e) < color(f) and s(e) == r(f)  ->  (f2, e2) with
# color(f2) == color(f), color(e2) == color(e) and  e f == f2 e2.
Squares = Dict[Tuple[str, str], Tuple[str, str]]


@dataclass(frozen=True)
class Path:
    """A morphism in normal form (edges grouped by nondecreasing color)."""

    range_vertex: str
    edges: Tuple[str, ...]
    degree: Tuple[int, ...]
    source_vertex: str

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def __repr__(self):
        if not self.edges:
            return f"<{self.range_vertex}>"
        return f"<{self.range_vertex}:{'.'.join(self.edges)}>"


class KGraph:
    """A validated k-graph.  Immutable; all operations are pure.

    Construct via :func:`validate_kgraph`, never directly.
    """

    def __init__(self, skeleton: Skeleton, squares: Squares, _token=None):
        if _token is not _CONSTRUCT_TOKEN:
            raise TypeError("use validate_kgraph() to build a KGraph")
        self.k = skeleton.k
        self.vertices: Tuple[str, ...] = tuple(sorted(skeleton.vertices))
        self.edge_map: Dict[str, Edge] = {e.name: e for e in skeleton.edges}
        self.edge_names: Tuple[str, ...] = tuple(sorted(self.edge_map))
        # edges with range v of a given color, and edges with source v
        self._in: Dict[Tuple[str, int], Tuple[str, ...]] = {}
        self._out: Dict[str, Tuple[str, ...]] = {}
        for v in self.vertices:
            for c in range(1, self.k + 1):
                self._in[(v, c)] = tuple(
                    n for n in self.edge_names
                    if self.edge_map[n].range_vertex == v and self.edge_map[n].color == c
                )
            self._out[v] = tuple(
                n for n in self.edge_names if self.edge_map[n].source_vertex == v
            )
        self._asc: Squares = dict(squares)
        self._desc: Squares = {v: k for k, v in self._asc.items()}
        self._path_cache: Dict[Tuple[str, Tuple[int, ...]], Tuple[Path, ...]] = {}

    # -- basic accessors ------------------------------------------------

    def color(self, edge_name: str) -> int:
        return self.edge_map[edge_name].color

    def r(self, edge_name: str) -> str:
        return self.edge_map[edge_name].range_vertex

    def s(self, edge_name: str) -> str:
        return self.edge_map[edge_name].source_vertex

    def edges_into(self, v: str, color: int) -> Tuple[str, ...]:
        """Edges with range v of the given color (nonempty by validation)."""
        return self._in[(v, color)]

    def edges_out_of(self, v: str) -> Tuple[str, ...]:
        """Edges with source v, all colors."""
        return self._out[v]

    @property
    def zero_degree(self) -> Tuple[int, ...]:
        return dg.zero(self.k)

    # -- words and normal forms ------------------------------------------

    def _swap(self, x: str, y: str) -> Tuple[str, str]:
        """Rewrite the 2-letter word x y into the other color order."""
        cx, cy = self.color(x), self.color(y)
        if cx < cy:
            return self._asc[(x, y)]
        if cx > cy:
            return self._desc[(x, y)]
        raise ValueError("swap requires distinct colors")

    def _check_word(self, range_vertex: str, word: Sequence[str]):
        cur = range_vertex
        for n in word:
            e = self.edge_map.get(n)
            if e is None:
                raise NotComposable(f"unknown edge {n!r}")
            if e.range_vertex != cur:
                raise NotComposable(
                    f"edge {n!r} has range {e.range_vertex!r}, expected {cur!r}"
                )
            cur = e.source_vertex
        return cur

    def word_degree(self, word: Sequence[str]) -> Tuple[int, ...]:
        deg = [0] * self.k
        for n in word:
            deg[self.color(n) - 1] += 1
        return tuple(deg)

    def make_path(self, range_vertex: str, word: Iterable[str] = ()) -> Path:
        """Normal form of an arbitrary composable word."""
        word = list(word)
        self._check_word(range_vertex, word)
        # bubble sort by color; each adjacent transposition goes through
        # the square table, so the morphism is unchanged
        changed = True
        while changed:
            changed = False
            for i in range(len(word) - 1):
                if self.color(word[i]) > self.color(word[i + 1]):
                    word[i], word[i + 1] = self._swap(word[i], word[i + 1])
                    changed = True
                    break
        source = self._check_word(range_vertex, word)
        return Path(range_vertex, tuple(word), self.word_degree(word), source)

    def vertex_path(self, v: str) -> Path:
        if v not in self._out and v not in self.vertices:
            raise NotComposable(f"unknown vertex {v!r}")
        return Path(v, (), self.zero_degree, v)

    def compose(self, mu: Path, nu: Path) -> Path:
        if mu.source_vertex != nu.range_vertex:
            raise NotComposable(
                f"s({mu!r}) = {mu.source_vertex!r} != r({nu!r}) = {nu.range_vertex!r}"
            )
        return self.make_path(mu.range_vertex, mu.edges + nu.edges)

    def compose_all(self, paths: Sequence[Path]) -> Path:
        if not paths:
            raise ValueError("compose_all needs at least one path")
        out = paths[0]
        for p in paths[1:]:
            out = self.compose(out, p)
        return out

    def _pull_color(self, range_vertex: str, word: List[str], color: int) -> str:
        """Rewrite so the first letter has the given color and pop it."""
        t = next(i for i, n in enumerate(word) if self.color(n) == color)
        while t > 0:
            word[t - 1], word[t] = self._swap(word[t - 1], word[t])
            t -= 1
        return word.pop(0)

    def factor(self, path: Path, p: Tuple[int, ...]) -> Tuple[Path, Path]:
        """The unique (alpha, beta) with path == alpha beta and d(alpha) == p."""
        p = dg.check_length(p, self.k)
        if not (dg.is_nonnegative(p) and dg.le(p, path.degree)):
            raise ValueError(f"split {p} not between 0 and {path.degree}")
        word = list(path.edges)
        head: List[str] = []
        for color in range(1, self.k + 1):
            for _ in range(p[color - 1]):
                head.append(self._pull_color(path.range_vertex, word, color))
        alpha = Path(
            path.range_vertex,
            tuple(head),
            p,
            self.s(head[-1]) if head else path.range_vertex,
        )
        beta = self.make_path(alpha.source_vertex, word)
        return alpha, beta

    def prefix(self, path: Path, p: Tuple[int, ...]) -> Path:
        return self.factor(path, p)[0]

    def power(self, cycle: Path, m: int) -> Path:
        if cycle.range_vertex != cycle.source_vertex:
            raise NotComposable("power requires a cycle")
        out = self.vertex_path(cycle.range_vertex)
        for _ in range(m):
            out = self.compose(out, cycle)
        return out

    # -- enumeration -----------------------------------------------------

    def paths_of_degree(self, v: str, p: Tuple[int, ...]) -> Tuple[Path, ...]:
        """All normal-form paths with range v and degree p, sorted."""
        p = dg.check_length(p, self.k)
        key = (v, p)
        if key not in self._path_cache:
            words: List[Tuple[str, Tuple[str, ...]]] = [(v, ())]
            for color in range(1, self.k + 1):
                for _ in range(p[color - 1]):
                    words = [
                        (self.s(e), w + (e,))
                        for (cur, w) in words
                        for e in self.edges_into(cur, color)
                    ]
            self._path_cache[key] = tuple(
                Path(v, w, p, src) for (src, w) in sorted(words, key=lambda t: t[1])
            )
        return self._path_cache[key]

    def paths_upto(self, v: str, bound: Tuple[int, ...]) -> List[Path]:
        """All paths with range v and degree <= bound, degree-lex order."""
        out: List[Path] = []
        for p in dg.degrees_upto(bound):
            out.extend(self.paths_of_degree(v, p))
        return out

    def all_paths_upto(self, bound: Tuple[int, ...]) -> List[Path]:
        out: List[Path] = []
        for v in self.vertices:
            out.extend(self.paths_upto(v, bound))
        return out


_CONSTRUCT_TOKEN = object()


def validate_kgraph(skeleton: Skeleton, squares: Squares) -> KGraph:
    """Check skeleton and square data and return the validated graph.

    Raises NotSourceFree, SquareNotBijective or CubeConditionFailed naming
    the first violated condition.
    """
    if skeleton.k < 1:
        raise ValueError("rank k must be >= 1")
    if not skeleton.vertices:
        raise ValueError("graph needs at least one vertex")
    vset = set(skeleton.vertices)
    if len(vset) != len(skeleton.vertices):
        raise ValueError("duplicate vertex ids")
    emap: Dict[str, Edge] = {}
    for e in skeleton.edges:
        if e.name in emap:
            raise ValueError(f"duplicate edge id {e.name!r}")
        if not 1 <= e.color <= skeleton.k:
            raise ValueError(f"edge {e.name!r} has color {e.color}, rank is {skeleton.k}")
        if e.range_vertex not in vset or e.source_vertex not in vset:
            raise ValueError(f"edge {e.name!r} references unknown vertex")
        emap[e.name] = e

    for v in sorted(vset):
        for c in range(1, skeleton.k + 1):
            if not any(e.range_vertex == v and e.color == c for e in emap.values()):
                raise NotSourceFree(v, c)

    # squares must be defined exactly on composable ascending mixed pairs,
    # land on well-formed descending pairs, and be bijective
    ascending = {
        (a.name, b.name)
        for a in emap.values()
        for b in emap.values()
        if a.color < b.color and a.source_vertex == b.range_vertex
    }
    descending = {
        (b.name, a.name)
        for b in emap.values()
        for a in emap.values()
        if b.color > a.color and b.source_vertex == a.range_vertex
    }
    for pair in sorted(ascending - set(squares)):
        raise SquareNotBijective(pair, "missing square for composable pair")
    for pair in sorted(set(squares) - ascending):
        raise SquareNotBijective(pair, "key is not a composable ascending pair")
    seen: Dict[Tuple[str, str], Tuple[str, str]] = {}
    for (e, f), (f2, e2) in sorted(squares.items()):
        if f2 not in emap or e2 not in emap:
            raise SquareNotBijective((e, f), f"image ({f2}, {e2}) uses unknown edges")
        a, b, b2, a2 = emap[e], emap[f], emap[f2], emap[e2]
        if (b2.color, a2.color) != (b.color, a.color):
            raise SquareNotBijective((e, f), "image does not preserve colors")
        if b2.source_vertex != a2.range_vertex:
            raise SquareNotBijective((e, f), "image pair is not composable")
        if b2.range_vertex != a.range_vertex or a2.source_vertex != b.source_vertex:
            raise SquareNotBijective((e, f), "image pair moves the endpoints")
        if (f2, e2) in seen:
            raise SquareNotBijective((e, f), f"image also assigned to {seen[(f2, e2)]}")
        seen[(f2, e2)] = (e, f)
    for pair in sorted(descending - set(seen)):
        raise SquareNotBijective(pair, "descending pair not reached by any square")

    graph = KGraph(
        Skeleton(skeleton.k, tuple(skeleton.vertices), tuple(skeleton.edges)),
        dict(squares),
        _token=_CONSTRUCT_TOKEN,
    )

    if skeleton.k >= 3:
        _check_cubes(graph)
    return graph


def _check_cubes(graph: KGraph):
    """Local confluence on tricolored descending triples (the cube condition).

    Overlapping redexes of the color-sorting rewrite system occur exactly on
    words x y z with color(x) > color(y) > color(z); rewriting the left pair
    first must agree with rewriting the right pair first.
    """
    names = graph.edge_names
    for x in names:
        for y in names:
            if graph.color(x) <= graph.color(y) or graph.s(x) != graph.r(y):
                continue
            for z in names:
                if graph.color(y) <= graph.color(z) or graph.s(y) != graph.r(z):
                    continue
                v = graph.r(x)
                left = _normalize_after(graph, v, [x, y, z], first=0)
                right = _normalize_after(graph, v, [x, y, z], first=1)
                if left != right:
                    raise CubeConditionFailed((x, y, z))


def _normalize_after(graph: KGraph, range_vertex: str, word: List[str], first: int):
    word = list(word)
    word[first], word[first + 1] = graph._swap(word[first], word[first + 1])
    return graph.make_path(range_vertex, word).edges
