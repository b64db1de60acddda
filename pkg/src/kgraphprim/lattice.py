"""Periodicity subgroups of Z^k and their rational characters.

A lattice is canonicalized by the row-style Hermite normal form of its
generators; Smith normal form on that basis supplies an adapted basis of
Z^k in which membership tests, character evaluation and extension to all
of Z^k become componentwise arithmetic.  Everything is exact: angles are
Fractions read modulo 1, so characters are the torsion (rational) points
of the dual torus and closures of the supported descriptor sets are
computed by finite group arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import NotInLattice, UnsupportedDescriptor

Vec = Tuple[int, ...]


def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def row_hnf(rows: Iterable[Sequence[int]], k: int) -> Tuple[Vec, ...]:
    """Hermite normal form (row lattice): echelon, positive pivots,
    entries above each pivot reduced into [0, pivot)."""
    work = [list(r) for r in rows if any(r)]
    for r in work:
        if len(r) != k:
            raise ValueError(f"generator {r} has length {len(r)}, expected {k}")
    rank = 0
    for col in range(k):
        while True:
            nz = [i for i in range(rank, len(work)) if work[i][col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(work[i][col]))
            i0, i1 = nz[0], nz[1]
            q = work[i1][col] // work[i0][col]
            work[i1] = [a - q * b for a, b in zip(work[i1], work[i0])]
        nz = [i for i in range(rank, len(work)) if work[i][col]]
        if not nz:
            continue
        work[rank], work[nz[0]] = work[nz[0]], work[rank]
        if work[rank][col] < 0:
            work[rank] = [-a for a in work[rank]]
        for i in range(rank):
            q = work[i][col] // work[rank][col]
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[rank])]
        rank += 1
    return tuple(tuple(r) for r in work[:rank])


def smith_normal_form(basis: Sequence[Sequence[int]], k: int):
    """U, D, V with U * basis * V == D diagonal, d1 | d2 | ..., di > 0.

    The basis rows must be independent (true for an HNF basis).
    """
    r = len(basis)
    a = [list(row) for row in basis]
    u = _identity(r)
    v = _identity(k)

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    for t in range(r):
        while True:
            entries = [
                (abs(a[i][j]), i, j)
                for i in range(t, r) for j in range(t, k) if a[i][j]
            ]
            if not entries:
                raise ValueError("basis rows are not independent")
            _, pi, pj = min(entries)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    row_op(i, t, a[i][t] // a[t][t])
                    dirty = dirty or bool(a[i][t])
            for j in range(t + 1, k):
                if a[t][j]:
                    col_op(j, t, a[t][j] // a[t][t])
                    dirty = dirty or bool(a[t][j])
            if dirty:
                continue
            if any(a[i][t] for i in range(t + 1, r)) or any(
                a[t][j] for j in range(t + 1, k)
            ):
                continue
            # divisibility: a[t][t] must divide the remaining block
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, k):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    d = [a[i][i] for i in range(r)]
    return u, d, v


def _mat_mul(m, n):
    return [
        [sum(m[i][t] * n[t][j] for t in range(len(n))) for j in range(len(n[0]))]
        for i in range(len(m))
    ]


class PeriodicityLattice:
    """Subgroup of Z^k spanned by degree-difference vectors."""

    def __init__(self, k: int, generators: Iterable[Sequence[int]]):
        self.k = k
        self.generators: Tuple[Vec, ...] = tuple(tuple(g) for g in generators)
        self.hnf: Tuple[Vec, ...] = row_hnf(self.generators, k)
        self.rank = len(self.hnf)
        if self.rank:
            u, d, v = smith_normal_form(self.hnf, k)
            self._v = v
            self.invariants: Tuple[int, ...] = tuple(d)
            ub = _mat_mul(u, [list(r) for r in self.hnf])
            self.smith_basis: Tuple[Vec, ...] = tuple(tuple(r) for r in ub)
        else:
            self._v = _identity(k)
            self.invariants = ()
            self.smith_basis = ()

    def __eq__(self, other):
        return isinstance(other, PeriodicityLattice) and (
            self.k, self.hnf) == (other.k, other.hnf)

    def __hash__(self):
        return hash((self.k, self.hnf))

    def __repr__(self):
        return f"PeriodicityLattice(k={self.k}, hnf={list(self.hnf)})"

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def _adapted_coordinates(self, vec: Vec) -> List[int]:
        vec = tuple(vec)
        if len(vec) != self.k:
            raise ValueError(f"vector {vec} has length {len(vec)}, expected {self.k}")
        return [sum(vec[t] * self._v[t][j] for t in range(self.k)) for j in range(self.k)]

    def contains(self, vec: Vec) -> bool:
        a = self._adapted_coordinates(vec)
        for i in range(self.rank):
            if a[i] % self.invariants[i]:
                return False
        return not any(a[self.rank:])

    def coefficients(self, vec: Vec) -> Tuple[int, ...]:
        """vec as an integer combination of the Smith basis rows."""
        a = self._adapted_coordinates(vec)
        if any(a[self.rank:]) or any(
            a[i] % self.invariants[i] for i in range(self.rank)
        ):
            raise NotInLattice(f"{tuple(vec)} is not in the lattice")
        return tuple(a[i] // self.invariants[i] for i in range(self.rank))


def per_lattice(k: int, differences: Iterable[Sequence[int]]) -> PeriodicityLattice:
    return PeriodicityLattice(k, differences)


def _norm1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class RationalCharacter:
    """Character of a lattice: one angle in [0, 1) per Smith basis vector."""

    lattice: PeriodicityLattice
    angles: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.angles) != self.lattice.rank:
            raise ValueError(
                f"{len(self.angles)} angles for a rank-{self.lattice.rank} lattice"
            )
        object.__setattr__(
            self, "angles", tuple(_norm1(Fraction(a)) for a in self.angles)
        )

    def __repr__(self):
        return "chi(" + (":".join(str(a) for a in self.angles) or "-") + ")"


def trivial_character(lattice: PeriodicityLattice) -> RationalCharacter:
    return RationalCharacter(lattice, (Fraction(0),) * lattice.rank)


def evaluate(char: RationalCharacter, vec: Vec) -> Fraction:
    """char(vec) as an angle in [0, 1); vec must lie in the lattice."""
    coeffs = char.lattice.coefficients(vec)
    return _norm1(sum((c * a for c, a in zip(coeffs, char.angles)), Fraction(0)))


def add_characters(f: RationalCharacter, g: RationalCharacter) -> RationalCharacter:
    if f.lattice != g.lattice:
        raise ValueError("cannot add characters of different lattices")
    return RationalCharacter(
        f.lattice, tuple(_norm1(a + b) for a, b in zip(f.angles, g.angles))
    )


@dataclass(frozen=True)
class ExtendedCharacter:
    """Character of all of Z^k: one angle per standard basis vector."""

    k: int
    angles: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.angles) != self.k:
            raise ValueError(f"{len(self.angles)} angles for Z^{self.k}")
        object.__setattr__(
            self, "angles", tuple(_norm1(Fraction(a)) for a in self.angles)
        )


def evaluate_extended(char: ExtendedCharacter, vec: Sequence[int]) -> Fraction:
    if len(vec) != char.k:
        raise ValueError(f"vector {vec} has length {len(vec)}, expected {char.k}")
    return _norm1(sum((c * a for c, a in zip(vec, char.angles)), Fraction(0)))


def extend_character(char: RationalCharacter) -> ExtendedCharacter:
    """Some character of Z^k restricting to char on its lattice.

    In the adapted basis the i-th Smith generator is d_i times a basis
    vector of Z^k, so assigning angle theta_i / d_i there (and 0 beyond
    the rank) restricts correctly; rational angles make this always
    possible.  The restriction property is re-verified on every Smith
    basis vector.
    """
    lat = char.lattice
    adapted = [a / d for a, d in zip(char.angles, lat.invariants)]
    adapted += [Fraction(0)] * (lat.k - lat.rank)
    std = tuple(
        _norm1(sum((lat._v[j][i] * adapted[i] for i in range(lat.k)), Fraction(0)))
        for j in range(lat.k)
    )
    out = ExtendedCharacter(lat.k, std)
    for g, theta in zip(lat.smith_basis, char.angles):
        if evaluate_extended(out, g) != theta:
            raise AssertionError("extension failed to restrict correctly")
    return out


@dataclass(frozen=True)
class CharacterSet:
    """Descriptor for a set of characters: finite list, finitely generated
    subgroup (both closed, being finite sets of torsion points), or the
    full dual."""

    kind: str  # "finite" | "subgroup" | "full"
    members: Tuple[RationalCharacter, ...] = ()

    def __post_init__(self):
        if self.kind not in ("finite", "subgroup", "full"):
            raise UnsupportedDescriptor(f"unknown descriptor kind {self.kind!r}")
        if self.kind != "full" and not self.members:
            raise UnsupportedDescriptor(f"{self.kind} descriptor needs members")


def full_set() -> CharacterSet:
    return CharacterSet("full")


def finite_set(chars: Sequence[RationalCharacter]) -> CharacterSet:
    return CharacterSet("finite", tuple(chars))


def subgroup_set(gens: Sequence[RationalCharacter]) -> CharacterSet:
    return CharacterSet("subgroup", tuple(gens))


def closure_contains(descriptor: CharacterSet, f0: RationalCharacter) -> bool:
    """Is f0 in the closure of the described set?

    Finite sets and finitely generated rational subgroups are closed in
    the compact dual, so this is plain membership; the full dual contains
    everything.
    """
    if descriptor.kind == "full":
        return True
    for m in descriptor.members:
        if m.lattice != f0.lattice:
            raise UnsupportedDescriptor(
                "descriptor characters live on a different lattice than the query"
            )
    if descriptor.kind == "finite":
        return any(m.angles == f0.angles for m in descriptor.members)
    # subgroup generated by rational points of the torus: finite, close
    # under addition starting from the identity
    rank = f0.lattice.rank
    zero = (Fraction(0),) * rank
    group = {zero}
    frontier = [zero]
    gens = [m.angles for m in descriptor.members]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple(_norm1(a + b) for a, b in zip(cur, g))
            if nxt not in group:
                group.add(nxt)
                frontier.append(nxt)
    return f0.angles in group
