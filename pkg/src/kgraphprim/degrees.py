"""Degree vectors.

Degrees are plain tuples of non-negative ints of length k; the helpers
here implement the componentwise partial order and its lattice operations.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Tuple

Degree = Tuple[int, ...]


def zero(k: int) -> Degree:
    return (0,) * k


def unit(k: int, color: int) -> Degree:
    """Unit degree for a 1-based color."""
    if not 1 <= color <= k:
        raise ValueError(f"color {color} out of range 1..{k}")
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def add(p: Degree, q: Degree) -> Degree:
    return tuple(a + b for a, b in zip(p, q))


def sub(p: Degree, q: Degree) -> Degree:
    return tuple(a - b for a, b in zip(p, q))


def le(p: Degree, q: Degree) -> bool:
    return all(a <= b for a, b in zip(p, q))


def meet(p: Degree, q: Degree) -> Degree:
    return tuple(min(a, b) for a, b in zip(p, q))


def join(p: Degree, q: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(p, q))


def total(p: Degree) -> int:
    return sum(p)


def is_nonnegative(p: Degree) -> bool:
    return all(a >= 0 for a in p)

def is_positive(p: Degree) -> bool:
    """Strictly positive in every coordinate."""
    return all(a > 0 for a in p)


def scale(m: int, p: Degree) -> Degree:
    return tuple(m * a for a in p)


def degrees_upto(bound: Degree) -> Iterator[Degree]:
    """All degrees 0 <= p <= bound, in lexicographic order."""
    return product(*(range(b + 1) for b in bound))


def check_length(p: Iterable[int], k: int) -> Degree:
    t = tuple(p)
    if len(t) != k:
        raise ValueError(f"degree {t} has length {len(t)}, expected {k}")
    return t
