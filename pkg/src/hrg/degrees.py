"""Degree vectors: elements of the additive monoid N^k, stored as int tuples."""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Tuple

Degree = Tuple[int, ...]


def zero(k: int) -> Degree:
    return (0,) * k


def ones(k: int) -> Degree:
    return (1,) * k


def basis(k: int, color: int) -> Degree:
    """Standard generator for a 1-based color index."""
    if not 1 <= color <= k:
        raise ValueError(f"color {color} outside 1..{k}")
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def add(m: Degree, n: Degree) -> Degree:
    return tuple(a + b for a, b in zip(m, n, strict=True))


def sub(m: Degree, n: Degree) -> Degree:
    return tuple(a - b for a, b in zip(m, n, strict=True))


def leq(m: Degree, n: Degree) -> bool:
    """Componentwise partial order."""
    return all(a <= b for a, b in zip(m, n, strict=True))


def is_nonneg(m: Degree) -> bool:
    return all(a >= 0 for a in m)


def total(m: Degree) -> int:
    return sum(m)


def scale(c: int, m: Degree) -> Degree:
    return tuple(c * a for a in m)


def degrees_upto(bound: Degree) -> Iterator[Degree]:
    """All n with 0 <= n <= bound, in lexicographic order."""
    return product(*(range(b + 1) for b in bound))


def degree_of_colors(k: int, colors: Iterable[int]) -> Degree:
    counts = [0] * k
    for c in colors:
        counts[c - 1] += 1
    return tuple(counts)
