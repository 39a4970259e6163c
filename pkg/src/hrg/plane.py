"""Finite projective planes of small order, with exhaustive axiom checks.

Order q = 2 is built from the cyclic difference set {1, 2, 4} mod 7 so that
line(i) = {i+1, i+2, i+4}; q = 3 comes from the field plane PG(2, 3).
Every constructed plane is validated: q^2+q+1 points and lines, unique joins
and meets, a quadrilateral, and q+1 points per line.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Tuple

from .errors import UnsupportedOrder


@dataclass(frozen=True)
class ProjectivePlane:
    q: int
    points: Tuple[int, ...]
    lines: Tuple[FrozenSet[int], ...]

    def line_through(self, x: int, y: int) -> FrozenSet[int]:
        if x == y:
            raise ValueError("need two distinct points")
        for line in self.lines:
            if x in line and y in line:
                return line
        raise ValueError(f"no line through {x}, {y}")

    def validate(self) -> None:
        n = self.q * self.q + self.q + 1
        if len(self.points) != n or len(self.lines) != n:
            raise ValueError(f"need {n} points and lines")
        pset = set(self.points)
        for line in self.lines:
            if not line <= pset:
                raise ValueError("line contains undeclared point")
            if len(line) != self.q + 1:
                raise ValueError(f"line {sorted(line)} has {len(line)} points, "
                                 f"need {self.q + 1}")
        for x, y in combinations(self.points, 2):
            through = [l for l in self.lines if x in l and y in l]
            if len(through) != 1:
                raise ValueError(f"points {x},{y} lie on {len(through)} lines")
        for l1, l2 in combinations(self.lines, 2):
            meet = l1 & l2
            if len(meet) != 1:
                raise ValueError(f"lines meet in {sorted(meet)}")
        for quad in combinations(self.points, 4):
            if all(len(set(quad) & line) <= 2 for line in self.lines):
                return
        raise ValueError("no quadrilateral: degenerate plane")


def build_plane(q: int) -> ProjectivePlane:
    if q == 2:
        points = tuple(range(7))
        lines = tuple(frozenset((i + d) % 7 for d in (1, 2, 4)) for i in range(7))
        plane = ProjectivePlane(2, points, lines)
    elif q == 3:
        plane = _field_plane(3)
    else:
        raise UnsupportedOrder(f"supported orders: 2, 3 (got {q})")
    plane.validate()
    return plane


def _field_plane(q: int) -> ProjectivePlane:
    """PG(2, q) for prime q: points are normalized nonzero vectors of F_q^3."""
    vecs = [v for v in product(range(q), repeat=3) if any(v)]
    reps: List[Tuple[int, int, int]] = []
    seen = set()
    for v in vecs:
        if v in seen:
            continue
        cls = {tuple((c * x) % q for x in v) for c in range(1, q)}
        seen |= cls
        reps.append(min(cls))
    reps.sort()
    index = {v: i for i, v in enumerate(reps)}
    lines = []
    for a in reps:  # line = {x : a.x = 0}
        pts = frozenset(index[v] for v in reps
                        if sum(x * y for x, y in zip(a, v)) % q == 0)
        lines.append(pts)
    return ProjectivePlane(q, tuple(range(len(reps))), tuple(lines))
