"""Triangle data over a projective plane: a point-line bijection plus a
cyclically closed triple set encode the relations a_x a_y a_z = 1 of a
triangle group.

Axioms, checked exhaustively at construction:
  (T1) a pair (x, y) starts a triple iff y lies on the line of x;
  (T2) the triple set is closed under rotation;
  (T3) at most one completion z per pair (x, y).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Set, Tuple

from .errors import TriellaAxiomViolation, UnsupportedOrder
from .plane import ProjectivePlane, build_plane

Triple = Tuple[int, int, int]


@dataclass(frozen=True)
class Triella:
    plane: ProjectivePlane
    line_of: Dict[int, FrozenSet[int]]  # the point-line bijection
    triples: FrozenSet[Triple]

    def __post_init__(self):
        completion: Dict[Tuple[int, int], int] = {}
        for (x, y, z) in sorted(self.triples):
            if (x, y) in completion:
                raise TriellaAxiomViolation("T3", (x, y))
            completion[(x, y)] = z
        object.__setattr__(self, "_completion", completion)

    def complete(self, x: int, y: int) -> Optional[int]:
        """The unique z with (x, y, z) in the triple set, if any."""
        return self._completion.get((x, y))

    def validate(self) -> None:
        pts = set(self.plane.points)
        if set(self.line_of) != pts:
            raise TriellaAxiomViolation("lambda", "bijection domain mismatch")
        if {frozenset(l) for l in self.line_of.values()} != set(self.plane.lines):
            raise TriellaAxiomViolation("lambda", "bijection image mismatch")
        for t in self.triples:
            if not all(p in pts for p in t):
                raise TriellaAxiomViolation("T1", t)
        for x in pts:
            for y in pts:
                has = self.complete(x, y) is not None
                want = y in self.line_of[x]
                if has != want:
                    raise TriellaAxiomViolation("T1", (x, y))
        for t in self.triples:
            if (t[1], t[2], t[0]) not in self.triples:
                raise TriellaAxiomViolation("T2", t)


def build_triella(spec="A.1", plane: Optional[ProjectivePlane] = None,
                  line_of: Optional[Dict[int, FrozenSet[int]]] = None,
                  triples: Optional[Set[Triple]] = None) -> Triella:
    """Preset "A.1": order-2 plane with line(i) = {i+1, i+2, i+4} mod 7 and
    triples the rotation closure of (i, i+1, i+3).  Explicit data otherwise.
    """
    if spec == "A.1":
        plane = build_plane(2)
        line_of = {i: frozenset((i + d) % 7 for d in (1, 2, 4)) for i in range(7)}
        base = {(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)}
        triples = set()
        for (x, y, z) in base:
            triples |= {(x, y, z), (y, z, x), (z, x, y)}
    elif spec == "explicit":
        if plane is None or line_of is None or triples is None:
            raise UnsupportedOrder("explicit triella needs plane, line_of, triples")
    else:
        raise UnsupportedOrder(f"unknown triella spec {spec!r}")
    t = Triella(plane, dict(line_of), frozenset(triples))
    t.validate()
    return t
