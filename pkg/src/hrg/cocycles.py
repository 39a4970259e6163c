"""Group-valued 1-cocycles on presentations, i.e. functors to a group.

A cocycle is determined by its edge labels; vertices map to the identity.
Functoriality against the square set is checked at construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import degrees as dg
from .degrees import Degree
from .errors import NonFunctorialCocycle
from .groups import FreeAbelianGroup, GroupHandle
from .morphisms import Morphism, morphisms
from .presentation import KGraphPresentation


@dataclass(frozen=True)
class Cocycle:
    group: GroupHandle
    labels: Dict[str, object]  # edge id -> group element
    name: str = "cocycle"

    def __call__(self, m) -> object:
        """Value on a Morphism or on a raw edge word."""
        word = m.word if isinstance(m, Morphism) else tuple(m)
        out = self.group.identity()
        for eid in word:
            out = self.group.mul(out, self.labels[eid])
        return out


def check_functorial(p: KGraphPresentation, c: Cocycle) -> None:
    missing = [e for e in p.edges if e not in c.labels]
    if missing:
        raise NonFunctorialCocycle(f"edges without labels: {missing[:3]}")
    g = c.group
    for (a, b), (bp, ap) in p.squares.items():
        lhs = g.mul(c.labels[a], c.labels[b])
        rhs = g.mul(c.labels[bp], c.labels[ap])
        if not g.eq(lhs, rhs):
            raise NonFunctorialCocycle(
                f"square {a}.{b} = {bp}.{ap} broken by labels of {c.name}")


def functorial_cocycle(p: KGraphPresentation, group: GroupHandle,
                       labels: Dict[str, object], name: str = "cocycle") -> Cocycle:
    c = Cocycle(group, dict(labels), name)
    check_functorial(p, c)
    return c


def degree_cocycle(p: KGraphPresentation) -> Cocycle:
    """The degree functor d, valued in Z^k."""
    g = FreeAbelianGroup(p.k)
    labels = {eid: g.generator(p.color(eid) - 1) for eid in p.edges}
    return Cocycle(g, labels, "degree")


def free_edge_cocycle(p: KGraphPresentation):
    """One distinct free generator per edge; functorial only for 1-graphs."""
    from .groups import FreeGroup

    gens = tuple(sorted(p.edges))
    g = FreeGroup(gens)
    labels = {eid: g.generator(eid) for eid in gens}
    return functorial_cocycle(p, g, labels, "free-edge")


@dataclass(frozen=True)
class InjectivityFailure:
    u: str
    v: str
    degree: Degree
    pair: Tuple[Morphism, Morphism]


def injectivity_on_homsets(p: KGraphPresentation, c: Cocycle, degree_bound: Degree
                           ) -> Optional[InjectivityFailure]:
    """First failure of injectivity of c paired with d on u Lambda^n v, n <= bound.

    Pairing with the degree cocycle separates morphisms of distinct degree for
    free, so only the per-degree finite checks remain and the bounded check is
    exact for injectivity on each u Lambda^n v with n <= bound.  Returns None
    when no violation is found.
    """
    p.require_valid()
    for n in dg.degrees_upto(degree_bound):
        for u in p.vertices:
            for v in p.vertices:
                seen: Dict[object, Morphism] = {}
                for lam in morphisms(p, u, v, n):
                    val = c(lam)
                    if val in seen and seen[val] != lam:
                        return InjectivityFailure(u, v, n, (seen[val], lam))
                    seen.setdefault(val, lam)
    return None


def essential_on_window(p: KGraphPresentation, c: Cocycle, degree_bound: Degree
                        ) -> Optional[InjectivityFailure]:
    """Injectivity of c alone on each u Lambda v, mixing degrees up to the bound."""
    p.require_valid()
    table: Dict[Tuple[str, str], Dict[object, Morphism]] = {}
    for n in dg.degrees_upto(degree_bound):
        for u in p.vertices:
            for v in p.vertices:
                seen = table.setdefault((u, v), {})
                for lam in morphisms(p, u, v, n):
                    val = c(lam)
                    if val in seen and seen[val] != lam:
                        return InjectivityFailure(u, v, n, (seen[val], lam))
                    seen.setdefault(val, lam)
    return None
