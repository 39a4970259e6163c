"""Vertex-group presentations of k-graphs via spanning-tree contraction.

Generators are the edges outside a BFS spanning tree of the undirected
skeleton; tree edges die, and each factorization square contributes one
relator.  The abelianization is put in Smith normal form, which also yields
the universal abelian cocycle used by the essential-cocycle search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .cocycles import Cocycle
from .errors import Disconnected
from .groups import AbelianWithTorsion
from .morphisms import Morphism
from .presentation import KGraphPresentation

Word = Tuple[int, ...]  # signed 1-based generator indices


@dataclass(frozen=True)
class GroupPresentation:
    generators: Tuple[str, ...]  # non-tree edge ids
    relators: Tuple[Word, ...]

    @property
    def rank(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: Tuple[int, ...]  # each > 1, each dividing the next

    @property
    def trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def free_reduce(word: Sequence[int]) -> Word:
    out: List[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def spanning_tree(p: KGraphPresentation, base: Optional[str] = None,
                  require_all: bool = True
                  ) -> Tuple[str, Dict[str, Tuple[str, int]]]:
    """BFS tree from the lexicographically least vertex (or `base`).

    Returns (base, parent) where parent[v] = (edge id, direction): +1 when the
    tree edge has r = parent and s = v, -1 when it points the other way.
    Raises Disconnected when require_all is set and a vertex is unreachable;
    otherwise the tree spans only the base's component.
    """
    if base is None:
        base = p.vertices[0]
    parent: Dict[str, Tuple[str, int]] = {}
    seen = {base}
    frontier = [base]
    while frontier:
        nxt: List[str] = []
        for v in sorted(frontier):
            steps: List[Tuple[str, str, int]] = []
            for eid in p.edges_with_range(v):
                steps.append((p.edge(eid).src, eid, +1))
            for eid in p.edges_with_source(v):
                steps.append((p.edge(eid).rng, eid, -1))
            for w, eid, direction in sorted(steps):
                if w not in seen:
                    seen.add(w)
                    parent[w] = (eid, direction)
                    nxt.append(w)
        frontier = nxt
    if require_all and len(seen) != len(p.vertices):
        missing = sorted(set(p.vertices) - seen)
        raise Disconnected(f"vertices unreachable from {base}: {missing[:3]}")
    return base, parent


class TreeContraction:
    """Generator words for edges and morphisms once tree edges are collapsed.

    With component_only the contraction covers just the base's component;
    edges elsewhere contribute nothing.
    """

    def __init__(self, p: KGraphPresentation, base: Optional[str] = None,
                 component_only: bool = False):
        p.require_valid()
        self.p = p
        self.base, self.parent = spanning_tree(p, base,
                                               require_all=not component_only)
        self.component = {self.base} | set(self.parent)
        tree_edges = {eid for (eid, _) in self.parent.values()}
        self.generators: Tuple[str, ...] = tuple(
            e for e in sorted(p.edges)
            if e not in tree_edges and p.edge(e).rng in self.component)
        self._index = {e: i + 1 for i, e in enumerate(self.generators)}

    def edge_word(self, eid: str) -> Word:
        idx = self._index.get(eid)
        return (idx,) if idx is not None else ()

    def word_of(self, lam: Morphism) -> Word:
        return free_reduce([x for e in lam.word for x in self.edge_word(e)])

    def presentation(self) -> GroupPresentation:
        relators = []
        for (a, b), (bp, ap) in sorted(self.p.squares.items()):
            if self.p.edge(a).rng not in self.component:
                continue
            w = (self.edge_word(a) + self.edge_word(b)
                 + invert_word(self.edge_word(ap)) + invert_word(self.edge_word(bp)))
            w = free_reduce(w)
            if w:
                relators.append(w)
        return GroupPresentation(self.generators, tuple(relators))


def fundamental_group_presentation(p: KGraphPresentation, v: Optional[str] = None
                                   ) -> GroupPresentation:
    return TreeContraction(p, v).presentation()


# -- integer Smith normal form ---------------------------------------------


def smith_normal_form(rows: Sequence[Sequence[int]], cols: int
                      ) -> Tuple[List[List[int]], List[List[int]]]:
    """(D, V) with D = U*M*V diagonal and d_i | d_{i+1}.

    V records the column operations.  Viewing relators as rows spanning a
    subgroup of Z^cols, the quotient coordinates of the j-th standard
    generator are row j of V (taken mod d_i on the torsion columns).
    """
    m = [list(r) for r in rows]
    n_rows = len(m)
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_swap(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def col_add(i, j, c):
        for r in m:
            r[j] += c * r[i]
        for r in v:
            r[j] += c * r[i]

    def col_neg(i):
        for r in m:
            r[i] = -r[i]
        for r in v:
            r[i] = -r[i]

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]

    def row_add(i, j, c):
        m[j] = [a + c * b for a, b in zip(m[j], m[i])]

    t = 0
    while t < min(n_rows, cols):
        # pivot: smallest nonzero magnitude in the remaining block
        pivot = None
        for i in range(t, n_rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (pivot is None or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)
        if m[t][t] < 0:
            col_neg(t)
        dirty = False
        for i in range(t + 1, n_rows):
            q = m[i][t] // m[t][t]
            if q:
                row_add(t, i, -q)
            if m[i][t]:
                dirty = True
        for j in range(t + 1, cols):
            q = m[t][j] // m[t][t]
            if q:
                col_add(t, j, -q)
            if m[t][j]:
                dirty = True
        if dirty:
            continue
        # divisibility fix: m[t][t] must divide the rest of the block
        offender = None
        for i in range(t + 1, n_rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t] != 0:
                    offender = (i, j)
                    break
            if offender:
                break
        if offender:
            row_add(offender[0], t, 1)
            continue
        t += 1
    return m, v


def abelianized_invariants(gp: GroupPresentation) -> AbelianInvariants:
    g = gp.rank
    if g == 0:
        return AbelianInvariants(0, ())
    rows = []
    for rel in gp.relators:
        row = [0] * g
        for x in rel:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    if not rows:
        return AbelianInvariants(g, ())
    d, _ = smith_normal_form(rows, g)
    diag = [d[i][i] for i in range(min(len(d), g))]
    nonzero = [x for x in diag if x != 0]
    return AbelianInvariants(g - len(nonzero), tuple(x for x in nonzero if x > 1))


def abelian_invariants_of(p: KGraphPresentation) -> AbelianInvariants:
    """Direct sum of the vertex-group abelianizations over components."""
    from .morphisms import _undirected_components

    rank, torsion = 0, []
    for comp in _undirected_components(p):
        gp = TreeContraction(p, comp[0], component_only=True).presentation()
        inv = abelianized_invariants(gp)
        rank += inv.rank
        torsion.extend(inv.torsion)
    return AbelianInvariants(rank, tuple(sorted(torsion)))


def universal_abelian_cocycle(p: KGraphPresentation) -> Tuple[Cocycle, AbelianInvariants]:
    """Edges -> abelianized vertex group, tree edges to 0.

    Requires a connected presentation.  The cocycle respects squares because
    every relator maps to zero in the abelianization.
    """
    tc = TreeContraction(p)
    gp = tc.presentation()
    g = gp.rank
    rows = []
    for rel in gp.relators:
        row = [0] * g
        for x in rel:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    if g == 0:
        group = AbelianWithTorsion(0, ())
        labels = {e: () for e in p.edges}
        return Cocycle(group, labels, "abelianized"), AbelianInvariants(0, ())
    if not rows:
        rows = [[0] * g]
    d, v = smith_normal_form(rows, g)
    diag = [d[i][i] if i < len(d) else 0 for i in range(g)]
    tor_idx = [i for i, x in enumerate(diag) if x > 1]
    free_idx = [i for i, x in enumerate(diag) if x == 0] + list(range(len(diag), g))
    torsion = tuple(diag[i] for i in tor_idx)
    group = AbelianWithTorsion(len(free_idx), torsion)

    def element_of(gen_index: int):
        coords = v[gen_index]
        free = tuple(coords[i] for i in free_idx)
        tor = tuple(coords[i] % diag[i] for i in tor_idx)
        return free + tor

    labels: Dict[str, object] = {}
    for eid in p.edges:
        w = tc.edge_word(eid)
        labels[eid] = element_of(w[0] - 1) if w else group.identity()
    inv = AbelianInvariants(len(free_idx), torsion)
    return Cocycle(group, labels, "abelianized"), inv
