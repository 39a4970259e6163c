"""Color-preserving isomorphism of presentations via backtracking.

Needed wherever a round-trip is checked up to canonical relabeling (skew
quotients, action graphs vs monoidal graphs, pullback identities).  Intended
for fixture scale; pruning is by iterated degree refinement.
"""

from __future__ import annotations

from itertools import permutations
from typing import Dict, List, Optional, Tuple

from .presentation import KGraphPresentation


def _signatures(p: KGraphPresentation, rounds: int = 3) -> Dict[str, tuple]:
    sig = {
        v: tuple((len(p.edges_with_range(v, c)), len(p.edges_with_source(v, c)))
                 for c in range(1, p.k + 1))
        for v in p.vertices
    }
    for _ in range(rounds):
        nxt = {}
        for v in p.vertices:
            neigh = []
            for c in range(1, p.k + 1):
                neigh.append(tuple(sorted(sig[p.edge(e).src] for e in p.edges_with_range(v, c))))
                neigh.append(tuple(sorted(sig[p.edge(e).rng] for e in p.edges_with_source(v, c))))
            nxt[v] = (sig[v], tuple(neigh))
        sig = nxt
    return sig


def find_isomorphism(p: KGraphPresentation, q: KGraphPresentation
                     ) -> Optional[Tuple[Dict[str, str], Dict[str, str]]]:
    """(vertex map, edge map) realizing p ~ q, or None."""
    if (p.k != q.k or len(p.vertices) != len(q.vertices)
            or len(p.edges) != len(q.edges) or len(p.squares) != len(q.squares)):
        return None
    sp, sq = _signatures(p), _signatures(q)
    if sorted(sp.values()) != sorted(sq.values()):
        return None
    order = sorted(p.vertices, key=lambda v: (sp[v], v))
    candidates = {v: sorted(w for w in q.vertices if sq[w] == sp[v]) for v in p.vertices}

    vmap: Dict[str, str] = {}
    used = set()

    def assign_vertices(i: int):
        if i == len(order):
            yield dict(vmap)
            return
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            vmap[v] = w
            used.add(w)
            yield from assign_vertices(i + 1)
            used.discard(w)
            del vmap[v]

    for vm in assign_vertices(0):
        em = _match_edges(p, q, vm)
        if em is not None:
            return vm, em
    return None


def _match_edges(p: KGraphPresentation, q: KGraphPresentation,
                 vm: Dict[str, str]) -> Optional[Dict[str, str]]:
    classes: List[Tuple[List[str], List[str]]] = []
    by_key_q: Dict[tuple, List[str]] = {}
    for e in q.edges.values():
        by_key_q.setdefault((e.color, e.rng, e.src), []).append(e.id)
    by_key_p: Dict[tuple, List[str]] = {}
    for e in p.edges.values():
        by_key_p.setdefault((e.color, vm[e.rng], vm[e.src]), []).append(e.id)
    if set(by_key_p) != set(by_key_q):
        return None
    for key in sorted(by_key_p):
        a, b = sorted(by_key_p[key]), sorted(by_key_q[key])
        if len(a) != len(b):
            return None
        classes.append((a, b))

    em: Dict[str, str] = {}

    def squares_ok_so_far() -> bool:
        for (x, y), (yp, xp) in p.squares.items():
            if x in em and y in em:
                tgt = q.squares.get((em[x], em[y]))
                if tgt is None:
                    return False
                typ, txp = tgt
                if yp in em and em[yp] != typ:
                    return False
                if xp in em and em[xp] != txp:
                    return False
        return True

    def assign_class(i: int) -> bool:
        if i == len(classes):
            return True
        srcs, tgts = classes[i]
        for perm in permutations(tgts):
            for a, b in zip(srcs, perm):
                em[a] = b
            if squares_ok_so_far() and assign_class(i + 1):
                return True
            for a in srcs:
                del em[a]
        return False

    return dict(em) if assign_class(0) else None


def isomorphic(p: KGraphPresentation, q: KGraphPresentation) -> bool:
    return find_isomorphism(p, q) is not None
