"""Path arithmetic on validated presentations.

Morphisms are stored in canonical form: the edge word has nondecreasing colors
left to right.  The factorization property of a validated presentation makes
that representative unique, so equality of morphisms is tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import degrees as dg
from .degrees import Degree
from .errors import DegreeOutOfRange, NotComposable
from .presentation import KGraphPresentation


@dataclass(frozen=True)
class Morphism:
    rng: str
    src: str
    word: Tuple[str, ...]
    degree: Degree

    @property
    def is_vertex(self) -> bool:
        return not self.word

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"<{self.rng}>"
        return "<" + "*".join(self.word) + ">"


def vertex_morphism(p: KGraphPresentation, v: str) -> Morphism:
    if v not in set(p.vertices):
        raise NotComposable(f"undeclared vertex {v!r}")
    return Morphism(v, v, (), dg.zero(p.k))


def _word_degree(p: KGraphPresentation, word: Sequence[str]) -> Degree:
    return dg.degree_of_colors(p.k, (p.color(e) for e in word))


def canonical_word(p: KGraphPresentation, word: Sequence[str]) -> Tuple[str, ...]:
    """Sort colors to nondecreasing order by repeatedly applying square swaps.

    Each swap removes one color inversion, so this terminates; on a validated
    presentation the result is independent of swap order.
    """
    w = list(word)
    for e in w:
        if e not in p.edges:
            raise NotComposable(f"unknown edge {e!r}")
    if not p.is_composable_word(w):
        raise NotComposable(f"word {tuple(word)} is not composable")
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if p.color(w[i]) > p.color(w[i + 1]):
                w[i], w[i + 1] = p.square_inverse(w[i], w[i + 1])
                changed = True
    return tuple(w)


def morphism_from_word(p: KGraphPresentation, word: Sequence[str]) -> Morphism:
    if not word:
        raise NotComposable("empty word needs a vertex; use vertex_morphism")
    w = canonical_word(p, word)
    return Morphism(p.edge(w[0]).rng, p.edge(w[-1]).src, w, _word_degree(p, w))


def canonical_form(p: KGraphPresentation, word: Sequence[str]) -> Morphism:
    """Spec-facing alias: canonical morphism of an arbitrary composable word."""
    return morphism_from_word(p, word)


def compose(p: KGraphPresentation, mu: Morphism, nu: Morphism) -> Morphism:
    if mu.src != nu.rng:
        raise NotComposable(f"s({mu!r}) = {mu.src} != {nu.rng} = r({nu!r})")
    if mu.is_vertex and nu.is_vertex:
        return mu
    word = mu.word + nu.word
    w = canonical_word(p, word)
    rng = mu.rng
    src = nu.src
    return Morphism(rng, src, w, dg.add(mu.degree, nu.degree))


def _peel_prefix(p: KGraphPresentation, word: Tuple[str, ...], m: Degree
                 ) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Split a canonical word as (prefix of degree m, rest), both canonical.

    Peeling the leftmost color-c edge to the front uses forward square swaps
    only; the remainder keeps a nondecreasing color sequence, so it stays
    canonical without re-sorting.
    """
    prefix: List[str] = []
    rest = list(word)
    for color in range(1, p.k + 1):
        for _ in range(m[color - 1]):
            idx = next(i for i, e in enumerate(rest) if p.color(e) == color)
            for i in range(idx - 1, -1, -1):
                rest[i], rest[i + 1] = p.square(rest[i], rest[i + 1])
            prefix.append(rest.pop(0))
    return tuple(prefix), tuple(rest)


def segment(p: KGraphPresentation, lam: Morphism, m: Degree, n: Degree) -> Morphism:
    """The unique middle factor lam(m, n) for 0 <= m <= n <= d(lam)."""
    z = dg.zero(p.k)
    if not (dg.leq(z, m) and dg.leq(m, n) and dg.leq(n, lam.degree)):
        raise DegreeOutOfRange(f"need 0 <= {m} <= {n} <= {lam.degree}")
    _, rest = _peel_prefix(p, lam.word, m)
    mid_word, post = _peel_prefix(p, tuple(rest), dg.sub(n, m))
    if mid_word:
        return Morphism(p.edge(mid_word[0]).rng, p.edge(mid_word[-1]).src,
                        mid_word, dg.sub(n, m))
    # degree-0 middle: locate the vertex lam(m)
    if post:
        return vertex_morphism(p, p.edge(post[0]).rng)
    if rest:
        return vertex_morphism(p, p.edge(rest[0]).rng)
    return vertex_morphism(p, lam.src)


def factorize(p: KGraphPresentation, lam: Morphism, m: Degree
              ) -> Tuple[Morphism, Morphism]:
    """The unique (mu, nu) with compose(mu, nu) = lam and d(mu) = m."""
    z = dg.zero(p.k)
    if not (dg.leq(z, m) and dg.leq(m, lam.degree)):
        raise DegreeOutOfRange(f"need 0 <= {m} <= {lam.degree}")
    pre, rest = _peel_prefix(p, lam.word, m)
    if pre:
        mu = Morphism(p.edge(pre[0]).rng, p.edge(pre[-1]).src, pre, m)
    else:
        mu = vertex_morphism(p, lam.rng)
    if rest:
        nu = Morphism(p.edge(rest[0]).rng, p.edge(rest[-1]).src,
                      tuple(rest), dg.sub(lam.degree, m))
    else:
        nu = vertex_morphism(p, lam.src)
    return mu, nu


def morphisms(p: KGraphPresentation, u: str, v: str, n: Degree) -> List[Morphism]:
    """Exhaustive enumeration of u Lambda^n v in deterministic (id-lex) order."""
    p.require_valid()
    words: List[Tuple[str, ...]] = []

    def extend(vertex: str, color: int, remaining: Tuple[int, ...], acc: List[str]) -> None:
        if color > p.k:
            if vertex == v:
                words.append(tuple(acc))
            return
        if remaining[color - 1] == 0:
            extend(vertex, color + 1, remaining, acc)
            return
        left = list(remaining)
        left[color - 1] -= 1
        for eid in p.edges_with_range(vertex, color):
            acc.append(eid)
            extend(p.edge(eid).src, color, tuple(left), acc)
            acc.pop()

    extend(u, 1, tuple(n), [])
    if n == dg.zero(p.k):
        return [vertex_morphism(p, u)] if u == v else []
    return [Morphism(u, v, w, n) for w in words]


def all_morphisms_from(p: KGraphPresentation, u: str, max_total: Optional[int] = None
                       ) -> Iterator[Morphism]:
    """All morphisms with range u, enumerating canonical words directly.

    Canonical words have nondecreasing colors, so the DFS carries the minimum
    color still allowed.  Terminates iff the color-sorted path space is finite
    (e.g. acyclic skeleton) or max_total is given.
    """
    p.require_valid()

    def rec(vertex: str, min_color: int, acc: List[str]) -> Iterator[Morphism]:
        if acc:
            yield Morphism(u, vertex, tuple(acc), _word_degree(p, acc))
        if max_total is not None and len(acc) >= max_total:
            return
        for color in range(min_color, p.k + 1):
            for eid in p.edges_with_range(vertex, color):
                acc.append(eid)
                yield from rec(p.edge(eid).src, color, acc)
                acc.pop()

    yield vertex_morphism(p, u)
    yield from rec(u, 1, [])


def adjacency_matrices(p: KGraphPresentation) -> Tuple[Tuple[str, ...], List[np.ndarray]]:
    """(vertex order, [M_1..M_k]) with (M_i)[u,v] = |u Lambda^{eps_i} v|."""
    p.require_valid()
    verts = p.vertices
    index = {v: i for i, v in enumerate(verts)}
    mats = []
    for color in range(1, p.k + 1):
        m = np.zeros((len(verts), len(verts)), dtype=np.int64)
        for eid in p.edges_of_color(color):
            e = p.edge(eid)
            m[index[e.rng], index[e.src]] += 1
        mats.append(m)
    return verts, mats


def _has_directed_cycle(p: KGraphPresentation) -> Optional[str]:
    """Vertex on a directed cycle (following r -> s), or None."""
    WHITE, GRAY, BLACK = 0, 1, 2
    state = {v: WHITE for v in p.vertices}
    for root in p.vertices:
        if state[root] != WHITE:
            continue
        stack: List[Tuple[str, Iterator[str]]] = [
            (root, iter(p.edges_with_range(root)))]
        state[root] = GRAY
        while stack:
            v, it = stack[-1]
            advanced = False
            for eid in it:
                w = p.edge(eid).src
                if state[w] == GRAY:
                    return w
                if state[w] == WHITE:
                    state[w] = GRAY
                    stack.append((w, iter(p.edges_with_range(w))))
                    advanced = True
                    break
            if not advanced:
                state[v] = BLACK
                stack.pop()
    return None


@dataclass(frozen=True)
class ConnectivityReport:
    components: Tuple[Tuple[str, ...], ...]
    strongly_connected: bool
    singly_connected: str  # "yes" | "no" | "yes-within-window"
    singly_witness: Optional[Tuple[Morphism, Morphism]]
    rigid: bool

    def to_dict(self) -> dict:
        return {
            "components": [list(c) for c in self.components],
            "strongly_connected": self.strongly_connected,
            "singly_connected": self.singly_connected,
            "singly_witness": (None if self.singly_witness is None else
                               [list(self.singly_witness[0].word) or [self.singly_witness[0].rng],
                                list(self.singly_witness[1].word) or [self.singly_witness[1].rng]]),
            "rigid": self.rigid,
        }


def _undirected_components(p: KGraphPresentation) -> Tuple[Tuple[str, ...], ...]:
    parent = {v: v for v in p.vertices}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in p.edges.values():
        ra, rb = find(e.src), find(e.rng)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[str, List[str]] = {}
    for v in p.vertices:
        groups.setdefault(find(v), []).append(v)
    return tuple(tuple(sorted(g)) for _, g in sorted(groups.items()))


def _reachable(p: KGraphPresentation, u: str) -> set:
    seen = {u}
    stack = [u]
    while stack:
        v = stack.pop()
        for eid in p.edges_with_range(v):
            w = p.edge(eid).src
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _singly_connected(p: KGraphPresentation
                      ) -> Tuple[str, Optional[Tuple[Morphism, Morphism]]]:
    # cheapest witness first: two parallel edges, scanned color then id order
    by_ends: Dict[Tuple[str, str], str] = {}
    for color in range(1, p.k + 1):
        for eid in p.edges_of_color(color):
            e = p.edge(eid)
            key = (e.rng, e.src)
            if key in by_ends:
                a, b = by_ends[key], eid
                return "no", (morphism_from_word(p, [a]), morphism_from_word(p, [b]))
            by_ends[key] = eid
    cyc = _has_directed_cycle(p)
    if cyc is not None:
        # identity at cyc and any cycle through cyc are distinct parallel morphisms
        lam = _some_cycle_through(p, cyc)
        return "no", (vertex_morphism(p, cyc), lam)
    seen: Dict[Tuple[str, str], Morphism] = {}
    for u in p.vertices:
        for lam in all_morphisms_from(p, u):
            key = (lam.rng, lam.src)
            if key in seen and seen[key] != lam:
                return "no", (seen[key], lam)
            seen.setdefault(key, lam)
    verdict = "yes-within-window" if p.meta.get("window") else "yes"
    return verdict, None


def _some_cycle_through(p: KGraphPresentation, v: str) -> Morphism:
    # BFS over edge words from v back to v (exists: v lies on a cycle)
    frontier: List[Tuple[str, Tuple[str, ...]]] = [(v, ())]
    seen = set()
    while frontier:
        nxt: List[Tuple[str, Tuple[str, ...]]] = []
        for vert, word in frontier:
            for eid in p.edges_with_range(vert):
                w = p.edge(eid).src
                new = word + (eid,)
                if w == v:
                    return morphism_from_word(p, new)
                if w not in seen:
                    seen.add(w)
                    nxt.append((w, new))
        frontier = nxt
    raise AssertionError("no cycle through reported vertex")


def _rigid(p: KGraphPresentation) -> bool:
    """Uniqueness of e', f' with e'f = f'e and of e'', f'' with ef'' = fe''."""
    for eid in p.edges:
        e = p.edge(eid)
        for fid in p.edges:
            f = p.edge(fid)
            if f.color == e.color:
                continue
            count1 = 0
            for ep in p.edges_of_color(e.color):
                if p.edge(ep).src != f.rng:
                    continue
                lhs = morphism_from_word(p, [ep, fid])
                for fp in p.edges_of_color(f.color):
                    if p.edge(fp).src != e.rng:
                        continue
                    if lhs == morphism_from_word(p, [fp, eid]):
                        count1 += 1
            count2 = 0
            for fpp in p.edges_of_color(f.color):
                if p.edge(fpp).rng != e.src:
                    continue
                lhs = morphism_from_word(p, [eid, fpp])
                for epp in p.edges_of_color(e.color):
                    if p.edge(epp).rng != f.src:
                        continue
                    if lhs == morphism_from_word(p, [fid, epp]):
                        count2 += 1
            if count1 != 1 or count2 != 1:
                return False
    return True


def connectivity_report(p: KGraphPresentation) -> ConnectivityReport:
    p.require_valid()
    comps = _undirected_components(p)
    strongly = all(len(_reachable(p, u)) == len(p.vertices) for u in p.vertices)
    singly, witness = _singly_connected(p)
    return ConnectivityReport(
        components=comps,
        strongly_connected=strongly,
        singly_connected=singly,
        singly_witness=witness,
        rigid=_rigid(p),
    )
