"""New k-graphs from old: products, pullbacks, skew/crossed products, action
graphs, monoidal 2-graphs, and Yang-Baxter graphs.

Every finite output is validated before it is returned.  Infinite outputs are
lazy graphs whose windows carry provenance metadata (base, cocycle,
projection) so later analyses can transfer questions to the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import degrees as dg
from .cocycles import Cocycle, check_functorial
from .degrees import Degree
from .errors import (
    AutomorphismsDontCommute,
    NotABijection,
    NotAnAutomorphism,
    NotASkewProduct,
    NotYangBaxter,
    WindowTooSmall,
)
from .groups import FiniteGroup, FreeGroup, GroupHandle
from .lazy import LazyKGraph
from .morphisms import Morphism, morphisms, segment, vertex_morphism
from .presentation import Edge, KGraphPresentation


# -- automorphisms -------------------------------------------------------------


@dataclass(frozen=True)
class Automorphism:
    """Vertex+edge bijection of a presentation, verified to preserve squares."""

    vertex_map: Dict[str, str]
    edge_map: Dict[str, str]

    def v(self, x: str) -> str:
        return self.vertex_map[x]

    def e(self, x: str) -> str:
        return self.edge_map[x]

    def inverse(self) -> "Automorphism":
        return Automorphism({b: a for a, b in self.vertex_map.items()},
                            {b: a for a, b in self.edge_map.items()})

    def after(self, other: "Automorphism") -> "Automorphism":
        """self o other."""
        return Automorphism({x: self.v(y) for x, y in other.vertex_map.items()},
                            {x: self.e(y) for x, y in other.edge_map.items()})

    def __eq__(self, other) -> bool:
        return (self.vertex_map == other.vertex_map
                and self.edge_map == other.edge_map)

    def __hash__(self):
        return hash((tuple(sorted(self.vertex_map.items())),
                     tuple(sorted(self.edge_map.items()))))


def identity_automorphism(p: KGraphPresentation) -> Automorphism:
    return Automorphism({v: v for v in p.vertices}, {e: e for e in p.edges})


def check_automorphism(p: KGraphPresentation, a: Automorphism) -> None:
    if sorted(a.vertex_map) != list(p.vertices) or sorted(a.vertex_map.values()) != list(p.vertices):
        raise NotAnAutomorphism("vertex map is not a bijection of the vertex set")
    eids = sorted(p.edges)
    if sorted(a.edge_map) != eids or sorted(a.edge_map.values()) != eids:
        raise NotAnAutomorphism("edge map is not a bijection of the edge set")
    for eid, e in p.edges.items():
        img = p.edge(a.e(eid))
        if img.color != e.color or img.src != a.v(e.src) or img.rng != a.v(e.rng):
            raise NotAnAutomorphism(f"edge {eid} maps to incompatible edge {img.id}")
    for (x, y), (yp, xp) in p.squares.items():
        want = p.squares.get((a.e(x), a.e(y)))
        if want != (a.e(yp), a.e(xp)):
            raise NotAnAutomorphism(f"square ({x},{y}) not preserved")


def loop_permutation_automorphism(p: KGraphPresentation, perm: Mapping[str, str]
                                  ) -> Automorphism:
    """Automorphism of a 1-vertex graph from a permutation of its loops."""
    emap = {e: perm.get(e, e) for e in p.edges}
    a = Automorphism({v: v for v in p.vertices}, emap)
    check_automorphism(p, a)
    return a


# -- cartesian product ---------------------------------------------------------


def _pair(u: str, v: str) -> str:
    return f"({u}|{v})"


def cartesian_product(p: KGraphPresentation, q: KGraphPresentation
                      ) -> KGraphPresentation:
    p.require_valid()
    q.require_valid()
    k = p.k + q.k
    verts = [_pair(u, v) for u in p.vertices for v in q.vertices]
    edges: List[Edge] = []
    for e in p.edges.values():
        for v in q.vertices:
            edges.append(Edge(_pair(e.id, v), e.color, _pair(e.src, v), _pair(e.rng, v)))
    for u in p.vertices:
        for f in q.edges.values():
            edges.append(Edge(_pair(u, f.id), p.k + f.color, _pair(u, f.src), _pair(u, f.rng)))
    squares: Dict[Tuple[str, str], Tuple[str, str]] = {}
    for (a, b), (bp, ap) in p.squares.items():
        for v in q.vertices:
            squares[(_pair(a, v), _pair(b, v))] = (_pair(bp, v), _pair(ap, v))
    for (a, b), (bp, ap) in q.squares.items():
        for u in p.vertices:
            squares[(_pair(u, a), _pair(u, b))] = (_pair(u, bp), _pair(u, ap))
    for e in p.edges.values():
        for f in q.edges.values():
            squares[(_pair(e.id, f.rng), _pair(e.src, f.id))] = (
                _pair(e.rng, f.id), _pair(e.id, f.src))
    out = KGraphPresentation(k, verts, edges, squares, meta={"product": True})
    out.require_valid()
    return out


# -- affine pullback -----------------------------------------------------------


def _morphism_id(lam: Morphism) -> str:
    return ".".join(lam.word) if lam.word else f"!{lam.rng}"


def _all_of_degree(p: KGraphPresentation, n: Degree) -> List[Morphism]:
    out: List[Morphism] = []
    for u in p.vertices:
        for v in p.vertices:
            out.extend(morphisms(p, u, v, n))
    return out


def affine_pullback(p: KGraphPresentation, matrix: Sequence[Sequence[int]],
                    offset: Degree) -> KGraphPresentation:
    """Pullback along the affine map n -> matrix@n + offset : N^ell -> N^k.

    `matrix` has k rows and ell columns, all entries nonnegative.
    """
    if isinstance(p, LazyKGraph):
        raise WindowTooSmall("affine pullback needs a finite presentation")
    p.require_valid()
    k = p.k
    rows = [tuple(int(x) for x in row) for row in matrix]
    if len(rows) != k or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError(f"matrix must have {k} rows of equal length")
    ell = len(rows[0])
    offset = tuple(offset)

    def f(n: Degree) -> Degree:
        return tuple(sum(rows[i][j] * n[j] for j in range(ell)) + offset[i]
                     for i in range(k))

    zero_l = dg.zero(ell)
    vert_morphs = {_morphism_id(m): m for m in _all_of_degree(p, offset)}
    verts = [f"p:{mid}" for mid in vert_morphs]

    def vertex_of(lam: Morphism) -> str:
        return f"p:{_morphism_id(lam)}"

    edges: List[Edge] = []
    edge_morphs: Dict[str, Morphism] = {}
    for j in range(1, ell + 1):
        degj = f(dg.basis(ell, j))
        for lam in _all_of_degree(p, degj):
            rng = segment(p, lam, dg.zero(k), offset)
            src = segment(p, lam, dg.sub(lam.degree, offset), lam.degree)
            eid = f"c{j}:{_morphism_id(lam)}"
            edges.append(Edge(eid, j, vertex_of(src), vertex_of(rng)))
            edge_morphs[eid] = lam

    def compose_pullback(lam: Morphism, mu: Morphism) -> Morphism:
        from .morphisms import compose as cmp
        head = segment(p, lam, dg.zero(k), dg.sub(lam.degree, offset))
        return cmp(p, head, mu)

    squares: Dict[Tuple[str, str], Tuple[str, str]] = {}
    for i in range(1, ell + 1):
        for j in range(i + 1, ell + 1):
            a_ej = f(dg.basis(ell, j))
            for ei_id in [e.id for e in edges if e.color == i]:
                lam = edge_morphs[ei_id]
                for ej_id in [e.id for e in edges if e.color == j]:
                    mu = edge_morphs[ej_id]
                    ei = next(e for e in edges if e.id == ei_id)
                    ej = next(e for e in edges if e.id == ej_id)
                    if ei.src != ej.rng:
                        continue
                    nu = compose_pullback(lam, mu)
                    aj = dg.sub(a_ej, offset)  # = matrix @ eps_j
                    j_prime = segment(p, nu, dg.zero(k), a_ej)
                    i_prime = segment(p, nu, aj, nu.degree)
                    squares[(ei_id, ej_id)] = (
                        f"c{j}:{_morphism_id(j_prime)}", f"c{i}:{_morphism_id(i_prime)}")
    out = KGraphPresentation(ell, verts, edges, squares, meta={"pullback": True})
    out.require_valid()
    return out


# -- skew products -------------------------------------------------------------


@dataclass
class SkewInfo:
    base: KGraphPresentation
    cocycle: Cocycle
    group: GroupHandle
    vertex_pairs: Dict[str, Tuple[object, str]]
    edge_pairs: Dict[str, Tuple[object, str]]

    def base_edge(self, eid: str) -> str:
        return self.edge_pairs[eid][1]


def _is_free_generator_cocycle(p: KGraphPresentation, c: Cocycle) -> bool:
    if not isinstance(c.group, FreeGroup) or p.k != 1 or len(p.vertices) != 1:
        return False
    vals = list(c.labels.values())
    gens = {(i + 1,) for i in range(len(c.group.generators))}
    return len(set(vals)) == len(vals) and set(vals) <= gens


def skew_product(p: KGraphPresentation, c: Cocycle, seed: Optional[object] = None,
                 radius: int = 3):
    """G x_c Lambda.  Finite G gives a full validated presentation; infinite G
    gives a lazy graph (windows of the requested radius around the seed)."""
    p.require_valid()
    check_functorial(p, c)
    G = c.group
    if seed is None:
        seed = G.identity()

    if isinstance(G, FiniteGroup):
        glabels = {g: G.label(g) for g in G.elements}
        verts = [f"{glabels[g]}@{v}" for g in G.elements for v in p.vertices]
        edges = []
        for g in G.elements:
            for e in p.edges.values():
                edges.append(Edge(f"{glabels[g]}@{e.id}", e.color,
                                  f"{glabels[G.mul(g, c.labels[e.id])]}@{e.src}",
                                  f"{glabels[g]}@{e.rng}"))
        squares = {}
        for g in G.elements:
            for (a, b), (bp, ap) in p.squares.items():
                ga = glabels[g]
                gb = glabels[G.mul(g, c.labels[a])]
                gbp = glabels[G.mul(g, c.labels[bp])]
                squares[(f"{ga}@{a}", f"{gb}@{b}")] = (f"{ga}@{bp}", f"{gbp}@{ap}")
        info_v = {f"{glabels[g]}@{v}": (g, v) for g in G.elements for v in p.vertices}
        info_e = {f"{glabels[g]}@{e}": (g, e) for g in G.elements for e in p.edges}
        out = KGraphPresentation(
            p.k, verts, edges, squares,
            meta={"skew": SkewInfo(p, c, G, info_v, info_e)})
        out.require_valid()
        return out

    vertex_pairs: Dict[str, Tuple[object, str]] = {}
    edge_pairs: Dict[str, Tuple[object, str]] = {}

    def vid(g, v: str) -> str:
        name = f"{G.label(g)}@{v}"
        vertex_pairs[name] = (g, v)
        return name

    def eid(g, e: str) -> str:
        name = f"{G.label(g)}@{e}"
        edge_pairs[name] = (g, e)
        return name

    def lift(g, e: Edge) -> Edge:
        return Edge(eid(g, e.id), e.color,
                    vid(G.mul(g, c.labels[e.id]), e.src), vid(g, e.rng))

    def with_range(v: str, color: int) -> Tuple[Edge, ...]:
        g, bv = vertex_pairs[v]
        return tuple(lift(g, p.edge(e)) for e in p.edges_with_range(bv, color))

    def with_source(v: str, color: int) -> Tuple[Edge, ...]:
        g, bv = vertex_pairs[v]
        out = []
        for e in p.edges_with_source(bv, color):
            h = G.mul(g, G.inv(c.labels[e]))
            out.append(lift(h, p.edge(e)))
        return tuple(out)

    def square_of(e: Edge, f: Edge) -> Tuple[Edge, Edge]:
        g, be = edge_pairs[e.id]
        _, bf = edge_pairs[f.id]
        bfp, bep = p.square(be, bf)
        fp = lift(g, p.edge(bfp))
        ep = lift(G.mul(g, c.labels[bfp]), p.edge(bep))
        return fp, ep

    info = SkewInfo(p, c, G, vertex_pairs, edge_pairs)
    base_vs = tuple(vid(seed, v) for v in p.vertices)
    is_tree = _is_free_generator_cocycle(p, c)
    skeleton_path = None
    if is_tree:
        edge_of_gen = {c.labels[e][0]: e for e in p.edges}

        def skeleton_path(u: str, v: str):
            g, bu = vertex_pairs[u]
            h, _ = vertex_pairs[v]
            steps = []
            cur = g
            for x in G.mul(G.inv(g), h):
                be = edge_of_gen[abs(x)]
                if x > 0:
                    eid(cur, be)
                    steps.append((f"{G.label(cur)}@{be}", +1))
                    cur = G.mul(cur, (x,))
                else:
                    cur = G.mul(cur, (x,))
                    eid(cur, be)
                    steps.append((f"{G.label(cur)}@{be}", -1))
                vid(cur, bu)
            return tuple(steps)

    return LazyKGraph(
        p.k, base_vs, with_range, with_source, square_of,
        meta={"skew": info, "default_radius": radius},
        tree_skeleton=is_tree, skeleton_path=skeleton_path)


def skew_quotient(g) -> KGraphPresentation:
    """Collapse the group coordinate of a skew product; returns the base."""
    meta = g.meta if hasattr(g, "meta") else {}
    info = meta.get("skew")
    if not isinstance(info, SkewInfo):
        raise NotASkewProduct("input was not built by skew_product")
    base = info.base

    # structural quotient of a window, as a cross-check that orbits relabel
    # bijectively onto the base
    if isinstance(g, LazyKGraph):
        window = g.window(radius=2)
    else:
        window = g
    verts = {info.vertex_pairs[v][1] for v in window.vertices}
    edges = {}
    for e in window.edges.values():
        _, be = info.edge_pairs[e.id]
        edges[be] = base.edge(be)
    if verts - set(base.vertices) or set(edges) - set(base.edges):
        raise NotASkewProduct("window does not project into the base")
    return base


# -- crossed products ----------------------------------------------------------


def crossed_product(p: KGraphPresentation, alphas: Sequence[Automorphism]
                    ) -> KGraphPresentation:
    """Lambda x_alpha N^ell for ell commuting automorphisms.

    The vertex set stays Lambda^0, so the presentation is finite: each new
    color j contributes one translation edge per vertex, v <- alpha_j^{-1}(v).
    """
    p.require_valid()
    for a in alphas:
        check_automorphism(p, a)
    ell = len(alphas)
    for i in range(ell):
        for j in range(i + 1, ell):
            if alphas[i].after(alphas[j]) != alphas[j].after(alphas[i]):
                raise AutomorphismsDontCommute(f"automorphisms {i} and {j}")
    k = p.k
    inv = [a.inverse() for a in alphas]

    def tid(j: int, v: str) -> str:
        return f"t{j}@{v}"

    edges = [Edge(e.id, e.color, e.src, e.rng) for e in p.edges.values()]
    for j in range(1, ell + 1):
        for v in p.vertices:
            edges.append(Edge(tid(j, v), k + j, inv[j - 1].v(v), v))
    squares: Dict[Tuple[str, str], Tuple[str, str]] = dict(p.squares)
    for j in range(1, ell + 1):
        aj_inv = inv[j - 1]
        for e in p.edges.values():
            squares[(e.id, tid(j, e.src))] = (tid(j, e.rng), aj_inv.e(e.id))
    for i in range(1, ell + 1):
        for j in range(i + 1, ell + 1):
            for v in p.vertices:
                squares[(tid(i, v), tid(j, inv[i - 1].v(v)))] = (
                    tid(j, v), tid(i, inv[j - 1].v(v)))
    out = KGraphPresentation(k + ell, p.vertices, edges, squares,
                             meta={"crossed": True})
    out.require_valid()
    return out


# -- action graphs -------------------------------------------------------------


def action_graph(n: int, p: KGraphPresentation,
                 alpha: Mapping[int, Automorphism]) -> KGraphPresentation:
    """(k+1)-graph built from n commuting-free letters acting by automorphisms.

    alpha maps letter index (1..n) to an automorphism of p; letters become
    color-1 edges and the colors of p shift up by one.
    """
    p.require_valid()
    if sorted(alpha) != list(range(1, n + 1)):
        raise NotAnAutomorphism(f"need automorphisms for letters 1..{n}")
    for a in alpha.values():
        check_automorphism(p, a)

    def aid(i: int, v: str) -> str:
        return f"a{i}@{v}"

    edges = [Edge(e.id, e.color + 1, e.src, e.rng) for e in p.edges.values()]
    for i in range(1, n + 1):
        for v in p.vertices:
            edges.append(Edge(aid(i, v), 1, v, alpha[i].v(v)))
    squares: Dict[Tuple[str, str], Tuple[str, str]] = {}
    for (a, b), (bp, ap) in p.squares.items():
        squares[(a, b)] = (bp, ap)
    for i in range(1, n + 1):
        ai = alpha[i]
        for e in p.edges.values():
            squares[(aid(i, e.rng), e.id)] = (ai.e(e.id), aid(i, e.src))
    out = KGraphPresentation(p.k + 1, p.vertices, edges, squares,
                             meta={"action_graph": True})
    out.require_valid()
    return out


def color_restriction(p: KGraphPresentation, colors: Sequence[int]
                      ) -> KGraphPresentation:
    """Sub-k'-graph on a subset of colors, renumbered 1..len(colors)."""
    colors = sorted(colors)
    renum = {c: i + 1 for i, c in enumerate(colors)}
    keep = {e.id for e in p.edges.values() if e.color in renum}
    edges = [Edge(e.id, renum[e.color], e.src, e.rng)
             for e in p.edges.values() if e.id in keep]
    squares = {k: v for k, v in p.squares.items()
               if k[0] in keep and k[1] in keep}
    return KGraphPresentation(len(colors), p.vertices, edges, squares,
                              meta={"colors_of": list(colors)})


# -- monoidal 2-graphs and Yang-Baxter graphs ----------------------------------


def monoidal_2graph(theta: Mapping[Tuple[int, int], Tuple[int, int]],
                    n1: int, n2: int) -> KGraphPresentation:
    """One-vertex 2-graph with e_i f_j = f_{j'} e_{i'} for theta(i,j)=(j',i')."""
    domain = {(i, j) for i in range(1, n1 + 1) for j in range(1, n2 + 1)}
    codomain = {(j, i) for i in range(1, n1 + 1) for j in range(1, n2 + 1)}
    if set(theta) != domain or set(theta.values()) != codomain:
        raise NotABijection("theta must biject [n1]x[n2] onto [n2]x[n1]")
    edges = [Edge(f"e{i}", 1, "v", "v") for i in range(1, n1 + 1)]
    edges += [Edge(f"f{j}", 2, "v", "v") for j in range(1, n2 + 1)]
    squares = {
        (f"e{i}", f"f{j}"): (f"f{jp}", f"e{ip}")
        for (i, j), (jp, ip) in theta.items()
    }
    out = KGraphPresentation(2, ["v"], edges, squares, meta={"monoidal": True})
    out.require_valid()
    return out


@dataclass(frozen=True)
class YangBaxterMap:
    elements: Tuple[str, ...]
    mapping: Dict[Tuple[str, str], Tuple[str, str]]

    def check(self) -> None:
        pairs = {(a, b) for a in self.elements for b in self.elements}
        if set(self.mapping) != pairs or set(self.mapping.values()) != pairs:
            raise NotABijection("R must biject X^2 onto X^2")
        R = self.mapping

        def r12(t):
            a, b = R[(t[0], t[1])]
            return (a, b, t[2])

        def r23(t):
            a, b = R[(t[1], t[2])]
            return (t[0], a, b)

        for t in iproduct(self.elements, repeat=3):
            if r12(r23(r12(t))) != r23(r12(r23(t))):
                raise NotYangBaxter(t)

    @staticmethod
    def from_permutation(elements: Sequence[str], sigma: Mapping[str, str]
                         ) -> "YangBaxterMap":
        """Permutation-type solution R(e, f) = (sigma(f), e)."""
        els = tuple(elements)
        mapping = {(e, f): (sigma[f], e) for e in els for f in els}
        return YangBaxterMap(els, mapping)


def yang_baxter_graph(k: int, R: YangBaxterMap) -> KGraphPresentation:
    """k-graph on one vertex with edge sets {i} x X and squares from R."""
    if k < 2:
        raise ValueError("need k >= 2")
    R.check()

    def eid(i: int, e: str) -> str:
        return f"{i}:{e}"

    edges = [Edge(eid(i, e), i, "v", "v") for i in range(1, k + 1) for e in R.elements]
    squares = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            for (e, f), (fp, ep) in R.mapping.items():
                squares[(eid(i, e), eid(j, f))] = (eid(j, fp), eid(i, ep))
    out = KGraphPresentation(k, ["v"], edges, squares, meta={"yang_baxter": True})
    out.require_valid()
    return out
