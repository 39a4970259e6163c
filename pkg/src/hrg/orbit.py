"""Finite-window analysis of infinite-path orbit spaces.

Paths are caller-supplied streams of diagonal truncations; separation of two
orbits is searched along diagonal vertices via common upper bounds in the
reachability preorder (u <= w iff some morphism runs u -> w).  Verdicts are
window-relative: SeparatedAt carries a certificate (exhausted cones or the
unique tree path), NotSeparatedWithin carries the witnesses that blocked it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from . import degrees as dg
from .degrees import Degree
from .errors import (
    NotComposable,
    NotSinglyConnected,
    ShiftEquivalentDetected,
    WindowExhausted,
)
from .lazy import LazyKGraph
from .morphisms import (
    Morphism,
    all_morphisms_from,
    compose,
    connectivity_report,
    morphisms,
    segment,
    vertex_morphism,
)
from .presentation import KGraphPresentation


@dataclass(frozen=True)
class PathStream:
    """Deterministic generator of diagonal truncations x(0, n*1).

    truncation(n) returns the degree-(n*1) initial segment as a Morphism;
    successive truncations must extend one another (checked by consumers
    where it matters).
    """

    name: str
    truncation: Callable[[int], Morphism]

    def vertex(self, n: int) -> str:
        return self.truncation(n).src

    def range_vertex(self) -> str:
        return self.truncation(0).rng


def edge_chain_stream(name: str, vertex_fn: Callable[[int], str],
                      edge_fn: Callable[[int], str], k: int = 1) -> PathStream:
    """Symbolic 1-colored-per-step stream: vertex_fn(n) is x(n*1) and
    edge_fn(i) the i-th edge; no materialized window needed."""

    def trunc(n: int) -> Morphism:
        word = tuple(edge_fn(i) for i in range(n))
        return Morphism(vertex_fn(0), vertex_fn(n), word, (n,) * k)

    return PathStream(name, trunc)


# -- common upper bounds ---------------------------------------------------------


@dataclass(frozen=True)
class UpperBoundAnswer:
    vertex: Optional[str]
    exhausted: bool  # both forward cones fully enumerated inside the window


def _forward_layers(p: KGraphPresentation, u: str, radius: int
                    ) -> Tuple[List[Set[str]], bool]:
    seen = {u}
    layers = [ {u} ]
    frontier = [u]
    for _ in range(radius):
        nxt: List[str] = []
        for v in sorted(frontier):
            for eid in p.edges_with_range(v):
                w = p.edge(eid).src
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            return layers, True
        layers.append(set(nxt))
        frontier = nxt
    # exhausted only if one more step adds nothing
    for v in frontier:
        for eid in p.edges_with_range(v):
            if p.edge(eid).src not in seen:
                return layers, False
    return layers, True


def _tree_upper_bound(p: KGraphPresentation, u: str, v: str) -> UpperBoundAnswer:
    """On a tree skeleton the unique undirected u-v path decides everything:
    any common upper bound yields one on the path (the median), so scan it."""
    parent: Dict[str, Optional[Tuple[str, str, int]]] = {u: None}
    frontier = [u]
    while frontier and v not in parent:
        nxt = []
        for x in sorted(frontier):
            steps = [(p.edge(e).src, x, e, +1) for e in p.edges_with_range(x)]
            steps += [(p.edge(e).rng, x, e, -1) for e in p.edges_with_source(x)]
            for y, px, e, direction in sorted(steps):
                if y not in parent:
                    parent[y] = (px, e, direction)
                    nxt.append(y)
        frontier = nxt
    if v not in parent:
        return UpperBoundAnswer(None, True)  # different components: no bound
    path: List[Tuple[str, int]] = []  # (vertex, direction of edge into it)
    x = v
    verts = [v]
    dirs: List[int] = []
    while parent[x] is not None:
        px, e, direction = parent[x]
        dirs.append(direction)
        x = px
        verts.append(x)
    verts.reverse()  # u .. v
    dirs.reverse()  # dirs[i]: edge between verts[i], verts[i+1]; +1 = forward u->v
    # m = verts[t] is an upper bound iff all edges before t are forward and all
    # edges after t are backward (directed v -> m along the path)
    forward_prefix = [True]
    for d in dirs:
        forward_prefix.append(forward_prefix[-1] and d == +1)
    backward_suffix = [True]
    for d in reversed(dirs):
        backward_suffix.append(backward_suffix[-1] and d == -1)
    backward_suffix.reverse()
    for t, m in enumerate(verts):
        if forward_prefix[t] and backward_suffix[t]:
            return UpperBoundAnswer(m, True)
    return UpperBoundAnswer(None, True)


def _path_peak(steps: Sequence[Tuple[str, int]], u: str, v: str,
               endpoint_of: Callable[[int], str]) -> Optional[str]:
    """Peak criterion on an explicit undirected path: some vertex m on it with
    every step before m forward (range->source) and every step after m
    backward; m is then a common upper bound, and none exists otherwise."""
    dirs = [d for _, d in steps]
    n = len(dirs)
    forward_prefix = [True]
    for d in dirs:
        forward_prefix.append(forward_prefix[-1] and d == +1)
    backward_suffix = [True] * (n + 1)
    for i in range(n - 1, -1, -1):
        backward_suffix[i] = backward_suffix[i + 1] and dirs[i] == -1
    for t in range(n + 1):
        if forward_prefix[t] and backward_suffix[t]:
            return endpoint_of(t)
    return None


def common_upper_bound(g, u: str, v: str, radius: int = 8
                       ) -> UpperBoundAnswer:
    """First vertex w with u <= w and v <= w inside the window, by BFS layers.

    The exhausted flag is True when both forward cones were fully enumerated
    (or, on a certified tree skeleton, when the path criterion decided).
    """
    if u == v:
        return UpperBoundAnswer(u, True)
    if isinstance(g, LazyKGraph):
        if g.tree_skeleton and g.skeleton_path is not None:
            steps = g.skeleton_path(u, v)
            if steps is None:
                return UpperBoundAnswer(None, True)
            verts = _path_vertices(g, u, steps)
            m = _path_peak(steps, u, v, lambda t: verts[t])
            return UpperBoundAnswer(m, True)
        p = g.window(seed=u, radius=max(radius, 1) * 2)
    else:
        p = g
    if u not in p.vertices or v not in p.vertices:
        raise WindowExhausted(f"vertices {u!r}, {v!r} not both in window")
    if p.meta.get("tree_skeleton"):
        return _tree_upper_bound(p, u, v)
    layers_u, exh_u = _forward_layers(p, u, radius)
    layers_v, exh_v = _forward_layers(p, v, radius)
    cone_u = set().union(*layers_u)
    cone_v = set().union(*layers_v)
    common = cone_u & cone_v
    if common:
        # deterministic: least combined BFS depth, then vertex id
        def depth(layers, x):
            return next(i for i, layer in enumerate(layers) if x in layer)

        best = min(common, key=lambda x: (depth(layers_u, x) + depth(layers_v, x), x))
        return UpperBoundAnswer(best, exh_u and exh_v)
    return UpperBoundAnswer(None, exh_u and exh_v)


# -- separation ------------------------------------------------------------------


@dataclass(frozen=True)
class SeparationVerdict:
    kind: str  # "SeparatedAt" | "NotSeparatedWithin"
    n: int
    witnesses: Tuple[Tuple[int, str], ...] = ()  # (n, common upper bound)

    def to_dict(self) -> dict:
        return {"verdict": self.kind, "n": self.n,
                "witnesses": [{"n": n, "vertex": w} for n, w in self.witnesses]}


def _detect_shift_equivalence(x: PathStream, y: PathStream, n_max: int) -> bool:
    """Spot sigma^p x = sigma^q y within the window for small p, q.

    Equal shifts compare truncations directly; unequal shifts are compared by
    literal word slices, which is exact for the 1-colored streams fixtures use.
    """
    bound = min(n_max, 6)
    length = 3
    for pgap in range(bound + 1):
        for qgap in range(bound + 1):
            tx = x.truncation(pgap + length)
            ty = y.truncation(qgap + length)
            if pgap == qgap:
                if tx == ty and not tx.is_vertex:
                    return True
            elif len(set(tx.degree)) == 1 and len(tx.degree) == 1:
                if tx.word[pgap:] and tx.word[pgap:] == ty.word[qgap:]:
                    return True
    return False


def separation_test(g, x: PathStream, y: PathStream, n_max: int = 20,
                    radius: int = 8) -> SeparationVerdict:
    """Search n = 0..n_max for diagonal vertices with no common upper bound."""
    if _detect_shift_equivalence(x, y, n_max):
        raise ShiftEquivalentDetected(f"streams {x.name} and {y.name} share a tail")
    witnesses: List[Tuple[int, str]] = []
    for n in range(n_max + 1):
        ans = common_upper_bound(g, x.vertex(n), y.vertex(n), radius)
        if ans.vertex is None and ans.exhausted:
            return SeparationVerdict("SeparatedAt", n, tuple(witnesses))
        if ans.vertex is not None:
            witnesses.append((n, ans.vertex))
    return SeparationVerdict("NotSeparatedWithin", n_max, tuple(witnesses))


def _path_vertices(g: LazyKGraph, u: str, steps) -> List[str]:
    verts = [u]
    cur = u
    for eid, d in steps:
        nxt = None
        for c in range(1, g.k + 1):
            pool = g.edges_with_range(cur, c) if d == +1 else g.edges_with_source(cur, c)
            for e in pool:
                if e.id == eid:
                    nxt = e.src if d == +1 else e.rng
        if nxt is None:
            raise WindowExhausted(f"path step {eid} not incident to {cur}")
        verts.append(nxt)
        cur = nxt
    return verts


# -- fixture streams ---------------------------------------------------------------


def fixture_stream(g, spec: str) -> PathStream:
    """Named streams for the catalog graphs the CLI exposes.

    lambda-E-4.5: "e-ray", "f-ray", "z:N" (the tail hanging under w_{N,0}).
    tree-fixture: "p0", "p1" (constant branches), or "p:BITS" for a custom
    eventually-constant branch.
    """
    name = (g.meta or {}).get("name", "")
    if name == "lambda-E-4.5":
        if spec == "e-ray":
            return edge_chain_stream("e-ray", lambda n: f"u({n})", lambda i: f"e{i}")
        if spec == "f-ray":
            return edge_chain_stream("f-ray", lambda n: f"v({n})", lambda i: f"f{i}")
        if spec.startswith("z:"):
            m = int(spec.split(":", 1)[1])
            return edge_chain_stream(
                f"z:{m}", lambda n: f"w({m},{n})", lambda i: f"k({m},{i})")
        raise UnknownSpec(spec, name)
    if name == "tree-fixture":
        if spec in ("p0", "p1"):
            bit = spec[1]
            return edge_chain_stream(
                spec, lambda n: bit * n if n else "r", lambda i: "t" + bit * (i + 1))
        if spec.startswith("p:"):
            bits = spec.split(":", 1)[1]

            def vert(n: int) -> str:
                word = (bits + bits[-1] * max(0, n - len(bits)))[:n]
                return word if word else "r"

            return edge_chain_stream(spec, vert, lambda i: "t" + vert(i + 1))
        raise UnknownSpec(spec, name)
    info = (g.meta or {}).get("skew")
    if info is not None and spec.startswith("w:"):
        return skew_word_stream(g, spec.split(":", 1)[1])
    raise UnknownSpec(spec, name or "<unnamed>")


class UnknownSpec(KeyError):
    def __init__(self, spec, graph):
        super().__init__(f"no stream {spec!r} for graph {graph!r}")


def skew_word_stream(g: LazyKGraph, letters: str) -> PathStream:
    """Stream through a skew product of a bouquet: `letters` is a
    comma/space-separated sequence of base edge ids, followed forever by
    repeating its last letter."""
    info = g.meta["skew"]
    base, G, c = info.base, info.group, info.cocycle
    seq = [tok for tok in letters.replace(",", " ").split() if tok]
    if not seq:
        raise UnknownSpec(letters, "skew product")
    base_vertex = base.vertices[0]

    def letter(i: int) -> str:
        return seq[i] if i < len(seq) else seq[-1]

    def group_at(n: int):
        out = G.identity()
        for i in range(n):
            out = G.mul(out, c.labels[letter(i)])
        return out

    def vert(n: int) -> str:
        gname = G.label(group_at(n))
        vid = f"{gname}@{base_vertex}"
        info.vertex_pairs.setdefault(vid, (group_at(n), base_vertex))
        return vid

    def edge(i: int) -> str:
        gname = G.label(group_at(i))
        eid = f"{gname}@{letter(i)}"
        info.edge_pairs.setdefault(eid, (group_at(i), letter(i)))
        return eid

    return edge_chain_stream(f"w:{letters}", vert, edge, k=g.k)


# -- lower sets and diagonal subgraphs --------------------------------------------


def _require_singly_connected_window(p: KGraphPresentation) -> None:
    rep = connectivity_report(p)
    if rep.singly_connected == "no":
        raise NotSinglyConnected(f"witness: {rep.singly_witness}")


def path_lower_set(g, x: PathStream, radius: int = 6) -> Set[str]:
    """{v : v <= x(n*1) for some n <= radius}, with the filter axioms checked
    on the window: downward closure and common upper bounds for sampled pairs."""
    from .lazy import window_of

    host = g if isinstance(g, KGraphPresentation) else g.window(
        seed=x.range_vertex(), radius=3 * max(radius, 1))
    _require_singly_connected_window(host)
    anchors = [x.vertex(n) for n in range(radius + 1)]
    lower: Set[str] = set()
    frontier = list(dict.fromkeys(anchors))
    lower.update(frontier)
    while frontier:
        nxt = []
        for v in sorted(frontier):
            for eid in host.edges_with_source(v):
                w = host.edge(eid).rng
                if w not in lower:
                    lower.add(w)
                    nxt.append(w)
        frontier = nxt
    # axiom (b): downward closure within the window
    for v in list(lower):
        for eid in host.edges_with_source(v):
            assert host.edge(eid).rng in lower
    # axiom (a) on sampled pairs: some anchor x(n) dominates both, verified by
    # full-window forward reachability
    def forward_closure(a: str) -> Set[str]:
        seen = {a}
        stack = [a]
        while stack:
            w = stack.pop()
            for eid in host.edges_with_range(w):
                t = host.edge(eid).src
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    sample = sorted(lower)[: 10]
    closures = {a: forward_closure(a) for a in sample}
    for a in sample:
        for b in sample:
            assert any(x in closures[a] and x in closures[b] for x in anchors), (a, b)
    return lower


def diagonal_subgraphs(g, grading: Optional[Dict[str, Degree]] = None,
                       radius: int = 3
                       ) -> Tuple[KGraphPresentation, Optional[KGraphPresentation]]:
    """(the 1-graph of degree-1 morphisms, the sub-1-graph over f^{-1}(Z*1)).

    The second entry needs a grading f and keeps only vertices with f(v) a
    multiple of (1,...,1); returns None there when no grading is given.
    """
    from .lazy import window_of
    from .presentation import Edge

    host = window_of(g, radius=radius)
    one = dg.ones(host.k)

    def diag_edges(vertex_filter) -> List[Edge]:
        out = []
        for u in host.vertices:
            if not vertex_filter(u):
                continue
            for lam in morphisms_diag(host, u):
                if vertex_filter(lam.src):
                    out.append(Edge("d:" + ".".join(lam.word), 1, lam.src, lam.rng))
        return out

    def morphisms_diag(hostp, u):
        out = []
        for v in hostp.vertices:
            out.extend(morphisms(hostp, u, v, one))
        return out

    full = KGraphPresentation(
        1, host.vertices, diag_edges(lambda v: True), {},
        meta={"diagonal_of": host.meta.get("name", "graph"), "window": True})

    if grading is None:
        return full, None
    keep = {v for v, val in grading.items()
            if len(set(val)) == 1}
    if not keep:
        return full, None
    sub_edges = [e for e in diag_edges(lambda v: v in keep)]
    sub = KGraphPresentation(
        1, keep, sub_edges, {},
        meta={"diagonal_graded": True, "window": True})
    return full, sub


def shift_uniqueness_check(g, length: int = 2, radius: int = 3) -> Tuple[bool, Optional[tuple]]:
    """Windowed form of tail-uniqueness on singly connected graphs: truncated
    paths that start at the same vertex and share a tail segment (as a
    morphism) must have equal shifts and equal truncations.

    Returns (True, None) or (False, witness).
    """
    from .lazy import window_of

    host = window_of(g, radius=radius)
    _require_singly_connected_window(host)
    one = dg.ones(host.k)
    paths_by_range: Dict[str, List[Morphism]] = {}
    for u in host.vertices:
        acc: List[Morphism] = []
        for v in host.vertices:
            acc.extend(morphisms(host, u, v, dg.scale(length, one)))
        if acc:
            paths_by_range[u] = acc
    for u, paths in sorted(paths_by_range.items()):
        for p_shift in range(length):
            for q_shift in range(length):
                overlap = length - max(p_shift, q_shift)
                if overlap < 1:
                    continue
                buckets: Dict[tuple, List[Tuple[Morphism, int]]] = {}
                for lam in paths:
                    try:
                        t = segment(host, lam, dg.scale(p_shift, one),
                                    dg.scale(p_shift + overlap, one))
                        buckets.setdefault((t.rng, t.src, t.word), []).append((lam, p_shift))
                        if q_shift != p_shift:
                            t2 = segment(host, lam, dg.scale(q_shift, one),
                                         dg.scale(q_shift + overlap, one))
                            buckets.setdefault((t2.rng, t2.src, t2.word), []).append((lam, q_shift))
                    except NotComposable:
                        continue  # factorization square exits the window
                for key, members in buckets.items():
                    shifts = {s for _, s in members}
                    if len(shifts) > 1:
                        return False, (u, key, tuple(shifts))
                    prefixes = {segment(host, lam, dg.zero(host.k),
                                        dg.scale(s, one)).word
                                for lam, s in members}
                    if len(prefixes) > 1:
                        return False, (u, key, "prefixes differ")
    return True, None
