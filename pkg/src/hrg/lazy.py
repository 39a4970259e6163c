"""Deterministic on-demand graphs for constructions whose vertex set is infinite.

A LazyKGraph answers local queries (edges at a vertex, per color and
direction) through pure callables, so the same query always yields the same
answer.  Windows materialize a ball of the skeleton as an ordinary
presentation; squares are included exactly when all four edges fit inside,
and the window carries meta flags so downstream verdicts can stay
window-relative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from .errors import WindowExhausted
from .presentation import Edge, KGraphPresentation


@dataclass(frozen=True)
class LazyKGraph:
    k: int
    base_vertices: Tuple[str, ...]  # deterministic seeds for windows
    edges_with_range: Callable[[str, int], Tuple[Edge, ...]]
    edges_with_source: Callable[[str, int], Tuple[Edge, ...]]
    # (i_edge, j_edge) with color(i)<color(j), s(i)=r(j) -> (j', i')
    square_of: Callable[[Edge, Edge], Tuple[Edge, Edge]]
    meta: dict = field(default_factory=dict)
    tree_skeleton: bool = False  # construction-time certificate, see skew_product
    # symbolic unique undirected path for certified trees:
    # (u, v) -> [(edge id, +1 if traversed range->source)] or None if separate
    skeleton_path: Optional[Callable[[str, str], Optional[Tuple[Tuple[str, int], ...]]]] = None

    def all_edges_at(self, v: str) -> Tuple[Edge, ...]:
        out: List[Edge] = []
        for c in range(1, self.k + 1):
            out.extend(self.edges_with_range(v, c))
            out.extend(self.edges_with_source(v, c))
        return tuple(out)

    def neighbours(self, v: str) -> Tuple[str, ...]:
        seen: List[str] = []
        for e in self.all_edges_at(v):
            w = e.src if e.rng == v else e.rng
            if w not in seen:
                seen.append(w)
        return tuple(seen)

    def window(self, seed: Optional[str] = None, radius: int = 2) -> KGraphPresentation:
        """Ball of `radius` undirected edge-steps around the seed vertex."""
        if seed is None:
            seed = self.base_vertices[0]
        layer = [seed]
        depth: Dict[str, int] = {seed: 0}
        verts: Set[str] = {seed}
        for step in range(1, radius + 1):
            nxt: List[str] = []
            for v in layer:
                for w in self.neighbours(v):
                    if w not in verts:
                        verts.add(w)
                        depth[w] = step
                        nxt.append(w)
            layer = nxt
        edges: Dict[str, Edge] = {}
        for v in sorted(verts):
            for c in range(1, self.k + 1):
                for e in self.edges_with_range(v, c):
                    if e.src in verts:
                        edges[e.id] = e
        squares = {}
        for e in edges.values():
            for c in range(e.color + 1, self.k + 1):
                for f in self.edges_with_range(e.src, c):
                    if f.id not in edges:
                        continue
                    fp, ep = self.square_of(e, f)
                    if fp.id in edges and ep.id in edges:
                        squares[(e.id, f.id)] = (fp.id, ep.id)
        meta = dict(self.meta)
        meta.update({"window": True, "window_seed": seed, "window_radius": radius,
                     "window_depth": depth})
        if self.tree_skeleton:
            meta["tree_skeleton"] = True
        return KGraphPresentation(self.k, verts, edges.values(), squares, meta=meta)


def validate_window(p: KGraphPresentation) -> bool:
    """Square completeness/injectivity and hexagons restricted to the interior.

    Interior pairs are those whose visible corner vertices sit strictly inside
    the window ball, so the fourth corner is guaranteed materialized.
    """
    depth = p.meta.get("window_depth", {})
    radius = p.meta.get("window_radius", 0)

    def interior(v: str) -> bool:
        return depth.get(v, radius) < radius

    targets: Dict[Tuple[str, str], Tuple[str, str]] = {}
    for ci in range(1, p.k + 1):
        for cj in range(ci + 1, p.k + 1):
            for eid in p.edges_of_color(ci):
                e = p.edge(eid)
                if not (interior(e.rng) and interior(e.src)):
                    continue
                for fid in p.edges_with_range(e.src, cj):
                    if not interior(p.edge(fid).src):
                        continue
                    if (eid, fid) not in p.squares:
                        return False
                    val = p.squares[(eid, fid)]
                    if val in targets and targets[val] != (eid, fid):
                        return False
                    targets[val] = (eid, fid)
    # hexagons on interior triples
    for ci in range(1, p.k + 1):
        for cj in range(ci + 1, p.k + 1):
            for cl in range(cj + 1, p.k + 1):
                for xid in p.edges_of_color(ci):
                    x = p.edge(xid)
                    if not all(interior(t) for t in (x.rng, x.src)):
                        continue
                    for yid in p.edges_with_range(x.src, cj):
                        y = p.edge(yid)
                        if not interior(y.src):
                            continue
                        for zid in p.edges_with_range(y.src, cl):
                            if not interior(p.edge(zid).src):
                                continue
                            try:
                                ra = [xid, yid, zid]
                                p._swap_at(ra, 0), p._swap_at(ra, 1), p._swap_at(ra, 0)
                                rb = [xid, yid, zid]
                                p._swap_at(rb, 1), p._swap_at(rb, 0), p._swap_at(rb, 1)
                            except KeyError:
                                continue  # swap chain exits the window
                            if ra != rb:
                                return False
    return True


def window_of(g, seed: Optional[str] = None, radius: int = 2) -> KGraphPresentation:
    """Uniform access: presentations pass through, lazy graphs materialize."""
    if isinstance(g, KGraphPresentation):
        return g
    if isinstance(g, LazyKGraph):
        return g.window(seed, radius)
    raise TypeError(f"not a graph object: {g!r}")
