"""Named fixture graphs used across tests and the CLI.

Finite entries return validated presentations; infinite ones return lazy
graphs.  Names are stable: they double as CLI arguments and fixture file
stems.
"""

from __future__ import annotations

import re
from typing import Dict, Tuple

from .errors import UnknownName
from .lazy import LazyKGraph
from .presentation import Edge, KGraphPresentation


def bn(n: int) -> KGraphPresentation:
    """One vertex, n loops: the free category on n generators."""
    edges = [Edge(f"f{i}", 1, "u", "u") for i in range(1, n + 1)]
    return KGraphPresentation(1, ["u"], edges, {}, meta={"name": f"b{n}"})


def omega_window(k: int, radius: int) -> KGraphPresentation:
    """Vertices m in N^k with m <= radius*1, edges m+eps_i -> m."""
    from itertools import product

    def vid(m):
        return "(" + ",".join(str(x) for x in m) + ")"

    verts = [tuple(m) for m in product(range(radius + 1), repeat=k)]
    vset = set(verts)
    edges = []
    for m in verts:
        for i in range(k):
            m2 = tuple(m[j] + (1 if j == i else 0) for j in range(k))
            if m2 in vset:
                edges.append(Edge(f"e{i + 1}{vid(m)}", i + 1, vid(m2), vid(m)))
    squares = {}
    for m in verts:
        for i in range(k):
            for j in range(i + 1, k):
                mi = tuple(m[t] + (1 if t == i else 0) for t in range(k))
                mj = tuple(m[t] + (1 if t == j else 0) for t in range(k))
                mij = tuple(m[t] + (1 if t in (i, j) else 0) for t in range(k))
                if mij in vset:
                    squares[(f"e{i + 1}{vid(m)}", f"e{j + 1}{vid(mi)}")] = (
                        f"e{j + 1}{vid(m)}", f"e{i + 1}{vid(mj)}")
    return KGraphPresentation(
        k, [vid(m) for m in verts], edges, squares,
        meta={"name": f"omega{k}", "window": True, "window_radius": radius})


def pqr_71() -> KGraphPresentation:
    """One vertex, colors {d,e} and {a,b,c}; the classic non-embedding 2-graph."""
    edges = [Edge(x, 1, "v", "v") for x in "de"] + [Edge(x, 2, "v", "v") for x in "abc"]
    squares = {
        ("d", "a"): ("a", "d"),
        ("d", "b"): ("b", "e"),
        ("d", "c"): ("a", "e"),
        ("e", "a"): ("c", "d"),
        ("e", "b"): ("c", "e"),
        ("e", "c"): ("b", "d"),
    }
    return KGraphPresentation(2, ["v"], edges, squares, meta={"name": "pqr-7.1"})


def steinberg() -> KGraphPresentation:
    """Monoidal 2-graph whose edge set embeds but whose square does not."""
    edges = [Edge(f"e{a}", 1, "v", "v") for a in range(1, 5)]
    edges += [Edge(f"f{b}", 2, "v", "v") for b in range(1, 5)]
    squares = {}
    for a in range(1, 5):
        for b in range(1, 5):
            if (a, b) in ((1, 4), (4, 1)):
                squares[(f"e{a}", f"f{b}")] = (f"f{b}", f"e{a}")
            else:
                squares[(f"e{a}", f"f{b}")] = (f"f{a}", f"e{b}")
    return KGraphPresentation(2, ["v"], edges, squares, meta={"name": "steinberg"})


def three_graph() -> KGraphPresentation:
    """The 8-vertex 3-graph with no 3-colored paths; embeds on every color pair
    but not globally."""
    v = [f"v{i}" for i in range(8)]
    E = Edge
    edges = [
        # blue, color 1
        E("e1", 1, "v0", "v7"), E("e2", 1, "v1", "v7"),
        E("e3", 1, "v4", "v6"), E("e4", 1, "v3", "v5"),
        # red, color 2
        E("f1", 2, "v0", "v4"), E("f1p", 2, "v0", "v4"),
        E("f2", 2, "v1", "v4"), E("f2p", 2, "v1", "v4"),
        E("f3", 2, "v3", "v2"), E("f3p", 2, "v3", "v2"),
        E("f4", 2, "v7", "v6"), E("f4p", 2, "v7", "v6"),
        # green, color 3
        E("g1", 3, "v0", "v3"), E("g2", 3, "v1", "v3"),
        E("g3", 3, "v4", "v2"), E("g4", 3, "v7", "v5"),
    ]
    squares = {
        ("e3", "f1"): ("f4", "e1"), ("e3", "f2"): ("f4", "e2"),
        ("e3", "f1p"): ("f4p", "e1"), ("e3", "f2p"): ("f4p", "e2"),
        ("e4", "g1"): ("g4", "e1"), ("e4", "g2"): ("g4", "e2"),
        ("f3", "g2"): ("g3", "f2"), ("f3p", "g2"): ("g3", "f2p"),
        ("f3p", "g1"): ("g3", "f1"), ("f3", "g1"): ("g3", "f1p"),
    }
    return KGraphPresentation(3, v, edges, squares, meta={"name": "three-graph-3.3"})


def singly_not_simply() -> KGraphPresentation:
    """4 vertices, 4 edges: singly connected but pi_1 = Z."""
    edges = [
        Edge("e", 1, "u", "v"), Edge("f", 1, "u", "x"),
        Edge("g", 1, "w", "x"), Edge("h", 1, "w", "v"),
    ]
    return KGraphPresentation(1, ["u", "v", "w", "x"], edges, {},
                              meta={"name": "sc-not-simply"})


def two_vertex_monoid() -> KGraphPresentation:
    """Strongly connected 2-graph whose embeddability needs the vertex-monoid
    argument; our bounded search reports Inconclusive on it."""
    edges = [
        Edge("e", 1, "u", "u"), Edge("f", 1, "v", "v"),
        Edge("a0", 2, "u", "v"), Edge("a1", 2, "u", "v"), Edge("b", 2, "v", "u"),
    ]
    squares = {
        ("f", "a1"): ("a0", "e"),
        ("f", "a0"): ("a1", "e"),
        ("e", "b"): ("b", "f"),
    }
    return KGraphPresentation(
        2, ["u", "v"], edges, squares,
        meta={"name": "prop-3.21",
              "note": ("known embeddable: the vertex monoid embeds in a group "
                       "(semidirect product of F_2 by Z); deciding this in general "
                       "is out of scope, so bounded search stays Inconclusive")})


def finite_tree(depth: int = 3) -> KGraphPresentation:
    """Binary out-branching tree of the given depth; singly connected."""
    verts = ["r"]
    edges = []
    frontier = ["r"]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for b in "01":
                w = v + b if v != "r" else b
                verts.append(w)
                edges.append(Edge(f"t{w}", 1, w, v))
                nxt.append(w)
        frontier = nxt
    return KGraphPresentation(1, verts, edges, {}, meta={"name": "tree-finite"})


_E45_RE = re.compile(r"^(u|v)\((-?\d+)\)$|^w\((-?\d+),(\d+)\)$")


def lambda_e_45() -> LazyKGraph:
    """The 1-graph whose orbit space is not Hausdorff: two parallel rays glued
    by a comb of w-tails."""

    def uid(n): return f"u({n})"
    def vv(n): return f"v({n})"
    def wid(n, i): return f"w({n},{i})"

    def parse(x: str):
        m = _E45_RE.match(x)
        if not m:
            raise UnknownName(f"not a vertex of lambda-E-4.5: {x}")
        if m.group(1):
            return (m.group(1), int(m.group(2)), None)
        return ("w", int(m.group(3)), int(m.group(4)))

    def with_range(x: str, color: int) -> Tuple[Edge, ...]:
        kind, n, i = parse(x)
        if kind == "u":
            return (Edge(f"e{n}", 1, uid(n + 1), uid(n)),
                    Edge(f"g{n}", 1, wid(n, 0), uid(n)))
        if kind == "v":
            return (Edge(f"f{n}", 1, vv(n + 1), vv(n)),
                    Edge(f"h{n}", 1, wid(n, 0), vv(n)))
        return (Edge(f"k({n},{i})", 1, wid(n, i + 1), wid(n, i)),)

    def with_source(x: str, color: int) -> Tuple[Edge, ...]:
        kind, n, i = parse(x)
        if kind == "u":
            return (Edge(f"e{n - 1}", 1, uid(n), uid(n - 1)),)
        if kind == "v":
            return (Edge(f"f{n - 1}", 1, vv(n), vv(n - 1)),)
        if i == 0:
            return (Edge(f"g{n}", 1, wid(n, 0), uid(n)),
                    Edge(f"h{n}", 1, wid(n, 0), vv(n)))
        return (Edge(f"k({n},{i - 1})", 1, wid(n, i), wid(n, i - 1)),)

    def square_of(e, f):
        raise KeyError("1-graph has no squares")

    return LazyKGraph(1, (uid(0), vv(0)), with_range, with_source, square_of,
                      meta={"name": "lambda-E-4.5"})


def infinite_binary_tree() -> LazyKGraph:
    """Rooted binary tree as a lazy 1-graph; r(edge) = parent."""

    def with_range(v: str, color: int) -> Tuple[Edge, ...]:
        base = "" if v == "r" else v
        k0, k1 = base + "0", base + "1"
        return (Edge(f"t{k0}", 1, k0, v), Edge(f"t{k1}", 1, k1, v))

    def with_source(v: str, color: int) -> Tuple[Edge, ...]:
        if v == "r":
            return ()
        parent = v[:-1] or "r"
        return (Edge(f"t{v}", 1, v, parent),)

    def square_of(e, f):
        raise KeyError("1-graph has no squares")

    def skeleton_path(u: str, v: str):
        pu = "" if u == "r" else u
        pv = "" if v == "r" else v
        i = 0
        while i < min(len(pu), len(pv)) and pu[i] == pv[i]:
            i += 1
        steps = []
        for j in range(len(pu), i, -1):  # climb u -> lca, against range->source
            steps.append((f"t{pu[:j]}", -1))
        for j in range(i + 1, len(pv) + 1):  # descend lca -> v
            steps.append((f"t{pv[:j]}", +1))
        return tuple(steps)

    return LazyKGraph(1, ("r",), with_range, with_source, square_of,
                      meta={"name": "tree-fixture"}, tree_skeleton=True,
                      skeleton_path=skeleton_path)


_FIXED = {
    "pqr-7.1": pqr_71,
    "steinberg": steinberg,
    "three-graph-3.3": three_graph,
    "sc-not-simply": singly_not_simply,
    "prop-3.21": two_vertex_monoid,
    "tree-finite": finite_tree,
    "lambda-E-4.5": lambda_e_45,
    "tree-fixture": infinite_binary_tree,
}


def catalog(name: str, **params):
    """Look up a named fixture.  "B"/"bN" build bouquets; "omegaK" builds
    diagonal windows (radius parameter, default 3)."""
    if name == "B":
        return bn(int(params.get("n", 2)))
    m = re.fullmatch(r"[bB](\d+)", name)
    if m:
        return bn(int(m.group(1)))
    m = re.fullmatch(r"omega(\d+)", name)
    if m:
        return omega_window(int(m.group(1)), int(params.get("radius", 3)))
    if name in _FIXED:
        return _FIXED[name]()
    raise UnknownName(f"no fixture named {name!r}")


def catalog_names() -> Tuple[str, ...]:
    return tuple(sorted(_FIXED)) + ("bN", "omegaK")
