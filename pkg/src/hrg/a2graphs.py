"""The 2-graphs attached to a triangle group: the finite-skeleton graph of
shape-(>=1,>=1) elements and its skew-product cover.

Vertices are the shape-(1,1) elements; color-1 edges the shape-(2,1)
elements, color-2 the shape-(1,2); a shape-(2,2) element contributes exactly
one factorization square through its two edge-unit splittings.  The maps
sending an edge to its complementary prefix (c) and suffix (b) are group
valued 1-cocycles; c is essential because an element is its c-value times its
source unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import degrees as dg
from .a2words import A2Calculus, A2Element
from .cocycles import Cocycle, check_functorial
from .constructions import skew_product
from .groups import GroupHandle
from .lazy import LazyKGraph
from .presentation import Edge, KGraphPresentation
from .triella import Triella


@dataclass(frozen=True)
class A2Group(GroupHandle):
    """Group handle over normal-form elements; equality is exact."""

    calc: A2Calculus

    def identity(self):
        return self.calc.identity()

    def mul(self, a, b):
        return self.calc.multiply(a, b)

    def inv(self, a):
        return self.calc.inverse(a)

    def label(self, a) -> str:
        return element_id(a)


def element_id(w: A2Element) -> str:
    return "*".join(f"a{p}" + ("" if s > 0 else "^-1") for p, s in w.word) or "1"


def _shortlex_key(w: A2Element):
    return (len(w.word), tuple((p, 0 if s > 0 else 1) for p, s in w.word))


@dataclass
class TriangleGraph:
    """lambda_T as a presentation plus its cocycles and decoding tables."""

    calc: A2Calculus
    presentation: KGraphPresentation
    vertex_elements: Dict[str, A2Element]
    edge_elements: Dict[str, A2Element]
    b_cocycle: Cocycle
    c_cocycle: Cocycle

    def vertices_shortlex(self) -> List[str]:
        return [element_id(w) for w in
                sorted(self.vertex_elements.values(), key=_shortlex_key)]


def lambda_T(t: Triella, calc: Optional[A2Calculus] = None) -> TriangleGraph:
    """Build the full finite presentation; the element sets of shapes (1,1),
    (2,1), (1,2) and (2,2) are finite even though the 2-graph itself is not.
    """
    calc = calc or A2Calculus(t)
    verts = calc.enumerate_shape((1, 1))
    vertex_ids = {element_id(w): w for w in verts}
    edges: List[Edge] = []
    edge_elements: Dict[str, A2Element] = {}
    b_labels: Dict[str, A2Element] = {}
    c_labels: Dict[str, A2Element] = {}
    for color, shape in ((1, (2, 1)), (2, (1, 2))):
        for w in calc.enumerate_shape(shape):
            um = calc.unit_maps(w)
            eid = element_id(w)
            edges.append(Edge(eid, color, element_id(um["s"]), element_id(um["r"])))
            edge_elements[eid] = w
            b_labels[eid] = um["b"]
            c_labels[eid] = um["c"]
    squares = {}
    for w in calc.enumerate_shape((2, 2)):
        g, rest = calc.unique_factorize(w, (1, 0), (1, 2))
        h, _ = calc.unique_factorize(rest, (1, 1), (0, 1))
        mu = calc.multiply(g, h)  # shape (2,1): the color-1-first edge
        gp, restp = calc.unique_factorize(w, (0, 1), (2, 1))
        hp, _ = calc.unique_factorize(restp, (1, 1), (1, 0))
        mup = calc.multiply(gp, hp)  # shape (1,2)
        squares[(element_id(mu), element_id(rest))] = (
            element_id(mup), element_id(restp))
    p = KGraphPresentation(2, vertex_ids, edges, squares,
                           meta={"name": "triangle-2-graph"})
    p.require_valid()
    group = A2Group(calc)
    b = Cocycle(group, b_labels, "b")
    c = Cocycle(group, c_labels, "c")
    check_functorial(p, b)
    check_functorial(p, c)
    return TriangleGraph(calc, p, vertex_ids, edge_elements, b, c)


def sigma_T(tg: TriangleGraph, seed: Optional[A2Element] = None,
            radius: int = 3) -> LazyKGraph:
    """The skew product of lambda_T by its c cocycle: the pair picture
    (x, y) with shape(x^-1 y) >= (1,1) corresponds to the skew pair
    (x, x^-1 y)."""
    group = A2Group(tg.calc)
    seed_el = seed if seed is not None else tg.calc.identity()
    return skew_product(tg.presentation, tg.c_cocycle, seed=seed_el,
                        radius=radius)


def pair_of_vertex(tg: TriangleGraph, lazy: LazyKGraph, vid: str
                   ) -> Tuple[A2Element, A2Element]:
    """phi^{-1}: the (x, y) pair named by a cover vertex id."""
    info = lazy.meta["skew"]
    g, base_vertex = info.vertex_pairs[vid]
    lam = tg.vertex_elements[base_vertex]
    return g, tg.calc.multiply(g, lam)


def vertex_of_pair(tg: TriangleGraph, lazy: LazyKGraph,
                   x: A2Element, y: A2Element) -> str:
    """phi: the cover vertex id of a pair with shape(x^-1 y) = (1,1)."""
    lam = tg.calc.multiply(tg.calc.inverse(x), y)
    if lam.shape != (1, 1):
        raise ValueError(f"shape(x^-1 y) = {lam.shape}, need (1,1)")
    vid = f"{element_id(x)}@{element_id(lam)}"
    info = lazy.meta["skew"]
    info.vertex_pairs.setdefault(vid, (x, element_id(lam)))
    return vid


def cover_connecting_criterion(tg: TriangleGraph, x: A2Element, z: A2Element,
                               w: A2Element, y: A2Element) -> bool:
    """Shape test for a (necessarily unique) morphism (x,z) -> (w,y) in the
    cover: shape(x^-1 w) + (1,1) = shape(x^-1 y) = shape(z^-1 y) + (1,1)."""
    calc = tg.calc
    xw = calc.multiply(calc.inverse(x), w).shape
    xy = calc.multiply(calc.inverse(x), y).shape
    zy = calc.multiply(calc.inverse(z), y).shape
    one = (1, 1)
    return (dg.add(xw, one) == xy and dg.add(zy, one) == xy
            and dg.leq(one, xy))
