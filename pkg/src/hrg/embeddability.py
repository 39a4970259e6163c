"""Does a k-graph embed in its fundamental groupoid?  Bounded tooling.

The verdict is a tri-state: singly connected graphs embed; an essential
cocycle certifies embedding; a replayable collapse proof refutes it; anything
else is Inconclusive at the given depth.  Essential-cocycle verification is
exact on acyclic skeletons (the morphism space is finite) and for the free
cocycle on 1-graphs (distinct paths are distinct free words); otherwise a
bounded pass is reported as evidence, not as a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import degrees as dg
from .cocycles import (
    Cocycle,
    check_functorial,
    essential_on_window,
    free_edge_cocycle,
    injectivity_on_homsets,
)
from .collapse import CollapseProof, collapse_search, replay_collapse_proof
from .degrees import Degree
from .errors import Disconnected
from .fundamental import (
    AbelianInvariants,
    TreeContraction,
    abelian_invariants_of,
    fundamental_group_presentation,
    universal_abelian_cocycle,
)
from .groups import GroupHandle
from .morphisms import (
    ConnectivityReport,
    _has_directed_cycle,
    _undirected_components,
    all_morphisms_from,
    connectivity_report,
)
from .presentation import KGraphPresentation
from .rewriting import knuth_bendix


@dataclass(frozen=True)
class ProductGroup(GroupHandle):
    factors: Tuple[GroupHandle, ...]

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def label(self, a) -> str:
        return "(" + ";".join(f.label(x) for f, x in zip(self.factors, a)) + ")"


def pair_with_degree(p: KGraphPresentation, c: Cocycle) -> Cocycle:
    from .cocycles import degree_cocycle

    d = degree_cocycle(p)
    group = ProductGroup((c.group, d.group))
    labels = {e: (c.labels[e], d.labels[e]) for e in p.edges}
    return Cocycle(group, labels, f"{c.name}*degree")


@dataclass(frozen=True)
class EssentialCandidate:
    cocycle: Cocycle
    exact: bool  # True: essentialness proved, not just bounded evidence
    note: str
    verified_bound: Optional[Degree]

    def to_dict(self) -> dict:
        return {
            "name": self.cocycle.name,
            "exact": self.exact,
            "note": self.note,
            "verified_bound": (list(self.verified_bound)
                               if self.verified_bound else None),
            "labels": {e: self.cocycle.group.label(v)
                       for e, v in sorted(self.cocycle.labels.items())},
        }


def _exact_essential_check(p: KGraphPresentation, c: Cocycle) -> bool:
    """Exhaustive injectivity of c on every hom-set; needs acyclic skeleton."""
    seen: Dict[Tuple[str, str, object], object] = {}
    for u in p.vertices:
        for lam in all_morphisms_from(p, u):
            key = (u, lam.src, c(lam))
            if key in seen and seen[key] != lam:
                return False
            seen.setdefault(key, lam)
    return True


def essential_cocycle_search(p: KGraphPresentation, degree_bound: Degree,
                             hint: Optional[Cocycle] = None
                             ) -> Optional[EssentialCandidate]:
    """Search candidate cocycles in priority order: a supplied hint, the free
    cocycle (1-graphs), then the universal abelian cocycle paired with the
    degree.  None means 'not found', never 'none exists'."""
    p.require_valid()
    acyclic = _has_directed_cycle(p) is None

    if hint is not None:
        check_functorial(p, hint)
        if acyclic:
            if _exact_essential_check(p, hint):
                return EssentialCandidate(
                    hint, True, "hint cocycle injective on every hom-set "
                    "(acyclic skeleton, exhaustive check)", None)
        elif essential_on_window(p, hint, degree_bound) is None:
            return EssentialCandidate(
                hint, False,
                f"hint cocycle injective on hom-sets up to degree {degree_bound}; "
                "skeleton has cycles so this is bounded evidence only",
                degree_bound)
        return None

    if p.k == 1:
        c = free_edge_cocycle(p)
        return EssentialCandidate(
            c, True, "free cocycle: distinct paths carry distinct reduced "
            "free words, so injectivity on hom-sets is automatic", None)

    if len(_undirected_components(p)) != 1:
        return None
    c, _ = universal_abelian_cocycle(p)
    paired = pair_with_degree(p, c)
    if acyclic:
        if _exact_essential_check(p, paired):
            return EssentialCandidate(
                paired, True, "abelianized cocycle paired with degree, "
                "injective on every hom-set (acyclic skeleton)", None)
        return None
    if injectivity_on_homsets(p, c, degree_bound) is None:
        return EssentialCandidate(
            paired, False,
            "abelianized cocycle paired with degree separates distinct "
            f"degrees for free; per-degree injectivity verified up to {degree_bound}, "
            "bounded evidence only on a cyclic skeleton", degree_bound)
    return None


# -- grading -------------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    values: Dict[str, Degree]  # vertex -> Z^k
    witness: Optional[str] = None  # inconsistent edge when values is empty

    @property
    def exists(self) -> bool:
        return self.witness is None


def grading_function(p: KGraphPresentation) -> Grading:
    """f with d(lambda) = f(s(lambda)) - f(r(lambda)), unique up to constants.

    BFS assignment from the least vertex of each component; returns the
    witness edge when some edge is inconsistent (e.g. any loop).
    """
    values: Dict[str, Degree] = {}
    for comp in _undirected_components(p):
        base = comp[0]
        values[base] = dg.zero(p.k)
        frontier = [base]
        while frontier:
            nxt = []
            for v in sorted(frontier):
                for eid in p.edges_with_range(v):
                    e = p.edge(eid)
                    want = dg.add(values[v], _edge_degree(p, eid))
                    if e.src not in values:
                        values[e.src] = want
                        nxt.append(e.src)
                for eid in p.edges_with_source(v):
                    e = p.edge(eid)
                    want = dg.sub(values[v], _edge_degree(p, eid))
                    if e.rng not in values:
                        values[e.rng] = want
                        nxt.append(e.rng)
            frontier = nxt
    for eid, e in p.edges.items():
        if dg.sub(values[e.src], values[e.rng]) != _edge_degree(p, eid):
            return Grading({}, witness=eid)
    return Grading(values)


def _edge_degree(p: KGraphPresentation, eid: str) -> Degree:
    return dg.basis(p.k, p.color(eid))


# -- simple connectedness -------------------------------------------------------


@dataclass(frozen=True)
class SimplyConnectedVerdict:
    value: str  # "yes" | "no" | "inconclusive"
    window_relative: bool
    detail: str

    def to_dict(self) -> dict:
        return {"value": self.value, "window_relative": self.window_relative,
                "detail": self.detail}


def simply_connected_test(p: KGraphPresentation, depth: int = 10
                          ) -> SimplyConnectedVerdict:
    """No if the abelianization is nontrivial; Yes if bounded completion kills
    every generator; windows of skew products transfer loops to the base,
    where covering theory makes the answer exact modulo the word problem."""
    if len(_undirected_components(p)) != 1:
        raise Disconnected("simple connectedness needs a connected graph")
    windowed = bool(p.meta.get("window"))

    info = p.meta.get("skew")
    if windowed and info is not None:
        return _simply_connected_via_base(p, info, depth)

    inv = abelian_invariants_of(p)
    if not inv.trivial:
        return SimplyConnectedVerdict("no", windowed,
                                      f"abelianization {inv.to_dict()} is nontrivial")
    gp = fundamental_group_presentation(p)
    rs = knuth_bendix(gp, max_new_rules=15 * depth, max_len=max(12, depth))
    if all(rs.is_trivial((i + 1,)) for i in range(len(gp.generators))):
        return SimplyConnectedVerdict("yes", windowed,
                                      "bounded completion proves every generator trivial")
    return SimplyConnectedVerdict("inconclusive", windowed,
                                  f"completion inconclusive at depth {depth}")


def _simply_connected_via_base(p: KGraphPresentation, info, depth: int
                               ) -> SimplyConnectedVerdict:
    """Loops of a covering inject into the base group, so decide there."""
    tc_win = TreeContraction(p)
    base = info.base
    tc_base = TreeContraction(base)
    base_gp = tc_base.presentation()
    rs = knuth_bendix(base_gp, max_new_rules=15 * depth, max_len=max(12, depth))
    ab, _ = universal_abelian_cocycle(base)

    tree_edges = {eid for (eid, _) in tc_win.parent.values()}
    gens = [e for e in sorted(p.edges) if e not in tree_edges]

    def loop_base_word(eid: str):
        # gamma_{r(e)} . e . gamma_{s(e)}^-1 projected edgewise to the base
        def path_down(v: str) -> List[Tuple[str, int]]:
            out = []
            while v in tc_win.parent:
                e, direction = tc_win.parent[v]
                out.append((e, direction))
                we = p.edge(e)
                v = we.rng if direction == +1 else we.src
            out.reverse()
            return out

        walk: List[Tuple[str, int]] = []
        walk.extend(path_down(p.edge(eid).rng))
        walk.append((eid, +1))
        for e, direction in reversed(path_down(p.edge(eid).src)):
            walk.append((e, -direction))
        word: List[int] = []
        abel = ab.group.identity()
        for e, sign in walk:
            be = info.base_edge(e)
            w = tc_base.edge_word(be)
            word.extend(w if sign > 0 else [-x for x in w])
            lab = ab.labels[be] if sign > 0 else ab.group.inv(ab.labels[be])
            abel = ab.group.mul(abel, lab)
        return tuple(word), abel

    for eid in gens:
        word, abel = loop_base_word(eid)
        if abel != ab.group.identity():
            return SimplyConnectedVerdict(
                "no", True, f"window loop at {eid} has nontrivial abelianized "
                "image in the base group")
        if not rs.is_trivial(word):
            return SimplyConnectedVerdict(
                "inconclusive", True,
                f"window loop at {eid} not provably trivial in the base group "
                f"at depth {depth}")
    return SimplyConnectedVerdict(
        "yes", True, "every window loop maps to a provably trivial element of "
        "the base group; loops of a covering inject into the base")


# -- the orchestrated verdict ----------------------------------------------------


@dataclass(frozen=True)
class EmbeddabilityReport:
    verdict: str  # "Embeds" | "NotEmbeds" | "Inconclusive"
    reason: str
    essential: Optional[EssentialCandidate]
    proof: Optional[CollapseProof]
    abelian: AbelianInvariants
    connectivity: ConnectivityReport
    simply: Optional[SimplyConnectedVerdict]
    grading: Grading
    depth: int
    degree_bound: Degree
    notes: Tuple[str, ...] = ()

    @property
    def exit_code(self) -> int:
        return {"Embeds": 0, "NotEmbeds": 1, "Inconclusive": 2}[self.verdict]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "essential_cocycle": self.essential.to_dict() if self.essential else None,
            "proof": self.proof.to_dict() if self.proof else None,
            "abelian_invariants": self.abelian.to_dict(),
            "singly_connected": self.connectivity.singly_connected,
            "strongly_connected": self.connectivity.strongly_connected,
            "simply_connected": self.simply.to_dict() if self.simply else None,
            "grading": ({"values": {v: list(x) for v, x in sorted(self.grading.values.items())}}
                        if self.grading.exists else {"witness": self.grading.witness}),
            "depth": self.depth,
            "degree_bound": list(self.degree_bound),
            "notes": list(self.notes),
        }


def embeddability_report(p: KGraphPresentation, depth: int = 10,
                         degree_bound: Optional[Degree] = None,
                         hint: Optional[Cocycle] = None) -> EmbeddabilityReport:
    p.require_valid()
    if degree_bound is None:
        degree_bound = tuple(2 for _ in range(p.k))
    notes: List[str] = []
    if "note" in p.meta:
        notes.append(str(p.meta["note"]))
    if p.meta.get("skew") is not None:
        notes.append("input is a skew product: embeddability lifts to and "
                     "descends from the base along the covering")

    conn = connectivity_report(p)
    abelian = abelian_invariants_of(p)
    grading = grading_function(p)
    simply: Optional[SimplyConnectedVerdict] = None
    if len(_undirected_components(p)) == 1:
        simply = simply_connected_test(p, depth)

    if conn.singly_connected in ("yes", "yes-within-window"):
        reason = "singly connected"
        if conn.singly_connected == "yes-within-window":
            reason += " (within window)"
        return EmbeddabilityReport("Embeds", reason, None, None, abelian, conn,
                                   simply, grading, depth, degree_bound,
                                   tuple(notes))

    candidate = essential_cocycle_search(p, degree_bound, hint=hint)
    if candidate is not None and candidate.exact:
        return EmbeddabilityReport("Embeds", f"essential cocycle: {candidate.note}",
                                   candidate, None, abelian, conn, simply,
                                   grading, depth, degree_bound, tuple(notes))
    if candidate is not None:
        notes.append("a cocycle passed the bounded injectivity check but the "
                     "skeleton has cycles, so it is evidence, not a verdict")

    proof = collapse_search(p, depth)
    if proof is not None:
        replay_collapse_proof(p, proof)
        return EmbeddabilityReport(
            "NotEmbeds", "two distinct parallel morphisms share their image "
            "in the fundamental groupoid", candidate, proof, abelian, conn,
            simply, grading, depth, degree_bound, tuple(notes))

    return EmbeddabilityReport(
        "Inconclusive", f"no witness either way at depth {depth}", candidate,
        None, abelian, conn, simply, grading, depth, degree_bound, tuple(notes))
