"""Bounded deduction in the fundamental groupoid: finding and replaying
proofs that two distinct parallel morphisms have the same image.

Proof steps act on words of signed edges (the free groupoid): inserting or
deleting an inverse pair, or replacing an adjacent pair via one of the eight
orientations of a factorization square ef = f'e'.  A proof is a chain of such
steps from the word of one morphism to the word of the other, so replay needs
nothing beyond the presentation itself.

The search is bidirectional breadth-first over these moves.  Insertions are
only explored when they create a square-active adjacent pair (an exhaustive
move set would drown the search); replay accepts any legal move, so this
restriction costs completeness, never soundness.  Candidate pairs are
prefiltered through the abelianized vertex group, which is a sound necessary
condition for collapse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from . import degrees as dg
from .fundamental import universal_abelian_cocycle
from .morphisms import Morphism, morphisms
from .presentation import KGraphPresentation

SignedWord = Tuple[int, ...]  # signed 1-based edge indices
Move = Tuple  # ("square", pos, (g, d)) | ("insert", pos, (x, y)) | ("delete", pos)


class _Arena:
    """Move tables for one presentation."""

    def __init__(self, p: KGraphPresentation):
        self.p = p
        self.eids = tuple(sorted(p.edges))
        self.index = {e: i + 1 for i, e in enumerate(self.eids)}
        self.rng: Dict[int, str] = {}
        self.src: Dict[int, str] = {}
        for e, i in self.index.items():
            edge = p.edge(e)
            self.rng[i], self.src[i] = edge.rng, edge.src
            self.rng[-i], self.src[-i] = edge.src, edge.rng
        # square moves: adjacent pattern -> sorted list of replacements
        self.square_moves: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        for (a, b), (bp, ap) in p.squares.items():
            E, F = self.index[a], self.index[b]
            Z, W = self.index[bp], self.index[ap]
            for lhs, rhs in (((E, F), (Z, W)), ((-E, Z), (F, -W)),
                             ((-Z, E), (W, -F)), ((-F, -E), (-W, -Z))):
                self._add_move(lhs, rhs)
                self._add_move(rhs, lhs)
        for k in self.square_moves:
            self.square_moves[k] = sorted(set(self.square_moves[k]))
        # insertable letters by anchor vertex: pairs (x, -x) with r(x) = anchor
        self.insertions: Dict[str, List[int]] = {}
        for i in range(1, len(self.eids) + 1):
            for x in (i, -i):
                self.insertions.setdefault(self.rng[x], []).append(x)
        for k in self.insertions:
            self.insertions[k].sort(key=abs)

    def _add_move(self, lhs, rhs):
        if lhs != rhs:
            self.square_moves.setdefault(lhs, []).append(rhs)

    def word_of(self, lam: Morphism) -> SignedWord:
        return tuple(self.index[e] for e in lam.word)

    def tokens(self, w: SignedWord) -> Tuple[str, ...]:
        return tuple(self.eids[x - 1] if x > 0 else self.eids[-x - 1] + "^-1"
                     for x in w)

    def boundary(self, w: SignedWord, pos: int, anchor_r: str, anchor_s: str) -> str:
        """Vertex between positions pos-1 and pos."""
        if pos < len(w):
            return self.rng[w[pos]]
        if w:
            return self.src[w[-1]]
        return anchor_r

    def composable(self, w: SignedWord) -> bool:
        return all(self.src[a] == self.rng[b] for a, b in zip(w, w[1:]))

    def neighbours(self, w: SignedWord, anchor_r: str, anchor_s: str,
                   max_len: int) -> List[Tuple[SignedWord, Move]]:
        out: List[Tuple[SignedWord, Move]] = []
        for i in range(len(w) - 1):
            pair = (w[i], w[i + 1])
            if pair[0] == -pair[1]:
                out.append((w[:i] + w[i + 2:], ("delete", i)))
            for rep in self.square_moves.get(pair, ()):
                out.append((w[:i] + rep + w[i + 2:], ("square", i, rep)))
        if len(w) + 2 <= max_len:
            for pos in range(len(w) + 1):
                v = self.boundary(w, pos, anchor_r, anchor_s)
                for x in self.insertions.get(v, ()):
                    pair = (x, -x)
                    if w:
                        active = ((pos > 0 and ((w[pos - 1], x) in self.square_moves))
                                  or (pos < len(w) and ((-x, w[pos]) in self.square_moves)))
                        if not active:
                            continue
                    out.append((w[:pos] + pair + w[pos:], ("insert", pos, pair)))
        return out


@dataclass(frozen=True)
class CollapseProof:
    """Replayable certificate that two distinct parallel morphisms agree in
    the fundamental groupoid."""

    source: Morphism
    target: Morphism
    words: Tuple[Tuple[str, ...], ...]  # successive signed-edge token words
    moves: Tuple[Move, ...]  # moves[i] transforms words[i] into words[i+1]

    def to_dict(self) -> dict:
        return {
            "source": list(self.source.word),
            "target": list(self.target.word),
            "words": [list(w) for w in self.words],
            "moves": [list(m) for m in self.moves],
        }


def _parse_token(p: KGraphPresentation, arena: _Arena, token: str) -> int:
    if token.endswith("^-1"):
        return -arena.index[token[:-3]]
    return arena.index[token]


def replay_collapse_proof(p: KGraphPresentation, proof: CollapseProof) -> bool:
    """Mechanically verify every step; raises ValueError on a broken proof."""
    arena = _Arena(p)
    lam, mu = proof.source, proof.target
    if lam == mu:
        raise ValueError("source and target are the same morphism")
    if (lam.rng, lam.src) != (mu.rng, mu.src):
        raise ValueError("morphisms are not parallel")
    if lam.degree != mu.degree:
        raise ValueError("collapse pair must have equal degree")
    words = [tuple(_parse_token(p, arena, t) for t in w) for w in proof.words]
    if words[0] != arena.word_of(lam) or words[-1] != arena.word_of(mu):
        raise ValueError("proof endpoints do not match the morphism pair")
    if len(proof.moves) != len(words) - 1:
        raise ValueError("need exactly one move per transition")
    for step, (w, move) in enumerate(zip(words, proof.moves)):
        if not arena.composable(w):
            raise ValueError(f"word at step {step} is not composable")
        kind = move[0]
        if kind == "delete":
            i = move[1]
            if i + 1 >= len(w) or w[i] != -w[i + 1]:
                raise ValueError(f"step {step}: no inverse pair at {i}")
            nxt = w[:i] + w[i + 2:]
        elif kind == "insert":
            i, pair = move[1], tuple(move[2])
            if pair[0] != -pair[1]:
                raise ValueError(f"step {step}: inserted pair is not inverse")
            v = arena.boundary(w, i, lam.rng, lam.src)
            if arena.rng[pair[0]] != v:
                raise ValueError(f"step {step}: insertion breaks composability")
            nxt = w[:i] + pair + w[i:]
        elif kind == "square":
            i, rep = move[1], tuple(move[2])
            if rep not in arena.square_moves.get((w[i], w[i + 1]), ()):
                raise ValueError(f"step {step}: not a square identity")
            nxt = w[:i] + rep + w[i + 2:]
        else:
            raise ValueError(f"step {step}: unknown move {kind!r}")
        if nxt != words[step + 1]:
            raise ValueError(f"step {step}: move result mismatch")
    return True


def _bidirectional_search(arena: _Arena, start: SignedWord, goal: SignedWord,
                          anchor_r: str, anchor_s: str, max_len: int,
                          max_states: int
                          ) -> Optional[Tuple[List[SignedWord], List[Move]]]:
    if start == goal:
        return [start], []
    fwd: Dict[SignedWord, Optional[Tuple[SignedWord, Move]]] = {start: None}
    bwd: Dict[SignedWord, Optional[Tuple[SignedWord, Move]]] = {goal: None}
    front_f, front_b = [start], [goal]

    def path_up(parents, state):
        words = [state]
        while parents[state] is not None:
            state, _ = parents[state]
            words.append(state)
        words.reverse()
        return words

    def stitch(meet: SignedWord):
        words = path_up(fwd, meet)  # start .. meet
        tail = path_up(bwd, meet)  # goal .. meet
        words = words + tail[-2::-1]  # start .. meet .. goal
        moves = [_move_between(arena, a, b, anchor_r, anchor_s)
                 for a, b in zip(words, words[1:])]
        return words, moves

    while front_f and front_b:
        if len(fwd) + len(bwd) > max_states:
            return None
        expand_fwd = len(front_f) <= len(front_b)
        parents, frontier = (fwd, front_f) if expand_fwd else (bwd, front_b)
        other = bwd if expand_fwd else fwd
        nxt: List[SignedWord] = []
        meet: Optional[SignedWord] = None
        for w in sorted(frontier):
            for w2, move in arena.neighbours(w, anchor_r, anchor_s, max_len):
                if w2 in parents:
                    continue
                parents[w2] = (w, move)
                nxt.append(w2)
                if w2 in other:
                    meet = w2
                    break
            if meet is not None:
                break
        if meet is not None:
            return stitch(meet)
        if expand_fwd:
            front_f = nxt
        else:
            front_b = nxt
    return None


def _move_between(arena: _Arena, a: SignedWord, b: SignedWord,
                  anchor_r: str, anchor_s: str) -> Move:
    """The move turning a into b (used to invert backward-search steps)."""
    for w2, move in arena.neighbours(a, anchor_r, anchor_s, max_len=len(b) + 2):
        if w2 == b:
            return move
    # inverse of a restricted insertion is a deletion and vice versa; a square
    # move always has its reverse in the table, so only deletions remain
    if len(a) - 2 == len(b):
        for i in range(len(a) - 1):
            if a[i] == -a[i + 1] and a[:i] + a[i + 2:] == b:
                return ("delete", i)
    if len(b) - 2 == len(a):
        for i in range(len(b) - 1):
            if b[i] == -b[i + 1] and b[:i] + b[i + 2:] == a:
                return ("insert", i, (b[i], b[i + 1]))
    raise AssertionError("backward step cannot be inverted")


def find_collapse_proof(p: KGraphPresentation, lam: Morphism, mu: Morphism,
                        depth: int) -> Optional[CollapseProof]:
    """Bounded proof search for i(lam) = i(mu); None means 'not found'."""
    arena = _Arena(p)
    start, goal = arena.word_of(lam), arena.word_of(mu)
    max_len = max(len(start), len(goal), 1) + max(2, depth // 3)
    max_states = 4000 * max(depth, 1)
    res = _bidirectional_search(arena, start, goal, lam.rng, lam.src,
                                max_len, max_states)
    if res is None:
        return None
    words, moves = res
    return CollapseProof(lam, mu, tuple(arena.tokens(w) for w in words),
                         tuple(moves))


def collapse_search(p: KGraphPresentation, depth: int) -> Optional[CollapseProof]:
    """First provable equality i(lam) = i(mu) between distinct parallel
    morphisms of equal degree <= (2,...,2), as a replayable proof.

    Pairs are enumerated by degree (total, then fewest zero components, then
    lexicographic: mixed-color degrees are where squares act directly), then
    by source and range vertex, then by word order.  Candidates whose
    abelianized images differ are skipped: they can never collapse.
    """
    p.require_valid()
    from .morphisms import _undirected_components

    ab = None
    if len(_undirected_components(p)) == 1:
        ab, _ = universal_abelian_cocycle(p)

    two = tuple(2 for _ in range(p.k))
    degree_order = sorted(
        (n for n in dg.degrees_upto(two) if n != dg.zero(p.k)),
        key=lambda n: (dg.total(n), sum(1 for x in n if x == 0), n))
    for n in degree_order:
        for src in p.vertices:
            for rng in p.vertices:
                ms = morphisms(p, rng, src, n)
                for i in range(len(ms)):
                    for j in range(i + 1, len(ms)):
                        lam, mu = ms[i], ms[j]
                        if ab is not None and ab(lam) != ab(mu):
                            continue
                        proof = find_collapse_proof(p, lam, mu, depth)
                        if proof is not None:
                            return proof
    return None
