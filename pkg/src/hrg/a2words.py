"""Word calculus for triangle groups presented by a triella.

Elements are handled through their right normal form: positive letters first
(chained so that no letter lies on the previous letter's line), then negative
letters, with no cancellation at the junction.  Rewriting to that form uses
four local rules: free cancellation, positive contraction a_x a_y -> a_z^-1
and negative contraction a_y^-1 a_x^-1 -> a_z for triples (x, y, z), and the
diamond swap a_x^-1 a_y -> a_s a_t^-1 through the unique line containing x
and y.  Every rule strictly decreases (length, #inversions), so the scan
terminates; uniqueness of the normal form makes the strategy irrelevant.

The left normal form (negatives first) uses the mirrored swap through the
common point of the two lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import ShapeMismatch, ShapeTooSmall
from .triella import Triella

Letter = Tuple[int, int]  # (point, +1 | -1)
WordT = Tuple[Letter, ...]
Shape = Tuple[int, int]


@dataclass(frozen=True)
class A2Element:
    """A group element in right normal form."""

    word: WordT
    shape: Shape

    def __str__(self) -> str:
        return format_word(self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word


def parse_word(text: str) -> WordT:
    """Tokens like `a0 a4^-1 a6`, whitespace separated."""
    out: List[Letter] = []
    for tok in text.split():
        sign = 1
        if tok.endswith("^-1"):
            sign = -1
            tok = tok[:-3]
        if not tok.startswith("a"):
            raise ValueError(f"bad token {tok!r}")
        out.append((int(tok[1:]), sign))
    return tuple(out)


def format_word(word: Iterable[Letter]) -> str:
    toks = [f"a{p}" + ("" if s > 0 else "^-1") for p, s in word]
    return " ".join(toks) if toks else "1"


class A2Calculus:
    """Rewriting engine and group operations for one triella."""

    def __init__(self, t: Triella):
        self.t = t
        self.points = tuple(sorted(t.plane.points))
        P = self.points
        self.pos_contract: Dict[Tuple[int, int], Optional[int]] = {
            (x, y): t.complete(x, y) for x in P for y in P}
        point_of_line = {frozenset(l): p for p, l in t.line_of.items()}
        self.swap_right: Dict[Tuple[int, int], Tuple[int, int]] = {}
        self.swap_left: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for x in P:
            for y in P:
                if x == y:
                    continue
                # right: a_x^-1 a_y = a_s a_t^-1 via z with x, y on line(z)
                z = point_of_line[frozenset(t.plane.line_through(x, y))]
                s, tt = t.complete(z, x), t.complete(z, y)
                assert s is not None and tt is not None
                self.swap_right[(x, y)] = (s, tt)
                # left: a_x a_y^-1 = a_s^-1 a_t via the meet of line(x), line(y)
                zz_set = t.line_of[x] & t.line_of[y]
                assert len(zz_set) == 1
                zz = next(iter(zz_set))
                ss, tl = t.complete(x, zz), t.complete(y, zz)
                assert ss is not None and tl is not None
                self.swap_left[(x, y)] = (ss, tl)

    # -- rewriting -------------------------------------------------------------

    def _rewrite(self, word: Sequence[Letter], side: str) -> WordT:
        w = list(word)
        i = 0
        while i + 1 < len(w):
            (p, sp), (q, sq) = w[i], w[i + 1]
            rewrote = True
            if sp != sq and p == q:
                del w[i:i + 2]
            elif sp > 0 and sq > 0 and self.pos_contract[(p, q)] is not None:
                w[i:i + 2] = [(self.pos_contract[(p, q)], -1)]
            elif sp < 0 and sq < 0 and self.pos_contract[(q, p)] is not None:
                w[i:i + 2] = [(self.pos_contract[(q, p)], 1)]
            elif side == "right" and sp < 0 and sq > 0 and p != q:
                s, t = self.swap_right[(p, q)]
                w[i:i + 2] = [(s, 1), (t, -1)]
            elif side == "left" and sp > 0 and sq < 0 and p != q:
                s, t = self.swap_left[(p, q)]
                w[i:i + 2] = [(s, -1), (t, 1)]
            else:
                rewrote = False
            i = max(i - 1, 0) if rewrote else i + 1
        return tuple(w)

    def normalize(self, word, side: str = "right"):
        """Right form returns an A2Element; left form returns the raw word."""
        if isinstance(word, str):
            word = parse_word(word)
        if isinstance(word, A2Element):
            word = word.word
        w = self._rewrite(tuple(word), side)
        if side == "left":
            return w
        m = sum(1 for _, s in w if s > 0)
        return A2Element(w, (m, len(w) - m))

    def shape(self, word) -> Shape:
        return self.normalize(word).shape

    # -- group operations --------------------------------------------------------

    def identity(self) -> A2Element:
        return A2Element((), (0, 0))

    def element(self, text: str) -> A2Element:
        return self.normalize(parse_word(text))

    def multiply(self, u: A2Element, v: A2Element) -> A2Element:
        return self.normalize(u.word + v.word)

    def inverse(self, u: A2Element) -> A2Element:
        return self.normalize(tuple((p, -s) for p, s in reversed(u.word)))

    def equal(self, u: A2Element, v: A2Element) -> bool:
        return u.word == v.word

    def generator(self, p: int, sign: int = 1) -> A2Element:
        return self.normalize(((p, sign),))

    # -- enumeration ---------------------------------------------------------------

    def enumerate_shape(self, shape: Shape) -> List[A2Element]:
        """All normal forms of the given shape, in lexicographic letter order."""
        m, n = shape
        out: List[A2Element] = []

        def pos_chains(length: int, prev: Optional[int]) -> Iterable[Tuple[int, ...]]:
            if length == 0:
                yield ()
                return
            for x in self.points:
                if prev is not None and x in self.t.line_of[prev]:
                    continue
                for rest in pos_chains(length - 1, x):
                    yield (x,) + rest

        def neg_chains(length: int, prev: Optional[int], first_bar: Optional[int]
                       ) -> Iterable[Tuple[int, ...]]:
            # chain y_1..y_n with y_j not on line(y_{j+1}); prev = y_j
            if length == 0:
                yield ()
                return
            for y in self.points:
                if first_bar is not None and y == first_bar:
                    continue
                if prev is not None and prev in self.t.line_of[y]:
                    continue
                for rest in neg_chains(length - 1, y, None):
                    yield (y,) + rest

        for pos in pos_chains(m, None):
            bar = pos[-1] if (pos and n) else None
            for neg in neg_chains(n, None, bar):
                word = tuple((x, 1) for x in pos) + tuple((y, -1) for y in neg)
                out.append(A2Element(word, shape))
        return out

    # -- factorization ----------------------------------------------------------------

    def _peel(self, w: A2Element, sign: int) -> Tuple[int, A2Element]:
        """The unique x such that w = a_x^{sign} * rest with additive shapes."""
        target = (w.shape[0] - 1, w.shape[1]) if sign > 0 else (w.shape[0], w.shape[1] - 1)
        hits = []
        for x in self.points:
            rest = self.normalize(((x, -sign),) + w.word)
            if rest.shape == target:
                hits.append((x, rest))
        if len(hits) != 1:
            raise ShapeMismatch(f"peel of sign {sign} from {w} found {len(hits)} candidates")
        return hits[0]

    def unique_factorize(self, w: A2Element, m: Shape, n: Shape
                         ) -> Tuple[A2Element, A2Element]:
        """The unique (h, k) with w = hk, shape(h) = m, shape(k) = n."""
        if (m[0] + n[0], m[1] + n[1]) != w.shape:
            raise ShapeMismatch(f"{m} + {n} != shape {w.shape}")
        if any(x < 0 for x in m + n):
            raise ShapeMismatch("shapes must be nonnegative")
        head: List[Letter] = []
        rest = w
        for _ in range(m[0]):
            x, rest = self._peel(rest, +1)
            head.append((x, 1))
        for _ in range(m[1]):
            x, rest = self._peel(rest, -1)
            head.append((x, -1))
        h = self.normalize(tuple(head))
        if h.shape != m or rest.shape != n:
            raise ShapeMismatch(f"factorization failed: got {h.shape}, {rest.shape}")
        return h, rest

    def unit_maps(self, w: A2Element) -> Dict[str, A2Element]:
        """The four factors of w = r.b = c.s with shape(r) = shape(s) = (1,1).

        Keys: "r", "s" (the shape-(1,1) units), "b" (w = r.b), "c" (w = c.s).
        """
        if not (w.shape[0] >= 1 and w.shape[1] >= 1):
            raise ShapeTooSmall(f"shape {w.shape} lacks a (1,1) unit")
        rest_shape = (w.shape[0] - 1, w.shape[1] - 1)
        r, b = self.unique_factorize(w, (1, 1), rest_shape)
        c, s = self.unique_factorize(w, rest_shape, (1, 1))
        return {"r": r, "b": b, "c": c, "s": s}


# -- confluence oracle ------------------------------------------------------------


def confluence_oracle(calc: A2Calculus, max_start_len: int = 5,
                      closure_len: int = 7) -> Tuple[int, int, List[tuple]]:
    """Exhaustive soundness check of the rewriting engine.

    Explores, from every word of length <= max_start_len, the closure under
    elementary moves bounded to length <= closure_len, where the moves are:
    free insertion/deletion of inverse pairs, relator insertion/deletion
    (a_x a_y a_z and its inverse for triples), and contraction/expansion
    moves.  Verifies that each closure lies in a single normalize-fiber, i.e.
    every move preserves the normal form; distinct fibers can then never
    merge.  Returns (words_visited, edges_checked, violations).
    """
    P = calc.points
    pos = {p: (p, 1) for p in P}
    neg = {p: (p, -1) for p in P}
    letters = [pos[p] for p in P] + [neg[p] for p in P]
    triples = sorted(calc.t.triples)

    def moves(w: WordT) -> Iterable[WordT]:
        L = len(w)
        # contractions and their inverses (length-preserving or shrinking)
        for i in range(L - 1):
            (p, sp), (q, sq) = w[i], w[i + 1]
            if sp != sq and p == q:
                yield w[:i] + w[i + 2:]
            if sp > 0 and sq > 0:
                z = calc.pos_contract[(p, q)]
                if z is not None:
                    yield w[:i] + ((z, -1),) + w[i + 2:]
            if sp < 0 and sq < 0:
                z = calc.pos_contract[(q, p)]
                if z is not None:
                    yield w[:i] + ((z, 1),) + w[i + 2:]
        for i in range(L - 2):  # relator deletions, keeping the move set symmetric
            (p, sp), (q, sq), (r, sr) = w[i], w[i + 1], w[i + 2]
            if sp > 0 and sq > 0 and sr > 0 and calc.pos_contract[(p, q)] == r:
                yield w[:i] + w[i + 3:]
            if sp < 0 and sq < 0 and sr < 0 and calc.pos_contract[(r, q)] == p:
                yield w[:i] + w[i + 3:]
        if L + 1 <= closure_len:
            # expansions: single letter -> inverse pair of the other two
            for i in range(L):
                p, sp = w[i]
                for (x, y, z) in triples:
                    if z == p:
                        if sp < 0:  # a_z^-1 = a_x a_y
                            yield w[:i] + ((x, 1), (y, 1)) + w[i + 1:]
                        else:  # a_z = a_y^-1 a_x^-1
                            yield w[:i] + ((y, -1), (x, -1)) + w[i + 1:]
        if L + 2 <= closure_len:
            for i in range(L + 1):
                for p in P:
                    yield w[:i] + (pos[p], neg[p]) + w[i:]
                    yield w[:i] + (neg[p], pos[p]) + w[i:]
        if L + 3 <= closure_len:
            for i in range(L + 1):
                for (x, y, z) in triples:
                    yield w[:i] + (pos[x], pos[y], pos[z]) + w[i:]
                    yield w[:i] + (neg[z], neg[y], neg[x]) + w[i:]

    visited: Dict[WordT, WordT] = {}
    violations: List[tuple] = []
    edges = 0

    def norm_key(w: WordT) -> WordT:
        return calc.normalize(w).word

    stack: List[WordT] = []
    for length in range(max_start_len + 1):
        for combo in product(letters, repeat=length):
            w = tuple(combo)
            if w in visited:
                continue
            root = norm_key(w)
            visited[w] = root
            stack.append(w)
            while stack:
                cur = stack.pop()
                for nxt in moves(cur):
                    edges += 1
                    known = visited.get(nxt)
                    if known is not None:
                        if known != visited[cur]:
                            violations.append((cur, nxt, visited[cur], known))
                        continue
                    nk = norm_key(nxt)
                    if nk != visited[cur]:
                        violations.append((cur, nxt, visited[cur], nk))
                    visited[nxt] = nk
                    stack.append(nxt)
    return len(visited), edges, violations
