"""Bounded Knuth-Bendix completion for finitely presented groups.

Words are tuples of signed 1-based generator indices.  Free cancellation is
expressed as explicit rules (x.x^-1 -> empty), so completion sees those
overlaps too.  The procedure is the standard one: keep a queue of equations,
orient the smallest one into a shortlex-decreasing rule, interreduce, add
critical pairs, repeat.  Caps on added rules and on word length make it a
semi-decision: reduce(w) == () certifies triviality, the converse only holds
if the run converged.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .fundamental import GroupPresentation, Word, free_reduce, invert_word


def _letter_key(x: int) -> Tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(_letter_key(x) for x in w))


def orient(a: Word, b: Word) -> Tuple[Word, Word]:
    return (a, b) if shortlex_key(a) > shortlex_key(b) else (b, a)


@dataclass
class RewriteSystem:
    generators: Tuple[str, ...]
    rules: List[Tuple[Word, Word]] = field(default_factory=list)
    converged: bool = False
    new_rules_added: int = 0

    def _index(self) -> Dict[int, List[Tuple[Word, Word]]]:
        idx: Dict[int, List[Tuple[Word, Word]]] = {}
        for lhs, rhs in self.rules:
            idx.setdefault(lhs[0], []).append((lhs, rhs))
        return idx

    def reduce(self, word: Sequence[int]) -> Word:
        w = list(word)
        if not self.rules:
            return tuple(w)
        idx = self._index()
        back = max(len(l) for l, _ in self.rules)
        i = 0
        while i < len(w):
            hit = False
            for lhs, rhs in idx.get(w[i], ()):
                n = len(lhs)
                if tuple(w[i:i + n]) == lhs:
                    w[i:i + n] = list(rhs)
                    i = max(0, i - back)
                    hit = True
                    break
            if not hit:
                i += 1
        return tuple(w)

    def is_trivial(self, word: Sequence[int]) -> bool:
        """True is a certificate; False only means 'not reduced to identity'."""
        return self.reduce(word) == ()


def _critical_equations(r1: Tuple[Word, Word], r2: Tuple[Word, Word]
                        ) -> List[Tuple[Word, Word]]:
    (l1, q1), (l2, q2) = r1, r2
    out = []
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            out.append((q1 + l2[k:], l1[:-k] + q2))
    if len(l2) < len(l1):
        for off in range(len(l1) - len(l2) + 1):
            if l1[off:off + len(l2)] == l2:
                out.append((q1, l1[:off] + q2 + l1[off + len(l2):]))
    return out


def knuth_bendix(gp: GroupPresentation, max_new_rules: int = 100,
                 max_len: int = 12) -> RewriteSystem:
    """Deterministic bounded completion with eager interreduction."""
    rs = RewriteSystem(gp.generators)
    g = len(gp.generators)

    equations: List[Tuple[tuple, Word, Word]] = []
    counter = 0

    def push(a: Word, b: Word) -> None:
        nonlocal counter
        key = max(shortlex_key(a), shortlex_key(b))
        heapq.heappush(equations, ((key, shortlex_key(a), counter), a, b))
        counter += 1

    for x in range(1, g + 1):
        push((x, -x), ())
        push((-x, x), ())
    for rel in gp.relators:
        w = free_reduce(rel)
        if w:
            push(w, ())

    dropped = False
    budget = max_new_rules + 2 * g + len(gp.relators)  # seeds are free
    while equations:
        _, a, b = heapq.heappop(equations)
        a, b = rs.reduce(a), rs.reduce(b)
        if a == b:
            continue
        lhs, rhs = orient(a, b)
        if len(lhs) > max_len or len(rhs) > max_len:
            dropped = True
            continue
        if budget <= 0:
            return rs
        budget -= 1
        rs.new_rules_added += 1
        # interreduce: retire rules whose lhs can be rewritten by the new rule
        new_rule = (lhs, rhs)
        kept: List[Tuple[Word, Word]] = []
        for L, R in rs.rules:
            if _contains(L, lhs):
                push(L, R)
            else:
                kept.append((L, rs.reduce(R)))
        rs.rules = kept
        for other in list(rs.rules):
            for eq in _critical_equations(new_rule, other):
                push(*eq)
            for eq in _critical_equations(other, new_rule):
                push(*eq)
        for eq in _critical_equations(new_rule, new_rule):
            push(*eq)
        rs.rules.append(new_rule)
    rs.converged = not dropped
    return rs


def _contains(big: Word, small: Word) -> bool:
    n = len(small)
    return any(big[i:i + n] == small for i in range(len(big) - n + 1))
