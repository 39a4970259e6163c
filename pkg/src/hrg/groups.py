"""Group handles: the few target-group flavors cocycles map into.

Elements must be hashable and stable; `label` renders an element as a short
string usable inside vertex ids of skew products.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Tuple


class GroupHandle:
    """Protocol: identity, mul, inv, eq (==), label."""

    exact = True

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def label(self, a) -> str:
        return str(a)

    def power(self, a, n: int):
        out = self.identity()
        base = a if n >= 0 else self.inv(a)
        for _ in range(abs(n)):
            out = self.mul(out, base)
        return out


@dataclass(frozen=True)
class FiniteGroup(GroupHandle):
    """Explicit multiplication table over hashable element names."""

    elements: Tuple[str, ...]
    table: Tuple[Tuple[str, ...], ...]  # table[i][j] = elements[i] * elements[j]
    identity_element: str

    def __post_init__(self):
        idx = {e: i for i, e in enumerate(self.elements)}
        if len(idx) != len(self.elements):
            raise ValueError("duplicate element names")
        object.__setattr__(self, "_idx", idx)
        inv = {}
        for a in self.elements:
            for b in self.elements:
                if self.mul(a, b) == self.identity_element:
                    inv[a] = b
        if len(inv) != len(self.elements):
            raise ValueError("not a group: missing inverses")
        object.__setattr__(self, "_inv", inv)

    def identity(self):
        return self.identity_element

    def mul(self, a, b):
        return self.table[self._idx[a]][self._idx[b]]

    def inv(self, a):
        return self._inv[a]

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        els = tuple(str(i) for i in range(n))
        table = tuple(tuple(str((i + j) % n) for j in range(n)) for i in range(n))
        return FiniteGroup(els, table, "0")

    @staticmethod
    def trivial() -> "FiniteGroup":
        return FiniteGroup(("e",), (("e",),), "e")


@dataclass(frozen=True)
class FreeAbelianGroup(GroupHandle):
    """Z^m with tuple elements."""

    rank: int

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b, strict=True))

    def inv(self, a):
        return tuple(-x for x in a)

    def label(self, a) -> str:
        return ",".join(str(x) for x in a)

    def generator(self, i: int):
        return tuple(1 if j == i else 0 for j in range(self.rank))


@dataclass(frozen=True)
class AbelianWithTorsion(GroupHandle):
    """Z^rank x Z/d_1 x ... x Z/d_t, elements are int tuples."""

    rank: int
    torsion: Tuple[int, ...]

    def _norm(self, a):
        free = a[: self.rank]
        tor = tuple(x % d for x, d in zip(a[self.rank:], self.torsion, strict=True))
        return tuple(free) + tor

    def identity(self):
        return (0,) * (self.rank + len(self.torsion))

    def mul(self, a, b):
        return self._norm(tuple(x + y for x, y in zip(a, b, strict=True)))

    def inv(self, a):
        return self._norm(tuple(-x for x in a))

    def label(self, a) -> str:
        return ",".join(str(x) for x in a)


@dataclass(frozen=True)
class FreeGroup(GroupHandle):
    """Free group on named generators; elements are reduced tuples of signed indices."""

    generators: Tuple[str, ...]

    def identity(self):
        return ()

    def generator(self, name: str):
        return (self.generators.index(name) + 1,)

    @staticmethod
    def _reduce(word: Iterable[int]) -> Tuple[int, ...]:
        out: list = []
        for x in word:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def mul(self, a, b):
        return self._reduce(tuple(a) + tuple(b))

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def label(self, a) -> str:
        if not a:
            return "1"
        parts = []
        for x in a:
            name = self.generators[abs(x) - 1]
            parts.append(name if x > 0 else name + "^-1")
        return ".".join(parts)
