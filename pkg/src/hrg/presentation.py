"""Colored skeletons with factorization squares: the concrete form of a k-graph.

A presentation is a finite colored multigraph (vertices, edges with a color in
1..k) together with a square set pairing each composable two-colored path
e.f (color(e) < color(f)) with its swapped form f'.e'.  Validation checks that
the square map is a bijection for every color pair and that three-colored
paths commute both ways to the same word, which is exactly the condition for
a unique k-graph with this skeleton to exist.

Composition is written range-on-the-left: a word (e1, e2, ...) is composable
when s(e_i) = r(e_{i+1}), and the word denotes e1 ∘ e2 ∘ ... with range
r(e1) and source s(e_last).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ColorOutOfRange, MalformedInput, NotComposable

SquareKey = Tuple[str, str]


@dataclass(frozen=True)
class Edge:
    id: str
    color: int  # 1-based
    src: str  # s(e)
    rng: str  # r(e)


@dataclass(frozen=True)
class ValidationFailure:
    kind: str  # "structure" | "square-missing" | "square-not-injective" | "square-bad" | "hexagon"
    detail: str
    witness: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: Tuple[ValidationFailure, ...] = ()
    hexagon_vacuous: bool = False

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "hexagon_vacuous": self.hexagon_vacuous,
            "failures": [
                {"kind": f.kind, "detail": f.detail, "witness": list(f.witness)}
                for f in self.failures
            ],
        }


class KGraphPresentation:
    """Immutable after construction; all query methods are pure."""

    def __init__(
        self,
        k: int,
        vertices: Iterable[str],
        edges: Iterable[Edge],
        squares: Mapping[SquareKey, SquareKey],
        meta: Optional[dict] = None,
    ):
        self.k = int(k)
        self.vertices: Tuple[str, ...] = tuple(sorted(set(vertices)))
        edge_list = sorted(edges, key=lambda e: e.id)
        self.edges: Dict[str, Edge] = {e.id: e for e in edge_list}
        if len(self.edges) != len(edge_list):
            raise MalformedInput("duplicate edge ids")
        self.squares: Dict[SquareKey, SquareKey] = dict(squares)
        self.meta: dict = dict(meta or {})
        self._check_structure()
        self._index()
        self._validation: Optional[ValidationReport] = None
        self._window_ok: Optional[bool] = None

    # -- construction helpers -------------------------------------------------

    def _check_structure(self) -> None:
        vset = set(self.vertices)
        if not vset:
            raise MalformedInput("presentation needs at least one vertex")
        for e in self.edges.values():
            if e.color < 1 or e.color > self.k:
                raise ColorOutOfRange(f"edge {e.id} has color {e.color}, rank is {self.k}")
            if e.src not in vset or e.rng not in vset:
                raise MalformedInput(f"edge {e.id} references undeclared vertex")
        for (a, b), (bp, ap) in self.squares.items():
            for x in (a, b, bp, ap):
                if x not in self.edges:
                    raise MalformedInput(f"square references undeclared edge {x!r}")

    def _index(self) -> None:
        by_color: Dict[int, List[str]] = {c: [] for c in range(1, self.k + 1)}
        by_rng: Dict[Tuple[str, int], List[str]] = {}
        by_src: Dict[Tuple[str, int], List[str]] = {}
        for e in self.edges.values():  # already id-sorted
            by_color[e.color].append(e.id)
            by_rng.setdefault((e.rng, e.color), []).append(e.id)
            by_src.setdefault((e.src, e.color), []).append(e.id)
        self._by_color = {c: tuple(v) for c, v in by_color.items()}
        self._by_rng = {k: tuple(v) for k, v in by_rng.items()}
        self._by_src = {k: tuple(v) for k, v in by_src.items()}
        self._inverse_squares: Dict[SquareKey, SquareKey] = {}
        for key, val in self.squares.items():
            if val in self._inverse_squares:
                # non-injective square map; recorded here, reported by validate()
                continue
            self._inverse_squares[val] = key

    # -- basic accessors -------------------------------------------------------

    def edge(self, eid: str) -> Edge:
        return self.edges[eid]

    def color(self, eid: str) -> int:
        return self.edges[eid].color

    def edges_of_color(self, color: int) -> Tuple[str, ...]:
        return self._by_color.get(color, ())

    def edges_with_range(self, v: str, color: Optional[int] = None) -> Tuple[str, ...]:
        """Edges e with r(e) = v; these extend a path forward at its source side."""
        if color is not None:
            return self._by_rng.get((v, color), ())
        out: List[str] = []
        for c in range(1, self.k + 1):
            out.extend(self._by_rng.get((v, c), ()))
        return tuple(out)

    def edges_with_source(self, v: str, color: Optional[int] = None) -> Tuple[str, ...]:
        if color is not None:
            return self._by_src.get((v, color), ())
        out: List[str] = []
        for c in range(1, self.k + 1):
            out.extend(self._by_src.get((v, c), ()))
        return tuple(out)

    def square(self, eid: str, fid: str) -> SquareKey:
        """(e, f) with color(e) < color(f), s(e) = r(f)  ->  (f', e')."""
        try:
            return self.squares[(eid, fid)]
        except KeyError:
            raise NotComposable(f"no square for pair ({eid}, {fid})") from None

    def square_inverse(self, fid: str, eid: str) -> SquareKey:
        """(f', e') with color(f') > color(e')  ->  the sorted pair (e, f)."""
        try:
            return self._inverse_squares[(fid, eid)]
        except KeyError:
            raise NotComposable(f"no square yielding pair ({fid}, {eid})") from None

    def is_composable_word(self, word: Sequence[str]) -> bool:
        for a, b in zip(word, word[1:]):
            if self.edges[a].src != self.edges[b].rng:
                return False
        return True

    # -- validation ------------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._validation is not None:
            return self._validation
        failures: List[ValidationFailure] = []
        self._validate_squares(failures)
        hexagon_vacuous = True
        if not failures:
            hexagon_vacuous = self._validate_hexagons(failures)
        report = ValidationReport(ok=not failures, failures=tuple(failures),
                                  hexagon_vacuous=hexagon_vacuous)
        self._validation = report
        return report

    @property
    def is_valid(self) -> bool:
        return self.validate().ok

    def require_valid(self) -> None:
        """Full validation for ordinary presentations; windows of lazy graphs
        get the interior-restricted check instead (their boundary pairs
        legitimately lack squares)."""
        if self.meta.get("window"):
            if self._window_ok is None:
                from .lazy import validate_window

                self._window_ok = validate_window(self)
            if not self._window_ok:
                raise MalformedInput("window fails interior square/hexagon checks")
            return
        rep = self.validate()
        if not rep.ok:
            first = rep.failures[0]
            raise MalformedInput(f"presentation fails validation: {first.kind}: {first.detail}")

    def _composable_pairs(self, ci: int, cj: int) -> List[SquareKey]:
        """Pairs (e, f) with color(e)=ci, color(f)=cj, s(e)=r(f)."""
        out = []
        for eid in self.edges_of_color(ci):
            v = self.edges[eid].src
            for fid in self._by_rng.get((v, cj), ()):
                out.append((eid, fid))
        return out

    def _validate_squares(self, failures: List[ValidationFailure]) -> None:
        seen_targets: Dict[Tuple[int, int], Dict[SquareKey, SquareKey]] = {}
        for (a, b), (bp, ap) in self.squares.items():
            ea, eb, ebp, eap = (self.edges[x] for x in (a, b, bp, ap))
            if not (ea.color < eb.color and ea.color == eap.color and eb.color == ebp.color):
                failures.append(ValidationFailure(
                    "square-bad", "square colors inconsistent", (a, b, bp, ap)))
                continue
            if ea.src != eb.rng or ebp.src != eap.rng or ebp.rng != ea.rng or eap.src != eb.src:
                failures.append(ValidationFailure(
                    "square-bad", "square endpoints inconsistent", (a, b, bp, ap)))
                continue
            bucket = seen_targets.setdefault((ea.color, eb.color), {})
            if (bp, ap) in bucket:
                failures.append(ValidationFailure(
                    "square-not-injective",
                    f"pairs {bucket[(bp, ap)]} and {(a, b)} map to the same swapped pair",
                    (a, b, bp, ap)))
            bucket[(bp, ap)] = (a, b)
        for ci in range(1, self.k + 1):
            for cj in range(ci + 1, self.k + 1):
                forward = self._composable_pairs(ci, cj)
                backward = self._composable_pairs(cj, ci)
                for pair in forward:
                    if pair not in self.squares:
                        failures.append(ValidationFailure(
                            "square-missing", f"composable pair {pair} has no square", pair))
                targets = {self.squares[p] for p in forward if p in self.squares}
                for fid, eid in backward:
                    if (fid, eid) not in targets:
                        failures.append(ValidationFailure(
                            "square-not-surjective",
                            f"pair {(fid, eid)} is not the swap of any square",
                            (fid, eid)))

    def _swap_at(self, word: List[str], i: int) -> None:
        """Swap positions i, i+1 (distinct colors) using the square data, in place."""
        a, b = word[i], word[i + 1]
        if self.color(a) < self.color(b):
            word[i], word[i + 1] = self.squares[(a, b)]
        else:
            word[i], word[i + 1] = self._inverse_squares[(a, b)]

    def _validate_hexagons(self, failures: List[ValidationFailure]) -> bool:
        """Check both reversal routes agree on color-sorted 3-colored paths.

        Returns True when no 3-colored composable path exists (vacuous check).
        """
        vacuous = True
        colors = range(1, self.k + 1)
        for c1 in colors:
            for c2 in colors:
                if c2 <= c1:
                    continue
                for c3 in colors:
                    if c3 <= c2:
                        continue
                    for x in self.edges_of_color(c1):
                        sx = self.edges[x].src
                        for y in self._by_rng.get((sx, c2), ()):
                            sy = self.edges[y].src
                            for z in self._by_rng.get((sy, c3), ()):
                                vacuous = False
                                try:
                                    ra = [x, y, z]
                                    self._swap_at(ra, 0)
                                    self._swap_at(ra, 1)
                                    self._swap_at(ra, 0)
                                    rb = [x, y, z]
                                    self._swap_at(rb, 1)
                                    self._swap_at(rb, 0)
                                    self._swap_at(rb, 1)
                                except KeyError:
                                    failures.append(ValidationFailure(
                                        "hexagon", "missing square along a 3-colored path",
                                        (x, y, z)))
                                    continue
                                if ra != rb:
                                    failures.append(ValidationFailure(
                                        "hexagon",
                                        f"reversal routes disagree: {ra} vs {rb}",
                                        (x, y, z)))
        return vacuous

    # -- serialization ----------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "color": e.color, "src": e.src, "rng": e.rng}
                for e in sorted(self.edges.values(), key=lambda e: e.id)
            ],
            "squares": [
                {"i_edge": a, "j_edge": b, "j_prime": bp, "i_prime": ap}
                for (a, b), (bp, ap) in sorted(self.squares.items())
            ],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict, meta: Optional[dict] = None) -> "KGraphPresentation":
        try:
            k = data["k"]
            vertices = data["vertices"]
            edges = [Edge(d["id"], int(d["color"]), d["src"], d["rng"]) for d in data["edges"]]
            squares = {
                (d["i_edge"], d["j_edge"]): (d["j_prime"], d["i_prime"])
                for d in data.get("squares", [])
            }
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad presentation JSON: {exc}") from exc
        if len(squares) != len(data.get("squares", [])):
            raise MalformedInput("duplicate square keys")
        return cls(k, vertices, edges, squares, meta=meta)

    @classmethod
    def from_json(cls, text: str) -> "KGraphPresentation":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise MalformedInput("presentation JSON must be an object")
        return cls.from_json_dict(data)

    _DOT_STYLES = ("solid", "dashed", "dotted", "bold", "tapered")
    _DOT_COLORS = ("blue", "red", "green4", "orange", "purple", "brown")

    def to_dot(self, name: str = "skeleton") -> str:
        """DOT digraph; arrows drawn source -> range, one style per color."""
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for e in sorted(self.edges.values(), key=lambda e: e.id):
            style = self._DOT_STYLES[(e.color - 1) % len(self._DOT_STYLES)]
            color = self._DOT_COLORS[(e.color - 1) % len(self._DOT_COLORS)]
            lines.append(
                f'  "{e.src}" -> "{e.rng}" [label="{e.id}", style={style}, color={color}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    # -- misc -------------------------------------------------------------------

    def with_meta(self, **kv) -> "KGraphPresentation":
        merged = dict(self.meta)
        merged.update(kv)
        clone = KGraphPresentation.__new__(KGraphPresentation)
        clone.__dict__.update(self.__dict__)
        clone.meta = merged
        return clone

    def __repr__(self) -> str:
        return (f"KGraphPresentation(k={self.k}, |V|={len(self.vertices)}, "
                f"|E|={len(self.edges)}, |squares|={len(self.squares)})")
