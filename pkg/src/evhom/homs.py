"""Homomorphism enumeration, strictness, and Lovász-vector comparison."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import ClassMismatchError, LimitExceededError
from .graph import ClassTag, Digraph, bits, class_membership, enumerate_class, ENUM_LIMITS

MAX_SOURCE_VERTICES = 8

NONE, HOM, STRICT = "none", "hom", "strict"


class VertexMap:
    """A total map ``V(source) -> V(target)`` with a lazily cached classification."""

    __slots__ = ("source", "target", "map", "_kind")

    def __init__(self, source: Digraph, target: Digraph, mapping: Sequence[int]):
        if len(mapping) != source.n:
            raise ValueError("vertex map must be total on the source")
        for t in mapping:
            if not 0 <= t < target.n:
                raise ValueError(f"image {t} is not a target vertex")
        self.source = source
        self.target = target
        self.map = tuple(mapping)
        self._kind: str | None = None

    def __call__(self, v: int) -> int:
        return self.map[v]

    def __len__(self) -> int:
        return len(self.map)

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexMap) and self.map == other.map \
            and self.source == other.source and self.target == other.target

    def __hash__(self) -> int:
        return hash(self.map)

    def __repr__(self) -> str:
        pairs = ", ".join(f"{self.source.name(v)}->{self.target.name(t)}" for v, t in enumerate(self.map))
        return f"VertexMap({pairs})"

    @property
    def kind(self) -> str:
        if self._kind is None:
            self._kind = _classify(self)
        return self._kind

    def image(self, mask: int) -> int:
        out = 0
        for v in bits(mask):
            out |= 1 << self.map[v]
        return out

    def preimage(self, t: int) -> int:
        return sum(1 << v for v, w in enumerate(self.map) if w == t)

    def compose(self, after: "VertexMap") -> "VertexMap":
        """``after ∘ self``."""
        if after.source != self.target:
            raise ValueError("maps are not composable")
        return VertexMap(self.source, after.target, [after.map[t] for t in self.map])

    def as_dict(self) -> dict[str, str]:
        return {self.source.name(v): self.target.name(t) for v, t in enumerate(self.map)}


def _classify(m: VertexMap) -> str:
    g, h, f = m.source, m.target, m.map
    strict = True
    for u in range(g.n):
        fu = f[u]
        row = h.out[fu]
        for v in bits(g.out[u]):
            fv = f[v]
            if not row >> fv & 1:
                return NONE
            if u != v and fu == fv:
                strict = False
    return STRICT if strict else HOM


def is_hom(m: VertexMap) -> bool:
    return m.kind != NONE


def is_strict_hom(m: VertexMap) -> bool:
    return m.kind == STRICT


def identity_map(g: Digraph) -> VertexMap:
    return VertexMap(g, g, range(g.n))


def _raw_homs(g: Digraph, h: Digraph, strict: bool) -> Iterator[tuple[int, ...]]:
    # Backtracking in vertex order; candidates for vertex k are the targets
    # compatible with every arc between k and already-placed vertices.
    n = g.n
    if n > MAX_SOURCE_VERTICES:
        raise LimitExceededError(f"homomorphism enumeration limited to {MAX_SOURCE_VERTICES} source vertices")
    full = h.full_mask
    loop_ok = h.loop_mask
    img = [0] * n
    hout, hin = h.out, h.inn
    back_out = [g.out[k] & ((1 << k) - 1) for k in range(n)]
    back_in = [g.inn[k] & ((1 << k) - 1) for k in range(n)]
    has_loop = [bool(g.out[k] >> k & 1) for k in range(n)]

    def rec(k: int):
        if k == n:
            yield tuple(img)
            return
        cand = loop_ok if has_loop[k] else full
        for j in bits(back_out[k]):
            c = hin[img[j]]
            if strict:
                c &= ~(1 << img[j])
            cand &= c
        for j in bits(back_in[k]):
            c = hout[img[j]]
            if strict:
                c &= ~(1 << img[j])
            cand &= c
        for t in bits(cand):
            img[k] = t
            yield from rec(k + 1)

    yield from rec(0)


def enumerate_homs(g: Digraph, h: Digraph, strict: bool = False) -> Iterator[VertexMap]:
    """Yield ℋ(g,h) or, with ``strict``, 𝒮(g,h) in lexicographic order of the map array."""
    kind = STRICT if strict else None
    for img in _raw_homs(g, h, strict):
        m = VertexMap(g, h, img)
        if kind:
            m._kind = kind
        yield m


def count_homs(g: Digraph, h: Digraph, strict: bool = False) -> int:
    return sum(1 for _ in _raw_homs(g, h, strict))


def gamma_component(m: VertexMap, v: int) -> int:
    """Weak component of ``v`` in the subgraph induced on the fibre of ``m(v)``."""
    g = m.source
    if not 0 <= v < g.n:
        raise ValueError(f"invalid vertex id {v}")
    fibre = m.preimage(m.map[v])
    seen = 1 << v
    frontier = seen
    while frontier:
        nxt = 0
        for u in bits(frontier):
            nxt |= (g.out[u] | g.inn[u]) & fibre
        frontier = nxt & ~seen
        seen |= frontier
    return seen


@dataclass
class DominanceRow:
    graph: Digraph
    strict_r: int
    strict_s: int
    hom_r: int
    hom_s: int

    def counts(self, strict: bool) -> tuple[int, int]:
        return (self.strict_r, self.strict_s) if strict else (self.hom_r, self.hom_s)


@dataclass
class DominanceReport:
    cls: ClassTag
    n_max: int
    strict: bool
    rows: list[DominanceRow] = field(default_factory=list)
    counterexamples: list[DominanceRow] = field(default_factory=list)

    @property
    def scanned(self) -> int:
        return len(self.rows)

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def compare_lovasz(r: Digraph, s: Digraph, c: ClassTag, n_max: int, strict: bool = False) -> DominanceReport:
    """Compare homomorphism counts into ``r`` and ``s`` over every canonical member of ``c`` up to ``n_max``.

    A row is a counterexample when its count into ``r`` exceeds the count into ``s``.
    """
    for name, g in (("R", r), ("S", s)):
        if not class_membership(g, c):
            raise ClassMismatchError(f"{name} is not a member of class {c.value}")
    if n_max > ENUM_LIMITS[c]:
        raise LimitExceededError(f"enumeration of {c.value} limited to {ENUM_LIMITS[c]} vertices")
    report = DominanceReport(c, n_max, strict)
    for n in range(1, n_max + 1):
        for g in enumerate_class(c, n):
            row = DominanceRow(g, count_homs(g, r, True), count_homs(g, s, True),
                               count_homs(g, r, False), count_homs(g, s, False))
            report.rows.append(row)
            a, b = row.counts(strict)
            if a > b:
                report.counterexamples.append(row)
    return report
