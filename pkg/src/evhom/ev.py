"""EV-systems: the exploded view of a digraph, its lift α and projection φ."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

from .errors import ClassMismatchError, ErdError, LimitExceededError, NotStrictError
from .graph import (ClassTag, Digraph, bits, bug_graph, class_membership, enumerate_class,
                    neighborhoods, submasks)
from .homs import STRICT, VertexMap, enumerate_homs, is_strict_hom

EV_SIZE_LIMIT = 10 ** 6


class EvVertex(NamedTuple):
    base: int
    down: int
    up: int

    def fmt(self, r: Digraph) -> str:
        return f"( {r.name(self.base)}, {fmt_set(r, self.down)}, {fmt_set(r, self.up)} )"


def fmt_set(r: Digraph, mask: int) -> str:
    return "{" + ", ".join(r.names(mask)) + "}"


def ev_size(r: Digraph) -> int:
    total = 0
    for v in range(r.n):
        nin, nout = neighborhoods(r, v)
        total += 1 << (nin.bit_count() + nout.bit_count())
    return total


def ev_vertices(r: Digraph) -> list[EvVertex]:
    """All triples ``(v, D, U)`` ordered by base, then down-set bits, then up-set bits."""
    if ev_size(r) > EV_SIZE_LIMIT:
        raise LimitExceededError(f"EV-system would exceed {EV_SIZE_LIMIT} vertices")
    out = []
    for v in range(r.n):
        nin, nout = neighborhoods(r, v)
        ups = submasks(nout)
        for d in submasks(nin):
            out.extend(EvVertex(v, d, u) for u in ups)
    return out


@dataclass(frozen=True)
class EvSystem:
    base_graph: Digraph
    cls: ClassTag
    vertices: tuple[EvVertex, ...]
    graph: Digraph
    index: dict[EvVertex, int] = field(repr=False, compare=False)

    @property
    def phi(self) -> tuple[int, ...]:
        return tuple(a.base for a in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def fiber(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.vertices) if a.base == v]

    def lookup(self, base: int, down: int, up: int) -> int:
        return self.index[EvVertex(base, down, up)]

    def parse_vertex(self, base: str, down: Sequence[str], up: Sequence[str]) -> int:
        r = self.base_graph
        d = sum(1 << r.index(x) for x in down)
        u = sum(1 << r.index(x) for x in up)
        return self.lookup(r.index(base), d, u)

    def fmt(self, i: int) -> str:
        return self.vertices[i].fmt(self.base_graph)


def _check_build_class(r: Digraph, c: ClassTag) -> None:
    if not c.directed:
        raise ClassMismatchError("use the undirected module for undirected EV-systems")
    if c is not ClassTag.ALL_DIGRAPHS and not class_membership(r, c):
        raise ClassMismatchError(f"base graph is not a member of class {c.value}")


def ev_build(r: Digraph, c: ClassTag = ClassTag.ALL_DIGRAPHS) -> EvSystem:
    """Build ℰ(r) w.r.t. class ``c`` from the closed-form arc characterisation."""
    _check_build_class(r, c)
    verts = ev_vertices(r)
    index = {a: i for i, a in enumerate(verts)}
    # has_down[w][u]: EV-vertices over base w whose down-set contains u
    has_down = [[0] * r.n for _ in range(r.n)]
    for i, a in enumerate(verts):
        for u in bits(a.down):
            has_down[a.base][u] |= 1 << i
    order = c in (ClassTag.POSET, ClassTag.STRICT_POSET)
    rows = []
    for i, a in enumerate(verts):
        row = 0
        for w in bits(a.up):
            row |= has_down[w][a.base]
        if order:
            keep = 0
            for j in bits(row):
                b = verts[j]
                if a.down & ~b.down == 0 and b.up & ~a.up == 0:
                    keep |= 1 << j
            row = keep
        if c is ClassTag.POSET or (not order and r.has_loop(a.base)):
            row |= 1 << i
        rows.append(row)
    return EvSystem(r, c, tuple(verts), Digraph(len(verts), tuple(rows)), index)


def lift(xi: VertexMap) -> list[EvVertex]:
    """The raw triples ``(ξ(v), ξ[N^in(v)], ξ[N^out(v)])`` for every source vertex."""
    g = xi.source
    out = []
    for v in range(g.n):
        nin, nout = neighborhoods(g, v)
        out.append(EvVertex(xi.map[v], xi.image(nin), xi.image(nout)))
    return out


def alpha_map(xi: VertexMap, ev: EvSystem) -> VertexMap:
    """α_{G,ξ} as a map from ``G`` into the EV-graph."""
    if xi.target != ev.base_graph:
        raise ValueError("map does not land in the EV-system's base graph")
    if not is_strict_hom(xi):
        raise NotStrictError("α is only defined for strict homomorphisms")
    return VertexMap(xi.source, ev.graph, [ev.index[a] for a in lift(xi)])


def phi_map(ev: EvSystem) -> VertexMap:
    return VertexMap(ev.graph, ev.base_graph, ev.phi)


def scan_strict(c: ClassTag, r: Digraph, n_max: int) -> Iterator[tuple[Digraph, VertexMap]]:
    """Every (G, ξ) with G a canonical member of ``c`` on at most ``n_max`` vertices and ξ ∈ 𝒮(G, r)."""
    for n in range(1, n_max + 1):
        for g in enumerate_class(c, n):
            for xi in enumerate_homs(g, r, strict=True):
                yield g, xi


def verify_simple_scheme(ev: EvSystem, n_max: int) -> bool:
    phi = ev.phi
    for _, xi in scan_strict(ev.cls, ev.base_graph, n_max):
        a = alpha_map(xi, ev)
        if not is_strict_hom(a):
            return False
        if tuple(phi[i] for i in a.map) != xi.map:
            return False
    return True


def verify_erd(ev: EvSystem) -> bool:
    return class_membership(ev.graph, ev.cls)


def verify_aid(ev: EvSystem) -> bool:
    """Whether α of φ is the identity; raises :class:`ErdError` when ℰ(R) leaves its class."""
    if not verify_erd(ev):
        raise ErdError(f"EV-system is not a member of class {ev.cls.value}")
    phi = phi_map(ev)
    if phi.kind != STRICT:
        return False
    return alpha_map(phi, ev).map == tuple(range(len(ev)))


def bug_witness(ev: EvSystem, i: int) -> tuple[Digraph, VertexMap, int]:
    """The bug X(𝔞) for EV-vertex ``i`` with the map ι(𝔞) into the base graph; returns (bug, ι, body)."""
    a = ev.vertices[i]
    legs, tentacles = list(bits(a.down)), list(bits(a.up))
    g, p, _, _ = bug_graph(len(legs), len(tentacles), ev.cls)
    return g, VertexMap(g, ev.base_graph, legs + [a.base] + tentacles), p
