"""Undirected graphs, their EV-systems, and undirected rearrangement.

An undirected graph is stored as a symmetric adjacency mask per vertex, so a
:class:`UGraph` can be handed to the generic map machinery in ``homs``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import ClassMismatchError, ErdError, InvalidSpecError, LimitExceededError, NotStrictError
from .graph import ClassTag, Digraph, automorphisms, bits, canonical_form, mask_of, submasks
from .homs import STRICT, VertexMap, is_strict_hom
from .rearrange import RearrangementSpec, Violation
from .scheme import EpsilonMap, is_strict_ev_hom

UENUM_LIMIT = 4


@dataclass(frozen=True)
class UGraph:
    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1 or len(self.adj) != self.n:
            raise ValueError("adjacency rows do not match vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError("edge references an invalid vertex id")
            for w in bits(row):
                if not self.adj[w] >> v & 1:
                    raise ValueError("adjacency is not symmetric")
        if self.labels is not None and (len(self.labels) != self.n or len(set(self.labels)) != self.n):
            raise ValueError("labels must be unique, one per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None,
                   loops: Iterable[int] | str = ()) -> "UGraph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {{{u},{v}}} references an invalid vertex id")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if loops == "all":
            loops = range(n)
        for v in loops:
            rows[v] |= 1 << v
        return cls(n, tuple(rows), tuple(labels) if labels is not None else None)

    @property
    def out(self) -> tuple[int, ...]:
        return self.adj

    @property
    def inn(self) -> tuple[int, ...]:
        return self.adj

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def loop_mask(self) -> int:
        return mask_of(v for v in range(self.n) if self.adj[v] >> v & 1)

    def has_loop(self, v: int) -> bool:
        return bool(self.adj[v] >> v & 1)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def nbhd(self, v: int) -> int:
        """Open neighbourhood of ``v``."""
        return self.adj[v] & ~(1 << v)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u]) if u <= v]

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u])]

    def name(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def names(self, mask: int) -> list[str]:
        return [self.name(v) for v in bits(mask)]

    def index(self, name: str | int) -> int:
        return to_symmetric(self).index(name)


def to_symmetric(g: UGraph) -> Digraph:
    return Digraph(g.n, g.adj, g.labels)


def from_symmetric(d: Digraph) -> UGraph:
    if not d.is_symmetric():
        raise ValueError("digraph is not symmetric")
    return UGraph(d.n, d.out, d.labels)


def is_in_co(g: UGraph) -> bool:
    """Loop-free part is bipartite."""
    colour = [-1] * g.n
    for start in range(g.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for w in bits(g.nbhd(v)):
                if colour[w] < 0:
                    colour[w] = 1 - colour[v]
                    stack.append(w)
                elif colour[w] == colour[v]:
                    return False
    return True


def _check_uclass(c: ClassTag) -> None:
    if c.directed:
        raise ClassMismatchError(f"{c.value} is a directed class")


@lru_cache(maxsize=None)
def _ugraphs(n: int) -> tuple[UGraph, ...]:
    slots = [(u, v) for u in range(n) for v in range(u, n)]
    found: dict[tuple[int, ...], UGraph] = {}
    for pattern in range(1 << len(slots)):
        g = UGraph.from_edges(n, [slots[i] for i in bits(pattern)])
        key = canonical_form(to_symmetric(g)).out
        if key not in found:
            found[key] = UGraph(n, key)
    return tuple(found[k] for k in sorted(found))


def enumerate_uclass(c: ClassTag, n: int) -> tuple[UGraph, ...]:
    """Isomorphism classes of ``c`` on exactly ``n`` vertices."""
    _check_uclass(c)
    if n < 1:
        raise ValueError("vertex count must be positive")
    if n > UENUM_LIMIT:
        raise LimitExceededError(f"undirected enumeration limited to {UENUM_LIMIT} vertices")
    graphs = _ugraphs(n)
    if c is ClassTag.CO:
        return tuple(g for g in graphs if is_in_co(g))
    return graphs


def count_homs_u(g: UGraph, h: UGraph, strict: bool = False) -> int:
    """Count maps sending every edge of ``g`` to an edge of ``h`` (proper edges to proper edges if strict)."""
    edges = g.edges()
    order = list(range(g.n))
    # constraints for vertex k: edges to earlier vertices, plus its own loop
    earlier = [[u if v == k else v for u, v in edges if max(u, v) == k and u != v] for k in order]
    loops = [g.has_loop(k) for k in order]
    img = [0] * g.n
    count = 0

    def rec(k: int):
        nonlocal count
        if k == g.n:
            count += 1
            return
        for t in range(h.n):
            if loops[k] and not h.has_loop(t):
                continue
            ok = True
            for j in earlier[k]:
                if not h.has_arc(img[j], t) or (strict and img[j] == t):
                    ok = False
                    break
            if ok:
                img[k] = t
                rec(k + 1)

    rec(0)
    return count


class UEvVertex(NamedTuple):
    base: int
    nbrs: int

    def fmt(self, r: UGraph) -> str:
        return f"( {r.name(self.base)}, {{{', '.join(r.names(self.nbrs))}}} )"


@dataclass(frozen=True)
class UEvSystem:
    base_graph: UGraph
    cls: ClassTag
    vertices: tuple[UEvVertex, ...]
    graph: UGraph
    index: dict[UEvVertex, int] = field(repr=False, compare=False)

    @property
    def phi(self) -> tuple[int, ...]:
        return tuple(a.base for a in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def fmt(self, i: int) -> str:
        return self.vertices[i].fmt(self.base_graph)


def uev_vertices(r: UGraph) -> list[UEvVertex]:
    return [UEvVertex(v, d) for v in range(r.n) for d in submasks(r.nbhd(v))]


def ev_build_u(r: UGraph, c: ClassTag = ClassTag.ALL_UGRAPHS) -> UEvSystem:
    _check_uclass(c)
    if c is ClassTag.CO and not is_in_co(r):
        raise ClassMismatchError("base graph has an odd cycle")
    verts = uev_vertices(r)
    index = {a: i for i, a in enumerate(verts)}
    rows = []
    for i, a in enumerate(verts):
        row = 0
        for j, b in enumerate(verts):
            if a.base != b.base and a.nbrs >> b.base & 1 and b.nbrs >> a.base & 1:
                row |= 1 << j
        if r.has_loop(a.base):
            row |= 1 << i
        rows.append(row)
    return UEvSystem(r, c, tuple(verts), UGraph(len(verts), tuple(rows)), index)


def ulift(xi: VertexMap) -> list[UEvVertex]:
    g = xi.source
    return [UEvVertex(xi.map[v], xi.image(g.nbhd(v))) for v in range(g.n)]


def alpha_u(xi: VertexMap, ev: UEvSystem) -> VertexMap:
    if not is_strict_hom(xi):
        raise NotStrictError("α is only defined for strict homomorphisms")
    return VertexMap(xi.source, ev.graph, [ev.index[a] for a in ulift(xi)])


def phi_u(ev: UEvSystem) -> VertexMap:
    return VertexMap(ev.graph, ev.base_graph, ev.phi)


def verify_aid_u(ev: UEvSystem) -> bool:
    if ev.cls is ClassTag.CO and not is_in_co(ev.graph):
        raise ErdError("EV-system has an odd cycle")
    phi = phi_u(ev)
    if phi.kind != STRICT:
        return False
    return alpha_u(phi, ev).map == tuple(range(len(ev)))


def strict_homs_u(g: UGraph, h: UGraph) -> Iterator[VertexMap]:
    """𝒮_u(g, h) in lexicographic order."""
    n = g.n
    img = [0] * n

    def rec(k: int):
        if k == n:
            m = VertexMap(g, h, img)
            m._kind = STRICT
            yield m
            return
        cand = h.loop_mask if g.has_loop(k) else h.full_mask
        for j in bits(g.nbhd(k) & ((1 << k) - 1)):
            cand &= h.nbhd(img[j])
        for t in bits(cand):
            img[k] = t
            yield from rec(k + 1)

    yield from rec(0)


def eta_u(e: EpsilonMap, xi: VertexMap) -> VertexMap:
    if not is_strict_hom(xi):
        raise NotStrictError("ξ is not a strict homomorphism")
    src, tgt = e.source, e.target
    alpha = [src.index[a] for a in ulift(xi)]
    return VertexMap(xi.source, tgt.base_graph, [tgt.vertices[e.map[i]].base for i in alpha])


def check_condition1_sufficient_u(e: EpsilonMap) -> bool:
    src, tgt = e.source, e.target
    g = src.graph
    for i, a in enumerate(src.vertices):
        if tgt.vertices[e.map[i]].nbrs.bit_count() > a.nbrs.bit_count():
            return False
        seen: dict[int, int] = {}
        for j in bits(g.nbhd(i)):
            base = seen.setdefault(tgt.vertices[e.map[j]].base, src.vertices[j].base)
            if base != src.vertices[j].base:
                return False
    return True


def check_condition1_empirical_u(e: EpsilonMap, n_max: int) -> list[tuple[UGraph, tuple[int, ...], int]]:
    """Witnesses (G, ξ, v) where the α-value of η(ξ) differs from ε ∘ α; empty means the check passed."""
    if not is_strict_ev_hom(e):
        raise NotStrictError("ε is not a strict homomorphism")
    src, tgt = e.source, e.target
    out = []
    for n in range(1, n_max + 1):
        for g in enumerate_uclass(src.cls, n):
            for xi in strict_homs_u(g, src.base_graph):
                h = eta_u(e, xi)
                for v, (a, b) in enumerate(zip(ulift(xi), ulift(h))):
                    if tgt.vertices[e.map[src.index[a]]] != b:
                        out.append((g, xi.map, v))
    return out


def validate_spec_u(r: UGraph, spec: RearrangementSpec) -> list[Violation]:
    out: list[Violation] = []
    if (spec.X | spec.Y | spec.M) & ~r.full_mask:
        return [Violation("ids", "spec references vertices outside the graph")]
    if spec.X & spec.M:
        out.append(Violation("X and M disjoint", f"shared {r.names(spec.X & spec.M)}"))
    if spec.M & spec.Y:
        out.append(Violation("M and Y disjoint", f"shared {r.names(spec.M & spec.Y)}"))
    for y in bits(spec.Y):
        if r.nbhd(y) & spec.M:
            out.append(Violation("M avoids N(Y)", f"{r.names(r.nbhd(y) & spec.M)} adjacent to {r.name(y)}"))
    bm = spec.beta_map
    if set(bm) != set(bits(spec.X)) or set(bm.values()) != set(bits(spec.Y)) or len(set(bm.values())) != len(bm):
        out.append(Violation("beta", "beta is not a bijection X -> Y"))
        return out
    for x in bits(spec.X):
        for w in bits(r.adj[x] & spec.X):
            if not r.has_arc(bm[x], bm[w]):
                out.append(Violation("beta", f"edge {{{r.name(x)},{r.name(w)}}} is not preserved"))
        miss = r.nbhd(x) & ~spec.M & ~r.nbhd(bm[x])
        if miss:
            out.append(Violation("neighbourhood inclusion",
                                 f"{r.names(miss)} adjacent to {r.name(x)} but not {r.name(bm[x])}"))
    return out


def rearrange_u(r: UGraph, spec: RearrangementSpec) -> UGraph:
    violations = validate_spec_u(r, spec)
    if violations:
        raise InvalidSpecError(violations)
    bm = spec.beta_map
    keep, add = [], []
    for u, v in r.edges():
        e = (1 << u) | (1 << v)
        if e & spec.M and e & spec.X:
            moved = (e & spec.M) | spec.beta_image(e & spec.X)
            ends = list(bits(moved))
            add.append((ends[0], ends[-1]))
        else:
            keep.append((u, v))
    loops = [u for u, v in keep if u == v]
    return UGraph.from_edges(r.n, [(u, v) for u, v in keep + add if u != v], r.labels, loops)


def rho_u(xi: VertexMap, spec: RearrangementSpec, s: UGraph) -> VertexMap:
    g = xi.source
    bm = spec.beta_map
    img = []
    for v in range(g.n):
        t = xi.map[v]
        moved = spec.X >> t & 1 and xi.image(g.nbhd(v)) & spec.M
        img.append(bm[t] if moved else t)
    return VertexMap(g, s, img)


def star_graph(m: int) -> tuple[UGraph, int]:
    """X_m: a body ``p`` joined to ``m`` leaves; returns the graph and ``p``."""
    labels = [f"d{i + 1}" for i in range(m)] + ["p"]
    return UGraph.from_edges(m + 1, [(i, m) for i in range(m)], labels), m


@dataclass
class X1Facts:
    aut_counts: dict[int, int]
    body_fixed: dict[int, bool]
    j_size_distinct: int
    j_size_shared: int
    rho_image_size: int

    @property
    def ok(self) -> bool:
        return (self.aut_counts[1] == 2
                and all(self.aut_counts[m] == math.factorial(m) for m in self.aut_counts if m != 1)
                and all(self.body_fixed[m] for m in self.body_fixed if m != 1)
                and not self.body_fixed[1]
                and self.j_size_distinct == 4 and self.j_size_shared == 2
                and self.rho_image_size <= 2)


def _iota_family(a: UEvVertex) -> set[tuple[int, int]]:
    """{ι(𝔞) ∘ π : π ∈ Aut(X_1)} as (image of d, image of p) pairs."""
    (d,) = bits(a.nbrs)
    x1, _ = star_graph(1)
    base = (d, a.base)
    return {tuple(base[pi[v]] for v in range(2)) for pi in automorphisms(to_symmetric(x1))}


def x1_aut_properties(m_max: int = 5) -> X1Facts:
    """Recompute the automorphism facts for stars and the collision case analysis for X_1."""
    counts, fixed = {}, {}
    for m in range(m_max + 1):
        star, p = star_graph(m)
        auts = list(automorphisms(to_symmetric(star)))
        counts[m] = len(auts)
        fixed[m] = all(pi[p] == p for pi in auts)
    # Path u - v - w folded onto an edge by parity; (u,{v}) and (w,{v}) collide.
    path = UGraph.from_edges(3, [(0, 1), (1, 2)], ["u", "v", "w"])
    edge = UGraph.from_edges(2, [(0, 1)], ["0", "1"])
    src, tgt = ev_build_u(path), ev_build_u(edge)
    parity = [0, 1, 0]
    fold = [tgt.index[UEvVertex(parity[a.base], mask_of(parity[b] for b in bits(a.nbrs)))]
            for a in src.vertices]
    e = EpsilonMap(src, tgt, fold)
    a, b = UEvVertex(0, 0b010), UEvVertex(2, 0b010)
    j_distinct = _iota_family(a) | _iota_family(b)
    x1, _ = star_graph(1)
    rho_image = {eta_u(e, VertexMap(x1, path, m)).map for m in j_distinct}
    c, d = UEvVertex(0, 0b010), UEvVertex(1, 0b001)
    j_shared = _iota_family(c) | _iota_family(d)
    return X1Facts(counts, fixed, len(j_distinct), len(j_shared), len(rho_image))
