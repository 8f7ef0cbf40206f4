"""Induced S-schemes η = φ_S ∘ ε ∘ α and their checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import ClassMismatchError, LimitExceededError, NotStrictError
from .ev import EvSystem, EvVertex, ev_build, lift, scan_strict
from .graph import ClassTag, Digraph, bits
from .homs import STRICT, VertexMap, is_strict_hom


class EpsilonMap:
    """A total map ``ℰ(R) -> ℰ(S)`` on EV-vertex indices."""

    __slots__ = ("source", "target", "map", "_strict")

    def __init__(self, source: EvSystem, target: EvSystem, mapping: Sequence[int]):
        if source.cls is not target.cls:
            raise ClassMismatchError("EV-systems refer to different classes")
        if len(mapping) != len(source):
            raise ValueError("ε must be total on the source EV-system")
        for t in mapping:
            if not 0 <= t < len(target):
                raise ValueError(f"image {t} is not a target EV-vertex")
        self.source = source
        self.target = target
        self.map = tuple(mapping)
        self._strict: bool | None = None

    def __call__(self, i: int) -> int:
        return self.map[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, EpsilonMap) and self.map == other.map \
            and self.source.vertices == other.source.vertices \
            and self.target.vertices == other.target.vertices

    def __hash__(self) -> int:
        return hash(self.map)

    def __repr__(self) -> str:
        return f"EpsilonMap({list(self.map)})"

    def vertex_map(self) -> VertexMap:
        return VertexMap(self.source.graph, self.target.graph, self.map)

    def image_vertex(self, i: int) -> EvVertex:
        return self.target.vertices[self.map[i]]

    @property
    def image_set(self) -> frozenset[int]:
        return frozenset(self.map)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def rows(self) -> list[tuple[str, str]]:
        return [(self.source.fmt(i), self.target.fmt(t)) for i, t in enumerate(self.map)]

    @classmethod
    def identity(cls, ev: EvSystem) -> "EpsilonMap":
        return cls(ev, ev, range(len(ev)))

    @classmethod
    def from_rows(cls, source: EvSystem, target: EvSystem,
                  rows: Sequence[tuple[EvVertex, EvVertex]]) -> "EpsilonMap":
        mapping = [-1] * len(source)
        for a, b in rows:
            mapping[source.index[a]] = target.index[b]
        if -1 in mapping:
            raise ValueError("rows do not cover every source EV-vertex")
        return cls(source, target, mapping)


def is_strict_ev_hom(e: EpsilonMap) -> bool:
    if e._strict is None:
        e._strict = is_strict_hom(e.vertex_map())
    return e._strict


def _eta_raw(e: EpsilonMap, xi: VertexMap) -> tuple[list[EvVertex], VertexMap]:
    ev = e.source
    alpha = [ev.index[a] for a in lift(xi)]
    phi_s = e.target.vertices
    eta_map = VertexMap(xi.source, e.target.base_graph, [phi_s[e.map[i]].base for i in alpha])
    return [ev.vertices[i] for i in alpha], eta_map


def eta(e: EpsilonMap, xi: VertexMap) -> VertexMap:
    """η(ξ) = φ_S ∘ ε ∘ α_{G,ξ}."""
    if xi.target != e.source.base_graph:
        raise ValueError("ξ does not land in the source base graph")
    if not is_strict_hom(xi):
        raise NotStrictError("ξ is not a strict homomorphism")
    if not is_strict_ev_hom(e):
        raise NotStrictError("ε is not a strict homomorphism")
    _, out = _eta_raw(e, xi)
    out._kind = STRICT
    return out


def e_set(e: EpsilonMap, xi: VertexMap, g: Digraph | None = None) -> int:
    """E_G(ξ): vertices whose α-value under η(ξ) lies in the image of ε."""
    h = eta(e, xi)
    if g is not None and g != h.source:
        raise ValueError("ξ is not defined on the given graph")
    image = e.image_set
    idx = e.target.index
    out = 0
    for v, a in enumerate(lift(h)):
        if idx[a] in image:
            out |= 1 << v
    return out


def check_base_separation(e: EpsilonMap) -> bool:
    seen: dict[int, int] = {}
    for i, t in enumerate(e.map):
        base = e.source.vertices[i].base
        if seen.setdefault(t, base) != base:
            return False
    return True


def reconstruct(e: EpsilonMap, eta_map: VertexMap, r_vertex: int) -> int:
    """⋃_{𝔞 ∈ φ_R⁻¹(r)} α_{S,η}⁻¹(ε(𝔞)) as a vertex mask of G."""
    if not 0 <= r_vertex < e.source.base_graph.n:
        raise ValueError(f"invalid vertex id {r_vertex}")
    targets = {e.map[i] for i, a in enumerate(e.source.vertices) if a.base == r_vertex}
    idx = e.target.index
    out = 0
    for v, a in enumerate(lift(eta_map)):
        if idx.get(a) in targets:
            out |= 1 << v
    return out


@dataclass(frozen=True)
class SufficientViolation:
    vertex: int
    condition: str
    detail: str

    def __str__(self) -> str:
        return f"{self.condition} at {self.detail}"


def sufficient_violations(e: EpsilonMap) -> list[SufficientViolation]:
    """Vertices breaking the cardinality bound or the neighbour base-separation."""
    src, tgt = e.source, e.target
    g = src.graph
    out = []
    for i, a in enumerate(src.vertices):
        b = tgt.vertices[e.map[i]]
        if b.down.bit_count() > a.down.bit_count() or b.up.bit_count() > a.up.bit_count():
            out.append(SufficientViolation(i, "cardinality", f"{src.fmt(i)} -> {tgt.fmt(e.map[i])}"))
        for side, nbrs in (("in", g.inn[i]), ("out", g.out[i])):
            nbrs &= ~(1 << i)
            seen: dict[int, int] = {}
            for j in bits(nbrs):
                img = tgt.vertices[e.map[j]].base
                first = seen.setdefault(img, j)
                if src.vertices[first].base != src.vertices[j].base:
                    out.append(SufficientViolation(
                        i, "separation",
                        f"{side}-neighbours {src.fmt(first)} and {src.fmt(j)} of {src.fmt(i)}"))
                    break
    return out


def check_condition1_sufficient(e: EpsilonMap) -> bool:
    return not sufficient_violations(e)


@dataclass(frozen=True)
class Witness:
    flag: str
    graph: Digraph | None = None
    xi: tuple[int, ...] | None = None
    vertex: int | None = None
    detail: str = ""
    values: tuple = ()

    def __str__(self) -> str:
        parts = [self.flag]
        if self.graph is not None:
            parts.append(f"G(n={self.graph.n}, arcs={self.graph.proper_arcs()})")
        if self.xi is not None:
            parts.append(f"xi={list(self.xi)}")
        if self.vertex is not None:
            parts.append(f"v={self.vertex}")
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


FLAGS = ("strict_hom", "injective", "base_separation", "prop5_sufficient",
         "condition1_empirical", "regularity_empirical", "eta_injective_empirical")


@dataclass
class CertificationReport:
    n_max: int
    cls: ClassTag
    flags: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, list[Witness]] = field(default_factory=dict)
    scanned_graphs: int = 0
    scanned_maps: int = 0

    def fail(self, flag: str, w: Witness, keep: int = 5) -> None:
        self.flags[flag] = False
        lst = self.witnesses.setdefault(flag, [])
        if len(lst) < keep:
            lst.append(w)

    @property
    def all_true(self) -> bool:
        return all(self.flags.get(f, False) for f in FLAGS)

    def to_json(self) -> dict:
        return {
            "class": self.cls.value,
            "n_max": self.n_max,
            "flags": {f: self.flags.get(f) for f in FLAGS if f in self.flags},
            "witnesses": {f: [str(w) for w in ws] for f, ws in self.witnesses.items()},
            "scanned_graphs": self.scanned_graphs,
            "scanned_maps": self.scanned_maps,
        }


def _condition1_scan(e: EpsilonMap, n_max: int, report: CertificationReport, full: bool) -> None:
    src, tgt = e.source, e.target
    report.flags["condition1_empirical"] = True
    if full:
        report.flags["regularity_empirical"] = True
        report.flags["eta_injective_empirical"] = True
    buckets: dict[int, EvVertex] = {}
    last_g = None
    seen_eta: dict[tuple[int, ...], tuple[int, ...]] = {}
    for g, xi in scan_strict(src.cls, src.base_graph, n_max):
        if g is not last_g:
            last_g = g
            seen_eta = {}
            report.scanned_graphs += 1
        report.scanned_maps += 1
        alpha, h = _eta_raw(e, xi)
        lifted = lift(h)
        for v, (a, b) in enumerate(zip(alpha, lifted)):
            i = src.index[a]
            want = tgt.vertices[e.map[i]]
            if b != want:
                report.fail("condition1_empirical", Witness(
                    "condition1_empirical", g, xi.map, v,
                    f"alpha(eta)={b.fmt(tgt.base_graph)} eps(alpha)={want.fmt(tgt.base_graph)}", (a, b, want)))
            if full:
                prev = buckets.setdefault(i, b)
                if prev != b:
                    report.fail("regularity_empirical", Witness(
                        "regularity_empirical", g, xi.map, v,
                        f"alpha={a.fmt(src.base_graph)} yields {b.fmt(tgt.base_graph)} "
                        f"and {prev.fmt(tgt.base_graph)}"))
        if full:
            other = seen_eta.setdefault(h.map, xi.map)
            if other != xi.map:
                report.fail("eta_injective_empirical", Witness(
                    "eta_injective_empirical", g, xi.map, None,
                    f"same image as xi={list(other)}"))


def check_condition1_empirical(e: EpsilonMap, n_max: int) -> CertificationReport:
    """Check α_{S,η(ξ)} = ε ∘ α_{R,ξ} for every class member up to ``n_max`` vertices."""
    if not is_strict_ev_hom(e):
        raise NotStrictError("ε is not a strict homomorphism")
    report = CertificationReport(n_max, e.source.cls)
    _condition1_scan(e, n_max, report, full=False)
    return report


def certify(e: EpsilonMap, n_max: int) -> CertificationReport:
    report = CertificationReport(n_max, e.source.cls)
    src, tgt = e.source, e.target
    report.flags["strict_hom"] = is_strict_ev_hom(e)
    if not report.flags["strict_hom"]:
        g, h = src.graph, tgt.graph
        for u, v in g.arcs():
            fu, fv = e.map[u], e.map[v]
            if not h.has_arc(fu, fv) or (u != v and fu == fv):
                report.fail("strict_hom", Witness("strict_hom", detail=f"arc {src.fmt(u)} -> {src.fmt(v)}"))
                break
    report.flags["injective"] = True
    first: dict[int, int] = {}
    for i, t in enumerate(e.map):
        j = first.setdefault(t, i)
        if j != i:
            report.fail("injective", Witness("injective", detail=f"{src.fmt(j)} and {src.fmt(i)} -> {tgt.fmt(t)}"))
    report.flags["base_separation"] = True
    for i, t in enumerate(e.map):
        j = first[t]
        if src.vertices[j].base != src.vertices[i].base:
            report.fail("base_separation", Witness(
                "base_separation", detail=f"{src.fmt(j)} and {src.fmt(i)} -> {tgt.fmt(t)}"))
    violations = sufficient_violations(e)
    report.flags["prop5_sufficient"] = not violations
    for v in violations:
        report.fail("prop5_sufficient", Witness("prop5_sufficient", detail=str(v)), keep=len(violations))
    if report.flags["strict_hom"]:
        _condition1_scan(e, n_max, report, full=True)
    else:
        # η is not well defined as a strict scheme; the empirical flags cannot hold.
        for flag in ("condition1_empirical", "regularity_empirical", "eta_injective_empirical"):
            report.fail(flag, Witness(flag, detail="ε is not a strict homomorphism"))
    return report


def find_inducing_epsilon(r: Digraph, s: Digraph, c: ClassTag, n_max: int | None = None,
                          budget: int = 10 ** 7) -> Iterator[EpsilonMap]:
    """Search strict, injective ε with the cardinality and separation prunes.

    The search is sound but incomplete: only maps meeting every prune are
    produced.  With ``n_max`` set, each map is also certified empirically up to
    that bound and dropped if any flag fails.  Exceeding ``budget`` search
    nodes raises :class:`LimitExceededError` after the maps found so far.
    """
    src, tgt = ev_build(r, c), ev_build(s, c)
    g, h = src.graph, tgt.graph
    n = len(src)
    sv, tv = src.vertices, tgt.vertices
    # Visit vertices so that each one has as many already-placed neighbours as possible.
    order: list[int] = []
    placed = 0
    adj = [(g.out[i] | g.inn[i]) & ~(1 << i) for i in range(n)]
    while len(order) < n:
        best = max((i for i in range(n) if not placed >> i & 1),
                   key=lambda i: ((adj[i] & placed).bit_count(), adj[i].bit_count(), -i))
        order.append(best)
        placed |= 1 << best
    pos = {v: k for k, v in enumerate(order)}
    prev_out = [[j for j in bits(g.out[i] & ~(1 << i)) if pos[j] < pos[i]] for i in range(n)]
    prev_in = [[j for j in bits(g.inn[i] & ~(1 << i)) if pos[j] < pos[i]] for i in range(n)]
    # Separation is checked per common neighbour z: pairs in N^in(z) or N^out(z).
    groups = [[(g.inn[z] & ~(1 << z)) for z in range(n)], [(g.out[z] & ~(1 << z)) for z in range(n)]]
    member_of = [[z for z in range(n) for grp in groups if grp[z] >> i & 1] for i in range(n)]
    base_cands = []
    for i in range(n):
        a = sv[i]
        cand = 0
        for t, b in enumerate(tv):
            if b.down.bit_count() <= a.down.bit_count() and b.up.bit_count() <= a.up.bit_count():
                cand |= 1 << t
        if g.has_loop(i):
            cand &= h.loop_mask
        base_cands.append(cand)
    img = [-1] * n
    nodes = 0

    def separated(i: int, t: int) -> bool:
        tb = tv[t].base
        ab = sv[i].base
        for z in member_of[i]:
            for grp in groups:
                if not grp[z] >> i & 1:
                    continue
                for j in bits(grp[z]):
                    if j != i and img[j] >= 0 and tv[img[j]].base == tb and sv[j].base != ab:
                        return False
        return True

    def rec(k: int, used: int):
        nonlocal nodes
        if k == n:
            yield list(img)
            return
        i = order[k]
        cand = base_cands[i] & ~used
        for j in prev_out[i]:
            cand &= h.inn[img[j]] & ~(1 << img[j])
        for j in prev_in[i]:
            cand &= h.out[img[j]] & ~(1 << img[j])
        for t in bits(cand):
            nodes += 1
            if nodes > budget:
                raise LimitExceededError(f"search budget of {budget} nodes exhausted at depth {k}/{n}")
            if not separated(i, t):
                continue
            img[i] = t
            yield from rec(k + 1, used | (1 << t))
            img[i] = -1

    for mapping in rec(0, 0):
        e = EpsilonMap(src, tgt, mapping)
        if n_max is not None and not certify(e, n_max).all_true:
            continue
        yield e


def epsilon_to_json(e: EpsilonMap) -> dict:
    def table(ev: EvSystem) -> list[list]:
        r = ev.base_graph
        return [[r.name(a.base), r.names(a.down), r.names(a.up)] for a in ev.vertices]

    return {"class": e.source.cls.value, "source": table(e.source),
            "target": table(e.target), "map": list(e.map)}


def epsilon_from_json(doc: dict, source: EvSystem, target: EvSystem) -> EpsilonMap:
    """Load ε against already built EV-systems; embedded tables must agree when present."""
    for key, ev in (("source", source), ("target", target)):
        if key in doc:
            rows = [ev.parse_vertex(b, d, u) for b, d, u in doc[key]]
            if rows != list(range(len(ev))):
                raise ValueError(f"embedded {key} EV table does not match the built EV-system")
    if "rows" in doc:
        mapping = [-1] * len(source)
        for (b, d, u), (b2, d2, u2) in doc["rows"]:
            mapping[source.parse_vertex(b, d, u)] = target.parse_vertex(b2, d2, u2)
        return EpsilonMap(source, target, mapping)
    return EpsilonMap(source, target, doc["map"])
