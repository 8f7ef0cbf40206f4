"""The rearrangement transform: move every arc between M and X over to β(X)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidSpecError, NotStrictError
from .ev import EvSystem, EvVertex, ev_build, lift, phi_map
from .graph import ClassTag, Digraph, bits, neighborhoods
from .homs import VertexMap, is_strict_hom
from .scheme import EpsilonMap


@dataclass(frozen=True)
class RearrangementSpec:
    X: int
    Y: int
    M: int
    beta: tuple[tuple[int, int], ...]

    @classmethod
    def make(cls, X, Y, M, beta: Mapping[int, int]) -> "RearrangementSpec":
        def m(s):
            return s if isinstance(s, int) else sum(1 << v for v in s)
        return cls(m(X), m(Y), m(M), tuple(sorted(beta.items())))

    @property
    def beta_map(self) -> dict[int, int]:
        return dict(self.beta)

    def b(self, x: int) -> int:
        return self.beta_map[x]

    def beta_image(self, mask: int) -> int:
        bm = self.beta_map
        return sum(1 << bm[x] for x in bits(mask))

    def to_json(self, r: Digraph) -> dict:
        return {"X": r.names(self.X), "Y": r.names(self.Y), "M": r.names(self.M),
                "beta": {r.name(x): r.name(y) for x, y in self.beta}}

    @classmethod
    def from_json(cls, doc: dict, r: Digraph) -> "RearrangementSpec":
        def ids(key):
            return [r.index(v) for v in doc.get(key, [])]
        beta = {r.index(k): r.index(v) for k, v in doc.get("beta", {}).items()}
        return cls.make(ids("X"), ids("Y"), ids("M"), beta)


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str

    def __str__(self) -> str:
        return f"{self.condition}: {self.message}"


def _open_nbhd(g: Digraph, v: int) -> int:
    nin, nout = neighborhoods(g, v)
    return nin | nout


def validate_spec(r: Digraph, spec: RearrangementSpec) -> list[Violation]:
    """All failed validity conditions, each with the offending vertices."""
    out: list[Violation] = []
    full = r.full_mask
    for name, mask in (("X", spec.X), ("Y", spec.Y), ("M", spec.M)):
        if mask & ~full:
            out.append(Violation("ids", f"{name} references vertices outside the graph"))
    if out:
        return out
    if spec.X & spec.M:
        out.append(Violation("X and M disjoint", f"shared {r.names(spec.X & spec.M)}"))
    if spec.M & spec.Y:
        out.append(Violation("M and Y disjoint", f"shared {r.names(spec.M & spec.Y)}"))
    for y in bits(spec.Y):
        hit = _open_nbhd(r, y) & spec.M
        if hit:
            out.append(Violation("M avoids N(Y)", f"{r.names(hit)} adjacent to {r.name(y)}"))
    bm = spec.beta_map
    if set(bm) != set(bits(spec.X)) or any(not (0 <= t < r.n) for t in bm.values()):
        out.append(Violation("beta", "beta must be defined exactly on X"))
        return out
    if set(bm.values()) != set(bits(spec.Y)) or len(set(bm.values())) != len(bm):
        out.append(Violation("beta", "beta is not a bijection onto Y"))
    for x in bits(spec.X):
        for w in bits(r.out[x] & spec.X):
            if not r.has_arc(bm[x], bm[w]):
                out.append(Violation("beta", f"arc {r.name(x)}->{r.name(w)} is not preserved"))
    for x in bits(spec.X):
        nin, nout = neighborhoods(r, x)
        bin_, bout = neighborhoods(r, bm[x])
        miss_in = nin & ~spec.M & ~bin_
        miss_out = nout & ~spec.M & ~bout
        if miss_in or miss_out:
            out.append(Violation("neighbourhood inclusion",
                                 f"{r.names(miss_in | miss_out)} near {r.name(x)} but not {r.name(bm[x])}"))
    return out


def _require_valid(r: Digraph, spec: RearrangementSpec) -> None:
    violations = validate_spec(r, spec)
    if violations:
        raise InvalidSpecError(violations)


def apply(r: Digraph, spec: RearrangementSpec) -> Digraph:
    _require_valid(r, spec)
    bm = spec.beta_map
    rows = list(r.out)
    for m in bits(spec.M):
        for x in bits(r.out[m] & spec.X):
            rows[m] &= ~(1 << x)
    for x in bits(spec.X):
        rows[x] &= ~spec.M
    for m in bits(spec.M):
        for x in bits(r.out[m] & spec.X):
            rows[m] |= 1 << bm[x]
    for x in bits(spec.X):
        for m in bits(r.out[x] & spec.M):
            rows[bm[x]] |= 1 << m
    return Digraph(r.n, tuple(rows), r.labels)


def b_set(xi: VertexMap, spec: RearrangementSpec) -> int:
    """Vertices of G sent into X with a neighbour sent into M."""
    g = xi.source
    out = 0
    for v in range(g.n):
        if spec.X >> xi.map[v] & 1 and xi.image(_open_nbhd(g, v)) & spec.M:
            out |= 1 << v
    return out


def rho(xi: VertexMap, spec: RearrangementSpec, s: Digraph | None = None) -> VertexMap:
    r = xi.target
    if not is_strict_hom(xi):
        raise NotStrictError("ξ is not a strict homomorphism")
    if s is None:
        s = apply(r, spec)
    bm = spec.beta_map
    bset = b_set(xi, spec)
    return VertexMap(xi.source, s, [bm[t] if bset >> v & 1 else t for v, t in enumerate(xi.map)])


def _ev_pair(r: Digraph, spec: RearrangementSpec, cls: ClassTag) -> tuple[EvSystem, EvSystem]:
    return ev_build(r, cls), ev_build(apply(r, spec), cls)


def explicit_image(r: Digraph, spec: RearrangementSpec, a: EvVertex) -> EvVertex:
    X, M = spec.X, spec.M
    touches = [bool(_open_nbhd(r, x) & M) for x in range(r.n)]
    if X >> a.base & 1 and (a.down | a.up) & M:
        base = spec.b(a.base)
    else:
        base = a.base
    if M >> a.base & 1:
        down = (a.down & ~X) | spec.beta_image(a.down & X)
        up = (a.up & ~X) | spec.beta_image(a.up & X)
    else:
        moved_d = sum(1 << x for x in bits(a.down & X) if touches[x])
        moved_u = sum(1 << x for x in bits(a.up & X) if touches[x])
        down = a.down | spec.beta_image(moved_d)
        up = a.up | spec.beta_image(moved_u)
    return EvVertex(base, down, up)


def epsilon_explicit(r: Digraph, spec: RearrangementSpec, cls: ClassTag = ClassTag.ALL_DIGRAPHS) -> EpsilonMap:
    """ε from the closed-form case split; ``cls`` only selects the arc sets of the EV-systems."""
    src, tgt = _ev_pair(r, spec, cls)
    return EpsilonMap(src, tgt, [tgt.index[explicit_image(r, spec, a)] for a in src.vertices])


def b_phi(r: Digraph, spec: RearrangementSpec) -> list[EvVertex]:
    """EV-vertices whose image base is moved by β."""
    _require_valid(r, spec)
    return [a for a in ev_build(r).vertices if spec.X >> a.base & 1 and (a.down | a.up) & spec.M]


def epsilon_from_scheme(r: Digraph, spec: RearrangementSpec) -> EpsilonMap:
    """ε = α_{S}(ρ(φ_R)), evaluated with G = ℰ(R) itself."""
    src, tgt = _ev_pair(r, spec, ClassTag.ALL_DIGRAPHS)
    moved = rho(phi_map(src), spec, tgt.base_graph)
    if not is_strict_hom(moved):
        raise NotStrictError("ρ(φ) is not strict; the spec violates the hypotheses")
    return EpsilonMap(src, tgt, [tgt.index[a] for a in lift(moved)])


def injectivity_criterion(r: Digraph, spec: RearrangementSpec) -> bool:
    """Every x ∈ X has its open neighbourhood entirely inside M or entirely outside."""
    for x in bits(spec.X):
        nb = _open_nbhd(r, x)
        if nb & spec.M and nb & ~spec.M:
            return False
    return True


def collision_witnesses(r: Digraph, spec: RearrangementSpec) -> list[tuple[EvVertex, EvVertex]]:
    """Pairs of distinct EV-vertices with equal ε-image, one pair per offending x."""
    out = []
    bm = spec.beta_map
    for x in bits(spec.X):
        nb = _open_nbhd(r, x)
        if not (nb & spec.M and nb & ~spec.M):
            continue
        nin, nout = neighborhoods(r, x)
        bx = (1 << x) | (1 << bm[x])
        v = next(bits(nb & ~spec.M))
        if nin >> v & 1:
            out.append((EvVertex(v, 0, 1 << x), EvVertex(v, 0, bx)))
        else:
            out.append((EvVertex(v, 1 << x, 0), EvVertex(v, bx, 0)))
    return out
