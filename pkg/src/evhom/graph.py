"""Digraphs on dense integer ids.

Adjacency is stored as one out-neighbour bitmask per vertex; bit ``v`` of
``out[v]`` is the loop at ``v``.  Vertex sets are plain ``int`` bitmasks.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import ClassMismatchError, LimitExceededError

MAX_INPUT_VERTICES = 12
CANON_LIMIT = 8


class ClassTag(enum.Enum):
    ALL_DIGRAPHS = "digraph"
    TA = "ta"
    POSET = "poset"
    STRICT_POSET = "strict_poset"
    ALL_UGRAPHS = "ugraph"
    CO = "co"

    @property
    def directed(self) -> bool:
        return self not in (ClassTag.ALL_UGRAPHS, ClassTag.CO)

    @classmethod
    def parse(cls, text: str) -> "ClassTag":
        aliases = {
            "d": "digraph", "all": "digraph", "digraphs": "digraph",
            "p": "poset", "posets": "poset",
            "p*": "strict_poset", "strict-poset": "strict_poset", "strictposet": "strict_poset",
            "u": "ugraph", "undirected": "ugraph", "ugraphs": "ugraph",
            "c_o": "co", "bipartite": "co",
        }
        key = text.strip().lower()
        return cls(aliases.get(key, key))


ENUM_LIMITS = {
    ClassTag.ALL_DIGRAPHS: 4,
    ClassTag.TA: 4,
    ClassTag.POSET: 6,
    ClassTag.STRICT_POSET: 6,
}


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def submasks(mask: int) -> list[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    out = []
    s = mask
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    out.reverse()
    return out


@dataclass(frozen=True)
class Digraph:
    n: int
    out: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a digraph needs at least one vertex")
        if len(self.out) != self.n:
            raise ValueError("adjacency rows do not match vertex count")
        full = (1 << self.n) - 1
        for row in self.out:
            if row & ~full:
                raise ValueError("arc references an invalid vertex id")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ValueError("label table does not match vertex count")
            if len(set(self.labels)) != self.n:
                raise ValueError("vertex labels must be unique")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]], labels: Sequence[str] | None = None,
                  loops: str | Iterable[int] | None = None) -> "Digraph":
        rows = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {u}->{v} references an invalid vertex id")
            rows[u] |= 1 << v
        if loops == "all":
            loops = range(n)
        elif loops in (None, "none"):
            loops = ()
        for v in loops:
            if not 0 <= v < n:
                raise ValueError(f"loop at invalid vertex id {v}")
            rows[v] |= 1 << v
        return cls(n, tuple(rows), tuple(labels) if labels is not None else None)

    @classmethod
    def from_labeled_arcs(cls, labels: Sequence[str], arcs: Iterable[tuple[str, str]],
                          loops: str | Iterable[str] | None = None) -> "Digraph":
        idx = {name: i for i, name in enumerate(labels)}
        if loops not in (None, "all", "none"):
            loops = [idx[v] for v in loops]
        return cls.from_arcs(len(labels), [(idx[u], idx[v]) for u, v in arcs], labels, loops)

    @cached_property
    def inn(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for u, row in enumerate(self.out):
            for v in bits(row):
                rows[v] |= 1 << u
        return tuple(rows)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def loop_mask(self) -> int:
        return mask_of(v for v in range(self.n) if self.out[v] >> v & 1)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def has_loop(self, v: int) -> bool:
        return bool(self.out[v] >> v & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.out[u])]

    def proper_arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.arcs() if u != v]

    @property
    def arc_count(self) -> int:
        return sum(row.bit_count() for row in self.out)

    def name(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def index(self, name: str | int) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.n:
                raise ValueError(f"invalid vertex id {name}")
            return name
        if self.labels is not None and name in self.labels:
            return self.labels.index(name)
        if name.isdigit() and int(name) < self.n:
            return int(name)
        raise ValueError(f"unknown vertex {name!r}")

    def names(self, mask: int) -> list[str]:
        return [self.name(v) for v in bits(mask)]

    def with_labels(self, labels: Sequence[str] | None) -> "Digraph":
        return Digraph(self.n, self.out, tuple(labels) if labels is not None else None)

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Return the graph whose vertex ``k`` is the old vertex ``perm[k]``."""
        pos = [0] * self.n
        for k, v in enumerate(perm):
            pos[v] = k
        rows = [0] * self.n
        for k, v in enumerate(perm):
            rows[k] = mask_of(pos[w] for w in bits(self.out[v]))
        labels = tuple(self.labels[v] for v in perm) if self.labels is not None else None
        return Digraph(self.n, tuple(rows), labels)

    def induced(self, mask: int) -> "Digraph":
        keep = list(bits(mask))
        pos = {v: k for k, v in enumerate(keep)}
        rows = tuple(mask_of(pos[w] for w in bits(self.out[v] & mask)) for v in keep)
        labels = tuple(self.labels[v] for v in keep) if self.labels is not None else None
        return Digraph(len(keep), rows, labels)

    def is_symmetric(self) -> bool:
        return self.out == self.inn

    def __repr__(self) -> str:
        arcs = ", ".join(f"{self.name(u)}->{self.name(v)}" for u, v in self.proper_arcs())
        loops = ",".join(self.names(self.loop_mask))
        return f"Digraph(n={self.n}, arcs=[{arcs}], loops=[{loops}])"


def remove_loops(g: Digraph) -> Digraph:
    return Digraph(g.n, tuple(row & ~(1 << v) for v, row in enumerate(g.out)), g.labels)


def add_loops(g: Digraph) -> Digraph:
    return Digraph(g.n, tuple(row | (1 << v) for v, row in enumerate(g.out)), g.labels)


def transitive_hull(g: Digraph) -> Digraph:
    rows = list(g.out)
    for k in range(g.n):
        kbit = 1 << k
        for i in range(g.n):
            if rows[i] & kbit:
                rows[i] |= rows[k]
    return Digraph(g.n, tuple(rows), g.labels)


def is_transitive(g: Digraph) -> bool:
    return all((g.out[w] & ~g.out[v]) == 0 for v in range(g.n) for w in bits(g.out[v]))


def is_antisymmetric(g: Digraph) -> bool:
    return all((g.out[v] & g.inn[v] & ~(1 << v)) == 0 for v in range(g.n))


def is_acyclic(g: Digraph) -> bool:
    """No closed walk at all (a loop counts as one)."""
    remaining = g.full_mask
    while remaining:
        sources = mask_of(v for v in bits(remaining) if not (g.inn[v] & remaining))
        if not sources:
            return False
        remaining &= ~sources
    return True


def class_membership(g: Digraph, c: ClassTag) -> bool:
    if not c.directed:
        raise ClassMismatchError(f"{c.value} is an undirected class")
    if c is ClassTag.ALL_DIGRAPHS:
        return True
    if c is ClassTag.TA:
        return is_acyclic(remove_loops(g))
    if not (is_antisymmetric(g) and is_transitive(g)):
        return False
    if c is ClassTag.POSET:
        return g.loop_mask == g.full_mask
    return g.loop_mask == 0


def neighborhoods(g: Digraph, v: int) -> tuple[int, int]:
    """Open in- and out-neighbourhood of ``v`` as bitmasks."""
    if not 0 <= v < g.n:
        raise ValueError(f"invalid vertex id {v}")
    me = ~(1 << v)
    return g.inn[v] & me, g.out[v] & me


def _canonical_perm(g: Digraph) -> tuple[int, tuple[int, ...]]:
    # Bit order grows the adjacency matrix square by square: the block for
    # position k is loop(p_k), then (A[p_i][p_k], A[p_k][p_i]) for i < k.
    # The lexicographic minimum is found level by level over all surviving
    # prefixes, which is exact because every block has a fixed width.
    n = g.n
    out = g.out
    survivors: list[tuple[tuple[int, ...], int]] = [((), 0)]
    code = 0
    for k in range(n):
        best = None
        nxt: list[tuple[tuple[int, ...], int]] = []
        for prefix, used in survivors:
            for v in range(n):
                if used >> v & 1:
                    continue
                block = out[v] >> v & 1
                for p in prefix:
                    block = (block << 2) | ((out[p] >> v & 1) << 1) | (out[v] >> p & 1)
                if best is None or block < best:
                    best = block
                    nxt = [(prefix + (v,), used | (1 << v))]
                elif block == best:
                    nxt.append((prefix + (v,), used | (1 << v)))
        code = (code << (2 * k + 1)) | best
        survivors = nxt
    return code, survivors[0][0]


def canonical_code(g: Digraph) -> int:
    if g.n > CANON_LIMIT:
        raise LimitExceededError(f"canonicalisation limited to {CANON_LIMIT} vertices")
    return _canonical_perm(g)[0]


def canonical_form(g: Digraph) -> Digraph:
    """Isomorphism-class representative: relabelling with the minimal adjacency bit string.

    Labels are dropped, so two graphs are isomorphic iff their canonical forms
    compare equal.
    """
    if g.n > CANON_LIMIT:
        raise LimitExceededError(f"canonicalisation limited to {CANON_LIMIT} vertices")
    _, perm = _canonical_perm(g)
    return g.relabel(perm).with_labels(None)


def is_isomorphic(g: Digraph, h: Digraph) -> bool:
    return g.n == h.n and g.arc_count == h.arc_count and canonical_form(g) == canonical_form(h)


def _dedup(candidates: Iterable[Digraph]) -> tuple[Digraph, ...]:
    found: dict[int, Digraph] = {}
    for cand in candidates:
        code, perm = _canonical_perm(cand)
        if code not in found:
            found[code] = cand.relabel(perm).with_labels(None)
    return tuple(found[k] for k in sorted(found))


@lru_cache(maxsize=None)
def _all_digraphs(n: int) -> tuple[Digraph, ...]:
    if n == 1:
        return (Digraph(1, (0,)), Digraph(1, (1,)))
    new = n - 1
    cands = []
    for small in _all_digraphs(n - 1):
        base = list(small.out) + [0]
        for in_mask in range(1 << new):
            for out_mask in range(1 << new):
                for loop in (0, 1):
                    rows = [base[v] | ((in_mask >> v & 1) << new) for v in range(new)]
                    rows.append(out_mask | (loop << new))
                    cands.append(Digraph(n, tuple(rows)))
    return _dedup(cands)


def _ideals(p: Digraph) -> list[int]:
    """Down-closed vertex sets of a poset."""
    return [s for s in range(1 << p.n) if all((p.inn[v] & ~s) == 0 for v in bits(s))]


@lru_cache(maxsize=None)
def _posets(n: int) -> tuple[Digraph, ...]:
    if n == 1:
        return (Digraph(1, (1,)),)
    new = n - 1
    cands = []
    # Every poset arises from a smaller one by adding a maximal element
    # above an order ideal.
    for small in _posets(n - 1):
        for ideal in _ideals(small):
            rows = [small.out[v] | ((ideal >> v & 1) << new) for v in range(new)]
            rows.append(1 << new)
            cands.append(Digraph(n, tuple(rows)))
    return _dedup(cands)


@lru_cache(maxsize=None)
def _enumerate(c: ClassTag, n: int) -> tuple[Digraph, ...]:
    if c is ClassTag.ALL_DIGRAPHS:
        return _all_digraphs(n)
    if c is ClassTag.TA:
        return tuple(g for g in _all_digraphs(n) if class_membership(g, ClassTag.TA))
    if c is ClassTag.POSET:
        return _posets(n)
    return _dedup(remove_loops(p) for p in _posets(n))


def enumerate_class(c: ClassTag, n: int) -> tuple[Digraph, ...]:
    """Every isomorphism class of ``c`` on exactly ``n`` vertices, once, ordered by canonical code."""
    if not c.directed:
        raise ClassMismatchError("use the undirected module for undirected classes")
    if n < 1:
        raise ValueError("vertex count must be positive")
    if n > ENUM_LIMITS[c]:
        raise LimitExceededError(f"enumeration of {c.value} limited to {ENUM_LIMITS[c]} vertices")
    return _enumerate(c, n)


def enumerate_upto(c: ClassTag, n_max: int) -> Iterator[Digraph]:
    for n in range(1, n_max + 1):
        yield from enumerate_class(c, n)


def bug_graph(m: int, n: int, c: ClassTag = ClassTag.ALL_DIGRAPHS) -> tuple[Digraph, int, int, int]:
    """The bug with ``m`` legs and ``n`` tentacles, closed as required by ``c``.

    Returns ``(graph, body, legs, tentacles)`` with the vertex sets as masks.
    """
    if not c.directed:
        raise ClassMismatchError("bug graphs are directed; see undirected.star_graph")
    p = m
    legs = mask_of(range(m))
    tentacles = mask_of(range(m + 1, m + 1 + n))
    labels = [f"d{i + 1}" for i in range(m)] + ["p"] + [f"u{i + 1}" for i in range(n)]
    arcs = [(d, p) for d in range(m)] + [(p, u) for u in range(m + 1, m + 1 + n)]
    g = Digraph.from_arcs(m + n + 1, arcs, labels)
    if c in (ClassTag.POSET, ClassTag.STRICT_POSET):
        g = transitive_hull(g)
    if c is ClassTag.POSET:
        g = add_loops(g)
    return g, p, legs, tentacles


def automorphisms(g: Digraph) -> Iterator[tuple[int, ...]]:
    """Yield every arc-preserving bijection of ``g`` as an image tuple."""
    if g.n > CANON_LIMIT:
        raise LimitExceededError(f"automorphism search limited to {CANON_LIMIT} vertices")
    n = g.n
    sig = [(g.out[v].bit_count(), g.inn[v].bit_count(), g.out[v] >> v & 1) for v in range(n)]
    img = [0] * n

    def extend(k: int, used: int):
        if k == n:
            yield tuple(img)
            return
        for t in range(n):
            if used >> t & 1 or sig[t] != sig[k]:
                continue
            ok = True
            for j in range(k):
                if (g.out[k] >> j & 1) != (g.out[t] >> img[j] & 1) or \
                        (g.out[j] >> k & 1) != (g.out[img[j]] >> t & 1):
                    ok = False
                    break
            if ok:
                img[k] = t
                yield from extend(k + 1, used | (1 << t))

    yield from extend(0, 0)


def automorphism_count(g: Digraph) -> int:
    return sum(1 for _ in automorphisms(g))


def labeled_count(c: ClassTag, n: int) -> int:
    """Number of labelled members on ``n`` vertices, via orbit sizes n!/|Aut|."""
    return sum(math.factorial(n) // automorphism_count(g) for g in enumerate_class(c, n))


def graph_to_json(g: Digraph, cls: ClassTag | None = None) -> dict:
    loops = g.loop_mask
    if loops == g.full_mask:
        loops_field: str | list[int] = "all"
    elif loops == 0:
        loops_field = "none"
    else:
        loops_field = list(bits(loops))
    doc: dict = {}
    if g.labels is not None:
        doc["labels"] = list(g.labels)
    else:
        doc["n"] = g.n
    doc["arcs"] = [[u, v] for u, v in g.proper_arcs()]
    doc["loops"] = loops_field
    if cls is not None:
        doc["class"] = cls.value
    return doc


def graph_from_json(doc: dict) -> tuple[Digraph, ClassTag | None]:
    labels = doc.get("labels")
    n = len(labels) if labels is not None else int(doc["n"])
    if n > MAX_INPUT_VERTICES:
        raise LimitExceededError(f"input graphs are limited to {MAX_INPUT_VERTICES} vertices")

    def ref(x):
        if isinstance(x, int):
            return x
        if labels is not None and x in labels:
            return labels.index(x)
        return int(x)

    arcs = [(ref(u), ref(v)) for u, v in doc.get("arcs", [])]
    loops = doc.get("loops", "none")
    if isinstance(loops, list):
        loops = [ref(v) for v in loops]
    g = Digraph.from_arcs(n, arcs, labels, loops)
    cls = ClassTag.parse(doc["class"]) if doc.get("class") else None
    return g, cls


def _dot_id(text: str) -> str:
    return '"' + text.replace('"', r"\"") + '"'


def to_dot(g: Digraph, name: str = "G") -> str:
    lines = [f"digraph {_dot_id(name)} {{"]
    for v in range(g.n):
        lines.append(f"  n{v} [label={_dot_id(g.name(v))}];")
    for u, v in g.arcs():
        lines.append(f"  n{u} -> n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
