"""Built-in worked examples with their expected tables, and a reproducer that diffs against them."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from .ev import EvSystem, EvVertex, ev_build, lift
from .graph import ClassTag, Digraph, class_membership
from .homs import VertexMap, is_strict_hom
from .rearrange import RearrangementSpec, apply, b_phi, epsilon_explicit
from .scheme import (EpsilonMap, certify, check_condition1_empirical, check_condition1_sufficient,
                     eta, is_strict_ev_hom)
from .undirected import UGraph, rearrange_u, to_symmetric

Row = tuple[str, tuple[str, ...], tuple[str, ...]]


def row(base: str, down: str = "", up: str = "") -> Row:
    """``row("p", "x y", "")`` is the triple ( p, {x, y}, {} )."""
    return base, tuple(down.split()), tuple(up.split())


def to_vertex(r: Digraph, spec: Row) -> EvVertex:
    base, down, up = spec
    return EvVertex(r.index(base), sum(1 << r.index(v) for v in down), sum(1 << r.index(v) for v in up))


def fmt_row(spec: Row) -> str:
    base, down, up = spec
    return f"( {base}, {{{', '.join(down)}}}, {{{', '.join(up)}}} )"


@dataclass
class Trace:
    name: str
    g: Digraph
    xi: dict[str, str]
    rows: list[tuple[str, Row, Row, Row]]


@dataclass
class CorpusEntry:
    name: str
    r: Digraph | UGraph
    s: Digraph | UGraph | None = None
    spec: RearrangementSpec | None = None
    cls: ClassTag = ClassTag.POSET
    eps_rows: list[tuple[Row, Row]] = field(default_factory=list)
    typos: dict[int, tuple[Row, Row]] = field(default_factory=dict)
    b_phi: list[Row] | None = None
    traces: list[Trace] = field(default_factory=list)
    flags: dict[str, bool] = field(default_factory=dict)
    epsilon: Callable[[], EpsilonMap] | None = None
    expect_sufficient: bool | None = None
    expect_condition1: bool | None = None
    ev_arcs: list[tuple[Row, Row]] = field(default_factory=list)
    notes: str = ""


def _poset(labels, covers) -> Digraph:
    return Digraph.from_labeled_arcs(labels, covers, loops="all")


def _pair_a() -> CorpusEntry:
    r = _poset(["x", "p", "m", "y"], [("x", "m"), ("p", "m"), ("p", "y")])
    s = _poset(["x", "p", "m", "y"], [("p", "m"), ("p", "y"), ("y", "m")])
    spec = RearrangementSpec.make([0], [3], [2], {0: 3})
    eps = [
        (row("x"), row("x")),
        (row("x", "", "m"), row("y", "", "m")),
        (row("p", "", "m"), row("p", "", "m")),
        (row("p", "", "m y"), row("p", "", "m y")),
        (row("p", "", "y"), row("p", "", "y")),
        (row("p"), row("p")),
        (row("m"), row("m")),
        (row("m", "x"), row("m", "y")),
        (row("m", "x p"), row("m", "y p")),
        (row("m", "p"), row("m", "p")),
        (row("y", "p"), row("y", "p")),
        (row("y"), row("y")),
    ]
    # Row 4 is printed as a repeat of row 2; only ( p, {}, {y} ) is missing from the table.
    typos = {4: (row("p", "", "m"), row("p", "", "m"))}
    return CorpusEntry(
        "pair_a", r, s, spec, ClassTag.POSET, eps, typos, [row("x", "", "m")],
        flags={f: True for f in ("strict_hom", "injective", "base_separation", "prop5_sufficient",
                                 "condition1_empirical", "regularity_empirical", "eta_injective_empirical")},
        notes="R and S reconstructed from the neighbourhoods listed in its EV table.")


def _pair_b() -> CorpusEntry:
    r = _poset(["x", "y", "m", "p", "q"], [("x", "m"), ("x", "p"), ("y", "p"), ("y", "q")])
    s = _poset(["x", "y", "m", "p", "q"], [("x", "p"), ("y", "m"), ("y", "p"), ("y", "q")])
    spec = RearrangementSpec.make([0], [1], [2], {0: 1})
    eps = [
        (row("x"), row("x")),
        (row("x", "", "m"), row("y", "", "m")),
        (row("x", "", "m p"), row("y", "", "p m")),
        (row("x", "", "p"), row("x", "", "p")),
        (row("y"), row("y")),
        (row("y", "", "q"), row("y", "", "q")),
        (row("y", "", "p q"), row("y", "", "p q")),
        (row("y", "", "p"), row("y", "", "p")),
        (row("m"), row("m")),
        (row("m", "x"), row("m", "y")),
        (row("p"), row("p")),
        (row("p", "x"), row("p", "x y")),
        (row("p", "x y"), row("p", "x y")),
        (row("p", "y"), row("p", "y")),
        (row("q"), row("q")),
        (row("q", "y"), row("q", "y")),
    ]
    chain = _poset(["0", "1"], [("0", "1")])
    vee = _poset(["00", "10", "01"], [("00", "10"), ("00", "01")])
    enn = _poset(["100", "001", "101", "011"], [("100", "101"), ("001", "101"), ("001", "011")])
    traces = [
        Trace("xi", chain, {"0": "x", "1": "p"}, [
            ("0", row("x", "", "p"), row("x", "", "p"), row("x", "", "p")),
            ("1", row("p", "x"), row("p", "x y"), row("p", "x")),
        ]),
        Trace("zeta", vee, {"00": "x", "10": "m", "01": "p"}, [
            ("00", row("x", "", "m p"), row("y", "", "p m"), row("y", "", "p m")),
            ("10", row("m", "x"), row("m", "y"), row("m", "y")),
            ("01", row("p", "x"), row("p", "x y"), row("p", "y")),
        ]),
        Trace("theta", enn, {"100": "y", "001": "x", "101": "p", "011": "m"}, [
            ("100", row("y", "", "p"), row("y", "", "p"), row("y", "", "p")),
            ("001", row("x", "", "m p"), row("y", "", "p m"), row("y", "", "p m")),
            ("101", row("p", "x y"), row("p", "x y"), row("p", "y")),
            ("011", row("m", "x"), row("m", "y"), row("m", "y")),
        ]),
    ]
    return CorpusEntry(
        "pair_b", r, s, spec, ClassTag.POSET, eps, {}, [row("x", "", "m"), row("x", "", "m p")], traces,
        flags={"strict_hom": True, "injective": False, "prop5_sufficient": False,
               "condition1_empirical": False, "eta_injective_empirical": True},
        notes="R and S reconstructed from its EV tables.")


def fence(k: int) -> Digraph:
    """Path poset on ``k`` points: even positions minimal, odd positions maximal."""
    if k < 2:
        raise ValueError("a fence needs at least two points")
    covers = [(i, i + 1) if i % 2 == 0 else (i + 1, i) for i in range(k - 1)]
    return Digraph.from_arcs(k, covers, [f"a{i}" for i in range(k)], loops="all")


def chain2() -> Digraph:
    return _poset(["0", "1"], [("0", "1")])


def flat_epsilon(r: Digraph, cls: ClassTag = ClassTag.POSET) -> EpsilonMap:
    """Basement to basement, upper floor to upper floor, isolated points to an isolated point."""
    src, tgt = ev_build(r, cls), ev_build(chain2(), cls)
    bottom, top, lone = tgt.lookup(0, 0, 2), tgt.lookup(1, 1, 0), tgt.lookup(0, 0, 0)
    return EpsilonMap(src, tgt, [bottom if a.up else top if a.down else lone for a in src.vertices])


def _flat(k: int) -> CorpusEntry:
    r = fence(k)
    return CorpusEntry(f"flat_poset_family({k})", r, chain2(), cls=ClassTag.POSET,
                       epsilon=lambda: flat_epsilon(r), expect_sufficient=False, expect_condition1=True,
                       notes="Flat connected poset mapped onto the two-element chain.")


def _two_cycle() -> CorpusEntry:
    r = Digraph.from_arcs(2, [(0, 1), (1, 0)], ["0", "1"])
    return CorpusEntry("two_cycle_demo", r, cls=ClassTag.ALL_DIGRAPHS,
                       ev_arcs=[(row("0", "1", "1"), row("1", "0", "0")), (row("1", "0", "0"), row("0", "1", "1"))],
                       notes="A 2-cycle gives a 2-cycle between the full triples.")


def _pair_a_undirected() -> CorpusEntry:
    r = UGraph.from_edges(4, [(0, 2), (1, 2), (1, 3)], ["x", "p", "m", "y"], loops="all")
    s = UGraph.from_edges(4, [(1, 2), (1, 3), (3, 2)], ["x", "p", "m", "y"], loops="all")
    spec = RearrangementSpec.make([0], [3], [2], {0: 3})
    return CorpusEntry("pair_a_undirected", r, s, spec, ClassTag.ALL_UGRAPHS,
                       notes="Comparability graph of pair_a; checked against the directed transform.")


FLAT_RANGE = range(3, 7)


def corpus_list() -> list[CorpusEntry]:
    return [_pair_a(), _pair_b(), *(_flat(k) for k in FLAT_RANGE), _two_cycle(), _pair_a_undirected()]


def get_entry(name: str) -> CorpusEntry:
    m = re.fullmatch(r"flat_poset_family\((\d+)\)", name)
    if m:
        return _flat(int(m.group(1)))
    for e in corpus_list():
        if e.name == name:
            return e
    raise KeyError(f"unknown corpus entry {name!r}")


@dataclass
class ReproLine:
    section: str
    row: str
    column: str
    expected: str
    actual: str
    status: str

    def __str__(self) -> str:
        return f"{self.status:16} {self.section:10} {self.row:28} {self.column:10} expected {self.expected}  got {self.actual}"


@dataclass
class ReproReport:
    entry: str
    lines: list[ReproLine] = field(default_factory=list)

    def add(self, section, row_name, column, expected, actual, status=None):
        if status is None:
            status = "match" if expected == actual else "mismatch"
        self.lines.append(ReproLine(section, str(row_name), column, str(expected), str(actual), status))

    @property
    def ok(self) -> bool:
        return all(line.status in ("match", "documented-typo") for line in self.lines)

    def mismatches(self) -> list[ReproLine]:
        return [line for line in self.lines if line.status == "mismatch"]


def epsilon_for(entry: CorpusEntry) -> EpsilonMap:
    if entry.epsilon is not None:
        return entry.epsilon()
    if entry.spec is None:
        raise ValueError(f"{entry.name} carries no ε")
    return epsilon_explicit(entry.r, entry.spec, entry.cls)


def _reproduce_pair(entry: CorpusEntry, report: ReproReport, n_max: int) -> None:
    r = entry.r
    s = apply(r, entry.spec)
    report.add("S", "arcs", "A(S)", sorted(entry.s.arcs()), sorted(s.arcs()))
    e = epsilon_explicit(r, entry.spec, ClassTag.ALL_DIGRAPHS)
    src, tgt = e.source, e.target
    covered = set()
    for k, (a_spec, b_spec) in enumerate(entry.eps_rows):
        a = to_vertex(r, a_spec)
        covered.add(a)
        got = tgt.vertices[e.map[src.index[a]]].fmt(s)
        want = fmt_row(b_spec)
        if to_vertex(s, b_spec) == tgt.vertices[e.map[src.index[a]]]:
            want = got
        status = None
        if k in entry.typos:
            printed_a, printed_b = entry.typos[k]
            status = "documented-typo" if want == got else "mismatch"
            want = f"{want} (printed as {fmt_row(printed_a)} -> {fmt_row(printed_b)})"
        report.add("epsilon", fmt_row(a_spec), "image", want, got, status)
    report.add("epsilon", "rows", "coverage", len(src), len(covered))
    if entry.b_phi is not None:
        want = sorted(to_vertex(r, x) for x in entry.b_phi)
        got = sorted(b_phi(r, entry.spec))
        report.add("B_phi", "set", "members", [a.fmt(r) for a in want], [a.fmt(r) for a in got])
    ep = epsilon_explicit(r, entry.spec, entry.cls)
    for tr in entry.traces:
        xi = VertexMap(tr.g, r, [r.index(tr.xi[tr.g.name(v)]) for v in range(tr.g.n)])
        alpha = lift(xi)
        h = eta(ep, xi)
        lifted = lift(h)
        for label, a_spec, e_spec, h_spec in tr.rows:
            v = tr.g.index(label)
            img = ep.image_vertex(ep.source.index[alpha[v]])
            for col, want, got, graph in (("alpha", a_spec, alpha[v], r), ("eps(alpha)", e_spec, img, s),
                                          ("alpha(eta)", h_spec, lifted[v], s)):
                exp = to_vertex(graph, want)
                report.add(f"trace {tr.name}", label, col, exp.fmt(graph), got.fmt(graph))
    if entry.flags:
        cert = certify(ep, n_max)
        for flag, want in entry.flags.items():
            report.add("certify", f"n_max={n_max}", flag, want, cert.flags.get(flag))


def reproduce(entry: CorpusEntry | str, n_max: int = 4) -> ReproReport:
    """Regenerate every expected table of ``entry`` and diff it row by row."""
    if isinstance(entry, str):
        entry = get_entry(entry)
    report = ReproReport(entry.name)
    if entry.name == "pair_a_undirected":
        s = rearrange_u(entry.r, entry.spec)
        report.add("S", "edges", "A(S)", sorted(entry.s.edges()), sorted(s.edges()))
        directed = apply(to_symmetric(entry.r), entry.spec)
        report.add("S", "edges", "directed twin", sorted(directed.arcs()), sorted(to_symmetric(s).arcs()))
        return report
    if entry.spec is not None:
        _reproduce_pair(entry, report, n_max)
    if entry.epsilon is not None:
        e = entry.epsilon()
        report.add("epsilon", "strict", "hom", True, is_strict_ev_hom(e))
        report.add("epsilon", "sufficient", "check", entry.expect_sufficient, check_condition1_sufficient(e))
        emp = check_condition1_empirical(e, n_max)
        report.add("epsilon", f"n_max={n_max}", "condition1", entry.expect_condition1,
                   emp.flags["condition1_empirical"])
    if entry.ev_arcs:
        ev = ev_build(entry.r, entry.cls)
        for a_spec, b_spec in entry.ev_arcs:
            i, j = ev.index[to_vertex(entry.r, a_spec)], ev.index[to_vertex(entry.r, b_spec)]
            report.add("ev", f"{fmt_row(a_spec)} -> {fmt_row(b_spec)}", "arc", True, ev.graph.has_arc(i, j))
    if isinstance(entry.r, Digraph) and entry.cls.directed and entry.cls is not ClassTag.ALL_DIGRAPHS:
        report.add("class", "R", entry.cls.value, True, class_membership(entry.r, entry.cls))
    return report
