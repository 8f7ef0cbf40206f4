"""Plain-text tables and DOT output."""
from __future__ import annotations

from typing import Sequence

from .ev import EvSystem
from .homs import DominanceReport
from .scheme import FLAGS, CertificationReport, EpsilonMap


def render_table(headers: Sequence[str], rows: Sequence[Sequence[str]], breaks: Sequence[int] = ()) -> str:
    """Boxed table; a rule is drawn before every row index listed in ``breaks``."""
    widths = [len(h) for h in headers]
    for r in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, r)]

    def line(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
    out = [rule, line(headers), rule.replace("-", "=")]
    for k, r in enumerate(rows):
        if k in breaks and k:
            out.append(rule)
        out.append(line(r))
    out.append(rule)
    return "\n".join(out) + "\n"


def _fiber_breaks(ev) -> list[int]:
    return [k for k in range(1, len(ev.vertices)) if ev.vertices[k].base != ev.vertices[k - 1].base]


def render_ev_table(ev) -> str:
    rows = [(str(i), ev.fmt(i)) for i in range(len(ev))]
    return render_table(("#", "a"), rows, _fiber_breaks(ev))


def render_epsilon(e: EpsilonMap) -> str:
    return render_table(("a in E_o(R)", "eps(a) in E_o(S)"), e.rows(), _fiber_breaks(e.source))


def _q(text: str) -> str:
    return '"' + text.replace('"', r"\"") + '"'


def render_dot(ev: EvSystem, name: str = "EV") -> str:
    """EV-graph with one cluster per φ-fibre."""
    r = ev.base_graph
    directed = getattr(r, "adj", None) is None
    kw, arrow = ("digraph", "->") if directed else ("graph", "--")
    lines = [f"{kw} {_q(name)} {{"]
    for v in range(r.n):
        lines.append(f"  subgraph cluster_{v} {{")
        lines.append(f"    label={_q(r.name(v))};")
        for i, a in enumerate(ev.vertices):
            if a.base == v:
                lines.append(f"    e{i} [label={_q(ev.fmt(i))}];")
        lines.append("  }")
    g = ev.graph
    for u, v in g.arcs():
        if directed or u <= v:
            lines.append(f"  e{u} {arrow} e{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_dominance(rep: DominanceReport, r_name: str = "R", s_name: str = "S") -> str:
    rows = []
    for row in rep.rows:
        a, b = row.counts(rep.strict)
        mark = "  <-- counterexample" if a > b else ""
        arcs = " ".join(f"{u}{v}" for u, v in row.graph.proper_arcs())
        rows.append((str(row.graph.n), arcs or "-", str(row.strict_r), str(row.strict_s),
                     str(row.hom_r), str(row.hom_s) + mark))
    kind = "strict" if rep.strict else "all"
    head = (f"class={rep.cls.value} n_max={rep.n_max} homs={kind} scanned={rep.scanned} "
            f"counterexamples={len(rep.counterexamples)}\n")
    table = render_table(("n", "proper arcs", f"#S(G,{r_name})", f"#S(G,{s_name})",
                          f"#H(G,{r_name})", f"#H(G,{s_name})"), rows)
    return head + table


def render_certification(rep: CertificationReport) -> str:
    rows = [(f, str(rep.flags.get(f, "-"))) for f in FLAGS]
    out = [f"class={rep.cls.value} n_max={rep.n_max} graphs={rep.scanned_graphs} maps={rep.scanned_maps}",
           render_table(("flag", "value"), rows).rstrip()]
    for flag, ws in rep.witnesses.items():
        for w in ws:
            out.append(f"witness {w}")
    return "\n".join(out) + "\n"
