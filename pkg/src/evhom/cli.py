"""Command-line entry point ``evhom``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import corpus_list, epsilon_for, get_entry, reproduce
from .errors import EvhomError, LimitExceededError
from .ev import ev_build
from .graph import ClassTag, enumerate_class, graph_from_json, graph_to_json
from .homs import STRICT, compare_lovasz, enumerate_homs
from .rearrange import RearrangementSpec, apply, epsilon_explicit, injectivity_criterion, rho, validate_spec
from .render import render_certification, render_dominance, render_dot, render_epsilon, render_ev_table
from .scheme import certify, epsilon_from_json, epsilon_to_json, eta, find_inducing_epsilon
from .undirected import UGraph, count_homs_u, ev_build_u, rearrange_u

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def ugraph_from_json(doc: dict) -> UGraph:
    labels = doc.get("labels")
    n = len(labels) if labels is not None else int(doc["n"])

    def ref(x):
        return labels.index(x) if isinstance(x, str) and labels and x in labels else int(x)

    loops = doc.get("loops", [])
    if isinstance(loops, list):
        loops = [ref(v) for v in loops]
    elif loops == "none":
        loops = []
    return UGraph.from_edges(n, [(ref(u), ref(v)) for u, v in doc.get("edges", [])], labels, loops)


def ugraph_to_json(g: UGraph) -> dict:
    doc: dict = {"labels": list(g.labels)} if g.labels else {"n": g.n}
    doc["edges"] = [[u, v] for u, v in g.edges() if u != v]
    doc["loops"] = [v for v in range(g.n) if g.has_loop(v)]
    return doc


def load_graph(ref: str, undirected: bool = False):
    """A JSON file path, or a corpus reference ``name`` / ``name:R`` / ``name:S``."""
    path = Path(ref)
    if path.exists():
        doc = json.loads(path.read_text())
        if undirected or "edges" in doc:
            return ugraph_from_json(doc), None
        return graph_from_json(doc)
    name, _, part = ref.partition(":")
    try:
        entry = get_entry(name)
    except KeyError:
        raise UsageError(f"{ref!r} is neither a file nor a corpus entry") from None
    g = entry.s if part.upper() == "S" else entry.r
    if g is None:
        raise UsageError(f"corpus entry {name!r} has no graph {part}")
    return g, entry.cls


def resolve_pair(r_ref: str, s_ref: str | None, undirected: bool = False):
    if s_ref is None:
        name = r_ref.partition(":")[0]
        try:
            entry = get_entry(name)
        except KeyError:
            raise UsageError("a second graph is required unless the first is a corpus pair") from None
        if entry.s is None:
            raise UsageError(f"corpus entry {name!r} is not a pair")
        return entry.r, entry.s, entry.cls
    r, rc = load_graph(r_ref, undirected)
    s, sc = load_graph(s_ref, undirected)
    return r, s, rc or sc


def pick_class(args, fallback: ClassTag | None, undirected: bool = False) -> ClassTag:
    if args.cls:
        return ClassTag.parse(args.cls)
    if fallback is not None:
        return fallback
    return ClassTag.ALL_UGRAPHS if undirected else ClassTag.ALL_DIGRAPHS


def emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def cmd_ev(args) -> int:
    g, gc = load_graph(args.graph, args.undirected)
    if isinstance(g, UGraph):
        ev = ev_build_u(g, pick_class(args, gc if gc and not gc.directed else None, True))
    else:
        ev = ev_build(g, pick_class(args, gc))
    if args.dot_out:
        Path(args.dot_out).write_text(render_dot(ev))
    if args.format == "json":
        r = ev.base_graph
        emit(json.dumps({
            "class": ev.cls.value,
            "vertices": [ev.fmt(i) for i in range(len(ev))],
            "arcs": [[u, v] for u, v in ev.graph.arcs()],
            "phi": [r.name(b) for b in ev.phi],
        }, indent=2))
    elif args.format == "dot":
        emit(render_dot(ev))
    else:
        emit(f"{len(ev)} EV-vertices, class {ev.cls.value}\n" + render_ev_table(ev))
    return EXIT_OK


def cmd_homcount(args) -> int:
    g, _ = load_graph(args.g, args.undirected)
    h, _ = load_graph(args.h, args.undirected)
    if isinstance(g, UGraph) != isinstance(h, UGraph):
        raise UsageError("directed and undirected graphs cannot be mixed")
    if isinstance(g, UGraph):
        count = count_homs_u(g, h, args.strict)
        maps = []
    else:
        maps = list(enumerate_homs(g, h, args.strict))
        count = len(maps)
    if args.format == "json":
        emit(json.dumps({"count": count, "strict": args.strict,
                         "maps": [m.as_dict() for m in maps] if args.list else None}))
    else:
        emit(str(count))
        if args.list:
            for m in maps:
                emit(" ".join(f"{k}->{v}" for k, v in m.as_dict().items()))
    return EXIT_OK


def cmd_compare(args) -> int:
    r, s, c = resolve_pair(args.r, args.s)
    cls = pick_class(args, c)
    rep = compare_lovasz(r, s, cls, args.nmax or 4, args.strict)
    if args.format == "json":
        emit(json.dumps({
            "class": cls.value, "n_max": rep.n_max, "strict": rep.strict, "scanned": rep.scanned,
            "counterexamples": [graph_to_json(row.graph) for row in rep.counterexamples],
            "rows": [[row.graph.n, row.strict_r, row.strict_s, row.hom_r, row.hom_s] for row in rep.rows],
        }))
    else:
        emit(render_dominance(rep))
    return EXIT_OK if rep.holds else EXIT_MISMATCH


def _load_epsilon(args, r, s, cls):
    if args.eps:
        src, tgt = ev_build(r, cls), ev_build(s, cls)
        return epsilon_from_json(json.loads(Path(args.eps).read_text()), src, tgt)
    name = args.r.partition(":")[0]
    try:
        entry = get_entry(name)
    except KeyError:
        raise UsageError("an ε file is required unless the graphs come from the corpus") from None
    if entry.spec is not None:
        return epsilon_explicit(entry.r, entry.spec, cls)
    return epsilon_for(entry)


def cmd_check_epsilon(args) -> int:
    r, s, c = resolve_pair(args.r, args.s)
    cls = pick_class(args, c)
    e = _load_epsilon(args, r, s, cls)
    rep = certify(e, args.nmax or 4)
    if args.format == "json":
        emit(json.dumps(rep.to_json(), indent=2))
    else:
        if args.format == "table":
            emit(render_epsilon(e))
        emit(render_certification(rep))
    return EXIT_OK if rep.all_true else EXIT_MISMATCH


def cmd_search_epsilon(args) -> int:
    r, s, c = resolve_pair(args.r, args.s)
    cls = pick_class(args, c)
    found = 0
    try:
        for e in find_inducing_epsilon(r, s, cls, args.nmax, args.budget):
            found += 1
            if args.format == "table":
                emit(render_epsilon(e))
            else:
                emit(json.dumps(epsilon_to_json(e)))
            if args.limit and found >= args.limit:
                break
    finally:
        sys.stderr.write(f"{found} maps found\n")
    return EXIT_OK


def cmd_rearrange(args) -> int:
    r, rc = load_graph(args.r, args.undirected)
    if args.spec:
        doc = json.loads(Path(args.spec).read_text())
        spec = RearrangementSpec.from_json(doc, r)
    else:
        entry = get_entry(args.r.partition(":")[0]) if not Path(args.r).exists() else None
        if entry is None or entry.spec is None:
            raise UsageError("a spec file is required unless the graph comes from a corpus pair")
        spec = entry.spec
    if isinstance(r, UGraph):
        s = rearrange_u(r, spec)
        s_doc = ugraph_to_json(s)
        if args.emit_s:
            Path(args.emit_s).write_text(json.dumps(s_doc, indent=2))
        emit(json.dumps(s_doc))
        return EXIT_OK
    violations = validate_spec(r, spec)
    if violations:
        for v in violations:
            sys.stderr.write(f"invalid spec: {v}\n")
        return EXIT_USAGE
    s = apply(r, spec)
    s_doc = graph_to_json(s, rc)
    if args.emit_s:
        Path(args.emit_s).write_text(json.dumps(s_doc, indent=2))
    e = epsilon_explicit(r, spec)
    if args.emit_eps:
        Path(args.emit_eps).write_text(json.dumps(epsilon_to_json(e), indent=2))
    status = EXIT_OK
    if args.format == "json":
        emit(json.dumps({"S": s_doc, "injective_criterion": injectivity_criterion(r, spec),
                         "epsilon": epsilon_to_json(e)}))
    else:
        emit("S arcs: " + ", ".join(f"{s.name(u)}->{s.name(v)}" for u, v in s.proper_arcs()))
        emit(f"injectivity criterion: {injectivity_criterion(r, spec)}")
        emit(render_epsilon(e))
    if args.verify:
        bad = _verify_rho(r, s, spec, args.verify)
        emit(f"verify n<={args.verify}: {'ok' if not bad else f'{bad} failures'}")
        if bad:
            status = EXIT_MISMATCH
    return status


def _verify_rho(r, s, spec, n_max: int) -> int:
    e = epsilon_explicit(r, spec)
    bad = 0
    for n in range(1, n_max + 1):
        for g in enumerate_class(ClassTag.ALL_DIGRAPHS, n):
            seen = set()
            for xi in enumerate_homs(g, r, strict=True):
                out = rho(xi, spec, s)
                if out.kind != STRICT or out.map in seen or out.map != eta(e, xi).map:
                    bad += 1
                seen.add(out.map)
    return bad


def cmd_corpus(args) -> int:
    if args.action == "list":
        for e in corpus_list():
            emit(f"{e.name:24} class={e.cls.value:12} {e.notes}")
        return EXIT_OK
    if not args.name:
        raise UsageError("corpus reproduce needs an entry name")
    names = [e.name for e in corpus_list()] if args.name == "all" else [args.name]
    status = EXIT_OK
    for name in names:
        rep = reproduce(get_entry(name), args.nmax or 4)
        if args.format == "json":
            emit(json.dumps({"entry": rep.entry, "ok": rep.ok,
                             "lines": [vars(line) for line in rep.lines]}))
        else:
            emit(f"{rep.entry}: {'ok' if rep.ok else 'MISMATCH'}")
            for line in rep.lines:
                if args.verbose or line.status != "match":
                    emit(f"  {line}")
        if not rep.ok:
            status = EXIT_MISMATCH
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--class", dest="cls", help="digraph | ta | poset | strict_poset | ugraph | co")
    common.add_argument("--nmax", type=int, help="largest test-graph size to scan")
    common.add_argument("--undirected", action="store_true", help="read graphs as undirected")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--table", dest="format", action="store_const", const="table")
    fmt.add_argument("--dot", dest="format", action="store_const", const="dot")

    p = argparse.ArgumentParser(prog="evhom", description="EV-systems and homomorphism schemes between small digraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("ev", parents=[common], help="print the EV-system of a graph")
    q.add_argument("graph")
    q.add_argument("--dot-out", metavar="FILE", help="also write DOT with one cluster per fibre")
    q.set_defaults(func=cmd_ev)

    q = sub.add_parser("homcount", parents=[common], help="count homomorphisms G -> H")
    q.add_argument("g")
    q.add_argument("h")
    q.add_argument("--strict", action="store_true")
    q.add_argument("--list", action="store_true", help="print every map")
    q.set_defaults(func=cmd_homcount)

    q = sub.add_parser("compare", parents=[common], help="pointwise comparison of homomorphism counts")
    q.add_argument("r")
    q.add_argument("s", nargs="?")
    q.add_argument("--strict", action="store_true")
    q.set_defaults(func=cmd_compare)

    q = sub.add_parser("check-epsilon", parents=[common], help="certify a map between EV-systems")
    q.add_argument("r")
    q.add_argument("s", nargs="?")
    q.add_argument("eps", nargs="?")
    q.set_defaults(func=cmd_check_epsilon)

    q = sub.add_parser("search-epsilon", parents=[common], help="search maps satisfying the sufficient conditions")
    q.add_argument("r")
    q.add_argument("s", nargs="?")
    q.add_argument("--budget", type=int, default=10 ** 7)
    q.add_argument("--limit", type=int, default=0, help="stop after this many maps")
    q.set_defaults(func=cmd_search_epsilon)

    q = sub.add_parser("rearrange", parents=[common], help="apply a rearrangement spec")
    q.add_argument("r")
    q.add_argument("spec", nargs="?")
    q.add_argument("--emit-s", metavar="FILE")
    q.add_argument("--emit-eps", metavar="FILE")
    q.add_argument("--verify", type=int, metavar="N", help="check ρ on all digraphs up to N vertices")
    q.set_defaults(func=cmd_rearrange)

    q = sub.add_parser("corpus", parents=[common], help="list or reproduce built-in examples")
    q.add_argument("action", choices=["list", "reproduce"])
    q.add_argument("name", nargs="?")
    q.add_argument("-v", "--verbose", action="store_true")
    q.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LimitExceededError as exc:
        sys.stderr.write(f"limit exceeded: {exc}\n")
        return EXIT_LIMIT
    except (UsageError, EvhomError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
