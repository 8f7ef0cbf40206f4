import pytest
from hypothesis import given

import oracles as O
from strategies import digraphs
from evhom.errors import ClassMismatchError, ErdError, NotStrictError
from evhom.ev import (EvVertex, alpha_map, bug_witness, ev_build, ev_size, lift, phi_map, verify_aid,
                      verify_erd, verify_simple_scheme)
from evhom.graph import ClassTag, Digraph, enumerate_class, enumerate_upto, neighborhoods
from evhom.homs import VertexMap, enumerate_homs, is_strict_hom


def _sets(r, a: EvVertex):
    return a.base, frozenset(i for i in range(r.n) if a.down >> i & 1), frozenset(i for i in range(r.n) if a.up >> i & 1)


def ev_arc_triples(ev):
    r = ev.base_graph
    return {(_sets(r, ev.vertices[u]), _sets(r, ev.vertices[v])) for u, v in ev.graph.arcs()}


@given(digraphs(n_max=4))
def test_size_formula(r):
    want = 0
    for v in range(r.n):
        nin, nout = neighborhoods(r, v)
        want += 2 ** (bin(nin).count("1") + bin(nout).count("1"))
    ev = ev_build(r)
    assert len(ev) == ev_size(r) == want


@given(digraphs(n_max=4))
def test_vertex_order(r):
    verts = ev_build(r).vertices
    assert list(verts) == sorted(verts)


@given(digraphs(n_max=2))
def test_arcs_match_witness_oracle_small(r):
    found = O.ev_arcs_from_witnesses(r.n, frozenset(r.arcs()), O.double_stars(1, loops=True))
    assert ev_arc_triples(ev_build(r)) == found


@given(digraphs(n_max=4))
def test_alpha_is_strict_and_lifts_xi(r):
    ev = ev_build(r)
    for g in enumerate_upto(ClassTag.ALL_DIGRAPHS, 2):
        for xi in enumerate_homs(g, r, strict=True):
            a = alpha_map(xi, ev)
            assert is_strict_hom(a)
            assert tuple(ev.phi[i] for i in a.map) == xi.map


@given(digraphs(n_max=4))
def test_aid_for_all_digraphs(r):
    assert verify_aid(ev_build(r))


def test_alpha_rejects_non_strict_maps():
    r = Digraph.from_arcs(1, [(0, 0)])
    g = Digraph.from_arcs(2, [(0, 1)])
    with pytest.raises(NotStrictError):
        alpha_map(VertexMap(g, r, [0, 0]), ev_build(r))


def test_class_is_checked():
    cycle = Digraph.from_arcs(2, [(0, 1), (1, 0)])
    with pytest.raises(ClassMismatchError):
        ev_build(cycle, ClassTag.TA)
    with pytest.raises(ClassMismatchError):
        ev_build(cycle, ClassTag.ALL_UGRAPHS)


def test_aid_raises_when_ev_leaves_class():
    # A forged system that claims class poset for a non-poset graph.
    from dataclasses import replace
    r = Digraph.from_arcs(2, [(0, 1)], loops="all")
    ev = ev_build(r, ClassTag.POSET)
    broken = replace(ev, graph=Digraph.from_arcs(len(ev), [(0, 1), (1, 0)], loops="all"))
    assert not verify_erd(broken)
    with pytest.raises(ErdError):
        verify_aid(broken)


@pytest.mark.parametrize("cls", [ClassTag.POSET, ClassTag.STRICT_POSET])
def test_simple_scheme_on_small_posets(cls):
    for r in enumerate_class(cls, 3):
        assert verify_simple_scheme(ev_build(r, cls), 3)


def test_bug_witness_lifts_to_its_vertex():
    for cls in (ClassTag.ALL_DIGRAPHS, ClassTag.POSET):
        for r in enumerate_class(cls, 3):
            ev = ev_build(r, cls)
            for i in range(len(ev)):
                g, iota, p = bug_witness(ev, i)
                assert is_strict_hom(iota)
                assert lift(iota)[p] == ev.vertices[i]


def test_poset_arcs_are_restricted():
    chain = Digraph.from_labeled_arcs(["a", "b"], [("a", "b")], loops="all")
    ev = ev_build(chain, ClassTag.POSET)
    a_up = ev.parse_vertex("a", [], ["b"])
    a_bare = ev.parse_vertex("a", [], [])
    b_down = ev.parse_vertex("b", ["a"], [])
    assert ev.graph.has_arc(a_up, b_down)
    assert all(ev.graph.has_loop(i) for i in range(len(ev)))
    assert not ev.graph.has_arc(a_bare, b_down)
    assert ev.fmt(a_up) == "( a, {}, {b} )"
    strict = ev_build(Digraph.from_arcs(2, [(0, 1)]), ClassTag.STRICT_POSET)
    assert strict.graph.loop_mask == 0


def test_phi_is_projection():
    r = Digraph.from_arcs(3, [(0, 1), (1, 2)])
    ev = ev_build(r)
    phi = phi_map(ev)
    assert is_strict_hom(phi)
    assert [ev.vertices[i].base for i in range(len(ev))] == list(phi.map)
