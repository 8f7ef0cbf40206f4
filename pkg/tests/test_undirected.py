import math
import random

import pytest
from hypothesis import given, strategies as st

import oracles as O
from evhom.errors import ClassMismatchError
from evhom.graph import ClassTag, Digraph, bits
from evhom.homs import count_homs, is_strict_hom
from evhom.rearrange import RearrangementSpec, apply
from evhom.undirected import (UGraph, alpha_u, count_homs_u, enumerate_uclass, ev_build_u, from_symmetric,
                              is_in_co, rearrange_u, rho_u, star_graph, strict_homs_u, to_symmetric,
                              validate_spec_u, verify_aid_u, x1_aut_properties)


@st.composite
def ugraphs(draw, n_max=4):
    n = draw(st.integers(1, n_max))
    slots = [(u, v) for u in range(n) for v in range(u, n)]
    chosen = draw(st.lists(st.sampled_from(slots), unique=True))
    return UGraph.from_edges(n, chosen)


def edge_sets(g: UGraph):
    return [frozenset(e) for e in g.edges()]


@pytest.mark.parametrize("n,count", [(1, 2), (2, 6), (3, 20), (4, 90)])
def test_ugraph_counts(n, count):
    assert len(enumerate_uclass(ClassTag.ALL_UGRAPHS, n)) == count == O.ugraph_count(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_co_class_is_bipartite_core(n):
    members = enumerate_uclass(ClassTag.CO, n)
    assert all(is_in_co(g) for g in members)
    others = [g for g in enumerate_uclass(ClassTag.ALL_UGRAPHS, n) if g not in members]
    assert all(not is_in_co(g) for g in others)


def test_triangle_is_not_in_co():
    tri = UGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], loops=[0])
    assert not is_in_co(tri)
    assert is_in_co(UGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)], loops="all"))


@given(ugraphs(), ugraphs(n_max=3), st.booleans())
def test_hom_counts_match_brute_force(g, h, strict):
    want = O.ugraph_homs(g.n, edge_sets(g), h.n, set(edge_sets(h)), strict)
    assert count_homs_u(g, h, strict) == want
    assert count_homs(to_symmetric(g), to_symmetric(h), strict) == want
    if strict:
        assert len(list(strict_homs_u(g, h))) == want


@given(ugraphs())
def test_symmetric_round_trip(g):
    assert from_symmetric(to_symmetric(g)) == g


def test_asymmetric_digraph_is_rejected():
    with pytest.raises(ValueError):
        from_symmetric(Digraph.from_arcs(2, [(0, 1)]))


@given(ugraphs())
def test_ev_size_and_aid(r):
    ev = ev_build_u(r)
    assert len(ev) == sum(2 ** bin(r.nbhd(v)).count("1") for v in range(r.n))
    assert verify_aid_u(ev)


@given(ugraphs(), ugraphs(n_max=3))
def test_lift_is_strict(r, g):
    ev = ev_build_u(r)
    for xi in strict_homs_u(g, r):
        a = alpha_u(xi, ev)
        assert is_strict_hom(a)
        assert tuple(ev.phi[i] for i in a.map) == xi.map


def test_class_tags_checked():
    with pytest.raises(ClassMismatchError):
        enumerate_uclass(ClassTag.POSET, 2)


def test_star_automorphisms():
    facts = x1_aut_properties(5)
    assert facts.aut_counts[1] == 2
    assert all(facts.aut_counts[m] == math.factorial(m) for m in (0, 2, 3, 4, 5))
    assert not facts.body_fixed[1] and facts.body_fixed[2]
    assert facts.ok
    g, p = star_graph(3)
    assert bin(g.nbhd(p)).count("1") == 3


def _random_uspec(rng: random.Random):
    while True:
        n = rng.randint(3, 5)
        r = UGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4])
        verts = rng.sample(range(n), n)
        x, y = verts[0], verts[1]
        ms = verts[2:2 + rng.randint(0, n - 2)]
        spec = RearrangementSpec.make([x], [y], ms, {x: y})
        if not validate_spec_u(r, spec):
            return r, spec


@given(st.integers(0, 10 ** 6))
def test_undirected_rearrangement_is_symmetric_twin(seed):
    r, spec = _random_uspec(random.Random(seed))
    s = rearrange_u(r, spec)
    assert to_symmetric(s) == apply(to_symmetric(r), spec).with_labels(s.labels)


@given(st.integers(0, 10 ** 6))
def test_undirected_rho_is_strong(seed):
    r, spec = _random_uspec(random.Random(seed))
    s = rearrange_u(r, spec)
    for g in enumerate_uclass(ClassTag.ALL_UGRAPHS, 3):
        xis = list(strict_homs_u(g, r))
        images = {rho_u(xi, spec, s).map for xi in xis}
        assert len(images) == len(xis)
        assert all(is_strict_hom(rho_u(xi, spec, s)) for xi in xis)
