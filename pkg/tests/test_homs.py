import pytest
from hypothesis import given, strategies as st

import oracles as O
from strategies import digraphs
from evhom.corpus import get_entry
from evhom.errors import ClassMismatchError, LimitExceededError
from evhom.graph import ClassTag, Digraph, bits
from evhom.homs import (VertexMap, compare_lovasz, count_homs, enumerate_homs, gamma_component, identity_map,
                        is_hom, is_strict_hom)


def arcs(g):
    return frozenset(g.arcs())


@given(digraphs(n_max=4), digraphs(n_max=3), st.booleans())
def test_enumeration_matches_brute_force(g, h, strict):
    got = [m.map for m in enumerate_homs(g, h, strict)]
    want = O.brute_homs(g.n, arcs(g), h.n, arcs(h), strict)
    assert got == want  # both lexicographic
    assert count_homs(g, h, strict) == len(want)


@given(digraphs(n_max=4), digraphs(n_max=3))
def test_classification_agrees_with_definition(g, h):
    import itertools
    hom = set(O.brute_homs(g.n, arcs(g), h.n, arcs(h), False))
    strict = set(O.brute_homs(g.n, arcs(g), h.n, arcs(h), True))
    for f in itertools.product(range(h.n), repeat=g.n):
        m = VertexMap(g, h, f)
        assert is_hom(m) == (f in hom)
        assert is_strict_hom(m) == (f in strict)


@given(digraphs(n_max=3), digraphs(n_max=3), digraphs(n_max=3))
def test_composition_of_homs_is_hom(f, g, h):
    for a in enumerate_homs(f, g):
        for b in enumerate_homs(g, h):
            assert is_hom(a.compose(b))


@given(digraphs(n_max=4), digraphs(n_max=3))
def test_strict_homs_have_singleton_gamma_components(g, h):
    for m in enumerate_homs(g, h, strict=True):
        for v in range(g.n):
            assert gamma_component(m, v) == 1 << v


def test_gamma_component_follows_weak_arcs_inside_fibre():
    path = Digraph.from_arcs(3, [(0, 1), (2, 1)])
    point = Digraph.from_arcs(1, [])
    m = VertexMap(path, point, [0, 0, 0])
    assert gamma_component(m, 0) == 0b111
    split = Digraph.from_arcs(2, [])
    m = VertexMap(path, split, [0, 0, 1])
    assert gamma_component(m, 2) == 0b100


def test_identity_is_strict():
    g = Digraph.from_arcs(3, [(0, 1), (1, 2)])
    assert is_strict_hom(identity_map(g))


def test_source_limit():
    big = Digraph.from_arcs(9, [])
    with pytest.raises(LimitExceededError):
        count_homs(big, Digraph.from_arcs(1, []))


def test_known_counts():
    # Homs from a 2-chain into itself: identity plus the two constant maps.
    chain = Digraph.from_arcs(2, [(0, 1)], loops="all")
    assert count_homs(chain, chain) == 3
    assert count_homs(chain, chain, strict=True) == 1


def test_reverse_dominance_fails_for_pair_a():
    e = get_entry("pair_a")
    rep = compare_lovasz(e.s, e.r, ClassTag.POSET, 3, strict=True)
    assert rep.counterexamples and not rep.holds
    for row in rep.counterexamples:
        a, b = row.counts(True)
        assert a > b


def test_isomorphic_targets_dominate_each_other():
    e = get_entry("pair_a")
    twin = e.r.relabel([3, 2, 1, 0])
    for strict in (False, True):
        rep = compare_lovasz(e.r, twin, ClassTag.POSET, 4, strict)
        assert rep.holds
        assert all(row.counts(strict)[0] == row.counts(strict)[1] for row in rep.rows)


def test_compare_checks_class():
    loose = Digraph.from_arcs(2, [(0, 1), (1, 0)])
    with pytest.raises(ClassMismatchError):
        compare_lovasz(loose, loose, ClassTag.POSET, 2)


def test_vertex_map_validation():
    g = Digraph.from_arcs(2, [])
    with pytest.raises(ValueError):
        VertexMap(g, g, [0])
    with pytest.raises(ValueError):
        VertexMap(g, g, [0, 2])
    m = VertexMap(g, g, [1, 1])
    assert m.image(0b11) == 0b10 and list(bits(m.preimage(1))) == [0, 1]
