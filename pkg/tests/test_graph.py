import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import AB, RETRACT_G, RETRACT_H, RETRACT_PHI, TYPE_AB, brute_homs, graph, loop, nx_isomorphic, path, random_graph
from tglab.canon import GraphUniverse, enumerate_graphs, is_isomorphic
from tglab.graph import (
    AlphabetMismatch,
    Edge,
    Graph,
    GraphError,
    GraphMorphism,
    compose,
    coproduct,
    empty_graph,
    flower,
    identity,
    is_morphism,
    product,
    validate_morphism,
)
from tglab.homs import enumerate_homs, find_hom, has_hom, hom_equivalent


@st.composite
def graphs(draw, labels="AB", max_nodes=3, max_edges=4):
    return random_graph(random.Random(draw(st.integers(0, 2**32))), labels, max_nodes, max_edges)


class TestValidation:
    def test_edge_with_missing_endpoint_is_rejected(self):
        with pytest.raises(GraphError, match="e9"):
            Graph(("a",), (Edge("e9", "a", "zz", "A"),))

    def test_duplicate_ids(self):
        with pytest.raises(GraphError):
            Graph(("a", "a"), ())
        with pytest.raises(GraphError):
            Graph(("a",), (Edge("a", "a", "a", "A"),))

    def test_label_outside_alphabet(self):
        with pytest.raises(GraphError):
            Graph(("a",), (Edge("e", "a", "a", "C"),), frozenset("AB"))

    def test_alphabet_defaults_to_labels_in_use(self):
        g = Graph(("a",), (("a", "a", "B"),))
        assert g.alphabet == {"B"}
        assert g.edges[0].id == "e0"

    def test_empty_graph_is_a_value(self):
        g = empty_graph(AB)
        assert g.is_empty() and g.items == ()


class TestMorphisms:
    def test_identity_is_valid(self):
        assert validate_morphism(identity(RETRACT_G)) is None

    def test_retraction_by_numbering_is_valid(self):
        edge_map = {}
        for e in RETRACT_G.edges:
            src, tgt = RETRACT_PHI[e.src], RETRACT_PHI[e.tgt]
            edge_map[e.id] = RETRACT_H.edges_between[(src, tgt, e.label)][0]
        assert validate_morphism(GraphMorphism(RETRACT_G, RETRACT_H, RETRACT_PHI, edge_map)) is None

    def test_label_mismatch_is_reported(self):
        a, b = graph([1, 2], [(1, 2, "A")]), graph([1, 2], [(1, 2, "B")])
        m = GraphMorphism(a, b, {"1": "1", "2": "2"}, {"e0": "e0"})
        assert validate_morphism(m).startswith("label mismatch")

    def test_partial_map_is_a_structural_error(self):
        with pytest.raises(GraphError):
            validate_morphism(GraphMorphism(path("A"), path("A"), {"1": "1"}, {"e0": "e0"}))

    def test_composition_validates(self):
        f = find_hom(RETRACT_G, RETRACT_H)
        g = find_hom(RETRACT_H, TYPE_AB)
        assert is_morphism(compose(g, f))
        assert compose(g, f).domain == RETRACT_G


class TestConstructions:
    def test_flower_three_labels(self):
        f = flower("ABC")
        assert len(f.nodes) == 1 and sorted(e.label for e in f.edges) == ["A", "B", "C"]
        assert all(e.src == e.tgt for e in f.edges)

    def test_flower_empty_alphabet(self):
        f = flower(())
        assert len(f.nodes) == 1 and not f.edges

    def test_product_of_different_loops_has_no_edges(self):
        p, _, _ = product(loop("A"), loop("B"))
        assert len(p.nodes) == 1 and not p.edges

    def test_product_with_flower_is_isomorphic(self):
        for g in enumerate_graphs(GraphUniverse(AB, 3, 2)):
            assert nx_isomorphic(product(g, flower(AB))[0], g)

    def test_product_is_idempotent_up_to_homs(self):
        assert hom_equivalent(product(TYPE_AB, TYPE_AB)[0], TYPE_AB)

    def test_coproduct_with_empty(self):
        c, _, _ = coproduct(empty_graph(AB), TYPE_AB)
        assert is_isomorphic(c, TYPE_AB)

    def test_coproduct_of_two_nodes(self):
        c, _, _ = coproduct(graph([1], []), graph([1], []))
        assert len(c.nodes) == 2 and not c.edges

    def test_alphabets_must_agree(self):
        with pytest.raises(AlphabetMismatch):
            product(loop("A", "A"), loop("A", "AB"))

    @settings(max_examples=40, deadline=None)
    @given(graphs(), graphs())
    def test_sizes_add_under_coproduct(self, g1, g2):
        c, i1, i2 = coproduct(g1, g2)
        assert len(c.nodes) == len(g1.nodes) + len(g2.nodes)
        assert len(c.edges) == len(g1.edges) + len(g2.edges)
        assert is_morphism(i1) and is_morphism(i2)

    @settings(max_examples=30, deadline=None)
    @given(graphs(max_nodes=2, max_edges=2), graphs(max_nodes=2, max_edges=2), graphs(max_nodes=3, max_edges=3))
    def test_product_universal_property(self, t1, t2, g):
        # homs into the product correspond exactly to pairs of homs
        p, p1, p2 = product(t1, t2)
        assert is_morphism(p1) and is_morphism(p2)
        into_p = len(brute_homs(g, p))
        assert into_p == len(brute_homs(g, t1)) * len(brute_homs(g, t2))

    @settings(max_examples=30, deadline=None)
    @given(graphs(max_nodes=2, max_edges=2), graphs(max_nodes=2, max_edges=2), graphs(max_nodes=2, max_edges=3))
    def test_coproduct_universal_property(self, g1, g2, h):
        c, _, _ = coproduct(g1, g2)
        assert len(brute_homs(c, h)) == len(brute_homs(g1, h)) * len(brute_homs(g2, h))


@settings(max_examples=20, deadline=None)
@given(graphs(max_nodes=4, max_edges=4))
def test_everything_maps_into_the_flower(g):
    assert has_hom(g, flower(AB))
    assert len(list(enumerate_homs(g, flower(AB)))) == 1
