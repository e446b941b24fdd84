import itertools
import random

import pytest

from support import AB, RETRACT_G, RETRACT_H, TYPE_AB, brute_homs, graph, loop, nx_isomorphic, path, random_graph
from tglab.canon import GraphUniverse, enumerate_graphs
from tglab.graph import compose, empty_graph, flower, identity, is_morphism
from tglab.homs import core, count_homs, enumerate_homs, find_hom, has_hom, hom_equivalent, is_core, isomorphisms

SMALL = enumerate_graphs(GraphUniverse(AB, 2, 2))


def test_single_node_into_type_graph():
    assert has_hom(graph([1], []), TYPE_AB)


def test_empty_graph_has_exactly_one_morphism():
    assert count_homs(empty_graph(AB), TYPE_AB) == 1
    assert count_homs(empty_graph(AB), empty_graph(AB)) == 1


def test_nothing_nonempty_maps_into_empty():
    assert not has_hom(graph([1], []), empty_graph(AB))


def test_edge_onto_loop():
    assert count_homs(path("A"), loop("A")) == 1


@pytest.mark.parametrize("g", SMALL)
def test_counts_match_brute_force(g):
    for h in SMALL:
        assert count_homs(g, h) == len(brute_homs(g, h))


def test_counts_match_brute_force_larger():
    rng = random.Random(11)
    for _ in range(60):
        g = random_graph(rng, AB, 3, 4)
        h = random_graph(rng, AB, 3, 5)
        assert count_homs(g, h) == len(brute_homs(g, h))


def test_first_mode_stops_early():
    homs = list(enumerate_homs(graph([1, 2, 3], []), graph([1, 2], []), mode="first"))
    assert len(homs) == 1


def test_every_found_morphism_validates():
    rng = random.Random(12)
    for _ in range(30):
        g, h = random_graph(rng, AB, 3, 3), random_graph(rng, AB, 3, 4)
        for m in enumerate_homs(g, h):
            assert is_morphism(m)


def test_pins_are_respected():
    m = find_hom(path("A", "A"), graph([1, 2], [(1, 2, "A"), (2, 1, "A")], "A"), node_map={"1": "2"})
    assert m.node_map == {"1": "2", "2": "1"}


def test_preorder_reflexive_and_transitive():
    gs = enumerate_graphs(GraphUniverse(AB, 2, 2))
    for g in gs:
        assert has_hom(g, g)
    for a, b, c in itertools.product(gs[:12], repeat=3):
        f, g = find_hom(a, b), find_hom(b, c)
        if f is not None and g is not None:
            assert is_morphism(compose(g, f))


class TestCore:
    def test_retract_example(self):
        c, r, i = core(RETRACT_G)
        assert nx_isomorphic(c, RETRACT_H)
        assert is_morphism(r) and is_morphism(i)
        assert compose(r, i) == identity(c)

    def test_discrete_graphs_fold_to_one_node(self):
        for n in range(1, 5):
            c, _, _ = core(graph(range(n), []))
            assert len(c.nodes) == 1

    def test_flower_is_its_own_core(self):
        assert is_core(flower("ABC"))

    def test_empty_graph(self):
        assert core(empty_graph(AB))[0].is_empty()

    @pytest.mark.parametrize("g", enumerate_graphs(GraphUniverse(AB, 3, 2)))
    def test_core_is_hom_equivalent_and_minimal(self, g):
        c, _, _ = core(g)
        assert hom_equivalent(g, c)
        assert is_core(c)
        # minimality: no hom-equivalent graph with fewer items among subgraphs
        for v in c.nodes:
            assert not has_hom(c, c.without([v]))

    def test_cores_of_equivalent_graphs_are_isomorphic(self):
        rng = random.Random(13)
        found = 0
        for _ in range(200):
            g, h = random_graph(rng, AB, 3, 3), random_graph(rng, AB, 3, 3)
            if hom_equivalent(g, h):
                found += 1
                assert nx_isomorphic(core(g)[0], core(h)[0])
        assert found


def test_isomorphisms_of_a_cycle():
    c3 = graph([1, 2, 3], [(1, 2, "A"), (2, 3, "A"), (3, 1, "A")], "A")
    assert len(list(isomorphisms(c3, c3))) == 3
