import random

from support import (
    AB,
    DUALITY_R,
    DUALITY_T,
    G_A,
    G_B,
    RETRACT_G,
    TYPE_AB,
    graph,
    loop,
    path,
    random_graph,
)
from tglab.canon import GraphUniverse, enumerate_graphs
from tglab.graph import empty_graph, flower, is_morphism, product
from tglab.homs import core, has_hom
from tglab.lang import (
    RestrictionGraphSpec,
    TypeGraphSpec,
    core_is_tree,
    duality_check_bounded,
    is_tree,
    rg_empty,
    rg_included,
    rg_member,
    tg_empty,
    tg_included,
    tg_member,
)

U = GraphUniverse(AB, 3, 3)


class TestTypeGraphs:
    def test_path_is_a_member(self):
        assert tg_member(path("AB"), TypeGraphSpec(TYPE_AB))

    def test_b_loop_is_not(self):
        assert not tg_member(graph([1], [(1, 1, "B")]), TYPE_AB)

    def test_empty_graph_always_belongs(self):
        assert tg_member(empty_graph(AB), TYPE_AB)
        assert tg_member(empty_graph(AB), empty_graph(AB))

    def test_never_empty(self):
        for t in (TYPE_AB, empty_graph(AB), flower(AB)):
            v = tg_empty(t)
            assert v.result is False and v.witness.is_empty()

    def test_inclusion_into_flower(self):
        v = tg_included(TYPE_AB, flower(AB))
        assert v.result and is_morphism(v.witness)

    def test_incompatible_loops(self):
        v = tg_included(G_A, G_B)
        assert v.result is False and v.witness == G_A

    def test_core_both_ways(self):
        c = core(RETRACT_G)[0]
        assert tg_included(c, RETRACT_G).result and tg_included(RETRACT_G, c).result


class TestRestrictionGraphs:
    def test_duality_path(self):
        joint = graph([1, 2, 3], [(1, 2, "A"), (2, 3, "B")])
        assert not rg_member(joint, DUALITY_R)
        assert rg_member(loop("A"), RestrictionGraphSpec(DUALITY_R))

    def test_empty_restriction_rejects_everything(self):
        assert not rg_member(TYPE_AB, empty_graph(AB))
        assert rg_empty(empty_graph(AB)).result is True

    def test_empty_graph_avoids_nonempty_restrictions(self):
        assert rg_member(empty_graph(AB), graph([1], []))

    def test_nonempty_restriction_has_the_empty_member(self):
        for r in (graph([1], []), flower(AB)):
            v = rg_empty(r)
            assert v.result is False and v.witness.is_empty()

    def test_inclusions(self):
        assert rg_included(path("A"), path("A")).result
        assert rg_included(path("A"), path("AB")).result
        assert rg_included(path("AB"), path("A")).result is False

    def test_counterexample_from_universe(self):
        v = rg_included(path("AB"), path("A"), U)
        assert v.result is False
        assert rg_member(v.witness, path("AB")) and not rg_member(v.witness, path("A"))


class TestDuality:
    def test_worked_pair_is_consistent(self):
        assert duality_check_bounded(DUALITY_R, DUALITY_T, U).result is True

    def test_flower_against_single_node(self):
        v = duality_check_bounded(graph([1], []), flower(AB), U)
        assert v.result is False and not v.witness.is_empty()

    def test_same_graph_on_both_sides(self):
        v = duality_check_bounded(G_A, G_A, U)
        assert v.result is False
        assert has_hom(v.witness, G_A) and has_hom(G_A, v.witness)

    def test_tree_shapes(self):
        assert core_is_tree(path("AB"))
        assert not core_is_tree(loop("A"))
        assert core_is_tree(graph([1, 2], []))
        assert not is_tree(empty_graph(AB))
        assert not is_tree(graph([1, 2], [(1, 2, "A"), (2, 1, "A")]))


def test_product_membership_on_random_samples():
    rng = random.Random(21)
    universe = enumerate_graphs(GraphUniverse(AB, 2, 2))
    for _ in range(20):
        t1, t2 = random_graph(rng, AB, 2, 2), random_graph(rng, AB, 2, 2)
        p = product(t1, t2)[0]
        for g in universe:
            assert tg_member(g, p) == (tg_member(g, t1) and tg_member(g, t2))
