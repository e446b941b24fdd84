"""Shared fixtures, random generators and brute-force oracles for the tests.

The oracles here deliberately avoid the library's search code: homomorphisms
are counted by trying every node and edge assignment, isomorphism goes
through networkx.
"""

from __future__ import annotations

import itertools
import random

import networkx as nx

from tglab.annotated import Annotation, AnnotationPair, MultiAnnotatedGraph
from tglab.dpo import DpoRule
from tglab.graph import Edge, Graph, GraphMorphism

AB = frozenset("AB")


def graph(nodes, edges, alphabet=AB) -> Graph:
    """``edges`` as ``(src, tgt, label)`` triples; ids are ``e0, e1, ...``."""
    return Graph(
        tuple(str(v) for v in nodes),
        tuple(Edge(f"e{i}", str(s), str(t), lab) for i, (s, t, lab) in enumerate(edges)),
        frozenset(alphabet),
    )


def loop(label, alphabet=AB) -> Graph:
    return graph([1], [(1, 1, label)], alphabet)


def path(labels, alphabet=AB) -> Graph:
    return graph(range(1, len(labels) + 2), [(i + 1, i + 2, lab) for i, lab in enumerate(labels)], alphabet)


# worked examples -------------------------------------------------------------

# six-node graph folding onto the A;B path
RETRACT_G = graph(
    [1, 2, 3, 4, 5, 6],
    [(1, 2, "A"), (5, 2, "A"), (2, 3, "B"), (2, 6, "B"), (4, 3, "B")],
)
RETRACT_H = path("AB")
RETRACT_PHI = {"1": "1", "5": "1", "2": "2", "4": "2", "3": "3", "6": "3"}

# A-loop node with an outgoing B-edge
TYPE_AB = graph([1, 2], [(1, 1, "A"), (1, 2, "B")])
TYPE_AB_MEMBERS = [
    graph([], []),
    graph([1], []),
    path("AB"),
    graph([1, 2], [(1, 2, "A"), (2, 1, "A")]),
]

DUALITY_R = path("AB")
DUALITY_T = graph([1, 2], [(1, 1, "A"), (2, 2, "B"), (2, 1, "A"), (2, 1, "B")])

# flower node plus a pendant A-edge into it
PENDANT_T = graph([1, 2], [(2, 2, "A"), (2, 2, "B"), (1, 2, "A")])

G_A = loop("A")
G_B = loop("B")


def rule(left: Graph, interface: Graph, right: Graph, l_nodes=None, r_nodes=None, l_edges=None, r_edges=None):
    """Rule whose morphisms are given by id maps (defaulting to identity on names)."""
    l_nodes = l_nodes or {v: v for v in interface.nodes}
    r_nodes = r_nodes or {v: v for v in interface.nodes}
    l_edges = l_edges or {e.id: e.id for e in interface.edges}
    r_edges = r_edges or {e.id: e.id for e in interface.edges}
    return DpoRule(
        left,
        interface,
        right,
        GraphMorphism(interface, left, l_nodes, l_edges),
        GraphMorphism(interface, right, r_nodes, r_edges),
    )


def relabel_rule(src="A", dst="B") -> DpoRule:
    """``1 -src-> 2  <-  1 2  ->  1 -dst-> 2``"""
    return rule(graph([1, 2], [(1, 2, src)]), graph([1, 2], []), graph([1, 2], [(1, 2, dst)]))


def annotated(g: Graph, n: int, pairs) -> MultiAnnotatedGraph:
    """``pairs`` as ``[(lower_map, upper_map)]``; ``"m"`` stands for many."""

    def conv(d):
        return {k: (n + 1 if v == "m" else v) for k, v in d.items()}

    return MultiAnnotatedGraph.build(g, n, [(conv(lo), conv(up)) for lo, up in pairs])


# two nodes [1,1] and [1,m] joined by an A-edge [0,1]; over n = 2
EX_FOLD_G = annotated(
    graph([1, 2], [(1, 2, "A")], "A"), 2, [({"1": 1, "2": 1, "e0": 0}, {"1": 1, "2": "m", "e0": 1})]
)
# one node [1,m] with an A-loop [0,m]
EX_FOLD_H = annotated(graph([1], [(1, 1, "A")], "A"), 2, [({"1": 1, "e0": 0}, {"1": "m", "e0": "m"})])

# same language, no legal morphism between them (n = 1)
DISCRETE_T1 = annotated(graph([1], [], "A"), 1, [({"1": 1}, {"1": "m"})])
DISCRETE_T2 = annotated(graph([1, 2], [], "A"), 1, [({"1": 1, "2": 0}, {"1": 1, "2": "m"})])

# node 1 [0,1], node 2 [1,m], A-edge 1->2 [0,2], B-loop on 2 [0,m]; over n = 2
RUN_T = annotated(
    graph([1, 2], [(1, 2, "A"), (2, 2, "B")]),
    2,
    [({"1": 0, "2": 1, "e0": 0, "e1": 0}, {"1": 1, "2": "m", "e0": 2, "e1": "m"})],
)


# random generators -------------------------------------------------------------


def random_graph(rng: random.Random, labels, max_nodes: int, max_edges: int, min_nodes: int = 0) -> Graph:
    n = rng.randint(min_nodes, max_nodes)
    nodes = [f"v{i}" for i in range(n)]
    edges = []
    if n:
        for j in range(rng.randint(0, max_edges)):
            edges.append(Edge(f"e{j}", rng.choice(nodes), rng.choice(nodes), rng.choice(sorted(labels))))
    return Graph(tuple(nodes), tuple(edges), frozenset(labels))


def random_pair(rng: random.Random, g: Graph, n: int) -> AnnotationPair:
    lo, up = [], []
    for _ in g.items:
        a, b = sorted((rng.randint(0, n + 1), rng.randint(0, n + 1)))
        lo.append(a)
        up.append(b)
    return AnnotationPair(Annotation(g, n, tuple(lo)), Annotation(g, n, tuple(up)))


def random_spec(
    rng: random.Random, labels, max_nodes: int, max_edges: int, n: int, max_pairs: int, min_pairs: int = 0
) -> MultiAnnotatedGraph:
    g = random_graph(rng, labels, max_nodes, max_edges, 1)
    pairs = tuple(random_pair(rng, g, n) for _ in range(rng.randint(min_pairs, max_pairs)))
    return MultiAnnotatedGraph(g, n, pairs)


def loosened(rng: random.Random, t: MultiAnnotatedGraph) -> MultiAnnotatedGraph:
    """Widen some bounds of every pair, so the language can only grow."""
    pairs = []
    for p in t.pairs:
        lo = tuple(0 if rng.random() < 0.5 else v for v in p.lower.values)
        up = tuple(t.n + 1 if rng.random() < 0.5 else v for v in p.upper.values)
        pairs.append(AnnotationPair(Annotation(t.graph, t.n, lo), Annotation(t.graph, t.n, up)))
    return MultiAnnotatedGraph(t.graph, t.n, tuple(pairs))


def random_injective_rule(rng: random.Random, labels, max_nodes: int = 3, max_edges: int = 2) -> DpoRule:
    """``L <- I -> R`` with ``I`` a random subgraph and both legs inclusions."""
    iface = random_graph(rng, labels, max_nodes - 1, 1)
    sides = []
    for side in "LR":
        nodes = list(iface.nodes) + [f"{side}{i}" for i in range(rng.randint(0, max_nodes - len(iface.nodes)))]
        edges = list(iface.edges)
        if nodes:
            for j in range(rng.randint(0, max_edges)):
                edges.append(Edge(f"{side}e{j}", rng.choice(nodes), rng.choice(nodes), rng.choice(sorted(labels))))
        sides.append(Graph(tuple(nodes), tuple(edges), frozenset(labels)))
    return rule(sides[0], iface, sides[1])


# oracles -----------------------------------------------------------------------


def brute_homs(g: Graph, h: Graph) -> list[tuple[dict, dict]]:
    """Every morphism ``g -> h``, found by trying all assignments."""
    out = []
    for images in itertools.product(h.nodes, repeat=len(g.nodes)):
        nm = dict(zip(g.nodes, images))
        options = []
        for e in g.edges:
            options.append(
                [f.id for f in h.edges if f.label == e.label and f.src == nm[e.src] and f.tgt == nm[e.tgt]]
            )
        for choice in itertools.product(*options):
            out.append((nm, {e.id: c for e, c in zip(g.edges, choice)}))
    return out


def brute_has_hom(g: Graph, h: Graph) -> bool:
    return bool(brute_homs(g, h))


def to_nx(g: Graph) -> nx.MultiDiGraph:
    x = nx.MultiDiGraph()
    x.add_nodes_from(g.nodes)
    for e in g.edges:
        x.add_edge(e.src, e.tgt, label=e.label)
    return x


def nx_isomorphic(g: Graph, h: Graph) -> bool:
    return nx.is_isomorphic(
        to_nx(g), to_nx(h), edge_match=nx.algorithms.isomorphism.categorical_multiedge_match("label", None)
    )


def bits(universe, pred) -> tuple[bool, ...]:
    return tuple(bool(pred(g)) for g in universe)


def brute_atg_member(g: Graph, t: MultiAnnotatedGraph) -> bool:
    """Membership by summing preimages by hand for every morphism."""
    n = t.n
    for nm, em in brute_homs(g, t.graph):
        counts = dict.fromkeys(t.graph.items, 0)
        for v in g.nodes:
            counts[nm[v]] += 1
        for e, f in em.items():
            counts[f] += 1
        values = [min(counts[x], n + 1) for x in t.graph.items]
        for p in t.pairs:
            if all(lo <= v <= up for lo, v, up in zip(p.lower.values, values, p.upper.values)):
                return True
    return False
