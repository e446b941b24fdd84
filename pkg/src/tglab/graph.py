"""Edge-labelled directed multigraphs and graph morphisms.

Graphs are immutable. Node ids and edge ids are strings and must be
pairwise distinct across both sets, so that an annotation can address any
item of a graph by its id alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple


class GraphError(ValueError):
    """A graph or morphism is structurally malformed."""


class AlphabetMismatch(ValueError):
    """Two graphs that must share a label alphabet do not."""


class Edge(NamedTuple):
    id: str
    src: str
    tgt: str
    label: str


def _coerce_edge(raw, index: int) -> Edge:
    if isinstance(raw, Edge):
        return raw
    raw = tuple(raw)
    if len(raw) == 3:
        return Edge(f"e{index}", *raw)
    if len(raw) == 4:
        return Edge(*raw)
    raise GraphError(f"cannot read edge {raw!r}")


@dataclass(frozen=True)
class Graph:
    """A finite directed multigraph with edge labels from ``alphabet``.

    ``edges`` may be given as :class:`Edge` values, ``(id, src, tgt, label)``
    tuples or ``(src, tgt, label)`` triples (ids are then ``e0, e1, ...``).
    When ``alphabet`` is omitted it is the set of labels in use.
    """

    nodes: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()
    alphabet: frozenset[str] | None = None

    def __post_init__(self):
        nodes = tuple(str(v) for v in self.nodes)
        edges = tuple(_coerce_edge(e, i) for i, e in enumerate(self.edges))
        alphabet = self.alphabet
        if alphabet is None:
            alphabet = frozenset(e.label for e in edges)
        alphabet = frozenset(alphabet)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "alphabet", alphabet)

        node_set = set(nodes)
        if len(node_set) != len(nodes):
            raise GraphError("duplicate node id")
        seen = set()
        for e in edges:
            if e.id in seen or e.id in node_set:
                raise GraphError(f"edge id {e.id!r} is not unique")
            seen.add(e.id)
            if e.src not in node_set:
                raise GraphError(f"edge {e.id!r} has unknown source {e.src!r}")
            if e.tgt not in node_set:
                raise GraphError(f"edge {e.id!r} has unknown target {e.tgt!r}")
            if e.label not in alphabet:
                raise GraphError(f"edge {e.id!r} has label {e.label!r} outside the alphabet")

    def __repr__(self):
        es = ", ".join(f"{e.src}-{e.label}->{e.tgt}" for e in self.edges)
        return f"Graph(nodes={list(self.nodes)}, edges=[{es}])"

    # lookup tables -----------------------------------------------------

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def node_set(self) -> frozenset[str]:
        return frozenset(self.nodes)

    @cached_property
    def items(self) -> tuple[str, ...]:
        """Nodes followed by edge ids; the index space of annotations."""
        return self.nodes + tuple(e.id for e in self.edges)

    @cached_property
    def item_index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.items)}

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        table = {v: [] for v in self.nodes}
        for e in self.edges:
            table[e.src].append(e)
        return {v: tuple(es) for v, es in table.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        table = {v: [] for v in self.nodes}
        for e in self.edges:
            table[e.tgt].append(e)
        return {v: tuple(es) for v, es in table.items()}

    @cached_property
    def edges_between(self) -> dict[tuple[str, str, str], tuple[str, ...]]:
        """``(src, tgt, label) -> edge ids`` for every occupied slot."""
        table: dict[tuple[str, str, str], list[str]] = {}
        for e in self.edges:
            table.setdefault((e.src, e.tgt, e.label), []).append(e.id)
        return {k: tuple(v) for k, v in table.items()}

    def degree(self, v: str) -> int:
        return len(self.out_edges[v]) + len(self.in_edges[v])

    def is_empty(self) -> bool:
        return not self.nodes

    def is_item(self, x: str) -> bool:
        return x in self.item_index

    # derived graphs ------------------------------------------------------

    def with_alphabet(self, alphabet: Iterable[str]) -> Graph:
        return Graph(self.nodes, self.edges, frozenset(alphabet) | self.alphabet)

    def subgraph(self, nodes: Iterable[str], edges: Iterable[str]) -> Graph:
        keep_nodes = set(nodes)
        keep_edges = set(edges)
        return Graph(
            tuple(v for v in self.nodes if v in keep_nodes),
            tuple(e for e in self.edges if e.id in keep_edges),
            self.alphabet,
        )

    def without(self, items: Iterable[str]) -> Graph:
        """Remove the given items, together with edges left dangling."""
        drop = set(items)
        nodes = tuple(v for v in self.nodes if v not in drop)
        keep = set(nodes)
        edges = tuple(
            e for e in self.edges if e.id not in drop and e.src in keep and e.tgt in keep
        )
        return Graph(nodes, edges, self.alphabet)

    def relabelled(self, prefix: str) -> Graph:
        """Copy of the graph with every id prefixed."""
        return Graph(
            tuple(prefix + v for v in self.nodes),
            tuple(Edge(prefix + e.id, prefix + e.src, prefix + e.tgt, e.label) for e in self.edges),
            self.alphabet,
        )


@dataclass(frozen=True, eq=False)
class GraphMorphism:
    domain: Graph
    codomain: Graph
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def __eq__(self, other):
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and dict(self.node_map) == dict(other.node_map)
            and dict(self.edge_map) == dict(other.edge_map)
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.key()))

    def __repr__(self):
        return f"GraphMorphism(nodes={dict(self.node_map)}, edges={dict(self.edge_map)})"

    def key(self) -> tuple:
        return (
            tuple(self.node_map[v] for v in self.domain.nodes),
            tuple(self.edge_map[e.id] for e in self.domain.edges),
        )

    def __call__(self, x: str) -> str:
        """Image of a node or edge id."""
        if x in self.node_map:
            return self.node_map[x]
        return self.edge_map[x]

    def is_injective(self) -> bool:
        return len(set(self.node_map.values())) == len(self.node_map) and len(
            set(self.edge_map.values())
        ) == len(self.edge_map)

    def is_surjective(self) -> bool:
        return set(self.node_map.values()) == self.codomain.node_set and set(
            self.edge_map.values()
        ) == {e.id for e in self.codomain.edges}

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def image(self) -> Graph:
        """The image of the morphism as a subgraph of the codomain."""
        return self.codomain.subgraph(self.node_map.values(), self.edge_map.values())

    def corestrict(self, target: Graph) -> GraphMorphism:
        """Same maps, read as a morphism into a subgraph ``target``."""
        return GraphMorphism(self.domain, target, self.node_map, self.edge_map)

    def then(self, other: GraphMorphism) -> GraphMorphism:
        """``other ∘ self``."""
        return compose(other, self)


def compose(second: GraphMorphism, first: GraphMorphism) -> GraphMorphism:
    """``second ∘ first``; requires ``first.codomain == second.domain``."""
    if first.codomain.items != second.domain.items:
        raise GraphError("morphisms are not composable")
    return GraphMorphism(
        first.domain,
        second.codomain,
        {v: second.node_map[w] for v, w in first.node_map.items()},
        {e: second.edge_map[f] for e, f in first.edge_map.items()},
    )


def identity(g: Graph) -> GraphMorphism:
    return GraphMorphism(g, g, {v: v for v in g.nodes}, {e.id: e.id for e in g.edges})


def inclusion(sub: Graph, g: Graph) -> GraphMorphism:
    return GraphMorphism(sub, g, {v: v for v in sub.nodes}, {e.id: e.id for e in sub.edges})


def validate_morphism(m: GraphMorphism) -> str | None:
    """Return ``None`` for a valid morphism, otherwise the first violation.

    Raises :class:`GraphError` when a map is partial or mentions ids that
    do not exist; that is a malformed input, not a non-morphism.
    """
    g, h = m.domain, m.codomain
    for v in g.nodes:
        if v not in m.node_map:
            raise GraphError(f"node map is undefined on {v!r}")
        if m.node_map[v] not in h.node_set:
            raise GraphError(f"node {v!r} is mapped to unknown node {m.node_map[v]!r}")
    for e in g.edges:
        if e.id not in m.edge_map:
            raise GraphError(f"edge map is undefined on {e.id!r}")
        if m.edge_map[e.id] not in h.edge:
            raise GraphError(f"edge {e.id!r} is mapped to unknown edge {m.edge_map[e.id]!r}")
    extra = (set(m.node_map) - g.node_set) | (set(m.edge_map) - set(g.edge))
    if extra:
        raise GraphError(f"map mentions unknown domain ids {sorted(extra)}")
    for e in g.edges:
        f = h.edge[m.edge_map[e.id]]
        if f.label != e.label:
            return f"label mismatch: {e.id!r} ({e.label}) -> {f.id!r} ({f.label})"
        if f.src != m.node_map[e.src]:
            return f"source mismatch on edge {e.id!r}"
        if f.tgt != m.node_map[e.tgt]:
            return f"target mismatch on edge {e.id!r}"
    return None


def is_morphism(m: GraphMorphism) -> bool:
    return validate_morphism(m) is None


def require_same_alphabet(*graphs: Graph) -> frozenset[str]:
    alphabets = {g.alphabet for g in graphs}
    if len(alphabets) > 1:
        raise AlphabetMismatch(
            "alphabets differ: " + " vs ".join(str(sorted(a)) for a in alphabets)
        )
    return graphs[0].alphabet if graphs else frozenset()


# constructions -------------------------------------------------------------


def empty_graph(alphabet: Iterable[str] = ()) -> Graph:
    return Graph((), (), frozenset(alphabet))


def flower(alphabet: Iterable[str]) -> Graph:
    """The final object: one node with one loop per label."""
    labels = sorted(alphabet)
    return Graph(("*",), tuple(Edge(f"*{a}", "*", "*", a) for a in labels), frozenset(labels))


def discrete(n: int, alphabet: Iterable[str] = ()) -> Graph:
    return Graph(tuple(f"v{i}" for i in range(n)), (), frozenset(alphabet))


def product(g1: Graph, g2: Graph) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    alphabet = require_same_alphabet(g1, g2)
    nodes = tuple(f"({a},{b})" for a in g1.nodes for b in g2.nodes)
    edges = tuple(
        Edge(f"({e.id},{f.id})", f"({e.src},{f.src})", f"({e.tgt},{f.tgt})", e.label)
        for e in g1.edges
        for f in g2.edges
        if e.label == f.label
    )
    p = Graph(nodes, edges, alphabet)
    pairs_n = [(a, b) for a in g1.nodes for b in g2.nodes]
    pairs_e = [(e.id, f.id) for e in g1.edges for f in g2.edges if e.label == f.label]
    proj1 = GraphMorphism(
        p, g1,
        {n: a for n, (a, _) in zip(nodes, pairs_n)},
        {x.id: a for x, (a, _) in zip(edges, pairs_e)},
    )
    proj2 = GraphMorphism(
        p, g2,
        {n: b for n, (_, b) in zip(nodes, pairs_n)},
        {x.id: b for x, (_, b) in zip(edges, pairs_e)},
    )
    return p, proj1, proj2


def coproduct(g1: Graph, g2: Graph) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    alphabet = require_same_alphabet(g1, g2)
    a, b = g1.relabelled("1:"), g2.relabelled("2:")
    c = Graph(a.nodes + b.nodes, a.edges + b.edges, alphabet)
    inj1 = GraphMorphism(
        g1, c, {v: "1:" + v for v in g1.nodes}, {e.id: "1:" + e.id for e in g1.edges}
    )
    inj2 = GraphMorphism(
        g2, c, {v: "2:" + v for v in g2.nodes}, {e.id: "2:" + e.id for e in g2.edges}
    )
    return c, inj1, inj2


def product_all(graphs: Iterable[Graph], alphabet: Iterable[str]) -> Graph:
    """Iterated product, starting from the flower (the empty product)."""
    result = flower(alphabet)
    for g in graphs:
        result = product(result, g)[0]
    return result


def fresh_id(base: str, taken: set[str]) -> str:
    if base not in taken:
        return base
    for i in itertools.count(1):
        cand = f"{base}'{i}"
        if cand not in taken:
            return cand
    raise AssertionError  # pragma: no cover
