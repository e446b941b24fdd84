"""Isomorphism canonical forms and the exhaustive small-graph enumerator."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterator, Mapping

from .graph import Edge, Graph

DEFAULT_MAX_NODES = 4


def max_nodes_limit() -> int:
    return int(os.environ.get("TGLAB_MAX_NODES", DEFAULT_MAX_NODES))


def _refine(g: Graph, colors: dict[str, Hashable], edge_colors) -> dict[str, int]:
    """Colour refinement; returns node -> rank of its stable colour class."""
    current = {v: colors[v] for v in g.nodes}
    ranks = _rank(current)
    n_classes = len(set(ranks.values()))
    while True:
        sig = {}
        for v in g.nodes:
            outs = sorted((e.label, ranks[e.tgt], edge_colors[e.id]) for e in g.out_edges[v])
            ins = sorted((e.label, ranks[e.src], edge_colors[e.id]) for e in g.in_edges[v])
            sig[v] = (ranks[v], tuple(outs), tuple(ins))
        new = _rank(sig)
        count = len(set(new.values()))
        ranks = new
        if count == n_classes:
            return ranks
        n_classes = count


def _rank(sig: Mapping[str, Hashable]) -> dict[str, int]:
    order = sorted(set(sig.values()), key=repr)
    index = {s: i for i, s in enumerate(order)}
    return {v: index[s] for v, s in sig.items()}


def canonical_form(
    g: Graph,
    node_colors: Mapping[str, Hashable] | None = None,
    edge_colors: Mapping[str, Hashable] | None = None,
) -> tuple:
    """A hashable key equal for two graphs iff they are isomorphic.

    Optional colours must be preserved by the isomorphism. Nodes are
    partitioned by refined degree signature and permuted exhaustively within
    each cell, so this is meant for small graphs only.
    """
    ncol = {v: (node_colors or {}).get(v) for v in g.nodes}
    ecol = {e.id: (edge_colors or {}).get(e.id) for e in g.edges}
    ranks = _refine(g, ncol, ecol)
    cells: dict[int, list[str]] = {}
    for v in g.nodes:
        cells.setdefault(ranks[v], []).append(v)
    ordered = [cells[r] for r in sorted(cells)]

    isolated = {v for v in g.nodes if not g.out_edges[v] and not g.in_edges[v]}
    choices = []
    for cell in ordered:
        if all(v in isolated for v in cell):
            choices.append([tuple(cell)])
        else:
            choices.append(list(itertools.permutations(cell)))

    node_part = tuple(repr(ncol[cell[0]]) for cell in ordered for _ in cell)
    best = None
    for combo in itertools.product(*choices):
        pos = {}
        for cell_order in combo:
            for v in cell_order:
                pos[v] = len(pos)
        code = tuple(sorted((pos[e.src], pos[e.tgt], e.label, repr(ecol[e.id])) for e in g.edges))
        if best is None or code < best:
            best = code
    return (tuple(sorted(g.alphabet)), len(g.nodes), node_part, best)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if (len(g.nodes), len(g.edges)) != (len(h.nodes), len(h.edges)):
        return False
    return canonical_form(g) == canonical_form(h)


def graph_from_code(alphabet, n: int, edges) -> Graph:
    return Graph(
        tuple(f"v{i}" for i in range(n)),
        tuple(Edge(f"e{i}", f"v{s}", f"v{t}", lab) for i, (s, t, lab) in enumerate(edges)),
        frozenset(alphabet),
    )


@dataclass(frozen=True)
class GraphUniverse:
    """All graphs over ``alphabet`` with bounded node and edge counts."""

    alphabet: frozenset[str]
    max_nodes: int
    max_edges: int

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))

    def __iter__(self):
        return iter(enumerate_graphs(self))

    def __len__(self):
        return len(enumerate_graphs(self))


def enumerate_graphs(u: GraphUniverse) -> tuple[Graph, ...]:
    """Every graph within the bounds exactly once up to isomorphism.

    Ordered by node count, then edge count, then canonical key.
    """
    limit = max_nodes_limit()
    if u.max_nodes > limit:
        raise ValueError(
            f"universe of {u.max_nodes} nodes exceeds the enumeration limit {limit} "
            "(set TGLAB_MAX_NODES to raise it)"
        )
    return _enumerate(tuple(sorted(u.alphabet)), u.max_nodes, u.max_edges)


@lru_cache(maxsize=None)
def _enumerate(alphabet: tuple[str, ...], max_nodes: int, max_edges: int) -> tuple[Graph, ...]:
    out = []
    for n in range(max_nodes + 1):
        slots = [(s, t, lab) for s in range(n) for t in range(n) for lab in alphabet]
        for m in range(max_edges + 1):
            if m and not slots:
                break
            found = {}
            for combo in itertools.combinations_with_replacement(slots, m):
                g = graph_from_code(alphabet, n, combo)
                key = canonical_form(g)
                if key not in found:
                    found[key] = g
            out.extend(found[k] for k in sorted(found))
    return tuple(out)


def iter_universe(alphabet, max_nodes: int, max_edges: int) -> Iterator[Graph]:
    yield from enumerate_graphs(GraphUniverse(frozenset(alphabet), max_nodes, max_edges))
