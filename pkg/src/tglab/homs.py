"""Homomorphism search, hom-equivalence and cores."""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping

from .graph import Graph, GraphMorphism, compose, identity, inclusion


def _label_profile(g: Graph, v: str) -> tuple[set, set, set]:
    outs = {e.label for e in g.out_edges[v] if e.tgt != v}
    ins = {e.label for e in g.in_edges[v] if e.src != v}
    loops = {e.label for e in g.out_edges[v] if e.tgt == v}
    return outs, ins, loops


def _search_order(g: Graph) -> list[str]:
    """Nodes by descending degree, each next node preferring neighbours of
    those already placed, so edge checks fire early."""
    remaining = sorted(g.nodes, key=lambda v: (-g.degree(v), g.nodes.index(v)))
    placed: list[str] = []
    placed_set: set[str] = set()
    while remaining:
        best = max(
            remaining,
            key=lambda v: (
                sum(1 for e in g.out_edges[v] if e.tgt in placed_set)
                + sum(1 for e in g.in_edges[v] if e.src in placed_set),
                g.degree(v),
                -remaining.index(v),
            ),
        )
        remaining.remove(best)
        placed.append(best)
        placed_set.add(best)
    return placed


def enumerate_homs(
    g: Graph,
    h: Graph,
    mode: str = "all",
    *,
    node_map: Mapping[str, str] | None = None,
    edge_map: Mapping[str, str] | None = None,
) -> Iterator[GraphMorphism]:
    """Yield graph morphisms ``g -> h``.

    ``mode="first"`` stops after one. ``node_map``/``edge_map`` pin part of
    the morphism in advance. Order is deterministic: nodes are assigned in
    a fixed search order trying codomain nodes in their declared order, and
    edges are enumerated last in declared order.
    """
    if mode not in ("all", "first"):
        raise ValueError(f"unknown mode {mode!r}")
    fixed_n = dict(node_map or {})
    fixed_e = dict(edge_map or {})

    # pinned edges force their endpoints
    for eid, fid in fixed_e.items():
        e, f = g.edge[eid], h.edge.get(fid)
        if f is None or f.label != e.label:
            return
        for v, w in ((e.src, f.src), (e.tgt, f.tgt)):
            if fixed_n.setdefault(v, w) != w:
                return

    profiles = {w: _label_profile(h, w) for w in h.nodes}
    candidates: dict[str, list[str]] = {}
    for v in g.nodes:
        outs, ins, loops = _label_profile(g, v)
        if v in fixed_n:
            pool = [fixed_n[v]] if fixed_n[v] in h.node_set else []
        else:
            pool = list(h.nodes)
        cands = []
        for w in pool:
            w_out, w_in, w_loops = profiles[w]
            # a non-loop edge may still land on a loop, so test against both
            if loops <= w_loops and outs <= (w_out | w_loops) and ins <= (w_in | w_loops):
                cands.append(w)
        if not cands:
            return
        candidates[v] = cands

    order = _search_order(g)
    position = {v: i for i, v in enumerate(order)}
    # edges checked when the later of their endpoints is assigned
    checks: dict[str, list] = {v: [] for v in order}
    for e in g.edges:
        last = e.src if position[e.src] >= position[e.tgt] else e.tgt
        checks[last].append(e)

    between = h.edges_between
    assign: dict[str, str] = {}

    def edge_options(e) -> tuple[str, ...]:
        opts = between.get((assign[e.src], assign[e.tgt], e.label), ())
        if e.id in fixed_e:
            return (fixed_e[e.id],) if fixed_e[e.id] in opts else ()
        return opts

    def extend(i: int) -> Iterator[dict[str, str]]:
        if i == len(order):
            yield assign
            return
        v = order[i]
        for w in candidates[v]:
            assign[v] = w
            if all(edge_options(e) for e in checks[v]):
                yield from extend(i + 1)
            del assign[v]

    for nodes in extend(0):
        options = [edge_options(e) for e in g.edges]
        for choice in itertools.product(*options):
            yield GraphMorphism(
                g, h, dict(nodes), {e.id: f for e, f in zip(g.edges, choice)}
            )
            if mode == "first":
                return


def find_hom(g: Graph, h: Graph, **pins) -> GraphMorphism | None:
    return next(enumerate_homs(g, h, "first", **pins), None)


def has_hom(g: Graph, h: Graph) -> bool:
    return find_hom(g, h) is not None


def hom_equivalent(g: Graph, h: Graph) -> bool:
    return has_hom(g, h) and has_hom(h, g)


def count_homs(g: Graph, h: Graph) -> int:
    return sum(1 for _ in enumerate_homs(g, h))


def isomorphisms(g: Graph, h: Graph) -> Iterator[GraphMorphism]:
    if (len(g.nodes), len(g.edges)) != (len(h.nodes), len(h.edges)):
        return
    for m in enumerate_homs(g, h):
        if m.is_bijective():
            yield m


def _proper_retraction(g: Graph) -> GraphMorphism | None:
    """A morphism from ``g`` into a proper subgraph of itself, if any."""
    for v in g.nodes:
        sub = g.without([v])
        m = find_hom(g, sub)
        if m is not None:
            return m
    for e in g.edges:
        sub = g.without([e.id])
        m = find_hom(g, sub)
        if m is not None:
            return m
    return None


def core(g: Graph) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """Return ``(core, retraction g -> core, inclusion core -> g)``.

    Repeatedly folds ``g`` onto the image of a non-surjective endomorphism
    until none exists; the result has no proper retract.
    """
    current = g
    retraction = identity(g)
    while True:
        m = _proper_retraction(current)
        if m is None:
            return current, retraction, inclusion(current, g)
        img = m.image()
        retraction = compose(m.corestrict(img), retraction)
        current = img


def is_core(g: Graph) -> bool:
    return _proper_retraction(g) is None
