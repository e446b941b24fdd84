"""Languages given by a type graph or by a restriction graph."""

from __future__ import annotations

from dataclasses import dataclass

from .canon import GraphUniverse, enumerate_graphs
from .graph import Graph, empty_graph, require_same_alphabet
from .homs import core, find_hom, has_hom


@dataclass(frozen=True)
class TypeGraphSpec:
    """``L(T)``: all graphs with a morphism into ``type_graph``."""

    type_graph: Graph

    @property
    def alphabet(self):
        return self.type_graph.alphabet


@dataclass(frozen=True)
class RestrictionGraphSpec:
    """``L_R(R)``: all graphs admitting no morphism from ``restriction_graph``."""

    restriction_graph: Graph

    @property
    def alphabet(self):
        return self.restriction_graph.alphabet


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    ``witness`` is a graph, a morphism or ``None``; ``note`` carries a short
    human-readable reason where there is one.
    """

    result: bool
    witness: object = None
    note: str = ""

    def __bool__(self):
        return bool(self.result)


def _as_type(t) -> Graph:
    return t.type_graph if isinstance(t, TypeGraphSpec) else t


def _as_restriction(r) -> Graph:
    return r.restriction_graph if isinstance(r, RestrictionGraphSpec) else r


def tg_member(g: Graph, t: TypeGraphSpec | Graph) -> bool:
    t = _as_type(t)
    require_same_alphabet(g, t)
    return has_hom(g, t)


def tg_empty(t: TypeGraphSpec | Graph) -> Verdict:
    """Type graph languages are never empty: the empty graph is a member."""
    t = _as_type(t)
    return Verdict(False, empty_graph(t.alphabet), "the empty graph is always a member")


def tg_included(t1: TypeGraphSpec | Graph, t2: TypeGraphSpec | Graph) -> Verdict:
    """``L(T1) ⊆ L(T2)`` iff ``T1 -> T2``.

    The witness is the morphism when included, otherwise ``T1`` itself,
    which lies in ``L(T1)`` but not in ``L(T2)``.
    """
    t1, t2 = _as_type(t1), _as_type(t2)
    require_same_alphabet(t1, t2)
    m = find_hom(t1, t2)
    if m is not None:
        return Verdict(True, m)
    return Verdict(False, t1, "no morphism T1 -> T2; T1 is a counterexample")


def rg_member(g: Graph, r: RestrictionGraphSpec | Graph) -> bool:
    r = _as_restriction(r)
    require_same_alphabet(g, r)
    return not has_hom(r, g)


def rg_empty(r: RestrictionGraphSpec | Graph) -> Verdict:
    """Empty iff ``R`` is the empty graph; otherwise ``∅`` is a member."""
    r = _as_restriction(r)
    if r.is_empty():
        return Verdict(True, None, "the empty restriction graph maps into every graph")
    return Verdict(False, empty_graph(r.alphabet), "R does not map into the empty graph")


def rg_included(
    r1: RestrictionGraphSpec | Graph,
    r2: RestrictionGraphSpec | Graph,
    universe: GraphUniverse | None = None,
) -> Verdict:
    """``L_R(R1) ⊆ L_R(R2)`` iff ``R1 -> R2``.

    When not included and a ``universe`` is given, the witness is the first
    graph of the universe in ``L_R(R1) \\ L_R(R2)``, if one exists there.
    ``R2`` itself is always such a graph, and is returned otherwise.
    """
    r1, r2 = _as_restriction(r1), _as_restriction(r2)
    require_same_alphabet(r1, r2)
    m = find_hom(r1, r2)
    if m is not None:
        return Verdict(True, m)
    if universe is not None:
        for g in enumerate_graphs(universe):
            if not has_hom(r1, g) and has_hom(r2, g):
                return Verdict(False, g, "no morphism R1 -> R2")
    return Verdict(False, r2, "no morphism R1 -> R2; R2 is a counterexample")


def duality_check_bounded(r: Graph, t: Graph, u: GraphUniverse) -> Verdict:
    """Test ``G -> T iff R -/-> G`` for every graph of ``u``.

    A positive result is bounded evidence only, never a proof of duality.
    """
    for g in enumerate_graphs(u):
        if has_hom(g, t) == has_hom(r, g):
            return Verdict(False, g, "biconditional fails")
    return Verdict(True, None, f"consistent on {len(enumerate_graphs(u))} graphs (bounded)")


def is_tree(g: Graph) -> bool:
    """Connected, no parallel edges, no loops, ``|E| = |V| - 1``,
    direction ignored. The empty graph is not a tree."""
    if g.is_empty() or len(g.edges) != len(g.nodes) - 1:
        return False
    pairs = set()
    for e in g.edges:
        if e.src == e.tgt:
            return False
        pair = frozenset((e.src, e.tgt))
        if pair in pairs:
            return False
        pairs.add(pair)
    seen = {g.nodes[0]}
    stack = [g.nodes[0]]
    while stack:
        v = stack.pop()
        for e in g.out_edges[v] + g.in_edges[v]:
            for w in (e.src, e.tgt):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return len(seen) == len(g.nodes)


def core_is_tree(r: Graph) -> bool:
    """Whether ``core(R)`` is a tree, i.e. whether ``L_R(R)`` is also a
    type graph language."""
    return is_tree(core(r)[0])

