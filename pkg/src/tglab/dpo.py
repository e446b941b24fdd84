"""Double-pushout rewriting and closure of graph languages under rules."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .annotated import MultiAnnotatedGraph, atg_member
from .canon import GraphUniverse, canonical_form, enumerate_graphs
from .graph import (
    Edge,
    Graph,
    GraphError,
    GraphMorphism,
    compose,
    coproduct,
    fresh_id,
    identity,
    require_same_alphabet,
    validate_morphism,
)
from .homs import core, enumerate_homs, find_hom, has_hom
from .lang import RestrictionGraphSpec, TypeGraphSpec, Verdict


@dataclass(frozen=True)
class DpoRule:
    """A rule ``L <- I -> R``."""

    left: Graph
    interface: Graph
    right: Graph
    phi_l: GraphMorphism
    phi_r: GraphMorphism

    def __post_init__(self):
        if self.phi_l.domain != self.interface or self.phi_r.domain != self.interface:
            raise GraphError("rule morphisms must start at the interface")
        if self.phi_l.codomain != self.left or self.phi_r.codomain != self.right:
            raise GraphError("rule morphisms must end at the left and right graphs")
        for m in (self.phi_l, self.phi_r):
            problem = validate_morphism(m)
            if problem:
                raise GraphError(f"rule morphism is not a graph morphism: {problem}")
        require_same_alphabet(self.left, self.interface, self.right)

    @property
    def alphabet(self):
        return self.left.alphabet

    def is_injective(self) -> bool:
        return self.phi_l.is_injective() and self.phi_r.is_injective()

    def inverse(self) -> DpoRule:
        return DpoRule(self.right, self.interface, self.left, self.phi_r, self.phi_l)


def identity_rule(g: Graph) -> DpoRule:
    return DpoRule(g, g, g, identity(g), identity(g))


@dataclass(frozen=True)
class JointQuotient:
    graph: Graph
    alpha: GraphMorphism
    beta: GraphMorphism


@dataclass(frozen=True)
class ClosureViolation:
    """``before`` is in the language, rewrites to ``after``, which is not."""

    before: Graph
    after: Graph
    detail: object = None


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def pushout(f: GraphMorphism, g: GraphMorphism) -> tuple[Graph, GraphMorphism, GraphMorphism]:
    """Pushout of ``B <-f- A -g-> C``; returns ``(D, B -> D, C -> D)``.

    Items of ``D`` keep the id of a ``C`` item where the class has one, so
    the context of a rewrite step keeps its names.
    """
    if f.domain.items != g.domain.items:
        raise GraphError("pushout needs a common domain")
    b, c = f.codomain, g.codomain
    require_same_alphabet(b, c)
    nodes = [("B", v) for v in b.nodes] + [("C", v) for v in c.nodes]
    edges = [("B", e.id) for e in b.edges] + [("C", e.id) for e in c.edges]
    uf_n, uf_e = _UnionFind(nodes), _UnionFind(edges)
    for v in f.domain.nodes:
        uf_n.union(("C", g.node_map[v]), ("B", f.node_map[v]))
    for e in f.domain.edges:
        uf_e.union(("C", g.edge_map[e.id]), ("B", f.edge_map[e.id]))

    taken: set[str] = set()

    def name_classes(items, uf):
        members: dict = {}
        for x in items:
            members.setdefault(uf.find(x), []).append(x)
        # classes with a C member first, in C order
        with_c = [ms for ms in members.values() if any(m[0] == "C" for m in ms)]
        only_b = [ms for ms in members.values() if all(m[0] == "B" for m in ms)]
        with_c.sort(key=lambda ms: items.index(next(m for m in ms if m[0] == "C")))
        only_b.sort(key=lambda ms: items.index(ms[0]))
        names = {}
        for ms in with_c + only_b:
            rep = next((m for m in ms if m[0] == "C"), ms[0])
            name = fresh_id(rep[1], taken)
            taken.add(name)
            for m in ms:
                names[m] = name
        return names, with_c + only_b

    node_names, node_classes = name_classes(nodes, uf_n)
    edge_names, edge_classes = name_classes(edges, uf_e)

    d_edges = []
    for ms in edge_classes:
        side, eid = ms[0]
        e = (b if side == "B" else c).edge[eid]
        d_edges.append(
            Edge(edge_names[ms[0]], node_names[(side, e.src)], node_names[(side, e.tgt)], e.label)
        )
    d = Graph(tuple(node_names[ms[0]] for ms in node_classes), tuple(d_edges), b.alphabet)
    to_d_b = GraphMorphism(
        b, d, {v: node_names[("B", v)] for v in b.nodes}, {e.id: edge_names[("B", e.id)] for e in b.edges}
    )
    to_d_c = GraphMorphism(
        c, d, {v: node_names[("C", v)] for v in c.nodes}, {e.id: edge_names[("C", e.id)] for e in c.edges}
    )
    return d, to_d_b, to_d_c


def _partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions of ``items`` (blocks keep the input order)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _partitions_by_key(items: Sequence, key: Callable) -> Iterator[list[list]]:
    """Partitions whose blocks only join items with equal ``key``."""
    groups: dict = {}
    for x in items:
        groups.setdefault(key(x), []).append(x)
    for combo in itertools.product(*(list(_partitions(g)) for g in groups.values())):
        yield [block for part in combo for block in part]


def _complement_key(c: Graph, i_c: GraphMorphism, c_g: GraphMorphism) -> tuple:
    pre: dict[str, list[str]] = {}
    for x in i_c.domain.items:
        pre.setdefault(i_c(x), []).append(x)
    ncol = {v: (tuple(sorted(pre.get(v, []))), c_g(v)) for v in c.nodes}
    ecol = {e.id: (tuple(sorted(pre.get(e.id, []))), c_g(e.id)) for e in c.edges}
    return canonical_form(c, ncol, ecol)


def _complement_injective(l: GraphMorphism, m: GraphMorphism):
    """The unique pushout complement along an injective ``l``, if the
    gluing condition holds."""
    big_l, g = l.codomain, m.codomain
    kept = set(l.node_map.values()) | set(l.edge_map.values())
    deleted = [x for x in big_l.items if x not in kept]
    images: dict[str, list[str]] = {}
    for x in big_l.items:
        images.setdefault(m(x), []).append(x)
    for y, pre in images.items():
        if len(pre) > 1 and any(x not in kept for x in pre):
            return None  # identification condition
    del_nodes = {m(x) for x in deleted if x in big_l.node_set}
    del_edges = {m(x) for x in deleted if x in big_l.edge}
    for e in g.edges:
        if e.id not in del_edges and (e.src in del_nodes or e.tgt in del_nodes):
            return None  # dangling condition
    c = g.without(del_nodes | del_edges)
    i_c = compose(m, l).corestrict(c)
    c_g = GraphMorphism(c, g, {v: v for v in c.nodes}, {e.id: e.id for e in c.edges})
    return c, i_c, c_g


def pushout_complement(
    l: GraphMorphism, m: GraphMorphism
) -> list[tuple[Graph, GraphMorphism, GraphMorphism]]:
    """Every ``(C, I -> C, C -> G)`` up to isomorphism making the square
    ``I -> L -> G``, ``I -> C -> G`` a pushout. Empty when the gluing
    condition fails; at most one result when ``l`` is injective."""
    if l.codomain.items != m.domain.items:
        raise GraphError("morphisms are not composable")
    if l.is_injective():
        found = _complement_injective(l, m)
        return [found] if found is not None else []

    interface, big_l, g = l.domain, l.codomain, m.codomain
    ml = compose(m, l)
    image_nodes = {m.node_map[v] for v in big_l.nodes}
    image_edges = {m.edge_map[e.id] for e in big_l.edges}
    ctx_nodes = [v for v in g.nodes if v not in image_nodes]
    ctx_edges = [e for e in g.edges if e.id not in image_edges]

    results, seen = [], set()
    for node_part in _partitions_by_key(list(interface.nodes), lambda v: ml.node_map[v]):
        block_of = {}
        for i, block in enumerate(node_part):
            for v in block:
                block_of[v] = f"q{i}"
        over: dict[str, list[str]] = {}
        for i, block in enumerate(node_part):
            over.setdefault(ml.node_map[block[0]], []).append(f"q{i}")

        def edge_key(e, block_of=block_of):
            return (ml.edge_map[e.id], block_of[e.src], block_of[e.tgt])

        for edge_part in _partitions_by_key(list(interface.edges), edge_key):
            q_edges = []
            edge_block = {}
            for i, block in enumerate(edge_part):
                e = block[0]
                q_edges.append(Edge(f"qe{i}", block_of[e.src], block_of[e.tgt], e.label))
                for x in block:
                    edge_block[x.id] = f"qe{i}"

            def attach(v):
                return [v] if v not in image_nodes else over.get(v, [])

            options = [list(itertools.product(attach(e.src), attach(e.tgt))) for e in ctx_edges]
            for choice in itertools.product(*options):
                taken = {f"q{i}" for i in range(len(node_part))} | {x.id for x in q_edges}
                ids_n = {v: fresh_id(v, taken) for v in ctx_nodes}
                taken |= set(ids_n.values())
                ids_e = {}
                for e in ctx_edges:
                    ids_e[e.id] = fresh_id(e.id, taken)
                    taken.add(ids_e[e.id])

                def rename(v):
                    return ids_n.get(v, v)

                c_nodes = tuple(f"q{i}" for i in range(len(node_part))) + tuple(
                    ids_n[v] for v in ctx_nodes
                )
                c_edges = tuple(q_edges) + tuple(
                    Edge(ids_e[e.id], rename(s), rename(t), e.label)
                    for e, (s, t) in zip(ctx_edges, choice)
                )
                c = Graph(c_nodes, c_edges, g.alphabet)
                i_c = GraphMorphism(
                    interface, c, dict(block_of), {e.id: edge_block[e.id] for e in interface.edges}
                )
                c_to_g_n = {f"q{i}": ml.node_map[b[0]] for i, b in enumerate(node_part)}
                c_to_g_n.update({ids_n[v]: v for v in ctx_nodes})
                c_to_g_e = {f"qe{i}": ml.edge_map[b[0].id] for i, b in enumerate(edge_part)}
                c_to_g_e.update({ids_e[e.id]: e.id for e in ctx_edges})
                c_g = GraphMorphism(c, g, c_to_g_n, c_to_g_e)
                if validate_morphism(c_g) is not None:
                    continue
                if not _is_pushout_of(l, i_c, m, c_g):
                    continue
                key = _complement_key(c, i_c, c_g)
                if key not in seen:
                    seen.add(key)
                    results.append((c, i_c, c_g))
    return results


def _is_pushout_of(l, i_c, m, c_g) -> bool:
    """Whether ``G`` with ``m`` and ``c_g`` is the pushout of ``l`` and ``i_c``."""
    d, to_d_l, to_d_c = pushout(l, i_c)
    g = m.codomain
    induced: dict[str, str] = {}
    for x in l.codomain.items:
        induced.setdefault(to_d_l(x), m(x))
    for x in i_c.codomain.items:
        if induced.setdefault(to_d_c(x), c_g(x)) != c_g(x):
            return False
    if any(induced[to_d_l(x)] != m(x) for x in l.codomain.items):
        return False
    values = list(induced.values())
    return len(set(values)) == len(values) == len(g.items)


def rewrite_steps(g: Graph, rule: DpoRule, match: GraphMorphism) -> list[tuple[Graph, GraphMorphism]]:
    """Forward DPO steps at ``match: L -> G``; returns ``(H, R -> H)`` pairs."""
    problem = validate_morphism(match)
    if problem is not None:
        raise GraphError(f"invalid match: {problem}")
    if match.domain != rule.left or match.codomain != g:
        raise GraphError("match must go from the rule's left-hand side into the graph")
    out = []
    for c, i_c, _ in pushout_complement(rule.phi_l, match):
        h, comatch, _ = pushout(rule.phi_r, i_c)
        out.append((h, comatch))
    return out


def apply_rule(g: Graph, rule: DpoRule, direction: str, match: GraphMorphism) -> list[Graph]:
    """All results of applying ``rule`` at ``match`` (``forward``: ``L -> G``,
    ``backward``: ``R -> G``), one per pushout complement."""
    if direction == "forward":
        return [h for h, _ in rewrite_steps(g, rule, match)]
    if direction == "backward":
        return [h for h, _ in rewrite_steps(g, rule.inverse(), match)]
    raise ValueError(f"unknown direction {direction!r}")


def rewrites(g: Graph, rule: DpoRule) -> Iterator[Graph]:
    """Every graph reachable from ``g`` in one forward step."""
    for match in enumerate_homs(rule.left, g):
        yield from apply_rule(g, rule, "forward", match)


def enumerate_jointly_surjective(r: Graph, s: Graph) -> Iterator[JointQuotient]:
    """Every jointly surjective pair ``R -> F <- S``, as quotients of
    ``R ⊕ S``; distinct quotients are never isomorphic under ``R`` and ``S``."""
    co, inj_r, inj_s = coproduct(r, s)
    for node_part in _partitions(list(co.nodes)):
        block_of = {}
        names = []
        for block in node_part:
            name = "+".join(block)
            names.append(name)
            for v in block:
                block_of[v] = name

        def key(e, block_of=block_of):
            return (e.label, block_of[e.src], block_of[e.tgt])

        for edge_part in _partitions_by_key(list(co.edges), key):
            edges, eblock = [], {}
            for block in edge_part:
                e = block[0]
                name = "+".join(x.id for x in block)
                edges.append(Edge(name, block_of[e.src], block_of[e.tgt], e.label))
                for x in block:
                    eblock[x.id] = name
            f = Graph(tuple(names), tuple(edges), co.alphabet)
            q = GraphMorphism(co, f, dict(block_of), eblock)
            yield JointQuotient(f, compose(q, inj_r), compose(q, inj_s))


def _require_injective(rule: DpoRule):
    if not rule.is_injective():
        raise ValueError("the exact closure check needs injective rule morphisms")


def rg_closed_under_rule(s: RestrictionGraphSpec | Graph, rule: DpoRule) -> Verdict:
    """Closure of ``L_R(S)`` under ``rule``.

    For every jointly surjective ``R -> F <- S`` and every graph ``E`` that
    rewrites to ``F`` with co-match ``R -> F``, ``S`` must map into ``E``.
    A violation is reported as ``E`` (in the language) rewriting to ``F``
    (not in it).
    """
    s = s.restriction_graph if isinstance(s, RestrictionGraphSpec) else s
    _require_injective(rule)
    require_same_alphabet(s, rule.left)
    seen = set()
    for jq in enumerate_jointly_surjective(rule.right, s):
        ncol = {v: tuple(sorted(x for x in rule.right.nodes if jq.alpha.node_map[x] == v)) for v in jq.graph.nodes}
        ecol = {e.id: tuple(sorted(x.id for x in rule.right.edges if jq.alpha.edge_map[x.id] == e.id)) for e in jq.graph.edges}
        key = canonical_form(jq.graph, ncol, ecol)
        if key in seen:
            continue
        seen.add(key)
        for e in apply_rule(jq.graph, rule, "backward", jq.alpha):
            if not has_hom(s, e):
                return Verdict(False, ClosureViolation(e, jq.graph, jq), "backward step leaves L_R(S)")
    return Verdict(True)


def _extension_pins(rule: DpoRule, t_l: GraphMorphism):
    """Pins forcing ``t_R ∘ phi_R = t_L ∘ phi_L``, or ``None`` if contradictory."""
    nodes, edges = {}, {}
    for v in rule.interface.nodes:
        want = t_l.node_map[rule.phi_l.node_map[v]]
        if nodes.setdefault(rule.phi_r.node_map[v], want) != want:
            return None
    for e in rule.interface.edges:
        want = t_l.edge_map[rule.phi_l.edge_map[e.id]]
        if edges.setdefault(rule.phi_r.edge_map[e.id], want) != want:
            return None
    return nodes, edges


def tg_closed_under_rule(
    t: TypeGraphSpec | Graph, rule: DpoRule, *, use_core: bool = True
) -> Verdict:
    """Closure of ``L(T)`` under ``rule``: every ``t_L: L -> core(T)`` must
    extend to some ``t_R: R -> core(T)`` agreeing on the interface.

    ``use_core=False`` runs the same test against ``T`` itself; that variant
    is not a valid criterion and exists for comparison only. A violation
    carries ``t_L`` and a witness step ``A => B`` with ``A`` in the language
    and ``B`` outside it.
    """
    t = t.type_graph if isinstance(t, TypeGraphSpec) else t
    require_same_alphabet(t, rule.left)
    target = core(t)[0] if use_core else t
    for t_l in enumerate_homs(rule.left, target):
        pins = _extension_pins(rule, t_l)
        if pins is not None and find_hom(rule.right, target, node_map=pins[0], edge_map=pins[1]):
            continue
        n = compose(t_l, rule.phi_l)
        a, _, _ = pushout(rule.phi_l, n)
        b, _, _ = pushout(rule.phi_r, n)
        return Verdict(False, ClosureViolation(a, b, t_l), "left match into the core has no extension")
    return Verdict(True)


def _membership(spec) -> Callable[[Graph], bool]:
    if isinstance(spec, TypeGraphSpec):
        return lambda g: has_hom(g, spec.type_graph)
    if isinstance(spec, RestrictionGraphSpec):
        return lambda g: not has_hom(spec.restriction_graph, g)
    if isinstance(spec, MultiAnnotatedGraph):
        return lambda g: atg_member(g, spec).result
    raise TypeError(f"unsupported specification {spec!r}")


def closure_oracle(spec, rule: DpoRule, u: GraphUniverse | Iterable[Graph]) -> Verdict:
    """Bounded simulation: rewrite every member of the universe at every
    match and report the first result outside the language."""
    member = _membership(spec)
    graphs = enumerate_graphs(u) if isinstance(u, GraphUniverse) else u
    for g in graphs:
        if not member(g):
            continue
        for h in rewrites(g, rule):
            if not member(h):
                return Verdict(False, ClosureViolation(g, h), "rewrite leaves the language")
    return Verdict(True, None, "no violation found (bounded)")
