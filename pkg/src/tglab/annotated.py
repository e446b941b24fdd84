"""Multiply annotated type graphs over the multiplicity monoids ``M_n``.

A multiplicity is an int in ``0..n+1`` where ``n+1`` stands for *many*.
Addition saturates at *many*. Annotations are tuples aligned with
``graph.items`` (nodes first, then edges).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Mapping

from .graph import Edge, Graph, GraphMorphism, coproduct, product, require_same_alphabet
from .homs import enumerate_homs
from .lang import Verdict

MANY_TOKEN = "m"


class MultiplicityMismatch(ValueError):
    """Values or annotations with different bounds ``n`` were combined."""


class InvalidAnnotation(ValueError):
    pass


def sat_add(a: int, b: int, n: int) -> int:
    return min(a + b, n + 1)


@total_ordering
@dataclass(frozen=True)
class Mult:
    """An element of ``M_n = {0, 1, ..., n, many}``."""

    value: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("multiplicity bound must be at least 1")
        if not 0 <= self.value <= self.n + 1:
            raise ValueError(f"{self.value} is not in M_{self.n}")

    @classmethod
    def many(cls, n: int) -> Mult:
        return cls(n + 1, n)

    @property
    def is_many(self) -> bool:
        return self.value == self.n + 1

    def _check(self, other: Mult):
        if not isinstance(other, Mult):
            return NotImplemented
        if other.n != self.n:
            raise MultiplicityMismatch(f"M_{self.n} and M_{other.n} cannot be combined")
        return None

    def __add__(self, other: Mult) -> Mult:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Mult(sat_add(self.value, other.value, self.n), self.n)

    def __lt__(self, other: Mult) -> bool:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.value < other.value

    def join(self, other: Mult) -> Mult:
        return max(self, other)

    def meet(self, other: Mult) -> Mult:
        return min(self, other)

    def __str__(self):
        return MANY_TOKEN if self.is_many else str(self.value)


def m_add(a: Mult, b: Mult) -> Mult:
    return a + b


def format_value(v: int, n: int) -> int | str:
    return MANY_TOKEN if v == n + 1 else v


def parse_value(raw, n: int) -> int:
    if raw == MANY_TOKEN:
        return n + 1
    if isinstance(raw, bool) or not isinstance(raw, int) or not 0 <= raw <= n:
        raise InvalidAnnotation(f"{raw!r} is not a value of M_{n}")
    return raw


@dataclass(frozen=True)
class Annotation:
    """A map from the items of ``graph`` into ``M_n``."""

    graph: Graph
    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.graph.items):
            raise InvalidAnnotation("annotation does not cover exactly the carrier's items")
        if any(not 0 <= v <= self.n + 1 for v in self.values):
            raise InvalidAnnotation(f"value outside M_{self.n}")

    @classmethod
    def from_mapping(cls, graph: Graph, n: int, mapping: Mapping[str, int], default: int = 0):
        unknown = set(mapping) - set(graph.items)
        if unknown:
            raise InvalidAnnotation(f"annotation mentions unknown items {sorted(unknown)}")
        return cls(graph, n, tuple(mapping.get(x, default) for x in graph.items))

    @classmethod
    def constant(cls, graph: Graph, n: int, value: int) -> Annotation:
        return cls(graph, n, (value,) * len(graph.items))

    def __getitem__(self, item: str) -> int:
        return self.values[self.graph.item_index[item]]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.graph.items, self.values))

    def _same(self, other: Annotation):
        if other.n != self.n:
            raise MultiplicityMismatch(f"M_{self.n} and M_{other.n} cannot be combined")
        if other.graph.items != self.graph.items:
            raise InvalidAnnotation("annotations live on different carriers")

    def leq(self, other: Annotation) -> bool:
        self._same(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def join(self, other: Annotation) -> Annotation:
        self._same(other)
        return Annotation(self.graph, self.n, tuple(map(max, self.values, other.values)))

    def meet(self, other: Annotation) -> Annotation:
        self._same(other)
        return Annotation(self.graph, self.n, tuple(map(min, self.values, other.values)))

    def __add__(self, other: Annotation) -> Annotation:
        self._same(other)
        return Annotation(
            self.graph, self.n, tuple(sat_add(a, b, self.n) for a, b in zip(self.values, other.values))
        )

    def __repr__(self):
        body = ", ".join(f"{x}:{format_value(v, self.n)}" for x, v in self.as_dict().items())
        return f"Annotation({{{body}}})"


def standard_annotation(g: Graph, n: int) -> Annotation:
    return Annotation.constant(g, n, 1)


def zero_annotation(g: Graph, n: int) -> Annotation:
    return Annotation.constant(g, n, 0)


def _push_values(phi: GraphMorphism, values: tuple[int, ...], n: int) -> tuple[int, ...]:
    h = phi.codomain
    idx = h.item_index
    out = [0] * len(h.items)
    g = phi.domain
    k = len(g.nodes)
    for i, v in enumerate(g.nodes):
        j = idx[phi.node_map[v]]
        out[j] = min(out[j] + values[i], n + 1)
    for i, e in enumerate(g.edges):
        j = idx[phi.edge_map[e.id]]
        out[j] = min(out[j] + values[k + i], n + 1)
    return tuple(out)


def push_annotation(phi: GraphMorphism, a: Annotation) -> Annotation:
    """Sum ``a`` over the preimages of each codomain item."""
    if a.graph.items != phi.domain.items:
        raise InvalidAnnotation("annotation is not carried by the morphism's domain")
    return Annotation(phi.codomain, a.n, _push_values(phi, a.values, a.n))


def reduce_annotation(phi: GraphMorphism, a: Annotation) -> Annotation:
    """Largest annotation of the domain whose push stays below ``a``, taken
    as a join: the pointwise join is ``a ∘ phi`` because any single item
    may carry ``a(phi(x))`` on its own."""
    if a.graph.items != phi.codomain.items:
        raise InvalidAnnotation("annotation is not carried by the morphism's codomain")
    return Annotation(phi.domain, a.n, tuple(a[phi(x)] for x in phi.domain.items))


@dataclass(frozen=True)
class AnnotationPair:
    lower: Annotation
    upper: Annotation

    def __post_init__(self):
        self.lower._same(self.upper)
        for x, lo, up in zip(self.lower.graph.items, self.lower.values, self.upper.values):
            if lo > up:
                raise InvalidAnnotation(
                    f"lower bound exceeds upper bound at item {x!r} (requires lower <= upper)"
                )

    def contains(self, values: tuple[int, ...]) -> bool:
        return all(lo <= v <= up for lo, v, up in zip(self.lower.values, values, self.upper.values))


@dataclass(frozen=True)
class MultiAnnotatedGraph:
    """A type graph with a finite set of (lower, upper) bound pairs."""

    graph: Graph
    n: int
    pairs: tuple[AnnotationPair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if self.n < 1:
            raise ValueError("multiplicity bound must be at least 1")
        for p in self.pairs:
            if p.lower.n != self.n:
                raise MultiplicityMismatch(f"pair over M_{p.lower.n} in a graph over M_{self.n}")
            if p.lower.graph.items != self.graph.items:
                raise InvalidAnnotation("pair is not carried by the type graph")

    @classmethod
    def build(cls, graph: Graph, n: int, bounds: Iterable[tuple[Mapping, Mapping]]):
        """Pairs from ``(lower, upper)`` item mappings; missing items get
        lower 0 and upper *many*."""
        pairs = []
        for lo, up in bounds:
            lower = Annotation.from_mapping(graph, n, lo, 0)
            upper = Annotation.from_mapping(graph, n, up, n + 1)
            pairs.append(AnnotationPair(lower, upper))
        return cls(graph, n, tuple(pairs))

    @property
    def alphabet(self):
        return self.graph.alphabet

    def admits(self, values: tuple[int, ...]) -> bool:
        """Whether some pair bounds the annotation ``values``."""
        points = self._points
        if values in points:
            return True
        return any(p.contains(values) for p in self._intervals)

    @property
    def _points(self) -> frozenset:
        cached = self.__dict__.get("_points_cache")
        if cached is None:
            cached = frozenset(p.lower.values for p in self.pairs if p.lower == p.upper)
            object.__setattr__(self, "_points_cache", cached)
        return cached

    @property
    def _intervals(self) -> tuple[AnnotationPair, ...]:
        cached = self.__dict__.get("_intervals_cache")
        if cached is None:
            cached = tuple(p for p in self.pairs if p.lower != p.upper)
            object.__setattr__(self, "_intervals_cache", cached)
        return cached


def _require_same_n(*specs: MultiAnnotatedGraph) -> int:
    ns = {s.n for s in specs}
    if len(ns) != 1:
        raise MultiplicityMismatch(f"multiplicity bounds differ: {sorted(ns)}")
    return ns.pop()


def is_legal(phi: GraphMorphism, source: MultiAnnotatedGraph, target: MultiAnnotatedGraph) -> bool:
    """Every source pair pushes into the bounds of some target pair."""
    if phi.domain.items != source.graph.items or phi.codomain.items != target.graph.items:
        raise InvalidAnnotation("morphism does not connect the carriers")
    n = _require_same_n(source, target)
    for p in source.pairs:
        lo = _push_values(phi, p.lower.values, n)
        up = _push_values(phi, p.upper.values, n)
        if not any(
            all(a >= b for a, b in zip(lo, q.lower.values))
            and all(a <= b for a, b in zip(up, q.upper.values))
            for q in target.pairs
        ):
            return False
    return True


def atg_member(g: Graph, t: MultiAnnotatedGraph) -> Verdict:
    """Membership; the witness is a morphism whose pushed standard
    annotation fits one of the pairs."""
    require_same_alphabet(g, t.graph)
    if not t.pairs:
        return Verdict(False)
    std = (1,) * len(g.items)
    for phi in enumerate_homs(g, t.graph):
        if t.admits(_push_values(phi, std, t.n)):
            return Verdict(True, phi)
    return Verdict(False)


def _pair_is_void(t: Graph, p: AnnotationPair) -> bool:
    return any(
        p.lower[e.id] >= 1 and (p.upper[e.src] == 0 or p.upper[e.tgt] == 0) for e in t.edges
    )


def emptiness_witness(t: MultiAnnotatedGraph, p: AnnotationPair) -> tuple[Graph, GraphMorphism]:
    """Realise the lower bounds of a satisfiable pair as a graph.

    Items with upper bound 0 are dropped; every remaining node ``v`` becomes
    ``max(1, lower(v))`` nodes and every remaining edge ``e`` becomes
    ``lower(e)`` parallel edges, *many* counting as ``n + 1``.
    """
    g = t.graph
    keep = [v for v in g.nodes if p.upper[v] > 0]
    keep_set = set(keep)
    nodes, node_map = [], {}
    for v in keep:
        for i in range(max(1, p.lower[v])):
            vid = f"{v}#{i}"
            nodes.append(vid)
            node_map[vid] = v
    edges, edge_map = [], {}
    for e in g.edges:
        if p.upper[e.id] == 0 or e.src not in keep_set or e.tgt not in keep_set:
            continue
        for i in range(p.lower[e.id]):
            eid = f"{e.id}#{i}"
            edges.append(Edge(eid, f"{e.src}#0", f"{e.tgt}#0", e.label))
            edge_map[eid] = e.id
    w = Graph(tuple(nodes), tuple(edges), g.alphabet)
    return w, GraphMorphism(w, g, node_map, edge_map)


def atg_empty(t: MultiAnnotatedGraph) -> Verdict:
    """Empty iff every pair forces an edge onto a node that may not be used.

    When non-empty the witness is a member graph built from the first
    satisfiable pair.
    """
    for p in t.pairs:
        if not _pair_is_void(t.graph, p):
            w, _ = emptiness_witness(t, p)
            return Verdict(False, w)
    return Verdict(True)


def atg_inclusion_sufficient(t1: MultiAnnotatedGraph, t2: MultiAnnotatedGraph) -> Verdict:
    """``result`` is ``True`` (with a legal morphism) or ``None`` for unknown.

    A legal morphism ``T1[M1] -> T2[M2]`` proves inclusion; its absence
    proves nothing.
    """
    require_same_alphabet(t1.graph, t2.graph)
    _require_same_n(t1, t2)
    for phi in enumerate_homs(t1.graph, t2.graph):
        if is_legal(phi, t1, t2):
            return Verdict(True, phi)
    return Verdict(None, None, "no legal morphism; inclusion undecided")


def _bounded_annotations(
    carrier: Graph,
    n: int,
    projections: list[tuple[GraphMorphism, AnnotationPair]],
) -> Iterator[tuple[int, ...]]:
    """All annotations of ``carrier`` whose push along each projection lies
    within the paired bounds."""
    items = carrier.items
    idx_maps = []
    for phi, pair in projections:
        cod = phi.codomain.item_index
        idx_maps.append([cod[phi(x)] for x in items])
    caps = [
        min([n + 1] + [pair.upper.values[m[i]] for m, (_, pair) in zip(idx_maps, projections)])
        for i in range(len(items))
    ]
    sums = [[0] * len(phi.codomain.items) for phi, _ in projections]
    current = [0] * len(items)

    def rec(i: int):
        if i == len(items):
            if all(
                all(s >= lo for s, lo in zip(sums[j], pair.lower.values))
                for j, (_, pair) in enumerate(projections)
            ):
                yield tuple(current)
            return
        for v in range(caps[i] + 1):
            saved = []
            ok = True
            for j, (m, (_, pair)) in enumerate(zip(idx_maps, projections)):
                k = m[i]
                old = sums[j][k]
                new = min(old + v, n + 1)
                saved.append((j, k, old))
                sums[j][k] = new
                if new > pair.upper.values[k]:
                    ok = False
            current[i] = v
            if ok:
                yield from rec(i + 1)
            for j, k, old in saved:
                sums[j][k] = old
            if not ok:
                # larger values only overshoot further
                break
        current[i] = 0

    yield from rec(0)


def atg_intersect(t1: MultiAnnotatedGraph, t2: MultiAnnotatedGraph) -> MultiAnnotatedGraph:
    """Annotated graph on ``T1 × T2`` whose language is the intersection.

    The pairs are the degenerate intervals ``[a, a]`` for every annotation
    ``a`` of the product whose two projections land within some pair of
    ``M1`` and ``M2`` respectively.
    """
    require_same_alphabet(t1.graph, t2.graph)
    n = _require_same_n(t1, t2)
    p, pi1, pi2 = product(t1.graph, t2.graph)
    found = {}
    for q1, q2 in itertools.product(t1.pairs, t2.pairs):
        for a in _bounded_annotations(p, n, [(pi1, q1), (pi2, q2)]):
            found.setdefault(a, None)
    pairs = tuple(
        AnnotationPair(Annotation(p, n, a), Annotation(p, n, a)) for a in sorted(found)
    )
    return MultiAnnotatedGraph(p, n, pairs)


def atg_union(t1: MultiAnnotatedGraph, t2: MultiAnnotatedGraph) -> MultiAnnotatedGraph:
    """Annotated graph on ``T1 ⊕ T2`` whose language is the union; each pair
    is pushed along its injection, so the other summand is bounded by 0."""
    require_same_alphabet(t1.graph, t2.graph)
    n = _require_same_n(t1, t2)
    c, i1, i2 = coproduct(t1.graph, t2.graph)
    pairs = []
    for inj, spec in ((i1, t1), (i2, t2)):
        for q in spec.pairs:
            pairs.append(
                AnnotationPair(push_annotation(inj, q.lower), push_annotation(inj, q.upper))
            )
    return MultiAnnotatedGraph(c, n, tuple(pairs))


def simplify(t: MultiAnnotatedGraph) -> MultiAnnotatedGraph:
    """Drop pairs whose interval lies inside another pair's interval."""
    kept: list[AnnotationPair] = []
    for i, p in enumerate(t.pairs):
        dominated = False
        for j, q in enumerate(t.pairs):
            if i == j:
                continue
            inside = q.lower.leq(p.lower) and p.upper.leq(q.upper)
            if inside and (not (p.lower.leq(q.lower) and q.upper.leq(p.upper)) or j < i):
                dominated = True
                break
        if not dominated:
            kept.append(p)
    return MultiAnnotatedGraph(t.graph, t.n, tuple(kept))
