"""Graphs as words of atomic cospans, and the counting cospan automaton.

A word is read left to right over a current interface, a list of graph
nodes of length at most ``k + 1``. ``AddNode`` appends a fresh node,
``AddEdge(i, j, label)`` adds an edge between interface positions and
``RemoveNode(i)`` drops position ``i`` from the interface (later positions
shift down). A well-formed word starts and ends with the empty interface.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

from .annotated import MultiAnnotatedGraph, MultiplicityMismatch, sat_add
from .graph import Edge, Graph, require_same_alphabet
from .lang import Verdict

MAX_DECOMPOSE_NODES = 10


class IllFormedWord(ValueError):
    pass


@dataclass(frozen=True)
class AddNode:
    pass


@dataclass(frozen=True)
class AddEdge:
    src: int
    tgt: int
    label: str


@dataclass(frozen=True)
class RemoveNode:
    index: int


AtomicOp = Union[AddNode, AddEdge, RemoveNode]
OpWord = tuple  # of AtomicOp


def graph_of_word(word: Iterable[AtomicOp], alphabet: Iterable[str] = ()) -> Graph:
    """Compose the atomic cospans of a well-formed word into one graph.

    Nodes are named ``v0, v1, ...`` in creation order, edges likewise.
    """
    interface: list[str] = []
    nodes: list[str] = []
    edges: list[Edge] = []
    for pos, op in enumerate(word):
        if isinstance(op, AddNode):
            v = f"v{len(nodes)}"
            nodes.append(v)
            interface.append(v)
        elif isinstance(op, AddEdge):
            if not (0 <= op.src < len(interface) and 0 <= op.tgt < len(interface)):
                raise IllFormedWord(f"op {pos}: edge endpoint outside the interface")
            edges.append(Edge(f"e{len(edges)}", interface[op.src], interface[op.tgt], op.label))
        elif isinstance(op, RemoveNode):
            if not 0 <= op.index < len(interface):
                raise IllFormedWord(f"op {pos}: no interface position {op.index}")
            del interface[op.index]
        else:
            raise IllFormedWord(f"op {pos}: unknown operation {op!r}")
    if interface:
        raise IllFormedWord("word ends with a non-empty interface")
    return Graph(tuple(nodes), tuple(edges), frozenset(alphabet) | {e.label for e in edges})


def interface_width(word: Iterable[AtomicOp]) -> int:
    """Largest interface size reached while reading the word."""
    size = best = 0
    for op in word:
        if isinstance(op, AddNode):
            size += 1
            best = max(best, size)
        elif isinstance(op, RemoveNode):
            size -= 1
    return best


def _neighbours(g: Graph) -> dict[str, frozenset[str]]:
    nbr = {v: set() for v in g.nodes}
    for e in g.edges:
        if e.src != e.tgt:
            nbr[e.src].add(e.tgt)
            nbr[e.tgt].add(e.src)
    return {v: frozenset(s) for v, s in nbr.items()}


def separation(g: Graph, order: Sequence[str]) -> int:
    """Vertex separation number of a node ordering."""
    nbr = _neighbours(g)
    placed: set[str] = set()
    worst = 0
    for v in order[:-1]:
        placed.add(v)
        worst = max(worst, sum(1 for u in placed if nbr[u] - placed))
    return worst


def word_from_order(g: Graph, order: Sequence[str]) -> OpWord:
    """Add nodes in ``order``, each followed by its edges to present nodes,
    then retire every node whose neighbours have all been added."""
    nbr = _neighbours(g)
    interface: list[str] = []
    placed: set[str] = set()
    word: list[AtomicOp] = []
    for v in order:
        word.append(AddNode())
        interface.append(v)
        placed.add(v)
        pos = {u: i for i, u in enumerate(interface)}
        for e in g.edges:
            if v in (e.src, e.tgt) and e.src in pos and e.tgt in pos:
                word.append(AddEdge(pos[e.src], pos[e.tgt], e.label))
        for u in list(interface):
            if not (nbr[u] - placed):
                word.append(RemoveNode(interface.index(u)))
                interface.remove(u)
    return tuple(word)


def _optimal_order(g: Graph) -> tuple[int, tuple[str, ...]]:
    nbr = _neighbours(g)
    everything = frozenset(g.nodes)

    @lru_cache(maxsize=None)
    def solve(placed: frozenset) -> tuple[int, tuple[str, ...]]:
        if placed == everything:
            return 0, ()
        best = None
        for v in g.nodes:
            if v in placed:
                continue
            nxt = placed | {v}
            here = 0 if nxt == everything else sum(1 for u in nxt if nbr[u] - nxt)
            if best is not None and here >= best[0]:
                continue
            rest, order = solve(nxt)
            cand = (max(here, rest), (v,) + order)
            if best is None or cand[0] < best[0]:
                best = cand
        return best

    return solve(frozenset())


def pathwidth(g: Graph) -> int:
    if len(g.nodes) > MAX_DECOMPOSE_NODES:
        raise ValueError(f"exact pathwidth is limited to {MAX_DECOMPOSE_NODES} nodes")
    return _optimal_order(g)[0]


def decompose(g: Graph, k: int) -> OpWord | None:
    """A word for ``g`` whose interfaces never exceed ``k + 1`` nodes, or
    ``None`` when the pathwidth of ``g`` exceeds ``k``."""
    if len(g.nodes) > MAX_DECOMPOSE_NODES:
        raise ValueError(f"exact decomposition is limited to {MAX_DECOMPOSE_NODES} nodes")
    width, order = _optimal_order(g)
    if width > k:
        return None
    return word_from_order(g, order)


def decompositions(g: Graph, k: int, limit: int | None = None) -> Iterator[OpWord]:
    """Distinct words of width at most ``k + 1`` from distinct node orders."""
    seen = set()
    for order in itertools.permutations(g.nodes):
        if separation(g, order) > k:
            continue
        w = word_from_order(g, order)
        if w in seen:
            continue
        seen.add(w)
        yield w
        if limit is not None and len(seen) >= limit:
            return


# automaton -------------------------------------------------------------------

State = tuple  # (interface images as T-node indices, counts over T items)


def _count_caps(spec: MultiAnnotatedGraph) -> tuple[int, ...]:
    """Per item, the largest count any bound can tell apart from a larger
    one. Counts only grow, so clamping at the cap is a congruence and keeps
    every bound comparison intact."""
    many = spec.n + 1
    caps = []
    for i in range(len(spec.graph.items)):
        cap = 0
        for p in spec.pairs:
            cap = max(cap, p.lower.values[i])
            if p.upper.values[i] < many:
                cap = max(cap, p.upper.values[i] + 1)
        caps.append(cap)
    return tuple(caps)


class CountingAutomaton:
    """Counting automaton of an annotated type graph for interfaces of at
    most ``k + 1`` nodes. States are discovered lazily.

    With ``capped`` the counts are clamped per item (see ``_count_caps``);
    the accepted language is unchanged but far fewer states arise.
    """

    def __init__(self, spec: MultiAnnotatedGraph, k: int, *, capped: bool = False):
        self.spec = spec
        self.k = k
        t = spec.graph
        self.n = spec.n
        self._node_index = {v: i for i, v in enumerate(t.nodes)}
        self._edge_slots: dict[tuple[int, int, str], list[int]] = {}
        base = len(t.nodes)
        for j, e in enumerate(t.edges):
            key = (self._node_index[e.src], self._node_index[e.tgt], e.label)
            self._edge_slots.setdefault(key, []).append(base + j)
        self._uppers = [p.upper.values for p in spec.pairs]
        self._caps = _count_caps(spec) if capped else None
        self._windows: dict[tuple, tuple] = {}
        self._covers: dict[tuple, bool] = {}
        self._succ: dict[tuple, tuple] = {}

    @property
    def initial(self) -> State:
        return ((), (0,) * len(self.spec.graph.items))

    def is_final(self, state: State) -> bool:
        f, b = state
        return not f and self.spec.admits(b)

    def is_dead(self, state: State) -> bool:
        """Counts only grow, so a state above every upper bound never accepts."""
        b = state[1]
        return not any(all(x <= u for x, u in zip(b, up)) for up in self._uppers)

    def _bump(self, b: tuple, i: int) -> tuple:
        v = sat_add(b[i], 1, self.n)
        if self._caps is not None:
            v = min(v, self._caps[i])
        return b[:i] + (v,) + b[i + 1 :]

    def step(self, state: State, op: AtomicOp) -> list[State]:
        f, b = state
        if isinstance(op, AddNode):
            if len(f) >= self.k + 1:
                return []
            return [(f + (t,), b) for t in range(len(self.spec.graph.nodes))]
        if isinstance(op, AddEdge):
            if not (0 <= op.src < len(f) and 0 <= op.tgt < len(f)):
                return []
            slots = self._edge_slots.get((f[op.src], f[op.tgt], op.label), ())
            return [(f, self._bump(b, i)) for i in slots]
        if isinstance(op, RemoveNode):
            if not 0 <= op.index < len(f):
                return []
            return [(f[: op.index] + f[op.index + 1 :], self._bump(b, f[op.index]))]
        raise IllFormedWord(f"unknown operation {op!r}")

    def live_step(self, state: State, op: AtomicOp) -> tuple:
        key = (state, op)
        out = self._succ.get(key)
        if out is None:
            out = self._succ[key] = tuple(t for t in self.step(state, op) if not self.is_dead(t))
        return out

    def windows(self, b: tuple) -> tuple:
        """Per pair, the interval of further increments each count may take
        while staying inside that pair, or ``None`` if the pair is out of
        reach."""
        w = self._windows.get(b)
        if w is not None:
            return w
        many = self.n + 1
        out = []
        for p in self.spec.pairs:
            row = []
            for x, lo, up in zip(b, p.lower.values, p.upper.values):
                if x > up:
                    row = None
                    break
                row.append((max(0, lo - x), up - x if up < many else many + 1))
            out.append(None if row is None else tuple(row))
        w = self._windows[b] = tuple(out)
        return w

    def covers(self, big: tuple, small: tuple) -> bool:
        """True when every completion accepted from counts ``small`` is
        also accepted from counts ``big`` (same interface)."""
        if big == small:
            return True
        key = (big, small)
        hit = self._covers.get(key)
        if hit is None:
            wb = [w for w in self.windows(big) if w is not None]
            hit = all(
                ws is None
                or any(all(l2 <= l1 and h1 <= h2 for (l1, h1), (l2, h2) in zip(ws, w)) for w in wb)
                for ws in self.windows(small)
            )
            self._covers[key] = hit
        return hit

    def prune(self, states: Iterable[State]) -> frozenset:
        """Drop states covered by another state with the same interface."""
        groups: dict[tuple, list[tuple]] = {}
        for f, b in set(states):
            groups.setdefault(f, []).append(b)
        out = []
        for f, bs in groups.items():
            bs.sort()
            kept: list[tuple] = []
            for b in bs:
                if any(self.covers(c, b) for c in kept):
                    continue
                kept = [c for c in kept if not self.covers(b, c)]
                kept.append(b)
            out.extend((f, b) for b in kept)
        return frozenset(out)


def step(a: CountingAutomaton, s: State, op: AtomicOp) -> set[State]:
    return set(a.step(s, op))


def ops_for(size: int, k: int, alphabet: Iterable[str]) -> list[AtomicOp]:
    """Every operation applicable to an interface of ``size`` nodes."""
    ops: list[AtomicOp] = []
    if size < k + 1:
        ops.append(AddNode())
    labels = sorted(alphabet)
    for i in range(size):
        for j in range(size):
            for lab in labels:
                ops.append(AddEdge(i, j, lab))
    for i in range(size):
        ops.append(RemoveNode(i))
    return ops


def accepts(a: CountingAutomaton, word: Iterable[AtomicOp]) -> bool:
    word = tuple(word)
    graph_of_word(word)  # rejects ill-formed words
    current = {a.initial}
    for op in word:
        current = {t for s in current for t in a.step(s, op) if not a.is_dead(t)}
        if not current:
            return False
    return any(a.is_final(s) for s in current)


def _normal_ops(size: int, k: int, labels: Sequence[str], phase: tuple) -> list[tuple[AtomicOp, tuple]]:
    """Operations allowed after ``phase`` in a normal-form word, with the
    phase each one leads to.

    Normal form: every edge is added right after the ``AddNode`` of its
    newer endpoint, edges of one batch in sorted order, and removals of one
    batch in descending position. Every graph of pathwidth at most ``k`` has
    such a word (the one built by ``word_from_order``, reordered).
    """
    out: list[tuple[AtomicOp, tuple]] = []
    if size < k + 1:
        out.append((AddNode(), ("edges", None)))
    kind, last = phase
    if kind == "edges" and size:
        new = size - 1
        for i in range(size):
            pairs = [(i, new)] if i == new else [(i, new), (new, i)]
            for src, tgt in pairs:
                for lab in labels:
                    key = (src, tgt, lab)
                    if last is None or key >= last:
                        out.append((AddEdge(src, tgt, lab), ("edges", key)))
    if kind in ("edges", "remove"):
        top = size if kind == "edges" else last
        for i in range(min(top, size)):
            out.append((RemoveNode(i), ("remove", i)))
    return out


def _permute(f: tuple, perm: tuple) -> tuple:
    return tuple(f[i] for i in perm)


def _canonical(q1: State, s2: frozenset) -> tuple[tuple, State, frozenset]:
    """Reorder interface positions so that equivalent configurations meet.
    Only used right before ``AddNode``, where the future does not depend on
    the order of the positions."""
    best = None
    for perm in itertools.permutations(range(len(q1[0]))):
        key = (
            (_permute(q1[0], perm), q1[1]),
            tuple(sorted((_permute(f, perm), b) for f, b in s2)),
        )
        if best is None or key < best[0]:
            best = (key, perm)
    (r1, r2), perm = best
    return perm, r1, frozenset(r2)


def _replay(steps: list[tuple]) -> OpWord:
    """Turn search steps, some preceded by a reordering of the interface,
    into a plain word over the real interface."""
    shown: list[int] = []  # displayed position -> node number
    real: list[int] = []
    word: list[AtomicOp] = []
    for perm, op in steps:
        if perm is not None:
            shown = [shown[i] for i in perm]
        if isinstance(op, AddNode):
            v = len(word)
            shown.append(v)
            real.append(v)
            word.append(op)
        elif isinstance(op, AddEdge):
            word.append(AddEdge(real.index(shown[op.src]), real.index(shown[op.tgt]), op.label))
        else:
            v = shown.pop(op.index)
            word.append(RemoveNode(real.index(v)))
            real.remove(v)
    return tuple(word)


def inclusion_counterexample(
    t1: MultiAnnotatedGraph, t2: MultiAnnotatedGraph, k: int
) -> OpWord | None:
    """Shortest normal-form word accepted by the automaton of ``t1`` and
    rejected by that of ``t2``, or ``None``.

    Subset construction on the ``t2`` side with antichain pruning. A
    configuration is skipped when an explored one with the same interface
    and phase has a ``t1`` state covering it and a ``t2`` set inside it.
    Sets are kept down to their uncovered states, and interfaces are put
    in a canonical order before each ``AddNode``.
    """
    alphabet = sorted(require_same_alphabet(t1.graph, t2.graph))
    if t1.n != t2.n:
        raise MultiplicityMismatch(f"multiplicity bounds differ: {t1.n} vs {t2.n}")
    a1, a2 = CountingAutomaton(t1, k, capped=True), CountingAutomaton(t2, k, capped=True)
    start = (a1.initial, frozenset([a2.initial]), ("start", None))
    parent: dict = {start: None}
    explored: dict[tuple, dict[tuple, list[frozenset]]] = {
        (a1.initial[0], start[2]): {a1.initial[1]: [start[1]]}
    }
    queue = deque([start])
    op_cache: dict[tuple, list] = {}
    set_steps: dict[tuple, frozenset] = {}

    coverers: dict[tuple, set] = {}  # counts -> every known counts covering them

    def register(b: tuple) -> None:
        if b in coverers:
            return
        mine = coverers[b] = {b}
        for c, theirs in coverers.items():
            if c != b:
                if a1.covers(c, b):
                    mine.add(c)
                if a1.covers(b, c):
                    theirs.add(b)

    def fresh(r1: State, s2: frozenset, phase: tuple) -> bool:
        groups = explored.setdefault((r1[0], phase), {})
        b1 = r1[1]
        register(b1)
        for c1 in coverers[b1]:
            sets = groups.get(c1)
            if sets and any(c2 <= s2 for c2 in sets):
                return False
        sets = groups.setdefault(b1, [])
        sets[:] = [c2 for c2 in sets if not s2 <= c2]
        sets.append(s2)
        return True

    while queue:
        node = queue.popleft()
        q1, s2, phase = node
        if a1.is_final(q1) and not any(a2.is_final(q) for q in s2):
            steps = []
            while parent[node] is not None:
                node, perm, op = parent[node]
                steps.append((perm, op))
            return _replay(steps[::-1])
        size = len(q1[0])
        ops = op_cache.get((size, phase))
        if ops is None:
            ops = op_cache[(size, phase)] = _normal_ops(size, k, alphabet, phase)
        for op, nphase in ops:
            perm, p1, p2 = None, q1, s2
            if isinstance(op, AddNode) and size > 1:
                perm, p1, p2 = _canonical(q1, s2)
            succ1 = a1.live_step(p1, op)
            if not succ1:
                continue
            nxt2 = set_steps.get((p2, op))
            if nxt2 is None:
                nxt2 = set_steps[(p2, op)] = a2.prune(t for q in p2 for t in a2.live_step(q, op))
            for r1 in succ1:
                if not fresh(r1, nxt2, nphase):
                    continue
                child = (r1, nxt2, nphase)
                parent[child] = (node, perm, op)
                queue.append(child)
    return None


def atg_inclusion_bounded(t1: MultiAnnotatedGraph, t2: MultiAnnotatedGraph, k: int) -> Verdict:
    """Decide inclusion of the pathwidth-``k`` fragments of two annotated
    languages. The witness of a failure is a graph in ``L(T1) \\ L(T2)``."""
    word = inclusion_counterexample(t1, t2, k)
    if word is None:
        return Verdict(True)
    return Verdict(False, graph_of_word(word, t1.graph.alphabet), "counterexample word found")
