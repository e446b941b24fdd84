"""JSON encodings of graphs, morphisms, formulas, annotated graphs, rules
and operation words. Parsing is strict: unknown fields and dangling ids
are errors."""

from __future__ import annotations

from typing import Any

from .annotated import (
    Annotation,
    AnnotationPair,
    InvalidAnnotation,
    MultiAnnotatedGraph,
    format_value,
    parse_value,
)
from .cospan import AddEdge, AddNode, AtomicOp, RemoveNode
from .dpo import ClosureViolation, DpoRule
from .graph import Edge, Graph, GraphError, GraphMorphism, validate_morphism
from .tgl import And, Atom, Formula, Not, Or


class ParseError(ValueError):
    pass


def _expect(obj, kind, what: str):
    if not isinstance(obj, kind):
        raise ParseError(f"{what} must be a {kind.__name__ if isinstance(kind, type) else 'value'}")
    return obj


def _fields(obj: dict, allowed: set[str], required: set[str], what: str):
    _expect(obj, dict, what)
    extra = set(obj) - allowed
    if extra:
        raise ParseError(f"{what}: unknown field(s) {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise ParseError(f"{what}: missing field(s) {sorted(missing)}")


GRAPH_FIELDS = {"alphabet", "nodes", "edges"}


def graph_to_json(g: Graph) -> dict:
    return {
        "alphabet": sorted(g.alphabet),
        "nodes": list(g.nodes),
        "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt, "label": e.label} for e in g.edges],
    }


def graph_from_json(obj: Any, *, extra_fields: set[str] = frozenset(), what: str = "graph") -> Graph:
    _fields(obj, GRAPH_FIELDS | set(extra_fields), {"nodes"}, what)
    alphabet = obj.get("alphabet")
    nodes = []
    for i, v in enumerate(_expect(obj["nodes"], list, f"{what}.nodes")):
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            raise ParseError(f"{what}.nodes[{i}]: node ids are strings or integers")
        nodes.append(str(v))
    edges = []
    for i, raw in enumerate(_expect(obj.get("edges", []), list, f"{what}.edges")):
        _fields(raw, {"id", "src", "tgt", "label"}, {"id", "src", "tgt", "label"}, f"{what}.edges[{i}]")
        edges.append(Edge(str(raw["id"]), str(raw["src"]), str(raw["tgt"]), str(raw["label"])))
    if alphabet is not None:
        alphabet = frozenset(_expect(alphabet, list, f"{what}.alphabet"))
    try:
        return Graph(tuple(nodes), tuple(edges), alphabet)
    except GraphError as exc:
        raise ParseError(f"{what}: {exc}") from None


def morphism_to_json(m: GraphMorphism) -> dict:
    return {"nodes": dict(m.node_map), "edges": dict(m.edge_map)}


def morphism_from_json(obj: Any, domain: Graph, codomain: Graph, what: str = "morphism") -> GraphMorphism:
    _fields(obj, {"nodes", "edges"}, {"nodes"}, what)
    m = GraphMorphism(
        domain,
        codomain,
        {str(k): str(v) for k, v in _expect(obj["nodes"], dict, f"{what}.nodes").items()},
        {str(k): str(v) for k, v in _expect(obj.get("edges", {}), dict, f"{what}.edges").items()},
    )
    try:
        problem = validate_morphism(m)
    except GraphError as exc:
        raise ParseError(f"{what}: {exc}") from None
    if problem is not None:
        raise ParseError(f"{what}: not a graph morphism ({problem})")
    return m


def formula_to_json(f: Formula) -> dict:
    if isinstance(f, Atom):
        return {"op": "atom", "graph": graph_to_json(f.graph)}
    if isinstance(f, Not):
        return {"op": "not", "args": [formula_to_json(f.arg)]}
    op = "and" if isinstance(f, And) else "or"
    return {"op": op, "args": [formula_to_json(f.left), formula_to_json(f.right)]}


def formula_from_json(obj: Any, what: str = "formula") -> Formula:
    _expect(obj, dict, what)
    op = obj.get("op")
    if op == "atom":
        _fields(obj, {"op", "graph"}, {"op", "graph"}, what)
        return Atom(graph_from_json(obj["graph"], what=f"{what}.graph"))
    _fields(obj, {"op", "args"}, {"op", "args"}, what)
    args = [
        formula_from_json(a, f"{what}.args[{i}]")
        for i, a in enumerate(_expect(obj["args"], list, f"{what}.args"))
    ]
    if op == "not":
        if len(args) != 1:
            raise ParseError(f"{what}: 'not' takes exactly one argument")
        return Not(args[0])
    if op in ("and", "or"):
        if len(args) < 2:
            raise ParseError(f"{what}: '{op}' takes at least two arguments")
        node = And if op == "and" else Or
        out = args[0]
        for a in args[1:]:
            out = node(out, a)
        return out
    raise ParseError(f"{what}: unknown op {op!r}")


def annotated_to_json(t: MultiAnnotatedGraph) -> dict:
    obj = graph_to_json(t.graph)
    obj["n"] = t.n
    obj["pairs"] = [
        {
            "lower": {x: format_value(v, t.n) for x, v in p.lower.as_dict().items()},
            "upper": {x: format_value(v, t.n) for x, v in p.upper.as_dict().items()},
        }
        for p in t.pairs
    ]
    return obj


def annotated_from_json(obj: Any, what: str = "annotated graph") -> MultiAnnotatedGraph:
    """Items missing from ``lower`` default to 0, from ``upper`` to many."""
    _fields(obj, GRAPH_FIELDS | {"n", "pairs"}, {"nodes", "n", "pairs"}, what)
    g = graph_from_json(obj, extra_fields={"n", "pairs"}, what=what)
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"{what}: n must be a positive integer")
    pairs = []
    for i, raw in enumerate(_expect(obj["pairs"], list, f"{what}.pairs")):
        where = f"{what}.pairs[{i}]"
        _fields(raw, {"lower", "upper"}, set(), where)
        bounds = []
        for side, default in (("lower", 0), ("upper", n + 1)):
            values = _expect(raw.get(side, {}), dict, f"{where}.{side}")
            try:
                parsed = {str(x): parse_value(v, n) for x, v in values.items()}
                bounds.append(Annotation.from_mapping(g, n, parsed, default))
            except InvalidAnnotation as exc:
                raise ParseError(f"{where}.{side}: {exc}") from None
        try:
            pairs.append(AnnotationPair(*bounds))
        except InvalidAnnotation as exc:
            raise ParseError(f"{where}: {exc}") from None
    return MultiAnnotatedGraph(g, n, tuple(pairs))


def rule_to_json(rule: DpoRule) -> dict:
    return {
        "left": graph_to_json(rule.left),
        "interface": graph_to_json(rule.interface),
        "right": graph_to_json(rule.right),
        "phi_l": morphism_to_json(rule.phi_l),
        "phi_r": morphism_to_json(rule.phi_r),
    }


def rule_from_json(obj: Any, what: str = "rule") -> DpoRule:
    keys = {"left", "interface", "right", "phi_l", "phi_r"}
    _fields(obj, keys, keys, what)
    left = graph_from_json(obj["left"], what=f"{what}.left")
    interface = graph_from_json(obj["interface"], what=f"{what}.interface")
    right = graph_from_json(obj["right"], what=f"{what}.right")
    phi_l = morphism_from_json(obj["phi_l"], interface, left, f"{what}.phi_l")
    phi_r = morphism_from_json(obj["phi_r"], interface, right, f"{what}.phi_r")
    try:
        return DpoRule(left, interface, right, phi_l, phi_r)
    except (GraphError, ValueError) as exc:
        raise ParseError(f"{what}: {exc}") from None


def word_to_json(word) -> list:
    out = []
    for op in word:
        if isinstance(op, AddNode):
            out.append({"op": "addnode"})
        elif isinstance(op, AddEdge):
            out.append({"op": "addedge", "src": op.src, "tgt": op.tgt, "label": op.label})
        else:
            out.append({"op": "removenode", "index": op.index})
    return out


def _index(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise ParseError(f"{where}: interface positions are non-negative integers")
    return v


def word_from_json(obj: Any, what: str = "word") -> tuple[AtomicOp, ...]:
    ops = []
    for i, raw in enumerate(_expect(obj, list, what)):
        where = f"{what}[{i}]"
        _expect(raw, dict, where)
        kind = raw.get("op")
        if kind == "addnode":
            _fields(raw, {"op"}, {"op"}, where)
            ops.append(AddNode())
        elif kind == "addedge":
            _fields(raw, {"op", "src", "tgt", "label"}, {"op", "src", "tgt", "label"}, where)
            ops.append(AddEdge(_index(raw["src"], where), _index(raw["tgt"], where), str(raw["label"])))
        elif kind == "removenode":
            _fields(raw, {"op", "index"}, {"op", "index"}, where)
            ops.append(RemoveNode(_index(raw["index"], where)))
        else:
            raise ParseError(f"{where}: unknown op {kind!r}")
    return tuple(ops)


def witness_to_json(w: Any) -> Any:
    """Encode whatever a verdict carries as its witness."""
    if w is None:
        return None
    if isinstance(w, Graph):
        return graph_to_json(w)
    if isinstance(w, GraphMorphism):
        return morphism_to_json(w)
    if isinstance(w, ClosureViolation):
        obj = {"before": graph_to_json(w.before), "after": graph_to_json(w.after)}
        if isinstance(w.detail, GraphMorphism):
            obj["t_l"] = morphism_to_json(w.detail)
        return obj
    if isinstance(w, tuple) and all(isinstance(op, (AddNode, AddEdge, RemoveNode)) for op in w):
        return word_to_json(w)
    if isinstance(w, dict):
        return {k: witness_to_json(v) for k, v in w.items()}
    raise TypeError(f"cannot encode witness {w!r}")


def verdict_to_json(result, witness=None, **extra) -> dict:
    obj = {"result": result, "witness": witness_to_json(witness)}
    obj.update(extra)
    return obj
