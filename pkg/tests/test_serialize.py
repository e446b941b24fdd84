import random

import pytest

from support import AB, EX_FOLD_G, RUN_T, TYPE_AB, graph, path, random_graph, random_injective_rule, random_spec, relabel_rule
from tglab.cospan import decompose, graph_of_word
from tglab.graph import identity
from tglab.serialize import (
    ParseError,
    annotated_from_json,
    annotated_to_json,
    formula_from_json,
    formula_to_json,
    graph_from_json,
    graph_to_json,
    morphism_from_json,
    morphism_to_json,
    rule_from_json,
    rule_to_json,
    verdict_to_json,
    word_from_json,
    word_to_json,
)
from tglab.tgl import And, Atom, Not, Or


def test_graph_round_trip():
    rng = random.Random(81)
    for _ in range(30):
        g = random_graph(rng, AB, 3, 4)
        assert graph_from_json(graph_to_json(g)) == g


def test_integer_node_ids():
    g = graph_from_json({"nodes": [1, 2], "edges": [{"id": "e", "src": 1, "tgt": 2, "label": "A"}]})
    assert g.nodes == ("1", "2") and g.alphabet == {"A"}


@pytest.mark.parametrize(
    "obj,msg",
    [
        ({"nodes": ["a"], "edges": [{"id": "e7", "src": "a", "tgt": "b", "label": "A"}]}, "e7"),
        ({"nodes": ["a"], "colour": "red"}, "unknown field"),
        ({"edges": []}, "missing field"),
        ({"nodes": ["a"], "edges": [{"id": "e", "src": "a", "tgt": "a"}]}, r"edges\[0\]: missing"),
        ({"nodes": [None]}, "node ids"),
        ({"nodes": ["a"], "alphabet": ["B"], "edges": [{"id": "e", "src": "a", "tgt": "a", "label": "A"}]}, "alphabet"),
        ([], "must be a dict"),
    ],
)
def test_graph_errors(obj, msg):
    with pytest.raises(ParseError, match=msg):
        graph_from_json(obj)


def test_morphism_round_trip_and_validation():
    m = identity(TYPE_AB)
    assert morphism_from_json(morphism_to_json(m), TYPE_AB, TYPE_AB) == m
    with pytest.raises(ParseError, match="not a graph morphism"):
        morphism_from_json({"nodes": {"1": "2", "2": "1"}, "edges": {"e0": "e0", "e1": "e1"}}, TYPE_AB, TYPE_AB)


def test_formula_round_trip():
    f = And(Not(Atom(path("A"))), Or(Atom(TYPE_AB), Atom(path("AB"))))
    assert formula_from_json(formula_to_json(f)) == f


def test_formula_nary_folds_left():
    a, b, c = ({"op": "atom", "graph": graph_to_json(g)} for g in (path("A"), path("B"), TYPE_AB))
    f = formula_from_json({"op": "or", "args": [a, b, c]})
    assert f == Or(Or(Atom(path("A")), Atom(path("B"))), Atom(TYPE_AB))


@pytest.mark.parametrize(
    "obj,msg",
    [
        ({"op": "xor", "args": []}, "unknown op"),
        ({"op": "not", "args": []}, "exactly one"),
        ({"op": "and", "args": [{"op": "atom", "graph": {"nodes": []}}]}, "at least two"),
        ({"op": "atom"}, "missing field"),
    ],
)
def test_formula_errors(obj, msg):
    with pytest.raises(ParseError, match=msg):
        formula_from_json(obj)


def test_annotated_round_trip():
    rng = random.Random(82)
    for t in [EX_FOLD_G, RUN_T] + [random_spec(rng, AB, 2, 3, 2, 2) for _ in range(20)]:
        assert annotated_from_json(annotated_to_json(t)) == t


def test_annotated_defaults():
    t = annotated_from_json({"nodes": ["a"], "n": 2, "pairs": [{"lower": {"a": 1}}]})
    (p,) = t.pairs
    assert p.lower.values == (1,) and p.upper.values == (3,)


@pytest.mark.parametrize(
    "pairs,msg",
    [
        ([{"lower": {"a": 2}, "upper": {"a": 1}}], r"pairs\[0\].*lower bound exceeds upper bound at item 'a'"),
        ([{"lower": {"zz": 1}}], r"pairs\[0\]\.lower.*zz"),
        ([{"upper": {"a": 3}}], r"pairs\[0\]\.upper"),
        ([{"lower": {}, "middle": {}}], "unknown field"),
    ],
)
def test_annotated_errors(pairs, msg):
    with pytest.raises(ParseError, match=msg):
        annotated_from_json({"nodes": ["a"], "n": 2, "pairs": pairs})


def test_bad_bound():
    with pytest.raises(ParseError, match="positive integer"):
        annotated_from_json({"nodes": [], "n": 0, "pairs": []})


def test_rule_round_trip():
    rng = random.Random(83)
    for r in [relabel_rule()] + [random_injective_rule(rng, AB) for _ in range(10)]:
        assert rule_from_json(rule_to_json(r)) == r


def test_rule_with_bad_morphism():
    obj = rule_to_json(relabel_rule())
    obj["phi_l"]["nodes"]["1"] = "9"
    with pytest.raises(ParseError, match="phi_l"):
        rule_from_json(obj)


def test_word_round_trip():
    w = decompose(path("AB"), 1)
    assert word_from_json(word_to_json(w)) == w
    assert word_to_json(w)[2] == {"op": "addedge", "src": 0, "tgt": 1, "label": "A"}
    assert graph_of_word(word_from_json(word_to_json(w))).edges[1].label == "B"


@pytest.mark.parametrize(
    "obj,msg",
    [
        ([{"op": "teleport"}], "unknown op"),
        ([{"op": "removenode", "index": "0"}], "non-negative"),
        ([{"op": "addnode", "extra": 1}], "unknown field"),
        ({"op": "addnode"}, "must be a list"),
    ],
)
def test_word_errors(obj, msg):
    with pytest.raises(ParseError, match=msg):
        word_from_json(obj)


def test_verdicts():
    assert verdict_to_json(True) == {"result": True, "witness": None}
    out = verdict_to_json(False, path("A"), timing_ms=1.5)
    assert out["witness"]["nodes"] == ["1", "2"] and out["timing_ms"] == 1.5
    with pytest.raises(TypeError):
        verdict_to_json(False, object())
