"""Command-line front end: ``tglab <group> <command> [options]``.

Every invocation prints one JSON document on stdout. Exit codes:
0 true / closed / included, 1 false / violation, 2 unknown,
64 usage error, 65 malformed input, 70 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable

from .annotated import (
    MultiAnnotatedGraph,
    MultiplicityMismatch,
    atg_empty,
    atg_inclusion_sufficient,
    atg_member,
)
from .canon import GraphUniverse, enumerate_graphs
from .cospan import atg_inclusion_bounded, decompose, pathwidth
from .dpo import closure_oracle, rg_closed_under_rule, tg_closed_under_rule
from .graph import AlphabetMismatch, Graph, coproduct, flower, product
from .homs import core, has_hom, hom_equivalent
from .lang import (
    RestrictionGraphSpec,
    TypeGraphSpec,
    Verdict,
    duality_check_bounded,
    rg_empty,
    rg_included,
    rg_member,
    tg_empty,
    tg_included,
    tg_member,
)
from .serialize import (
    ParseError,
    annotated_from_json,
    formula_from_json,
    graph_from_json,
    graph_to_json,
    morphism_to_json,
    rule_from_json,
    verdict_to_json,
    word_to_json,
)
from .tgl import alphabet_of, tgl_empty, tgl_included, tgl_member

EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_DISAGREE = 64, 65, 70

log = logging.getLogger("tglab")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class Disagreement(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# input ---------------------------------------------------------------------


def _load(path: str, decoder: Callable[[Any], Any]):
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}") from None
    try:
        return decoder(raw)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_graph(path):
    return _load(path, graph_from_json)


def load_annotated(path):
    return _load(path, annotated_from_json)


def load_formula(path):
    def decode(raw):
        f = formula_from_json(raw)
        try:
            alphabet_of(f)
        except ValueError as exc:
            raise ParseError(f"atoms disagree: {exc}") from None
        return f

    return _load(path, decode)


def load_rule(path):
    return _load(path, rule_from_json)


def _alphabet(x) -> frozenset:
    if isinstance(x, Graph):
        return x.alphabet
    if isinstance(x, MultiAnnotatedGraph):
        return x.graph.alphabet
    return alphabet_of(x)


def same_alphabet(**named):
    """Raise an input error naming both files and a label they disagree on."""
    items = list(named.items())
    first_path, first = items[0]
    a = _alphabet(first)
    for path, x in items[1:]:
        b = _alphabet(x)
        if a != b:
            label = sorted(a ^ b)[0]
            raise InputError(
                f"alphabet mismatch: {first_path} has {sorted(a)} but {path} has {sorted(b)} "
                f"(label {label!r})"
            )


def same_n(**named):
    items = list(named.items())
    first_path, first = items[0]
    for path, x in items[1:]:
        if x.n != first.n:
            raise InputError(f"multiplicity mismatch: {first_path} has n={first.n} but {path} has n={x.n}")


def parse_universe(text: str | None, alphabet) -> GraphUniverse | None:
    if text is None:
        return None
    try:
        nodes, edges = (int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"--universe expects NODES,EDGES, got {text!r}") from None
    return GraphUniverse(frozenset(alphabet), nodes, edges)


# cross-checks ---------------------------------------------------------------


def _agree(claim: bool, counter: Graph | None, what: str):
    """``claim`` says no counterexample exists; ``counter`` is the first
    one found in the universe."""
    if claim and counter is not None:
        raise Disagreement(f"{what}: verdict is true but the universe holds a counterexample")


def _first(u: GraphUniverse, pred) -> Graph | None:
    for g in enumerate_graphs(u):
        if pred(g):
            return g
    return None


def _check_witness(ok: bool, what: str):
    if not ok:
        raise Disagreement(f"{what}: witness does not re-validate")


# commands --------------------------------------------------------------------


def _verdict(v: Verdict) -> tuple[Any, Any]:
    return v.result, v.witness


def cmd_tg_member(a):
    g, t = load_graph(a.graph), load_graph(a.type)
    same_alphabet(**{a.graph: g, a.type: t})
    return tg_member(g, t), None, None


def cmd_tg_empty(a):
    t = load_graph(a.type)
    v = tg_empty(t)
    u = parse_universe(a.universe, t.alphabet)
    if u is not None:
        _check_witness(tg_member(v.witness, t), "tg empty")
    return v.result, v.witness, u


def cmd_tg_include(a):
    t1, t2 = load_graph(a.first), load_graph(a.second)
    same_alphabet(**{a.first: t1, a.second: t2})
    v = tg_included(t1, t2)
    u = parse_universe(a.universe, t1.alphabet)
    if u is not None:
        _agree(v.result, _first(u, lambda g: has_hom(g, t1) and not has_hom(g, t2)), "tg include")
        if not v.result:
            _check_witness(tg_member(v.witness, t1) and not tg_member(v.witness, t2), "tg include")
    return v.result, v.witness, u


def cmd_rg_member(a):
    g, r = load_graph(a.graph), load_graph(a.restriction)
    same_alphabet(**{a.graph: g, a.restriction: r})
    return rg_member(g, r), None, None


def cmd_rg_empty(a):
    r = load_graph(a.restriction)
    v = rg_empty(r)
    u = parse_universe(a.universe, r.alphabet)
    if u is not None:
        _agree(v.result, _first(u, lambda g: rg_member(g, r)), "rg empty")
    return v.result, v.witness, u


def cmd_rg_include(a):
    r1, r2 = load_graph(a.first), load_graph(a.second)
    same_alphabet(**{a.first: r1, a.second: r2})
    u = parse_universe(a.universe, r1.alphabet)
    v = rg_included(r1, r2, u)
    if u is not None:
        _agree(v.result, _first(u, lambda g: rg_member(g, r1) and not rg_member(g, r2)), "rg include")
        if not v.result:
            _check_witness(rg_member(v.witness, r1) and not rg_member(v.witness, r2), "rg include")
    return v.result, v.witness, u


def cmd_tgl_member(a):
    g, f = load_graph(a.graph), load_formula(a.formula)
    same_alphabet(**{a.graph: g, a.formula: f})
    return tgl_member(g, f), None, None


def cmd_tgl_empty(a):
    f = load_formula(a.formula)
    v = tgl_empty(f)
    u = parse_universe(a.universe, alphabet_of(f))
    if u is not None:
        _agree(v.result, _first(u, lambda g: tgl_member(g, f)), "tgl empty")
        if not v.result:
            _check_witness(tgl_member(v.witness, f), "tgl empty")
    return v.result, v.witness, u


def cmd_tgl_include(a):
    f1, f2 = load_formula(a.first), load_formula(a.second)
    same_alphabet(**{a.first: f1, a.second: f2})
    v = tgl_included(f1, f2)
    u = parse_universe(a.universe, alphabet_of(f1))
    if u is not None:
        _agree(v.result, _first(u, lambda g: tgl_member(g, f1) and not tgl_member(g, f2)), "tgl include")
        if not v.result:
            _check_witness(tgl_member(v.witness, f1) and not tgl_member(v.witness, f2), "tgl include")
    return v.result, v.witness, u


def cmd_atg_member(a):
    g, t = load_graph(a.graph), load_annotated(a.type)
    same_alphabet(**{a.graph: g, a.type: t})
    return _verdict(atg_member(g, t)) + (None,)


def cmd_atg_empty(a):
    t = load_annotated(a.type)
    v = atg_empty(t)
    u = parse_universe(a.universe, t.graph.alphabet)
    if u is not None:
        _agree(v.result, _first(u, lambda g: atg_member(g, t).result), "atg empty")
        if not v.result:
            _check_witness(atg_member(v.witness, t).result, "atg empty")
    return v.result, v.witness, u


def _atg_pair(a):
    t1, t2 = load_annotated(a.first), load_annotated(a.second)
    same_alphabet(**{a.first: t1, a.second: t2})
    same_n(**{a.first: t1, a.second: t2})
    return t1, t2


def _atg_counter(t1, t2, u, k=None):
    def bad(g):
        if k is not None and pathwidth(g) > k:
            return False
        return atg_member(g, t1).result and not atg_member(g, t2).result

    return _first(u, bad)


def cmd_atg_include_sufficient(a):
    t1, t2 = _atg_pair(a)
    v = atg_inclusion_sufficient(t1, t2)
    result = True if v.result else "unknown"
    u = parse_universe(a.universe, t1.graph.alphabet)
    if u is not None:
        _agree(v.result is True, _atg_counter(t1, t2, u), "atg include-sufficient")
    return result, v.witness, u


def cmd_atg_include_bounded(a):
    t1, t2 = _atg_pair(a)
    v = atg_inclusion_bounded(t1, t2, a.k)
    u = parse_universe(a.universe, t1.graph.alphabet)
    if u is not None:
        _agree(v.result, _atg_counter(t1, t2, u, a.k), "atg include-bounded")
        if not v.result:
            w = v.witness
            _check_witness(
                atg_member(w, t1).result and not atg_member(w, t2).result, "atg include-bounded"
            )
    return v.result, v.witness, u


def cmd_dpo_closed(a):
    rule = load_rule(a.rule)
    if (a.type is None) == (a.restriction is None):
        raise UsageError("dpo closed needs exactly one of --type or --restriction")
    if a.type is not None:
        t = load_graph(a.type)
        same_alphabet(**{a.rule: rule.left, a.type: t})
        spec, v = TypeGraphSpec(t), tg_closed_under_rule(t, rule)
    else:
        r = load_graph(a.restriction)
        same_alphabet(**{a.rule: rule.left, a.restriction: r})
        if not rule.is_injective():
            raise InputError(f"{a.rule}: restriction closure needs injective rule morphisms")
        spec, v = RestrictionGraphSpec(r), rg_closed_under_rule(r, rule)
    u = parse_universe(a.universe, rule.alphabet)
    if u is not None:
        oracle = closure_oracle(spec, rule, u)
        if v.result and not oracle.result:
            raise Disagreement("dpo closed: checker says closed but a bounded rewrite leaves the language")
    return (True if v.result else "violation"), v.witness, u


def cmd_core(a):
    g = load_graph(a.graph)
    c, retraction, _ = core(g)
    u = parse_universe(a.universe, g.alphabet)
    if u is not None:
        _check_witness(hom_equivalent(g, c), "core")
    return True, {"graph": graph_to_json(c), "retraction": morphism_to_json(retraction)}, u


def cmd_product(a):
    g1, g2 = load_graph(a.first), load_graph(a.second)
    same_alphabet(**{a.first: g1, a.second: g2})
    p, _, _ = product(g1, g2)
    u = parse_universe(a.universe, g1.alphabet)
    if u is not None:
        _agree(True, _first(u, lambda g: has_hom(g, p) != (has_hom(g, g1) and has_hom(g, g2))), "product")
    return True, graph_to_json(p), u


def cmd_coproduct(a):
    g1, g2 = load_graph(a.first), load_graph(a.second)
    same_alphabet(**{a.first: g1, a.second: g2})
    c, _, _ = coproduct(g1, g2)
    u = parse_universe(a.universe, g1.alphabet)
    if u is not None:
        _agree(True, _first(u, lambda g: has_hom(c, g) != (has_hom(g1, g) and has_hom(g2, g))), "coproduct")
    return True, graph_to_json(c), u


def cmd_flower(a):
    labels = [s for s in a.alphabet.split(",") if s]
    return True, graph_to_json(flower(labels)), None


def cmd_duality(a):
    r, t = load_graph(a.restriction), load_graph(a.type)
    same_alphabet(**{a.restriction: r, a.type: t})
    u = parse_universe(a.universe or "3,3", r.alphabet)
    v = duality_check_bounded(r, t, u)
    return v.result, v.witness, u


def cmd_decompose(a):
    g = load_graph(a.graph)
    try:
        word = decompose(g, a.k)
    except ValueError as exc:
        raise InputError(f"{a.graph}: {exc}") from None
    if word is None:
        return False, None, None
    return True, word_to_json(word), None


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress logs on stderr")
    common.add_argument("--universe", metavar="NODES,EDGES", help="cross-check against a bounded oracle")

    p = _Parser(prog="tglab", description="Decision procedures for graph languages.", parents=[common])
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(parent, name, func, help_text):
        sp = parent.add_parser(name, help=help_text, parents=[common])
        sp.set_defaults(func=func)
        return sp

    def two(sp):
        sp.add_argument("-1", dest="first", required=True)
        sp.add_argument("-2", dest="second", required=True)
        return sp

    tg = groups.add_parser("tg", help="type graph languages").add_subparsers(dest="cmd", required=True)
    sp = sub(tg, "member", cmd_tg_member, "G -> T?")
    sp.add_argument("-g", dest="graph", required=True)
    sp.add_argument("-t", dest="type", required=True)
    sub(tg, "empty", cmd_tg_empty, "L(T) empty?").add_argument("-t", dest="type", required=True)
    two(sub(tg, "include", cmd_tg_include, "L(T1) within L(T2)?"))

    rg = groups.add_parser("rg", help="restriction graph languages").add_subparsers(dest="cmd", required=True)
    sp = sub(rg, "member", cmd_rg_member, "R -/-> G?")
    sp.add_argument("-g", dest="graph", required=True)
    sp.add_argument("-r", dest="restriction", required=True)
    sub(rg, "empty", cmd_rg_empty, "L_R(R) empty?").add_argument("-r", dest="restriction", required=True)
    two(sub(rg, "include", cmd_rg_include, "L_R(R1) within L_R(R2)?"))

    tgl = groups.add_parser("tgl", help="type graph logic").add_subparsers(dest="cmd", required=True)
    sp = sub(tgl, "member", cmd_tgl_member, "G satisfies F?")
    sp.add_argument("-g", dest="graph", required=True)
    sp.add_argument("-f", dest="formula", required=True)
    sub(tgl, "empty", cmd_tgl_empty, "F unsatisfiable?").add_argument("-f", dest="formula", required=True)
    two(sub(tgl, "include", cmd_tgl_include, "F1 implies F2?"))

    atg = groups.add_parser("atg", help="annotated type graphs").add_subparsers(dest="cmd", required=True)
    sp = sub(atg, "member", cmd_atg_member, "G in L(T[M])?")
    sp.add_argument("-g", dest="graph", required=True)
    sp.add_argument("-t", dest="type", required=True)
    sub(atg, "empty", cmd_atg_empty, "L(T[M]) empty?").add_argument("-t", dest="type", required=True)
    two(sub(atg, "include-sufficient", cmd_atg_include_sufficient, "legal morphism T1 -> T2?"))
    sp = two(sub(atg, "include-bounded", cmd_atg_include_bounded, "inclusion up to pathwidth k"))
    sp.add_argument("-k", type=int, required=True)

    dpo = groups.add_parser("dpo", help="rewriting closure").add_subparsers(dest="cmd", required=True)
    sp = sub(dpo, "closed", cmd_dpo_closed, "language closed under the rule?")
    sp.add_argument("--rule", required=True)
    sp.add_argument("-t", "--type", dest="type")
    sp.add_argument("-r", "--restriction", dest="restriction")

    sub(groups, "core", cmd_core, "core of a graph").add_argument("-g", dest="graph", required=True)
    two(sub(groups, "product", cmd_product, "categorical product"))
    two(sub(groups, "coproduct", cmd_coproduct, "disjoint union"))
    sub(groups, "flower", cmd_flower, "flower graph").add_argument("--alphabet", required=True)
    sp = sub(groups, "duality-check", cmd_duality, "bounded duality pair test")
    sp.add_argument("-r", dest="restriction", required=True)
    sp.add_argument("-t", dest="type", required=True)
    sp = sub(groups, "decompose", cmd_decompose, "cospan word of bounded width")
    sp.add_argument("-g", dest="graph", required=True)
    sp.add_argument("-k", type=int, required=True)
    return p


def _exit_code(result) -> int:
    if result is True:
        return EXIT_TRUE
    if result == "unknown":
        return EXIT_UNKNOWN
    return EXIT_FALSE


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    quiet = "--quiet" in (argv if argv is not None else sys.argv[1:])
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO, stream=sys.stderr, format="tglab: %(message)s", force=True
    )

    def emit(obj, code):
        stdout.write(json.dumps(obj, sort_keys=True) + "\n")
        return code

    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        result, witness, universe = args.func(args)
    except UsageError as exc:
        log.error("usage: %s", exc)
        return emit({"error": "usage", "message": str(exc)}, EXIT_USAGE)
    except (InputError, AlphabetMismatch, MultiplicityMismatch) as exc:
        log.error("%s", exc)
        return emit({"error": "input", "message": str(exc)}, EXIT_DATA)
    except Disagreement as exc:
        log.error("cross-check failed: %s", exc)
        return emit({"error": "disagreement", "message": str(exc)}, EXIT_DISAGREE)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    ms = round((time.perf_counter() - start) * 1000, 3)
    extra = {"timing_ms": ms}
    if universe is not None:
        extra["crosscheck"] = {
            "nodes": universe.max_nodes,
            "edges": universe.max_edges,
            "graphs": len(enumerate_graphs(universe)),
            "agrees": True,
        }
    log.info("%s -> %s in %.1f ms", " ".join(filter(None, [args.group, getattr(args, "cmd", None)])), result, ms)
    out = verdict_to_json(result, witness if not isinstance(witness, (dict, list)) else None, **extra)
    if isinstance(witness, (dict, list)):
        out["witness"] = witness
    return emit(out, _exit_code(result))


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
