"""Type graph logic: boolean combinations of type graph languages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .graph import Graph, flower, product, require_same_alphabet
from .homs import find_hom, has_hom
from .lang import Verdict

MAX_DEPTH = 16


@dataclass(frozen=True)
class Atom:
    graph: Graph


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    arg: "Formula"


Formula = Union[Atom, And, Or, Not]


@dataclass(frozen=True)
class Conjunct:
    positive: Graph
    negatives: tuple[Graph, ...]


@dataclass(frozen=True)
class DnfFormula:
    conjuncts: tuple[Conjunct, ...]


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Not):
        return 1 + depth(f.arg)
    return 1 + max(depth(f.left), depth(f.right))


def atoms(f: Formula) -> list[Graph]:
    if isinstance(f, Atom):
        return [f.graph]
    if isinstance(f, Not):
        return atoms(f.arg)
    return atoms(f.left) + atoms(f.right)


def alphabet_of(f: Formula) -> frozenset[str]:
    return require_same_alphabet(*atoms(f))


def tgl_member(g: Graph, f: Formula) -> bool:
    if isinstance(f, Atom):
        require_same_alphabet(g, f.graph)
        return has_hom(g, f.graph)
    if isinstance(f, Not):
        return not tgl_member(g, f.arg)
    if isinstance(f, And):
        return tgl_member(g, f.left) and tgl_member(g, f.right)
    if isinstance(f, Or):
        return tgl_member(g, f.left) or tgl_member(g, f.right)
    raise TypeError(f"not a formula: {f!r}")


def _literals(f: Formula, negate: bool) -> list[list[tuple[bool, Graph]]]:
    """DNF as a list of conjunctions of (positive?, graph) literals."""
    if isinstance(f, Atom):
        return [[(not negate, f.graph)]]
    if isinstance(f, Not):
        return _literals(f.arg, not negate)
    left, right = _literals(f.left, negate), _literals(f.right, negate)
    conjunctive = isinstance(f, And) != negate
    if conjunctive:
        return [a + b for a in left for b in right]
    return left + right


def tgl_to_dnf(f: Formula) -> DnfFormula:
    """Disjunctive normal form with exactly one positive graph per conjunct.

    Positive atoms of a conjunct are folded by product, starting from the
    flower graph, so conjuncts without positive atoms get the flower.
    """
    if depth(f) > MAX_DEPTH:
        raise ValueError(f"formula deeper than {MAX_DEPTH}")
    alphabet = alphabet_of(f)
    conjuncts = []
    for lits in _literals(f, False):
        pos = flower(alphabet)
        for positive, g in lits:
            if positive:
                pos = product(pos, g)[0]
        negs = tuple(g for positive, g in lits if not positive)
        conjuncts.append(Conjunct(pos, negs))
    return DnfFormula(tuple(conjuncts))


def dnf_member(g: Graph, d: DnfFormula) -> bool:
    return any(
        has_hom(g, c.positive) and not any(has_hom(g, n) for n in c.negatives)
        for c in d.conjuncts
    )


def tgl_empty(f: Formula) -> Verdict:
    """Decide ``L(F) = ∅``.

    A conjunct ``T0 ∧ ¬T1 ∧ … ∧ ¬Tn`` is unsatisfiable iff ``T0 -> Tk`` for
    some ``k``; otherwise ``T0`` itself is a member and is the witness.
    """
    for c in tgl_to_dnf(f).conjuncts:
        if not any(find_hom(c.positive, n) is not None for n in c.negatives):
            return Verdict(False, c.positive)
    return Verdict(True)


def tgl_included(f1: Formula, f2: Formula) -> Verdict:
    """``L(F1) ⊆ L(F2)`` iff ``F1 ∧ ¬F2`` is empty; a counterexample graph
    is returned when not included."""
    v = tgl_empty(And(f1, Not(f2)))
    return Verdict(v.result, v.witness)
