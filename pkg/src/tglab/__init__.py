"""Graph languages given by type graphs, restriction graphs, boolean
combinations of type graphs and multiplicity-annotated type graphs, with
closure checks for double-pushout rewriting and a counting cospan
automaton for bounded pathwidth."""

from .annotated import (
    Annotation,
    AnnotationPair,
    InvalidAnnotation,
    MultiAnnotatedGraph,
    MultiplicityMismatch,
    Mult,
    atg_empty,
    atg_inclusion_sufficient,
    atg_intersect,
    atg_member,
    atg_union,
    emptiness_witness,
    is_legal,
    push_annotation,
    reduce_annotation,
    standard_annotation,
)
from .canon import GraphUniverse, canonical_form, enumerate_graphs, is_isomorphic
from .cospan import (
    AddEdge,
    AddNode,
    CountingAutomaton,
    RemoveNode,
    accepts,
    atg_inclusion_bounded,
    decompose,
    graph_of_word,
    pathwidth,
)
from .dpo import (
    DpoRule,
    apply_rule,
    closure_oracle,
    enumerate_jointly_surjective,
    pushout,
    pushout_complement,
    rg_closed_under_rule,
    tg_closed_under_rule,
)
from .graph import (
    AlphabetMismatch,
    Edge,
    Graph,
    GraphError,
    GraphMorphism,
    compose,
    coproduct,
    empty_graph,
    flower,
    identity,
    product,
)
from .homs import core, count_homs, enumerate_homs, find_hom, has_hom, hom_equivalent, is_core
from .lang import (
    RestrictionGraphSpec,
    TypeGraphSpec,
    Verdict,
    core_is_tree,
    duality_check_bounded,
    is_tree,
    rg_empty,
    rg_included,
    rg_member,
    tg_empty,
    tg_included,
    tg_member,
)
from .tgl import And, Atom, Not, Or, tgl_empty, tgl_included, tgl_member, tgl_to_dnf

__version__ = "0.1.0"
