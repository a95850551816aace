"""Descent data, reachability of pullback spans and Van Kampen squares for finite sets and graphs."""

from .finset import (
    ChosenPullback,
    CommutingSquare,
    FinMap,
    FinSet,
    Partition,
    classify,
    coequalizer,
    compose,
    epi_mono_factorize,
    is_pullback,
    is_pushout,
    join,
    kernel_pair,
    pullback,
    pushout,
    pushout_square,
)
from .descent import (
    DescentData,
    DescentViolation,
    canonical_descent,
    kernel_of_realization,
    realize,
    restrict,
    validate,
)
from .vankampen import (
    AlternatingSequence,
    DomainCycle,
    InstanceCube,
    PullbackSpan,
    amalgamate,
    coherence_witness,
    cycle_condition_holds,
    evaluate_alternating,
    find_domain_cycle,
    has_separated_kernels,
    is_van_kampen,
    unreachable_span_for_cycle,
)
from .graphs import (
    FinGraph,
    GraphHom,
    GraphPullbackSpan,
    GraphSquare,
    amalgamate_graph,
    graph_pullback,
    graph_pushout,
    is_van_kampen_graph,
)
from .oracle import SearchBudget, brute_reachable, brute_van_kampen, brute_witness, spans_isomorphic
from .scenario import Scenario, ScenarioError, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "AlternatingSequence", "ChosenPullback", "CommutingSquare", "DescentData", "DescentViolation",
    "DomainCycle", "FinGraph", "FinMap", "FinSet", "GraphHom", "GraphPullbackSpan", "GraphSquare",
    "InstanceCube", "Partition", "PullbackSpan", "Scenario", "ScenarioError", "SearchBudget",
    "amalgamate", "amalgamate_graph", "brute_reachable", "brute_van_kampen", "brute_witness",
    "canonical_descent", "classify", "coequalizer", "coherence_witness", "compose",
    "cycle_condition_holds", "epi_mono_factorize", "evaluate_alternating", "find_domain_cycle",
    "graph_pullback", "graph_pushout", "has_separated_kernels", "is_pullback", "is_pushout",
    "is_van_kampen", "is_van_kampen_graph", "join", "kernel_of_realization", "kernel_pair",
    "parse_scenario", "pullback", "pushout", "pushout_square", "realize", "restrict",
    "spans_isomorphic", "unreachable_span_for_cycle", "validate",
]
