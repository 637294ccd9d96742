"""Nonattracting subgroup systems and weak attraction for relative train
track representatives of free group outer automorphisms."""

from .attraction import (AttractionVerdict, DualitySetup, InconclusiveError, all_circuits,
                         attracted_circuit, attracted_path, concat_closure_audit, duality_audit,
                         theorem_f_audit, uniform_m)
from .graph_core import MarkedGraph, StratumKind, Subgraph, components, free_basis, validate_graph
from .nielsen import NielsenData, NielsenKind, classify, declared_nielsen, search_inp, verify_nielsen
from .nonattracting import (NonattractingSystem, build_K, build_Z, edge_attracted, member,
                            nonattracting_system, sigma_window_table, window_filter)
from .paths import Circuit, cyclic_reduce, format_word, occurrences, parse_word, tighten, windows
from .repfile import load, load_example
from .toprep import TopRep, f_sharp, iterate, pf_growth, tile, transition_matrix, validate_rep

__version__ = "0.1.0"

__all__ = [
    "AttractionVerdict",
    "DualitySetup",
    "InconclusiveError",
    "all_circuits",
    "attracted_circuit",
    "attracted_path",
    "concat_closure_audit",
    "duality_audit",
    "theorem_f_audit",
    "uniform_m",
    "MarkedGraph",
    "StratumKind",
    "Subgraph",
    "components",
    "free_basis",
    "validate_graph",
    "NielsenData",
    "NielsenKind",
    "classify",
    "declared_nielsen",
    "search_inp",
    "verify_nielsen",
    "NonattractingSystem",
    "build_K",
    "build_Z",
    "edge_attracted",
    "member",
    "nonattracting_system",
    "sigma_window_table",
    "window_filter",
    "Circuit",
    "cyclic_reduce",
    "format_word",
    "occurrences",
    "parse_word",
    "tighten",
    "windows",
    "load",
    "load_example",
    "TopRep",
    "f_sharp",
    "iterate",
    "pf_growth",
    "tile",
    "transition_matrix",
    "validate_rep",
]
