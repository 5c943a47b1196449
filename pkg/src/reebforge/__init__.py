"""Realize genus-labeled graphs as Reeb graphs of functions on closed 3-manifolds."""
from .assembler import RealizationPlan, assemble, manifold_chi, plan_invariants, plan_to_json
from .graph_model import (
    GoodFunction,
    LabeledGraph,
    classify_vertices,
    export_dot,
    format_graph,
    has_good_function,
    parse_graph,
    synthesize_good_function,
    validate,
)
from .reeb_sweep import ReebGraph, find_isomorphism, sweep, verify_realization

__version__ = "0.1.0"
