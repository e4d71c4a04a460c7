"""Dual-rail QDI logic synthesis, 4-phase simulation and gate-orphan analysis."""

from .analysis import (
    CostReport,
    IndicationClass,
    OrphanReport,
    OrphanTable,
    classify_indication,
    detect_orphans,
    estimate_cost,
    orphan_summary,
    render_table1,
)
from .logic import (
    BooleanFunction,
    Codeword,
    DsopCover,
    ProductTerm,
    RailLiteral,
    Spacer,
    dual_rail_cover,
    eval_cover_pair,
    eval_factored,
    from_truth_table,
    is_disjoint,
    parse_expr,
    parse_truth_table,
)
from .netlist import Gate, GateKind, Netlist, build_fixture, eval_netlist, parse_netlist, render_netlist, validate
from .sim import apply_partial, simulate_transaction
from .synth import (
    factored_to_netlist,
    fdims_factorize,
    safe_decompose,
    safe_to_netlist,
    synth_dims,
    synth_fdims,
    synth_safe,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "BooleanFunction",
    "Codeword",
    "CostReport",
    "DsopCover",
    "Gate",
    "GateKind",
    "IndicationClass",
    "Netlist",
    "OrphanReport",
    "OrphanTable",
    "ProductTerm",
    "RailLiteral",
    "Spacer",
    "apply_partial",
    "build_fixture",
    "classify_indication",
    "detect_orphans",
    "dual_rail_cover",
    "estimate_cost",
    "eval_cover_pair",
    "eval_factored",
    "eval_netlist",
    "factored_to_netlist",
    "fdims_factorize",
    "from_truth_table",
    "is_disjoint",
    "orphan_summary",
    "parse_expr",
    "parse_netlist",
    "parse_truth_table",
    "render_netlist",
    "render_table1",
    "safe_decompose",
    "safe_to_netlist",
    "simulate_transaction",
    "synth_dims",
    "synth_fdims",
    "synth_safe",
    "synthesize",
    "validate",
]
