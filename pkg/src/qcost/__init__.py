"""Quantum-cost minimisation for reversible circuits over NCT/NCV gates."""
from .catalog import catalog_cost, decompose, is_self_inverse
from .circuit import (
    Circuit,
    Mode,
    WireRole,
    circuit_permutation,
    circuit_unitary,
    commutes,
    equivalent,
    inverse,
)
from .costing import CostReport, linear_cost, pipeline_report, quantum_cost, report
from .formats import parse_circuit, write_circuit, write_report
from .gates import Gate, Kind
from .optimizer import (
    Objective,
    PassOptions,
    PassTrace,
    pass_decompose,
    pass_delete,
    pass_garbage_elim,
    pass_merge,
    pass_modified_template_match,
    pass_move,
    pass_template_match,
    pipeline,
)
from .templates import Template, builtin_set, instantiate, load_templates, validate

__all__ = [
    "catalog_cost",
    "decompose",
    "is_self_inverse",
    "Circuit",
    "Mode",
    "WireRole",
    "circuit_permutation",
    "circuit_unitary",
    "commutes",
    "equivalent",
    "inverse",
    "CostReport",
    "linear_cost",
    "pipeline_report",
    "quantum_cost",
    "report",
    "parse_circuit",
    "write_circuit",
    "write_report",
    "Gate",
    "Kind",
    "Objective",
    "PassOptions",
    "PassTrace",
    "pass_decompose",
    "pass_delete",
    "pass_garbage_elim",
    "pass_merge",
    "pass_modified_template_match",
    "pass_move",
    "pass_template_match",
    "pipeline",
    "Template",
    "builtin_set",
    "instantiate",
    "load_templates",
    "validate",
]
