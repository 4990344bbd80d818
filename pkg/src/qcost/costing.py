"""Cost metrics for reversible and quantum circuits."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

from .catalog import catalog_cost
from .circuit import Circuit
from .gates import Gate
from .optimizer import PassOptions, PassTrace, segment_merge


def linear_cost(gates: Circuit | Iterable[Gate]) -> int:
    """Sum of catalog costs; blind to any merging opportunity."""
    return sum(catalog_cost(g.kind) for g in gates)


def quantum_cost(gates: Circuit | Iterable[Gate], move_window: int = PassOptions.move_window) -> int:
    """Gate count after NCV decomposition and merging of 1-/2-qubit runs.

    No template search is involved. Merging is greedy within runs of the
    gate list, with the cut points between runs chosen to minimise the count.
    """
    return len(segment_merge(list(gates), move_window))


@dataclass(frozen=True)
class CostReport:
    gate_count: int
    linear_cost: int
    quantum_cost: int
    garbage_bits: int
    constant_inputs: int
    total_cost: int

    def as_dict(self) -> dict:
        return asdict(self)


def total_cost(gate_count: int, garbage_bits: int, qcost: int) -> int:
    # Constant inputs are reported but not charged.
    return gate_count + garbage_bits + qcost


def report(c: Circuit, move_window: int = PassOptions.move_window) -> CostReport:
    """Cost report of ``c`` taken as it stands."""
    qc = quantum_cost(c, move_window)
    garbage = len(c.garbage_wires)
    return CostReport(
        gate_count=len(c),
        linear_cost=linear_cost(c),
        quantum_cost=qc,
        garbage_bits=garbage,
        constant_inputs=len(c.constant_wires),
        total_cost=total_cost(len(c), garbage, qc),
    )


def pipeline_report(optimised: Circuit, trace: PassTrace, move_window: int = PassOptions.move_window) -> CostReport:
    """Report for a pipeline result.

    Gate count and linear cost describe the reversible circuit handed to the
    quantum stage (after pre-optimisation); the quantum cost is that of the
    final merged circuit.
    """
    rev = trace.reversible if trace.reversible is not None else optimised
    qc = quantum_cost(optimised, move_window)
    garbage = len(optimised.garbage_wires)
    return CostReport(
        gate_count=len(rev),
        linear_cost=linear_cost(rev),
        quantum_cost=qc,
        garbage_bits=garbage,
        constant_inputs=len(optimised.constant_wires),
        total_cost=total_cost(len(rev), garbage, qc),
    )
