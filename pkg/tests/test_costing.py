import random

import pytest

from qcost import gates as G
from qcost.catalog import decompose, fredkin_as_toffolis
from qcost.circuit import Circuit, WireRole
from qcost.costing import CostReport, linear_cost, pipeline_report, quantum_cost, report
from qcost.errors import UnknownKind
from qcost.optimizer import pipeline
from qcost.templates import builtin_set

from randgen import random_circuit


def test_linear_cost_examples():
    assert linear_cost(Circuit(3, fredkin_as_toffolis(0, 1, 2))) == 15
    assert linear_cost([G.cnot(2, 1), G.toffoli(0, 1, 2), G.cnot(2, 1)]) == 7
    assert linear_cost(Circuit(3)) == 0


def test_linear_cost_unknown_kind():
    class Fake:
        kind = "CCCX"

    with pytest.raises(UnknownKind):
        linear_cost([Fake()])


def test_quantum_cost_examples():
    assert quantum_cost([G.cnot(0, 1), G.cnot(1, 0), G.cnot(0, 1)]) == 1
    assert quantum_cost([G.swap(0, 1)]) == 1
    assert quantum_cost([G.toffoli(0, 1, 2)]) == 5
    assert quantum_cost(decompose(G.peres(0, 1, 2))) == 4
    assert quantum_cost([G.peres(0, 1, 2)]) == 4
    assert quantum_cost(Circuit(2)) == 0


def test_report_examples():
    assert report(Circuit(3)) == CostReport(0, 0, 0, 0, 0, 0)
    r = report(Circuit(3, [G.toffoli(0, 1, 2)]))
    assert (r.gate_count, r.linear_cost, r.quantum_cost) == (1, 5, 5)
    assert r.total_cost == r.gate_count + r.garbage_bits + r.quantum_cost == 6


def test_report_counts_roles():
    roles = (WireRole("a", 0, False), WireRole("b", None, True), WireRole("c", 1, True))
    r = report(Circuit(3, [G.cnot(0, 1)], roles))
    assert r.garbage_bits == 2 and r.constant_inputs == 2
    assert r.total_cost == 1 + 2 + 1
    assert r.as_dict()["constant_inputs"] == 2


def test_optimised_fredkin_total_cost():
    c = Circuit(3, fredkin_as_toffolis(0, 1, 2))
    out, trace = pipeline(c, builtin_set("MIXED"))
    r = pipeline_report(out, trace)
    assert (r.gate_count, r.garbage_bits, r.quantum_cost, r.total_cost) == (3, 0, 5, 8)
    assert r.linear_cost == 7


def test_invariants_on_random_circuits():
    rng = random.Random(17)
    for _ in range(60):
        c = random_circuit(rng, 5, 12)
        qc = quantum_cost(c)
        assert qc <= linear_cost(c)
        r = report(c)
        assert r.total_cost == r.gate_count + r.garbage_bits + r.quantum_cost
        perm = list(range(c.n))
        rng.shuffle(perm)
        assert quantum_cost([g.relabel(perm) for g in c]) == qc
        d = random_circuit(rng, c.n, 10)
        d = Circuit(c.n, [g for g in d if max(g.wires) < c.n])
        assert quantum_cost(list(c) + list(d)) <= qc + quantum_cost(d)
