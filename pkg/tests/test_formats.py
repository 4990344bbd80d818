import json
import random

import numpy as np
import pytest

from qcost import gates as G
from qcost.circuit import Circuit, WireRole, circuit_unitary
from qcost.costing import pipeline_report, report
from qcost.errors import DuplicateWireInGate, ParseError, UndeclaredVariable, UnserializableGate, UnsupportedGate
from qcost.formats import REPORT_KEYS, parse_circuit, write_circuit, write_report
from qcost.gates import merged
from qcost.optimizer import PassTrace, pipeline
from qcost.templates import builtin_set

import oracle
from randgen import random_circuit


def body(lines, n=3, extra=""):
    names = " ".join("abcdef"[:n])
    return f".version 1.0\n.numvars {n}\n.variables {names}\n{extra}.begin\n{lines}\n.end\n"


def test_parse_toffoli():
    c = parse_circuit(body("t3 a b c"))
    assert c.n == 3 and list(c.gates) == [G.toffoli(0, 1, 2)]
    assert [r.name for r in c.roles] == ["a", "b", "c"]


def test_parse_all_tokens():
    text = body("t1 a\nt2 a b\nt3 a b c\nf3 a b c\np3 a b c\nswap a b\nf2 b c\nv a b\nv+ b a\nv1 a\nv1+ b\nh c")
    c = parse_circuit(text)
    assert list(c.gates) == [
        G.x(0), G.cnot(0, 1), G.toffoli(0, 1, 2), G.fredkin(0, 1, 2), G.peres(0, 1, 2),
        G.swap(0, 1), G.swap(1, 2), G.cv(0, 1), G.cv_dag(1, 0), G.v(0), G.v_dag(1), G.h(2),
    ]


def test_parse_roles_comments_crlf():
    text = body("t2 a b   # a CNOT", extra=".constants 0-1\n.garbage 1-1\n# comment\n").replace("\n", "\r\n")
    c = parse_circuit(text)
    assert [r.constant for r in c.roles] == [0, None, 1]
    assert [r.garbage for r in c.roles] == [True, False, True]


def test_parse_errors():
    with pytest.raises(UnsupportedGate):
        parse_circuit(body("t4 a b c d", n=4))
    with pytest.raises(DuplicateWireInGate):
        parse_circuit(body("t2 a a"))
    with pytest.raises(UndeclaredVariable) as err:
        parse_circuit(body("t2 a z"))
    assert err.value.line == 5


@pytest.mark.parametrize(
    "text",
    [
        ".numvars 2\n.variables a\n.begin\n.end\n",
        ".numvars 2\n.variables a b\n.begin\nt2 a\n.end\n",
        ".numvars 2\n.variables a b\n.begin\nt2 a b\n",
        ".numvars 2\n.variables a b\n.garbage 1\n.begin\n.end\n",
        ".numvars 2\n.variables a b\n.constants 2-\n.begin\n.end\n",
        ".numvars 2\n.variables a b\n.bogus\n.begin\n.end\n",
        ".numvars 2\n.variables a b\n.begin\nqq a b\n.end\n",
        ".numvars 2\n.variables a b\n.begin\n.end\nt1 a\n",
        ".numvars x\n",
        ".variables a b\n",
        ".numvars 1\n.variables a\n.begin\nu1 a 1 0 0\n.end\n",
        ".numvars 1\n.variables a\n.begin\nu1 a 1 1 1 1\n.end\n",
    ],
)
def test_malformed_files(text):
    with pytest.raises(ParseError):
        parse_circuit(text)


def test_write_toffoli_and_empty():
    assert "t3 a b c" in write_circuit(Circuit(3, [G.toffoli(0, 1, 2)])).splitlines()
    text = write_circuit(Circuit(2))
    assert text.splitlines()[-2:] == [".begin", ".end"]
    assert parse_circuit(text) == Circuit(2)


def test_merged_needs_flag():
    c = Circuit(2, [merged(oracle.unitary([G.swap(0, 1)], 2), [0, 1])])
    with pytest.raises(UnserializableGate):
        write_circuit(c)
    back = parse_circuit(write_circuit(c, allow_merged=True))
    np.testing.assert_allclose(circuit_unitary(back), circuit_unitary(c), atol=0)
    assert back == c


def test_merged_round_trip_exact():
    u = oracle.unitary([G.cv(0, 1), G.h(1), G.v(0)], 2)
    c = Circuit(3, [merged(u, [2, 0]), merged(oracle.S, [1])])
    assert parse_circuit(write_circuit(c, allow_merged=True)) == c


def test_round_trip_random():
    rng = random.Random(4)
    for _ in range(200):
        c = random_circuit(rng, 6, 20, roles=True)
        assert parse_circuit(write_circuit(c)) == c


def test_report_schema():
    c = parse_circuit(body("t3 a b c\nt3 a c b\nt3 a b c"))
    out, trace = pipeline(c, builtin_set("MIXED"))
    data = json.loads(write_report(pipeline_report(out, trace), trace))
    assert list(data) == list(REPORT_KEYS) + ["passes"]
    assert data["quantum_cost"] == 5
    assert set(data["passes"][0]) == {"name", "gates_before", "gates_after", "cost_before", "cost_after"}


def test_report_empty_trace():
    data = json.loads(write_report(report(Circuit(1)), PassTrace()))
    assert data["passes"] == []
    assert json.loads(write_report(report(Circuit(1))))["passes"] == []


def test_317_report():
    c = parse_circuit(body("t1 a\nt2 c a\nt2 a b\nt3 a b c\nt3 b c a\nt2 b a"))
    out, trace = pipeline(c, builtin_set("MIXED"))
    assert json.loads(write_report(pipeline_report(out, trace), trace))["quantum_cost"] == 7


def test_roles_round_trip():
    roles = (WireRole("x", 1, True), WireRole("y", None, False))
    c = Circuit(2, [G.cnot(0, 1)], roles)
    text = write_circuit(c)
    assert ".constants 1-" in text and ".garbage 1-" in text
    assert parse_circuit(text) == c
