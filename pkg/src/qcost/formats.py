"""Reading and writing circuit files and JSON cost reports.

The circuit format is a subset of the RevLib ``.real`` layout::

    .version 1.0
    .numvars 3
    .variables a b c
    .constants --0        # optional: '0', '1' or '-' per wire
    .garbage 1--          # optional: '1' garbage, '-' primary output
    .begin
    t3 a b c
    .end

Gate tokens: ``t1`` (NOT), ``t2`` (CNOT), ``t3`` (Toffoli), ``f3`` (Fredkin),
``p3`` (Peres), ``swap``/``f2`` (SWAP), ``v``/``v+`` (controlled V / V+),
``v1``/``v1+`` (V / V+), ``h`` (Hadamard) and ``u1``/``u2`` for merged
gates, whose wires are followed by the row-major matrix entries.
"""
from __future__ import annotations

import json
from typing import Callable

import numpy as np

from .circuit import Circuit, WireRole
from .errors import (
    DuplicateWireInGate,
    InvalidGate,
    ParseError,
    UndeclaredVariable,
    UnserializableGate,
    UnsupportedGate,
)
from .gates import Gate, Kind, merged

# token -> (kind, number of wire operands); controls come first.
GATE_TOKENS: dict[str, tuple[Kind, int]] = {
    "t1": (Kind.X, 1),
    "t2": (Kind.CNOT, 2),
    "t3": (Kind.TOFFOLI, 3),
    "f3": (Kind.FREDKIN, 3),
    "p3": (Kind.PERES, 3),
    "swap": (Kind.SWAP, 2),
    "f2": (Kind.SWAP, 2),
    "v": (Kind.CV, 2),
    "v+": (Kind.CV_DAG, 2),
    "v1": (Kind.V, 1),
    "v1+": (Kind.V_DAG, 1),
    "h": (Kind.H, 1),
}

_KIND_TOKEN = {
    Kind.X: "t1",
    Kind.CNOT: "t2",
    Kind.TOFFOLI: "t3",
    Kind.FREDKIN: "f3",
    Kind.PERES: "p3",
    Kind.SWAP: "swap",
    Kind.CV: "v",
    Kind.CV_DAG: "v+",
    Kind.V: "v1",
    Kind.V_DAG: "v1+",
    Kind.H: "h",
}


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def is_gate_token(token: str) -> bool:
    t = token.lower()
    return t in GATE_TOKENS or t in ("u1", "u2") or (t[:1] in "tfp" and t[1:].isdigit())


def parse_gate(tokens: list[str], resolve: Callable[[str], int], lineno: int | None) -> Gate:
    """Build a gate from one tokenised line; ``resolve`` maps a name to a wire."""
    name, args = tokens[0].lower(), tokens[1:]
    if name in ("u1", "u2"):
        arity = int(name[1])
        wires, entries = args[:arity], args[arity:]
        if len(entries) != 4**arity:
            raise ParseError(f"{name} needs {arity} wires and {4**arity} entries", lineno)
        try:
            values = [complex(e) for e in entries]
        except ValueError as exc:
            raise ParseError(f"bad matrix entry: {exc}", lineno) from None
        idx = _resolve_all(wires, resolve, lineno)
        try:
            return merged(np.array(values).reshape(2**arity, 2**arity), idx)
        except InvalidGate as exc:
            raise ParseError(str(exc), lineno) from None
    if name not in GATE_TOKENS:
        if name[:1] in "tfp" and name[1:].isdigit():
            raise UnsupportedGate(f"gate {tokens[0]!r} is not supported", lineno)
        raise ParseError(f"unknown gate {tokens[0]!r}", lineno)
    kind, arity = GATE_TOKENS[name]
    if len(args) != arity:
        raise ParseError(f"{tokens[0]} takes {arity} wires, got {len(args)}", lineno)
    idx = _resolve_all(args, resolve, lineno)
    if kind is Kind.TOFFOLI:
        return Gate(kind, idx[:2], idx[2:])
    if kind is Kind.SWAP:
        return Gate(kind, (), idx)
    return Gate(kind, idx[:-_n_targets(kind)], idx[-_n_targets(kind):])


def _n_targets(kind: Kind) -> int:
    return 2 if kind in (Kind.FREDKIN, Kind.PERES, Kind.SWAP) else 1


def _resolve_all(names: list[str], resolve, lineno) -> tuple[int, ...]:
    if len(set(names)) != len(names):
        raise DuplicateWireInGate(f"wire repeated in gate: {' '.join(names)}", lineno)
    return tuple(resolve(nm) for nm in names)


def format_gate(g: Gate, names: list[str], allow_merged: bool = False) -> str:
    wires = " ".join(names[w] for w in g.wires)
    if g.kind is Kind.MERGED:
        if not allow_merged:
            raise UnserializableGate(f"{g} needs allow_merged=True to be written")
        entries = " ".join(_format_complex(z) for z in g.payload)
        return f"u{len(g.targets)} {wires} {entries}"
    return f"{_KIND_TOKEN[g.kind]} {wires}"


def _format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def parse_circuit(text: str) -> Circuit:
    numvars = None
    names: list[str] | None = None
    constants = garbage = None
    gates: list[Gate] = []
    state = "header"  # -> "body" -> "done"

    def resolve(lineno):
        def _r(nm):
            try:
                return names.index(nm)
            except ValueError:
                raise UndeclaredVariable(f"variable {nm!r} not declared", lineno) from None
        return _r

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if state == "done":
            raise ParseError("content after .end", lineno)
        if state == "body":
            if head == ".end":
                state = "done"
                continue
            gates.append(parse_gate(tokens, resolve(lineno), lineno))
            continue
        if head == ".version":
            continue
        if head in (".inputs", ".outputs"):
            continue
        if head == ".numvars":
            try:
                numvars = int(tokens[1])
            except (IndexError, ValueError):
                raise ParseError("malformed .numvars", lineno) from None
            if numvars < 0:
                raise ParseError(".numvars must be non-negative", lineno)
        elif head == ".variables":
            names = tokens[1:]
            if numvars is None:
                raise ParseError(".variables before .numvars", lineno)
            if len(names) != numvars:
                raise ParseError(f"{len(names)} variables declared, .numvars is {numvars}", lineno)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable name", lineno)
        elif head == ".constants":
            constants = _role_field(tokens, numvars, "01-", lineno)
        elif head == ".garbage":
            garbage = _role_field(tokens, numvars, "1-", lineno)
        elif head == ".begin":
            if names is None:
                raise ParseError(".begin before .variables", lineno)
            state = "body"
        elif head.startswith("."):
            raise ParseError(f"unknown directive {tokens[0]!r}", lineno)
        else:
            raise ParseError(f"gate {tokens[0]!r} outside .begin/.end", lineno)
    if state != "done":
        raise ParseError("missing .end" if state == "body" else "missing .begin")

    roles = []
    for i, nm in enumerate(names):
        const = None
        if constants is not None and constants[i] != "-":
            const = int(constants[i])
        roles.append(WireRole(nm, const, garbage is not None and garbage[i] == "1"))
    return Circuit(len(names), tuple(gates), tuple(roles))


def _role_field(tokens, numvars, alphabet, lineno) -> str:
    if numvars is None:
        raise ParseError(f"{tokens[0]} before .numvars", lineno)
    value = "".join(tokens[1:])
    if len(value) != numvars or any(ch not in alphabet for ch in value):
        raise ParseError(
            f"{tokens[0]} needs {numvars} characters from {alphabet!r}, got {value!r}", lineno
        )
    return value


def write_circuit(c: Circuit, allow_merged: bool = False) -> str:
    names = [r.name for r in c.roles]
    lines = [".version 1.0", f".numvars {c.n}", ".variables " + " ".join(names)]
    if any(r.constant is not None for r in c.roles):
        lines.append(".constants " + "".join("-" if r.constant is None else str(r.constant) for r in c.roles))
    if any(r.garbage for r in c.roles):
        lines.append(".garbage " + "".join("1" if r.garbage else "-" for r in c.roles))
    lines.append(".begin")
    lines.extend(format_gate(g, names, allow_merged) for g in c.gates)
    lines.append(".end")
    return "\n".join(lines) + "\n"


REPORT_KEYS = (
    "gate_count",
    "linear_cost",
    "quantum_cost",
    "garbage_bits",
    "constant_inputs",
    "total_cost",
)


def report_dict(report, trace=None) -> dict:
    out = {key: int(getattr(report, key)) for key in REPORT_KEYS}
    out["passes"] = [
        {
            "name": rec.name,
            "gates_before": rec.gates_before,
            "gates_after": rec.gates_after,
            "cost_before": rec.cost_before,
            "cost_after": rec.cost_after,
        }
        for rec in (trace or ())
    ]
    return out


def write_report(report, trace=None) -> str:
    return json.dumps(report_dict(report, trace), indent=2) + "\n"
