"""Rewriting templates: gate sequences whose product is the identity.

Template files are line based::

    # comment
    template dup-cnot 2
    t2 a b
    t2 a b
    end

Wire names inside a template are formal; they are numbered in order of first
appearance and bound to real wires when the template is instantiated.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Mapping, Sequence

import numpy as np

from .circuit import embed, equal_up_to_phase, inverse_sequence
from .errors import InvalidTemplate, NonInjectiveMap, ParseError, UnknownLibrary, WireOutOfRange
from .formats import parse_gate
from .gates import Gate

LIBRARIES = ("NCT", "NCV", "MIXED")


@dataclass(frozen=True)
class Template:
    id: str
    arity: int
    gates: tuple[Gate, ...]
    library: str = "MIXED"
    wire_names: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class Rule:
    """One way of using a template: ``pattern`` may be replaced by ``replacement``.

    Both sequences are over the template's formal wires.
    """

    template_id: str
    arity: int
    pattern: tuple[Gate, ...]
    replacement: tuple[Gate, ...]
    direction: str  # "forward" or "inverse"
    rotation: int


@dataclass(frozen=True)
class TemplateMatch:
    template_id: str
    mapping: dict
    positions: tuple[int, ...]
    direction: str
    replacement: tuple[Gate, ...]


def validate(t: Template) -> bool:
    if not t.gates:
        return True
    return equal_up_to_phase(embed(t.gates, range(t.arity)), np.eye(2**t.arity))


def instantiate(t: Template, mapping, n: int) -> list[Gate]:
    """Bind formal wires to real ones.

    ``mapping`` may be keyed by formal index or by formal wire name, or be a
    sequence listing the real wire of each formal wire in order.
    """
    table = _mapping_table(t, mapping)
    if len(set(table.values())) != len(table):
        raise NonInjectiveMap(f"mapping {mapping!r} is not injective")
    for w in table.values():
        if not 0 <= w < n:
            raise WireOutOfRange(f"wire {w} outside 0..{n - 1}")
    missing = {w for g in t.gates for w in g.wires} - table.keys()
    if missing:
        raise ValueError(f"mapping leaves formal wires {sorted(missing)} unbound")
    return [g.relabel(table) for g in t.gates]


def _mapping_table(t: Template, mapping) -> dict[int, int]:
    if isinstance(mapping, Mapping):
        table = {}
        for key, w in mapping.items():
            if isinstance(key, str):
                try:
                    key = t.wire_names.index(key)
                except ValueError:
                    raise ValueError(f"template {t.id} has no wire {key!r}") from None
            table[int(key)] = int(w)
        return table
    return {i: int(w) for i, w in enumerate(mapping)}


def rules(t: Template) -> list[Rule]:
    """Every (rotation, direction) split of ``t`` into pattern and replacement.

    With ``U1 ... Um = I`` any cyclic window ``Us ... Ue`` equals the inverse of
    the remaining gates, taken in reverse order; a window covering the whole
    template may simply be dropped. Reading the template backwards with every
    gate inverted gives a second identity, the inverse direction.
    """
    out = []
    seen = set()
    inverted = tuple(g for gate in reversed(t.gates) for g in inverse_sequence(gate))
    for direction, seq in (("forward", t.gates), ("inverse", inverted)):
        k_total = len(seq)
        for start in range(k_total):
            rot = seq[start:] + seq[:start]
            for k in range(1, k_total + 1):
                pattern, rest = rot[:k], rot[k:]
                replacement = tuple(g for gate in reversed(rest) for g in inverse_sequence(gate))
                key = (pattern, replacement)
                if key in seen:
                    continue
                seen.add(key)
                out.append(Rule(t.id, t.arity, pattern, replacement, direction, start))
    return out


def load_templates(source: str, library: str = "MIXED") -> list[Template]:
    templates: list[Template] = []
    current = None
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if current is None:
            if head != "template":
                raise ParseError(f"expected 'template <id> <arity>', got {tokens[0]!r}", lineno)
            if len(tokens) != 3:
                raise ParseError("template header needs an id and an arity", lineno)
            try:
                arity = int(tokens[2])
            except ValueError:
                raise ParseError(f"bad arity {tokens[2]!r}", lineno) from None
            if arity < 1:
                raise ParseError("arity must be positive", lineno)
            current = {"id": tokens[1], "arity": arity, "names": [], "gates": [], "line": lineno}
            continue
        if head == "end":
            t = Template(
                current["id"],
                current["arity"],
                tuple(current["gates"]),
                library,
                tuple(current["names"]),
            )
            if not validate(t):
                raise InvalidTemplate(t.id)
            templates.append(t)
            current = None
            continue
        current["gates"].append(parse_gate(tokens, _formal_resolver(current, lineno), lineno))
    if current is not None:
        raise ParseError(f"template {current['id']!r} is missing 'end'", current["line"])
    return templates


def _formal_resolver(current: dict, lineno: int):
    names: list[str] = current["names"]

    def resolve(nm: str) -> int:
        if nm not in names:
            if len(names) == current["arity"]:
                raise ParseError(
                    f"template {current['id']!r} uses more than {current['arity']} wires", lineno
                )
            names.append(nm)
        return names.index(nm)

    return resolve


@lru_cache(maxsize=None)
def _builtin(library: str) -> tuple[Template, ...]:
    text = resources.files("qcost.data").joinpath(f"{library.lower()}.tpl").read_text()
    return tuple(load_templates(text, library))


def builtin_set(library: str = "NCT") -> list[Template]:
    library = str(library).upper()
    if library == "MIXED":
        return list(_builtin("NCT")) + list(_builtin("NCV"))
    if library not in ("NCT", "NCV"):
        raise UnknownLibrary(f"no built-in templates for {library!r}")
    return list(_builtin(library))


def format_template(t: Template) -> str:
    from .formats import format_gate

    names = list(t.wire_names) or [chr(ord("a") + i) for i in range(t.arity)]
    body = "\n".join(format_gate(g, names) for g in t.gates)
    return f"template {t.id} {t.arity}\n{body}\nend\n"


def template_from_gates(template_id: str, gates: Sequence[Gate], library: str = "MIXED") -> Template:
    wires = sorted({w for g in gates for w in g.wires})
    table = {w: i for i, w in enumerate(wires)}
    return Template(
        template_id,
        len(wires),
        tuple(g.relabel(table) for g in gates),
        library,
        tuple(chr(ord("a") + i) for i in range(len(wires))),
    )
