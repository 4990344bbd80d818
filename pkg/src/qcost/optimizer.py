"""Rewrite passes and the quantum-cost minimisation pipeline.

Every pass is a pure function from circuit to circuit. The driver runs them
in this order:

1. pre-optimisation of the reversible circuit (deletion and template
   matching, both commutation aware), unless disabled;
2. decomposition of every gate on three or more wires into NCV primitives;
3. a loop of cost-driven template matching, merging of adjacent 1-/2-qubit
   gates into single gates, and a second round of deletion and template
   matching over the merged circuit;
4. removal of gates that only influence garbage outputs;
5. final costing.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Sequence

import numpy as np

from .catalog import catalog_cost, decompose
from .circuit import (
    UNITARY_CEILING,
    Circuit,
    Mode,
    circuit_unitary,
    commutes,
    embed,
    equal_up_to_phase,
    equivalent,
    inverse_sequence,
    is_phase_permutation,
)
from .errors import NoPrimaryOutputs, NotCommutable, VerificationError
from .gates import Gate, Kind, merged
from .templates import Rule, Template, rules

log = logging.getLogger(__name__)


class Objective(str, Enum):
    GATE_COUNT = "gate_count"
    QUANTUM_COST = "quantum_cost"


@dataclass(frozen=True)
class PassOptions:
    skip_pre_optimization: bool = False
    max_iterations: int = 20
    move_window: int = 8
    verify_each_pass: bool = True
    cost_objective: Objective = Objective.GATE_COUNT

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.move_window < 0:
            raise ValueError("move_window must be non-negative")
        object.__setattr__(self, "cost_objective", Objective(self.cost_objective))


@dataclass(frozen=True)
class PassRecord:
    name: str
    gates_before: int
    gates_after: int
    cost_before: int
    cost_after: int
    rewrites: int


@dataclass
class PassTrace:
    records: list[PassRecord] = field(default_factory=list)
    # Circuit after pre-optimisation; its gate count feeds the Total Cost.
    reversible: Circuit | None = None

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def rewrites(self) -> int:
        return sum(r.rewrites for r in self.records)


# --------------------------------------------------------------------------
# reordering


def _gather(gates: Sequence[Gate], picks: Sequence[int]):
    """Try to make the gates at ``picks`` contiguous by commuting the others out.

    Each gate lying between the picked ones either moves left past the picked
    gates before it, or right past those after it. Returns
    ``(left, group, right)`` or None when some gate can go neither way.
    """
    first, last = picks[0], picks[-1]
    if last - first + 1 == len(picks):
        return [], list(gates[first : last + 1]), []
    chosen = set(picks)
    group: list[Gate] = []
    left: list[Gate] = []
    right: list[tuple[Gate, int]] = []
    for k in range(first, last + 1):
        g = gates[k]
        if k in chosen:
            group.append(g)
            continue
        if all(commutes(g, p) for p in group) and all(commutes(g, r) for r, _ in right):
            left.append(g)
        else:
            right.append((g, len(group)))
    for r, seen in right:
        for p in group[seen:]:
            if not commutes(r, p):
                return None
    return left, group, [r for r, _ in right]


def pass_move(c: Circuit, i: int, j: int) -> Circuit:
    """Move the gate at position ``i`` to position ``j`` by adjacent swaps."""
    gates = list(c.gates)
    step = 1 if j > i else -1
    for k in range(i, j, step):
        a, b = gates[k], gates[k + step]
        if not commutes(a, b):
            raise NotCommutable(f"{a} does not commute with {b}")
        gates[k], gates[k + step] = b, a
    return c.with_gates(gates)


def _passes(g: Gate, a: Gate, right, right_mask: int) -> bool:
    """Can ``g`` move left past ``a`` and every gate already held in ``right``?"""
    if g.mask & a.mask and not commutes(g, a):
        return False
    return not g.mask & right_mask or all(commutes(g, r) for r in right)


def _pair_scan(gates: Sequence[Gate], i: int, window: int, accept, overlap: bool = False):
    """First ``j > i`` such that ``accept(gates[i], gates[j])`` holds and the
    gates between them can be moved aside; same outcome as ``_gather(gates, [i, j])``.
    ``accept=None`` asks for a partner with joint support of at most two wires,
    sharing a wire with ``gates[i]`` when ``overlap`` is set.

    Returns ``(j, left, right)`` or None.
    """
    a = gates[i]
    left: list[Gate] = []
    right: list[Gate] = []
    right_mask = 0  # union of wires held by ``right``; disjoint gates commute for free
    done = i + 1  # gates before this index are already sorted into left/right
    stop = min(len(gates), i + window + 2)
    for j in range(i + 1, stop):
        b = gates[j]
        if accept is None:
            if (a.mask | b.mask).bit_count() > 2 or (overlap and not a.mask & b.mask):
                continue
        elif not accept(a, b):
            continue
        for g in gates[done:j]:
            if _passes(g, a, right, right_mask):
                left.append(g)
            else:
                right.append(g)
                right_mask |= g.mask
        done = j
        if not b.mask & right_mask or all(commutes(r, b) for r in right):
            return j, left, right
        # b itself stays between a and any later partner
        if _passes(b, a, right, right_mask):
            left.append(b)
        else:
            right.append(b)
            right_mask |= b.mask
        done = j + 1
    return None


# --------------------------------------------------------------------------
# deletion


def _is_identity_pair(a: Gate, b: Gate) -> bool:
    if a.support != b.support:
        return False
    if a.kind is not Kind.MERGED and b.kind is not Kind.MERGED:
        return inverse_sequence(a) == [b]
    wires = sorted(a.support)
    return equal_up_to_phase(embed([a, b], wires), np.eye(2 ** len(wires)))


def _delete(gates: list[Gate], window: int) -> tuple[list[Gate], int]:
    removed = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(gates)):
            hit = _pair_scan(gates, i, window, _is_identity_pair)
            if hit is not None:
                j, left, right = hit
                gates = gates[:i] + left + right + gates[j + 1 :]
                removed += 1
                changed = True
                break
    return gates, removed


def pass_delete(c: Circuit, opts: PassOptions = PassOptions()) -> Circuit:
    return c.with_gates(_delete(list(c.gates), opts.move_window)[0])


# --------------------------------------------------------------------------
# template matching


@dataclass(frozen=True)
class _CompiledRule:
    rule: Rule
    order: int
    delta: int  # len(replacement) - len(pattern)
    need: tuple[tuple[Kind, int], ...] = ()  # gate kinds the pattern consumes


def _admit_shrinking(r: Rule) -> bool:
    return len(r.replacement) <= len(r.pattern)


def _admit_growing(r: Rule) -> bool:
    # patterns of one gate would let the cost-driven pass churn forever
    return len(r.pattern) >= 2 and len(r.replacement) <= len(r.pattern) + 1


@lru_cache(maxsize=64)
def _compile(store: tuple[Template, ...], admit) -> dict[Kind, list[_CompiledRule]]:
    index: dict[Kind, list[_CompiledRule]] = {}
    order = 0
    for t in sorted(store, key=lambda t: t.id):
        for r in rules(t):
            pattern_wires = {w for g in r.pattern for w in g.wires}
            if not {w for g in r.replacement for w in g.wires} <= pattern_wires:
                continue
            if not admit(r):
                continue
            need = Counter(g.kind for g in r.pattern)
            cr = _CompiledRule(r, order, len(r.replacement) - len(r.pattern), tuple(need.items()))
            index.setdefault(r.pattern[0].kind, []).append(cr)
            order += 1
    return index


def _bind(formal: Gate, actual: Gate, mapping: dict, used: dict):
    # equal kinds (and payloads, for merged gates) imply equal arity
    if formal.kind is not actual.kind:
        return None
    if formal.kind is Kind.MERGED and formal.payload != actual.payload:
        return None
    new_map, new_used = None, None
    for f, a in zip(formal.wires, actual.wires):
        cur = (new_map or mapping).get(f)
        if cur is None:
            if a in (new_used or used):
                return None
            if new_map is None:
                new_map, new_used = dict(mapping), dict(used)
            new_map[f] = a
            new_used[a] = f
        elif cur != a:
            return None
    return (new_map, new_used) if new_map is not None else (mapping, used)


def _matches(gates: Sequence[Gate], rule: Rule, start: int, window: int):
    """Yield (positions, mapping) for every occurrence of ``rule.pattern`` anchored at ``start``."""
    pattern = rule.pattern
    bound = _bind(pattern[0], gates[start], {}, {})
    if bound is None:
        return

    def extend(idx, positions, mapping, used):
        if idx == len(pattern):
            yield tuple(positions), mapping
            return
        prev = positions[-1]
        skipped = prev - positions[0] + 1 - len(positions)
        stop = min(len(gates), prev + 2 + window - skipped)
        formal = pattern[idx]
        for p in range(prev + 1, stop):
            if gates[p].kind is not formal.kind:
                continue
            b = _bind(formal, gates[p], mapping, used)
            if b is not None:
                yield from extend(idx + 1, positions + [p], *b)

    yield from extend(1, [start], *bound)


def _candidates(gates: list[Gate], index, window: int):
    """All applicable rewrites, in deterministic left-to-right order."""
    longest = max((len(cr.rule.pattern) for rs in index.values() for cr in rs), default=0)
    for start in range(len(gates)):
        rs = index.get(gates[start].kind)
        if not rs:
            continue
        # kinds reachable from ``start``; a rule needing more of some kind cannot match
        reach = Counter(g.kind for g in gates[start : start + longest + window + 1])
        for cr in rs:
            if any(reach[k] < n for k, n in cr.need):
                continue
            for positions, mapping in _matches(gates, cr.rule, start, window):
                moved = _gather(gates, positions)
                if moved is None:
                    continue
                left, _, right = moved
                repl = [g.relabel(mapping) for g in cr.rule.replacement]
                new = gates[: positions[0]] + left + repl + right + gates[positions[-1] + 1 :]
                yield cr, new


def _linear(gates: Sequence[Gate]) -> int:
    return sum(catalog_cost(g.kind) for g in gates)


def _template_pass(gates: list[Gate], store, opts: PassOptions) -> tuple[list[Gate], int]:
    """Greedy first-improvement template rewriting under the pass objective."""
    if opts.cost_objective is Objective.QUANTUM_COST:
        def key(gs):
            return (merged_cost(gs), len(gs))
    else:
        def key(gs):
            return (len(gs), _linear(gs))

    index = _compile(tuple(store), _admit_shrinking)
    applied = 0
    current = key(gates)
    while True:
        for _, new in _candidates(gates, index, opts.move_window):
            k = key(new)
            if k < current:
                gates, current = new, k
                applied += 1
                break
        else:
            return gates, applied


def pass_template_match(c: Circuit, store: Sequence[Template], opts: PassOptions = PassOptions()) -> Circuit:
    gates, _ = _delete(list(c.gates), opts.move_window)
    gates, _ = _template_pass(gates, store, opts)
    return c.with_gates(gates)


def _modified_template_pass(gates: list[Gate], store, opts: PassOptions):
    """Accept a template rewrite iff the merged cost of the whole circuit drops."""
    index = _compile(tuple(store), _admit_growing)
    applied = 0
    current = merged_cost(gates)
    while True:
        for _, new in _candidates(gates, index, opts.move_window):
            cost = merged_cost(new)
            if cost < current:
                gates, current = new, cost
                applied += 1
                break
        else:
            return gates, applied


def pass_modified_template_match(
    c: Circuit, store: Sequence[Template], opts: PassOptions = PassOptions()
) -> Circuit:
    return c.with_gates(_modified_template_pass(list(c.gates), store, opts)[0])


# --------------------------------------------------------------------------
# decomposition and merging


@lru_cache(maxsize=4096)
def _expansion(g: Gate) -> tuple[Gate, ...]:
    return tuple(decompose(g))


def _decompose_all(gates: Sequence[Gate]) -> tuple[list[Gate], int]:
    out: list[Gate] = []
    expanded = 0
    for g in gates:
        if len(g.support) >= 3:
            out.extend(_expansion(g))
            expanded += 1
        else:
            out.append(g)
    return out, expanded


def pass_decompose(c: Circuit) -> Circuit:
    return c.with_gates(_decompose_all(c.gates)[0])


_PRODUCTS: dict[tuple[int, int], Gate | None] = {}


def _fuse(a: Gate, b: Gate) -> Gate | None:
    """One gate equal to ``a`` then ``b``, or None if they cancel."""
    pair = (a.key, b.key)
    if pair not in _PRODUCTS:
        wires = sorted(a.support | b.support)
        mat = embed([a, b], wires)
        _PRODUCTS[pair] = None if equal_up_to_phase(mat, np.eye(len(mat))) else merged(mat, wires)
    block = _PRODUCTS[pair]
    if block is None:
        return None
    return block.with_parts(a.primitives() + b.primitives())


def _merge(gates: list[Gate], window: int) -> tuple[list[Gate], int]:
    """Greedy fusion of move-adjacent gates whose joint support is at most two wires.

    Gates sharing a wire are fused first; two one-qubit gates on different
    wires are only paired once nothing else fits, so that single-qubit gates
    are absorbed by their two-qubit neighbours rather than by each other.
    """
    fused = 0
    for overlap in (True, False):
        changed = True
        while changed:
            changed = False
            i = 0
            while i < len(gates):
                hit = _pair_scan(gates, i, window, None, overlap)
                if hit is None:
                    i += 1
                    continue
                j, left, right = hit
                block = _fuse(gates[i], gates[j])
                gates = gates[:i] + left + ([block] if block else []) + right + gates[j + 1 :]
                i += len(left)
                fused += 1
                changed = True
                if block is None:
                    i += 1
    return gates, fused


def pass_merge(c: Circuit, opts: PassOptions = PassOptions()) -> Circuit:
    return c.with_gates(_merge(list(c.gates), opts.move_window)[0])


def merged_cost(gates: Sequence[Gate], window: int = PassOptions.move_window) -> int:
    """Number of gates left after decomposing and maximally merging ``gates``."""
    return _merged_cost(tuple(gates), window)


@lru_cache(maxsize=50_000)
def _merged_cost(gates: tuple[Gate, ...], window: int) -> int:
    return len(_merged(gates, window))


@lru_cache(maxsize=50_000)
def _merged(gates: tuple[Gate, ...], window: int) -> tuple[Gate, ...]:
    return tuple(_merge(_decompose_all(gates)[0], window)[0])


def segment_merge(gates: Sequence[Gate], window: int = PassOptions.move_window) -> list[Gate]:
    """Cut ``gates`` into consecutive runs, decompose and merge each run on its
    own, and keep the cuts giving the fewest gates overall.

    The uncut sequence is one of the candidates, so the result is never
    longer than a plain merge. Taking the best cuts also makes the count
    subadditive under concatenation, which a single greedy sweep is not.
    """
    gates = tuple(gates)
    best: list[tuple[int, int]] = [(0, 0)]  # (cost of prefix, start of its last run)
    for k in range(1, len(gates) + 1):
        best.append(min((best[j][0] + len(_merged(gates[j:k], window)), j) for j in range(k)))
    out: list[Gate] = []
    k = len(gates)
    while k:
        j = best[k][1]
        out[:0] = _merged(gates[j:k], window)
        k = j
    return out


# --------------------------------------------------------------------------
# garbage elimination


def written_wires(g: Gate) -> frozenset[int]:
    """Wires whose state ``g`` may change; controls are only read."""
    if g.kind is Kind.MERGED:
        return g.support
    return frozenset(g.targets)


def _garbage(gates: Sequence[Gate], primary: Sequence[int]) -> tuple[list[Gate], int]:
    live = set(primary)
    kept: list[Gate] = []
    removed = 0
    for g in reversed(gates):
        parts = g.parts if g.kind is Kind.MERGED and g.parts else (g,)
        survivors = []
        for p in reversed(parts):
            if written_wires(p) & live:
                survivors.append(p)
                live |= p.support
            else:
                removed += 1
        if len(survivors) == len(parts):
            kept.append(g)
        elif survivors:
            kept.append(_rebuild(survivors[::-1]))
    return kept[::-1], removed


def _rebuild(parts: list[Gate]) -> Gate:
    if len(parts) == 1:
        return parts[0]
    wires = sorted(set().union(*(p.support for p in parts)))
    return merged(embed(parts, wires), wires, tuple(parts))


def pass_garbage_elim(c: Circuit) -> Circuit:
    primary = c.primary_wires
    if not primary:
        raise NoPrimaryOutputs("every output is marked as garbage")
    return c.with_gates(_garbage(c.gates, primary)[0])


# --------------------------------------------------------------------------
# driver


class _Driver:
    def __init__(self, c: Circuit, store, opts: PassOptions):
        self.opts = opts
        self.store = list(store)
        self.trace = PassTrace()
        self.circuit = c
        self.cost = merged_cost(c.gates, opts.move_window)
        self.verifiable = c.n <= UNITARY_CEILING or c.is_classical()

    def run(self, name: str, fn, *, monotone: bool = False, mode: Mode = Mode.FULL, replace_input=None) -> int:
        """Apply one pass. ``replace_input`` names the circuit the result must
        match instead of the current one (used when restarting from the input)."""
        before = self.circuit
        gates, rewrites = fn(list(before.gates))
        after = before.with_gates(gates)
        cost = merged_cost(gates, self.opts.move_window)
        if monotone and cost > self.cost:
            log.debug("%s rejected: merged cost %d -> %d", name, self.cost, cost)
            after, cost, rewrites = before, self.cost, 0
        if rewrites and self.opts.verify_each_pass and self.verifiable:
            if not equivalent(before if replace_input is None else replace_input, after, mode):
                raise VerificationError(name)
        self.trace.records.append(
            PassRecord(name, len(before), len(after), self.cost, cost, rewrites)
        )
        self.circuit, self.cost = after, cost
        return rewrites

    def primitive_loop(self):
        o, w = self.opts, self.opts.move_window
        for _ in range(o.max_iterations):
            n = self.run("delete_primitive", lambda g: _delete(g, w), monotone=True)
            n += self.run("template_primitive", lambda g: _template_pass(g, self.store, o), monotone=True)
            n += self.run("modified_template", lambda g: _modified_template_pass(g, self.store, o))
            n += self.run("merge", lambda g: _merge(g, w))
            n += self.run("delete_merged", lambda g: _delete(g, w), monotone=True)
            n += self.run("template_merged", lambda g: _template_pass(g, self.store, o), monotone=True)
            if n == 0:
                return

    def settle(self):
        """Primitive loop, then garbage elimination interleaved with it."""
        self.primitive_loop()
        if self.garbage_applicable():
            while self.run(
                "garbage",
                lambda g: _garbage(g, self.circuit.primary_wires),
                monotone=True,
                mode=Mode.PRIMARY_OUTPUTS,
            ):
                self.primitive_loop()

    def garbage_applicable(self) -> bool:
        c = self.circuit
        if not c.garbage_wires or not c.primary_wires:
            return False
        if c.is_classical():
            return True
        # Dropping dead gates is only sound when the function maps basis states
        # to basis states; otherwise the garbage wires may stay entangled.
        return c.n <= UNITARY_CEILING and is_phase_permutation(circuit_unitary(c))


def pipeline(c: Circuit, store: Sequence[Template], opts: PassOptions = PassOptions()):
    """Run the full minimisation; returns ``(optimised circuit, trace)``."""
    d = _Driver(c, store, opts)
    w = opts.move_window
    if not opts.skip_pre_optimization:
        for _ in range(opts.max_iterations):
            n = d.run("delete", lambda g: _delete(g, w), monotone=True)
            n += d.run("template", lambda g: _template_pass(g, d.store, opts), monotone=True)
            if n == 0:
                break
    d.trace.reversible = d.circuit
    d.run("decompose", _decompose_all)
    d.settle()
    # The greedy passes can, rarely, end above what merging the input run by
    # run achieves; start over from that form when it is cheaper.
    baseline = segment_merge(c.gates, w)
    if len(baseline) < len(d.circuit):
        d.run("restart_from_input", lambda g: (baseline, 1), replace_input=c)
        d.settle()
    return d.circuit, d.trace
