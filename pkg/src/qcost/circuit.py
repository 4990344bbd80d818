"""Circuit model and the brute-force simulation oracle.

Bit order: wire 0 is the most significant bit of a basis-state index, so on
three wires the index of ``|a b c>`` is ``4a + 2b + c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .catalog import decompose, local_matrix
from .errors import InvalidGate, NotClassical, OracleTooLarge, RoleMismatch
from .gates import CLASSICAL_KINDS, TOL, Gate, Kind, merged

UNITARY_CEILING = 10
PERMUTATION_CEILING = 16


class Mode(str, Enum):
    FULL = "full"
    PRIMARY_OUTPUTS = "primary"


@dataclass(frozen=True)
class WireRole:
    name: str
    constant: int | None = None
    garbage: bool = False

    def __post_init__(self):
        if self.constant not in (None, 0, 1):
            raise ValueError(f"constant input must be 0, 1 or None, got {self.constant!r}")


def default_names(n: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if n <= len(letters):
        return list(letters[:n])
    return [f"x{i}" for i in range(n)]


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``n`` wires; ``gates[0]`` is applied first."""

    n: int
    gates: tuple[Gate, ...] = ()
    roles: tuple[WireRole, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.roles:
            object.__setattr__(self, "roles", tuple(WireRole(nm) for nm in default_names(self.n)))
        else:
            object.__setattr__(self, "roles", tuple(self.roles))
        if len(self.roles) != self.n:
            raise ValueError(f"{len(self.roles)} roles for {self.n} wires")
        for g in self.gates:
            if any(w >= self.n for w in g.wires):
                raise InvalidGate(f"{g} uses a wire outside 0..{self.n - 1}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n, tuple(gates), self.roles)

    @property
    def garbage_wires(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r.garbage]

    @property
    def primary_wires(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if not r.garbage]

    @property
    def constant_wires(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r.constant is not None]

    def is_classical(self) -> bool:
        return all(is_classical_gate(g) for g in self.gates)

    def __str__(self) -> str:
        return " ".join(str(g) for g in self.gates) or "<empty>"


def support(g: Gate) -> frozenset[int]:
    return g.support


def gate_unitary(g: Gate) -> np.ndarray:
    """Matrix of ``g`` on its own wires, ordered as ``g.wires``."""
    return np.array(local_matrix(g))


def apply_matrix(state: np.ndarray, mat: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply ``mat`` to the tensor axes ``axes`` of ``state`` (one axis per wire)."""
    k = len(axes)
    m = mat.reshape((2,) * (2 * k))
    out = np.tensordot(m, state, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def embed(gates: Iterable[Gate], wires: Sequence[int]) -> np.ndarray:
    """Product of ``gates`` (first applied first) as a matrix over ``wires``."""
    pos = {w: i for i, w in enumerate(wires)}
    k = len(wires)
    dim = 2**k
    state = np.eye(dim, dtype=complex).reshape((2,) * k + (dim,))
    for g in gates:
        state = apply_matrix(state, local_matrix(g), [pos[w] for w in g.wires])
    return state.reshape(dim, dim)


def circuit_unitary(c: Circuit) -> np.ndarray:
    if c.n > UNITARY_CEILING:
        raise OracleTooLarge(f"unitary oracle limited to {UNITARY_CEILING} wires, got {c.n}")
    return embed(c.gates, range(c.n))


def _classical_matrix_perm(g: Gate) -> tuple[int, ...] | None:
    m = g.matrix
    if not np.allclose(np.abs(m), np.round(np.abs(m)), atol=TOL):
        return None
    if np.max(np.abs(m - np.round(m.real))) > TOL:
        return None
    cols = np.argmax(np.abs(m), axis=0)
    if sorted(cols.tolist()) != list(range(m.shape[0])):
        return None
    return tuple(int(i) for i in cols)


def is_classical_gate(g: Gate) -> bool:
    if g.kind in CLASSICAL_KINDS:
        return True
    return g.kind is Kind.MERGED and _classical_matrix_perm(g) is not None


def circuit_permutation(c: Circuit) -> tuple[int, ...]:
    """Images of every basis state under the classical circuit ``c``."""
    if c.n > PERMUTATION_CEILING:
        raise OracleTooLarge(
            f"permutation oracle limited to {PERMUTATION_CEILING} wires, got {c.n}"
        )
    n = c.n
    states = np.arange(2**n, dtype=np.int64)

    def bit(w):
        return (states >> (n - 1 - w)) & 1

    def flip(w, cond):
        return states ^ (cond.astype(np.int64) << (n - 1 - w))

    for g in c.gates:
        k = g.kind
        if k is Kind.X:
            states = flip(g.targets[0], np.ones_like(states))
        elif k is Kind.CNOT:
            states = flip(g.targets[0], bit(g.controls[0]))
        elif k is Kind.TOFFOLI:
            states = flip(g.targets[0], bit(g.controls[0]) & bit(g.controls[1]))
        elif k is Kind.SWAP:
            a, b = g.targets
            diff = bit(a) ^ bit(b)
            states = flip(a, diff)
            states = flip(b, diff)
        elif k is Kind.FREDKIN:
            (ctl,), (a, b) = g.controls, g.targets
            diff = bit(ctl) & (bit(a) ^ bit(b))
            states = flip(a, diff)
            states = flip(b, diff)
        elif k is Kind.PERES:
            (a,), (b, t) = g.controls, g.targets
            states = flip(t, bit(a) & bit(b))
            states = flip(b, bit(a))
        elif k is Kind.MERGED and (perm := _classical_matrix_perm(g)) is not None:
            ws = g.wires
            local = np.zeros_like(states)
            for w in ws:
                local = (local << 1) | bit(w)
            image = np.asarray(perm, dtype=np.int64)[local]
            for i, w in enumerate(ws):
                want = (image >> (len(ws) - 1 - i)) & 1
                states = flip(w, want ^ bit(w))
        else:
            raise NotClassical(f"{g} is not a classical gate")
    return tuple(int(s) for s in states)


_COMMUTES: dict[tuple[int, int], bool] = {}


def commutes(g1: Gate, g2: Gate) -> bool:
    """True when applying ``g1, g2`` equals applying ``g2, g1``."""
    if not g1.mask & g2.mask:
        return True
    pair = (g1.key, g2.key)
    hit = _COMMUTES.get(pair)
    if hit is None:
        wires = sorted(g1.support | g2.support)
        a = embed([g1], wires)
        b = embed([g2], wires)
        hit = _COMMUTES[pair] = _COMMUTES[pair[::-1]] = bool(np.max(np.abs(a @ b - b @ a)) <= TOL)
    return hit


_INVERSE_KIND = {
    Kind.V: Kind.V_DAG,
    Kind.V_DAG: Kind.V,
    Kind.CV: Kind.CV_DAG,
    Kind.CV_DAG: Kind.CV,
}


def inverse(g: Gate):
    """Inverse of ``g``.

    Returns a single :class:`Gate` for every kind except PERES, whose inverse
    has no kind of its own and comes back as a tuple of NCV primitives.
    """
    if g.kind in _INVERSE_KIND:
        return Gate(_INVERSE_KIND[g.kind], g.controls, g.targets)
    if g.kind is Kind.MERGED:
        parts = tuple(inverse(p) for p in reversed(g.parts))
        return merged(g.matrix.conj().T, g.targets, parts)
    if g.kind is Kind.PERES:
        return tuple(inverse(p) for p in reversed(decompose(g)))
    return g


def inverse_sequence(g: Gate) -> list[Gate]:
    inv = inverse(g)
    return list(inv) if isinstance(inv, tuple) else [inv]


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    if a.shape != b.shape:
        return False
    fa, fb = a.ravel(), b.ravel()
    nz = np.flatnonzero(np.abs(fa) > 1e-6)
    if nz.size == 0:
        return bool(np.max(np.abs(fb), initial=0.0) <= tol)
    p = nz[0]
    if abs(fb[p]) <= 1e-6:
        return False
    na = fa * (abs(fa[p]) / fa[p])
    nb = fb * (abs(fb[p]) / fb[p])
    return bool(np.max(np.abs(na - nb)) <= tol)


def _check_roles(c1: Circuit, c2: Circuit):
    if c1.n != c2.n:
        raise RoleMismatch(f"width {c1.n} vs {c2.n}")
    r1 = [(r.constant, r.garbage) for r in c1.roles]
    r2 = [(r.constant, r.garbage) for r in c2.roles]
    if r1 != r2:
        raise RoleMismatch("wire roles differ")


def consistent_inputs(c: Circuit) -> np.ndarray:
    """Basis-state indices agreeing with every constant-input role of ``c``."""
    idx = np.arange(2**c.n, dtype=np.int64)
    keep = np.ones(idx.shape, dtype=bool)
    for w, r in enumerate(c.roles):
        if r.constant is not None:
            keep &= ((idx >> (c.n - 1 - w)) & 1) == r.constant
    return idx[keep]


def _primary_bits(states: np.ndarray, c: Circuit) -> np.ndarray:
    mask = 0
    for w in c.primary_wires:
        mask |= 1 << (c.n - 1 - w)
    return states & mask


def _split_output(col: np.ndarray, c: Circuit) -> np.ndarray:
    """Primary-wire state of an output column whose garbage wires are classical.

    Raises RoleMismatch if the garbage wires are not in a definite basis state.
    """
    t = col.reshape((2,) * c.n)
    garbage, primary = c.garbage_wires, c.primary_wires
    t = np.transpose(t, garbage + primary).reshape(2 ** len(garbage), 2 ** len(primary))
    weights = np.sum(np.abs(t) ** 2, axis=1)
    g = int(np.argmax(weights))
    if abs(weights[g] - 1.0) > 1e-6:
        raise RoleMismatch("garbage wires are entangled or not in a basis state")
    return t[g]


def equivalent(c1: Circuit, c2: Circuit, mode: Mode | str = Mode.FULL) -> bool:
    mode = Mode(mode)
    _check_roles(c1, c2)
    classical = c1.is_classical() and c2.is_classical()
    if mode is Mode.FULL:
        if classical and c1.n > UNITARY_CEILING:
            return circuit_permutation(c1) == circuit_permutation(c2)
        return equal_up_to_phase(circuit_unitary(c1), circuit_unitary(c2))

    if not c1.primary_wires:
        raise RoleMismatch("no primary outputs to compare")
    inputs = consistent_inputs(c1)
    if classical:
        p1 = np.asarray(circuit_permutation(c1), dtype=np.int64)[inputs]
        p2 = np.asarray(circuit_permutation(c2), dtype=np.int64)[inputs]
        return bool(np.array_equal(_primary_bits(p1, c1), _primary_bits(p2, c2)))
    u1, u2 = circuit_unitary(c1), circuit_unitary(c2)
    for i in inputs:
        if not equal_up_to_phase(_split_output(u1[:, i], c1), _split_output(u2[:, i], c2)):
            return False
    return True


def is_phase_permutation(u: np.ndarray) -> bool:
    """True if ``u`` maps every basis state to a basis state (up to a phase)."""
    mags = np.abs(u)
    return bool(np.all((mags < TOL) | (np.abs(mags - 1) < TOL)))
