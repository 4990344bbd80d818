"""Gate kinds and the immutable :class:`Gate` value.

Wires are 0-based integers. A gate lists its control wires and its target
wires separately; the local matrix of a gate is expressed over
``controls + targets`` with the first listed wire as the most significant bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidGate

TOL = 1e-9

_KEYS: dict[tuple, int] = {}


class Kind(str, Enum):
    X = "X"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"
    SWAP = "SWAP"
    FREDKIN = "FREDKIN"
    PERES = "PERES"
    V = "V"
    V_DAG = "V_DAG"
    CV = "CV"
    CV_DAG = "CV_DAG"
    H = "H"
    MERGED = "MERGED"

    def __repr__(self) -> str:
        return f"Kind.{self.name}"


# (number of controls, number of targets); MERGED is checked separately.
ARITY: dict[Kind, tuple[int, int]] = {
    Kind.X: (0, 1),
    Kind.V: (0, 1),
    Kind.V_DAG: (0, 1),
    Kind.H: (0, 1),
    Kind.CNOT: (1, 1),
    Kind.CV: (1, 1),
    Kind.CV_DAG: (1, 1),
    Kind.TOFFOLI: (2, 1),
    Kind.SWAP: (0, 2),
    Kind.FREDKIN: (1, 2),
    # Peres(a, b, c): b ^= a, c ^= a.b -- a is read-only, b and c are written.
    Kind.PERES: (1, 2),
}

CLASSICAL_KINDS = frozenset(
    {Kind.X, Kind.CNOT, Kind.TOFFOLI, Kind.SWAP, Kind.FREDKIN, Kind.PERES}
)


@dataclass(frozen=True, eq=False)
class Gate:
    """One circuit element.

    ``payload`` is only set for :attr:`Kind.MERGED` gates and holds the
    row-major entries of their 2x2 or 4x4 unitary over ``targets``.
    ``parts`` records which gates were fused into a merged gate; it is
    bookkeeping only and does not take part in equality.
    """

    kind: Kind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()
    payload: tuple[complex, ...] | None = None
    parts: tuple["Gate", ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "controls", tuple(int(w) for w in self.controls))
        object.__setattr__(self, "targets", tuple(int(w) for w in self.targets))
        wires = self.controls + self.targets
        object.__setattr__(self, "wires", wires)
        if any(w < 0 for w in wires):
            raise InvalidGate(f"negative wire in {self.kind.value} gate")
        if len(set(wires)) != len(wires):
            raise InvalidGate(f"{self.kind.value} gate repeats a wire: {wires}")
        object.__setattr__(self, "_support", frozenset(wires))
        object.__setattr__(self, "mask", sum(1 << w for w in wires))
        sig = (self.kind, self.controls, self.targets, self.payload)
        object.__setattr__(self, "_hash", hash(sig))
        # small integer naming the gate's value; cheap to hash in caches
        object.__setattr__(self, "key", _KEYS.setdefault(sig, len(_KEYS)))
        if self.kind is Kind.MERGED:
            self._check_merged()
        else:
            if self.payload is not None:
                raise InvalidGate(f"{self.kind.value} gate cannot carry a payload")
            if (len(self.controls), len(self.targets)) != ARITY[self.kind]:
                raise InvalidGate(
                    f"{self.kind.value} expects {ARITY[self.kind]} (controls, targets), "
                    f"got {(len(self.controls), len(self.targets))}"
                )

    def _check_merged(self):
        if self.controls:
            raise InvalidGate("MERGED gates have no controls")
        if len(self.targets) not in (1, 2):
            raise InvalidGate("MERGED gates act on one or two wires")
        if self.payload is None:
            raise InvalidGate("MERGED gate without payload")
        dim = 2 ** len(self.targets)
        if len(self.payload) != dim * dim:
            raise InvalidGate(f"MERGED payload must have {dim * dim} entries")
        m = self.matrix
        if np.max(np.abs(m @ m.conj().T - np.eye(dim))) > TOL:
            raise InvalidGate("MERGED payload is not unitary")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, Gate) and self.key == other.key

    @property
    def support(self) -> frozenset[int]:
        return self._support

    @property
    def matrix(self) -> np.ndarray:
        """Payload of a MERGED gate as a square array."""
        if self.payload is None:
            raise InvalidGate(f"{self.kind.value} gate has no payload")
        dim = 2 ** len(self.targets)
        return np.array(self.payload, dtype=complex).reshape(dim, dim)

    def primitives(self) -> tuple["Gate", ...]:
        """The gates this one was fused from, or ``(self,)`` for an unfused gate."""
        return self.parts if self.parts else (self,)

    def with_parts(self, parts) -> "Gate":
        """Same gate value with different fusion bookkeeping (no revalidation)."""
        g = object.__new__(Gate)
        g.__dict__.update(self.__dict__)
        g.__dict__["parts"] = tuple(parts)
        return g

    def relabel(self, mapping) -> "Gate":
        """Return the same gate with every wire ``w`` replaced by ``mapping[w]``."""
        parts = tuple(p.relabel(mapping) for p in self.parts)
        return Gate(
            self.kind,
            tuple(mapping[w] for w in self.controls),
            tuple(mapping[w] for w in self.targets),
            self.payload,
            parts,
        )

    def __str__(self) -> str:
        name = self.kind.value
        if self.controls:
            return f"{name}({','.join(map(str, self.controls))};{','.join(map(str, self.targets))})"
        return f"{name}({','.join(map(str, self.targets))})"


def merged(matrix, wires, parts=()) -> Gate:
    """Build a MERGED gate from a unitary over ``wires`` (first wire MSB)."""
    m = np.asarray(matrix, dtype=complex)
    return Gate(
        Kind.MERGED,
        (),
        tuple(wires),
        tuple(complex(z) for z in m.ravel()),
        tuple(parts),
    )


# Shorthand constructors; argument order is controls first, then targets.

def x(t: int) -> Gate:
    return Gate(Kind.X, (), (t,))


def v(t: int) -> Gate:
    return Gate(Kind.V, (), (t,))


def v_dag(t: int) -> Gate:
    return Gate(Kind.V_DAG, (), (t,))


def h(t: int) -> Gate:
    return Gate(Kind.H, (), (t,))


def cnot(c: int, t: int) -> Gate:
    return Gate(Kind.CNOT, (c,), (t,))


def cv(c: int, t: int) -> Gate:
    return Gate(Kind.CV, (c,), (t,))


def cv_dag(c: int, t: int) -> Gate:
    return Gate(Kind.CV_DAG, (c,), (t,))


def toffoli(c1: int, c2: int, t: int) -> Gate:
    return Gate(Kind.TOFFOLI, (c1, c2), (t,))


def swap(a: int, b: int) -> Gate:
    return Gate(Kind.SWAP, (), (a, b))


def fredkin(c: int, a: int, b: int) -> Gate:
    return Gate(Kind.FREDKIN, (c,), (a, b))


def peres(a: int, b: int, c: int) -> Gate:
    return Gate(Kind.PERES, (a,), (b, c))
