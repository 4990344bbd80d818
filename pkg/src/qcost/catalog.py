"""Gate catalog: local matrices, quantum costs and NCV decompositions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownKind
from .gates import Gate, Kind, cnot, cv, cv_dag, toffoli

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_V = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_V_DAG = _V.conj().T


def _controlled(u: np.ndarray) -> np.ndarray:
    d = u.shape[0]
    out = np.eye(2 * d, dtype=complex)
    out[d:, d:] = u
    return out


def _basis_permutation(nbits: int, fn) -> np.ndarray:
    """Permutation matrix of a function on bit tuples (first bit is the MSB)."""
    dim = 2**nbits
    m = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        bits = tuple((i >> (nbits - 1 - k)) & 1 for k in range(nbits))
        out = fn(*bits)
        j = sum(b << (nbits - 1 - k) for k, b in enumerate(out))
        m[j, i] = 1
    return m


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


MATRICES: dict[Kind, np.ndarray] = {
    Kind.X: _freeze(_X),
    Kind.H: _freeze(_H),
    Kind.V: _freeze(_V),
    Kind.V_DAG: _freeze(_V_DAG),
    Kind.CNOT: _freeze(_controlled(_X)),
    Kind.CV: _freeze(_controlled(_V)),
    Kind.CV_DAG: _freeze(_controlled(_V_DAG)),
    Kind.SWAP: _freeze(_basis_permutation(2, lambda a, b: (b, a))),
    Kind.TOFFOLI: _freeze(_basis_permutation(3, lambda a, b, c: (a, b, c ^ (a & b)))),
    Kind.FREDKIN: _freeze(
        _basis_permutation(3, lambda c, a, b: (c, b, a) if c else (c, a, b))
    ),
    Kind.PERES: _freeze(_basis_permutation(3, lambda a, b, c: (a, a ^ b, c ^ (a & b)))),
}


@dataclass(frozen=True)
class CatalogEntry:
    kind: Kind
    matrix: np.ndarray | None
    catalog_cost: int
    self_inverse: bool


# Every 1- and 2-qubit kind costs 1; a merged block is itself one 2x2 or 4x4 gate.
_COSTS = {
    Kind.X: 1,
    Kind.V: 1,
    Kind.V_DAG: 1,
    Kind.H: 1,
    Kind.CNOT: 1,
    Kind.CV: 1,
    Kind.CV_DAG: 1,
    Kind.SWAP: 1,
    Kind.MERGED: 1,
    Kind.TOFFOLI: 5,
    Kind.PERES: 4,
    Kind.FREDKIN: 5,
}

_SELF_INVERSE = frozenset(
    {Kind.X, Kind.CNOT, Kind.TOFFOLI, Kind.SWAP, Kind.FREDKIN, Kind.H}
)

CATALOG: dict[Kind, CatalogEntry] = {
    k: CatalogEntry(k, MATRICES.get(k), _COSTS[k], k in _SELF_INVERSE) for k in Kind
}


def _kind(kind) -> Kind:
    try:
        return Kind(kind)
    except ValueError:
        raise UnknownKind(f"unknown gate kind {kind!r}") from None


def catalog_cost(kind) -> int:
    return CATALOG[_kind(kind)].catalog_cost


def is_self_inverse(kind) -> bool:
    return CATALOG[_kind(kind)].self_inverse


def local_matrix(g: Gate) -> np.ndarray:
    """Matrix of ``g`` over ``g.wires`` (first wire is the most significant bit)."""
    if g.kind is Kind.MERGED:
        return g.matrix
    return MATRICES[g.kind]


def _toffoli_ncv(a: int, b: int, c: int) -> list[Gate]:
    return [cv(b, c), cnot(a, b), cv_dag(b, c), cnot(a, b), cv(a, c)]


def decompose(g: Gate) -> list[Gate]:
    """Expand ``g`` into 1- and 2-qubit primitives.

    Gates that already act on at most two wires come back unchanged, except
    SWAP which is spelled out as three CNOTs.
    """
    kind = _kind(g.kind)
    if kind is Kind.TOFFOLI:
        (a, b), (c,) = g.controls, g.targets
        return _toffoli_ncv(a, b, c)
    if kind is Kind.PERES:
        (a,), (b, c) = g.controls, g.targets
        # Toffoli's sequence with its trailing CNOT(a;b) cancelled.
        return [cv(b, c), cnot(a, b), cv_dag(b, c), cv(a, c)]
    if kind is Kind.FREDKIN:
        (a,), (b, c) = g.controls, g.targets
        return [cnot(c, b), *_toffoli_ncv(a, b, c), cnot(c, b)]
    if kind is Kind.SWAP:
        a, b = g.targets
        return [cnot(a, b), cnot(b, a), cnot(a, b)]
    return [g]


def fredkin_as_toffolis(a: int, b: int, c: int) -> list[Gate]:
    """The three-Toffoli NCT realisation of FREDKIN(a; b, c)."""
    return [toffoli(a, b, c), toffoli(a, c, b), toffoli(a, b, c)]
