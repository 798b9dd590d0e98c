"""Dense multi-qubit linear algebra helpers.

Matrices are plain ``numpy`` complex arrays. Qubit 0 is the leftmost tensor
factor, so the bipartition used throughout puts qubits ``0 .. L/2 - 1`` in
subsystem A and the rest in B.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Union

import numpy as np

ATOL = 1e-10

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


@dataclass(frozen=True)
class QubitLayout:
    """An even-length qubit chain split into halves A (left) and B (right)."""

    L: int

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ValueError(f"qubit count must be even and >= 2, got {self.L}")

    @property
    def d(self) -> int:
        return 2**self.L

    @property
    def d_A(self) -> int:
        return 2 ** (self.L // 2)

    @property
    def d_B(self) -> int:
        return 2 ** (self.L // 2)

    @property
    def qubits_A(self) -> tuple[int, ...]:
        return tuple(range(self.L // 2))

    @property
    def qubits_B(self) -> tuple[int, ...]:
        return tuple(range(self.L // 2, self.L))


def kron(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices, left to right."""
    if not mats:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, mats)


def _n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def partial_trace(
    m: np.ndarray,
    traced: Union[str, Iterable[int]],
    layout: QubitLayout | None = None,
) -> np.ndarray:
    """Trace out a set of qubits from a ``2^L x 2^L`` operator.

    Parameters
    ----------
    m : ndarray
        Square operator on ``L`` qubits.
    traced : {"A", "B"} or iterable of int
        Half of the chain to discard, or explicit qubit indices.
    layout : QubitLayout, optional
        Needed only when ``traced`` names a half; inferred from ``m`` otherwise.

    Returns
    -------
    ndarray
        Operator on the remaining qubits, in their original order.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = _n_qubits(m.shape[0])
    if isinstance(traced, str):
        layout = layout or QubitLayout(n)
        if layout.L != n:
            raise ValueError(f"layout has {layout.L} qubits but matrix has {n}")
        if traced == "A":
            qubits = layout.qubits_A
        elif traced == "B":
            qubits = layout.qubits_B
        else:
            raise ValueError(f"unknown subsystem {traced!r}")
    else:
        qubits = tuple(sorted(set(int(q) for q in traced)))
        if any(q < 0 or q >= n for q in qubits):
            raise ValueError(f"qubit indices {qubits} out of range for {n} qubits")

    keep = [q for q in range(n) if q not in qubits]
    t = m.reshape((2,) * (2 * n))
    # einsum labels: row index q -> q, column index q -> n + q
    row = list(range(n))
    col = [n + q for q in range(n)]
    for q in qubits:
        col[q] = row[q]
    out = [row[q] for q in keep] + [col[q] for q in keep]
    res = np.einsum(t, row + col, out)
    dk = 2 ** len(keep)
    return np.asarray(res).reshape(dk, dk)


def swap_operator(d: int) -> np.ndarray:
    """Swap on ``C^d (x) C^d``: ``S (x (x) y) = y (x) x``."""
    s = np.zeros((d * d, d * d), dtype=complex)
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    s[(j * d + i).ravel(), (i * d + j).ravel()] = 1.0
    return s


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr(x^dagger y)``."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    return complex(np.vdot(x, y))


def is_unitary(u: np.ndarray, atol: float = ATOL) -> bool:
    u = np.asarray(u)
    return u.shape[0] == u.shape[1] and np.allclose(
        u.conj().T @ u, np.eye(u.shape[0]), atol=atol, rtol=0
    )


def apply_1q_channel(rho: np.ndarray, kraus, qubit: int, n: int) -> np.ndarray:
    """Apply ``rho -> sum_i K_i rho K_i^dagger`` on a single qubit of ``n``."""
    t = np.asarray(rho).reshape((2**qubit, 2, 2 ** (n - qubit - 1)) * 2)
    out = np.zeros_like(t, dtype=complex)
    for k in kraus:
        out += np.einsum("ab,ibjkcl,cd->iajkdl", k, t, k.conj().T)
    return out.reshape(rho.shape)


def apply_2q_gate(state: np.ndarray, gate: np.ndarray, q: int, n: int) -> np.ndarray:
    """Left-multiply columns of ``state`` by ``gate`` on qubits ``(q, q + 1)``."""
    cols = state.shape[1]
    t = state.reshape(2**q, 4, 2 ** (n - q - 2), cols)
    t = np.einsum("ab,ibjc->iajc", gate, t)
    return t.reshape(state.shape)
