"""Random gates and brickwork circuits on an open qubit chain."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from .tensor import ATOL, I2, PAULI_X, PAULI_Y, PAULI_Z, apply_2q_gate, is_unitary, kron

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_haar_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random ``d x d`` unitary (Ginibre matrix, QR, phases of R fixed)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return unitary_group.rvs(d, random_state=_rng(seed))


# -- two-qubit Clifford group ----------------------------------------------

CLIFFORD_2Q_ORDER = 11520


def _canonical_phase(u: np.ndarray) -> np.ndarray:
    flat = u.ravel()
    i = int(np.argmax(np.abs(flat) > 1e-6))
    return u * (abs(flat[i]) / flat[i])


def _clifford_key(u: np.ndarray) -> tuple:
    v = np.round(_canonical_phase(u), 8) + 0.0  # drop negative zeros
    return tuple(np.concatenate([v.real.ravel(), v.imag.ravel()]))


@lru_cache(maxsize=1)
def clifford_group_2q() -> np.ndarray:
    """All two-qubit Cliffords modulo global phase, shape ``(11520, 4, 4)``.

    Generated by closure of {H, S} on either qubit and CNOT; each element is
    stored with the phase that makes its first nonzero entry real positive.
    Index order is the (deterministic) breadth-first discovery order.
    """
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    s = np.diag([1, 1j])
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    gens = [np.kron(h, I2), np.kron(I2, h), np.kron(s, I2), np.kron(I2, s), cnot]
    start = np.eye(4, dtype=complex)
    seen = {_clifford_key(start)}
    group = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                w = _canonical_phase(g @ u)
                key = _clifford_key(w)
                if key not in seen:
                    seen.add(key)
                    group.append(w)
                    nxt.append(w)
        frontier = nxt
    if len(group) != CLIFFORD_2Q_ORDER:
        raise RuntimeError(f"Clifford closure produced {len(group)} elements")
    out = np.array(group)
    out.setflags(write=False)
    return out


def sample_two_qubit_clifford(seed=None) -> np.ndarray:
    """Uniformly random two-qubit Clifford as a 4x4 unitary."""
    group = clifford_group_2q()
    return group[_rng(seed).integers(len(group))].copy()


# -- dual-unitary gates and entangling power -------------------------------


def dual_unitary_core(J: float) -> np.ndarray:
    """``exp[-i (pi/4 XX + pi/4 YY + J ZZ)]``."""
    h = np.pi / 4 * (np.kron(PAULI_X, PAULI_X) + np.kron(PAULI_Y, PAULI_Y)) + J * np.kron(PAULI_Z, PAULI_Z)
    return expm(-1j * h)


def make_dual_unitary_gate(J: float, seed=None) -> np.ndarray:
    """Dual-unitary gate ``(u+ (x) u-) core(J) (v- (x) v+)``.

    The four single-qubit dressings are Haar random when ``seed`` is given and
    the identity otherwise.
    """
    if not 0.0 <= J <= np.pi / 4 + 1e-12:
        raise ValueError(f"J must lie in [0, pi/4], got {J}")
    core = dual_unitary_core(J)
    if seed is None:
        return core
    rng = _rng(seed)
    up, um, vm, vp = (sample_haar_unitary(2, rng) for _ in range(4))
    return np.kron(up, um) @ core @ np.kron(vm, vp)


def reshuffle(g: np.ndarray) -> np.ndarray:
    """Space-time dual: ``<k l| g~ |i j> = <j l| g |i k>``."""
    t = np.asarray(g).reshape(2, 2, 2, 2)  # [out1, out2, in1, in2]
    return np.einsum("jlik->klij", t).reshape(4, 4)


def is_dual_unitary(g: np.ndarray, atol: float = ATOL) -> bool:
    return is_unitary(g, atol) and is_unitary(reshuffle(g), atol)


def _operator_schmidt_purity(g: np.ndarray) -> float:
    r = np.asarray(g).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    s = np.linalg.svd(r, compute_uv=False) ** 2
    p = s / s.sum()
    return float(np.sum(p**2))


def operator_entangling_power(g: np.ndarray) -> float:
    """Average operator entanglement a two-qubit gate creates on product operators.

    The gate acts on operator space as ``g (.) g^dagger``, a unitary on
    ``C^4 (x) C^4``. Its entangling power over Haar product inputs is
    ``(D/(D+1))^2 [E(W) + E(W S) - E(S)]`` with ``D = 4``; the operator
    linear entropies of the superoperator follow from those of ``g`` and
    ``g SWAP``. The result is divided by its maximum over two-qubit unitaries,
    ``1/2``, reached at the canonical point ``(pi/4, pi/8, 0)``.
    """
    g = np.asarray(g, dtype=complex)
    if g.shape != (4, 4) or not is_unitary(g):
        raise ValueError("operator_entangling_power needs a 4x4 unitary")
    x = _operator_schmidt_purity(g)
    y = _operator_schmidt_purity(g @ SWAP)
    raw = (16 / 25) * (17 / 16 - x * x - y * y)
    return float(min(max(2.0 * raw, 0.0), 1.0))


# -- brickwork circuits ----------------------------------------------------


class EnsembleKind(enum.Enum):
    GLOBAL_HAAR = "global_haar"
    BRICKWORK_HAAR = "brickwork_haar"
    BRICKWORK_CLIFFORD = "brickwork_clifford"
    BRICKWORK_DUAL_UNITARY = "brickwork_dual_unitary"


@dataclass(frozen=True)
class GateEnsemble:
    kind: EnsembleKind
    J: float | None = None

    def __post_init__(self):
        if self.kind is EnsembleKind.BRICKWORK_DUAL_UNITARY and self.J is None:
            raise ValueError("dual-unitary ensemble needs a J value")

    @property
    def label(self) -> str:
        if self.kind is EnsembleKind.BRICKWORK_DUAL_UNITARY:
            return f"{self.kind.value}(J={self.J:.6g})"
        return self.kind.value


@dataclass
class BrickworkCircuit:
    """Layers of nearest-neighbour two-qubit gates; layer ``i`` (0-based)
    starts at qubit ``i % 2``. Each entry is ``(first_qubit, gate)``."""

    L: int
    layers: list[list[tuple[int, np.ndarray]]] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def unitary(self) -> np.ndarray:
        d = 2**self.L
        u = np.eye(d, dtype=complex)
        for layer in self.layers:
            for q, g in layer:
                u = apply_2q_gate(u, g, q, self.L)
        return u


def layer_pairs(L: int, layer: int) -> list[int]:
    return list(range(layer % 2, L - 1, 2))


def build_brickwork(L: int, ensemble: GateEnsemble, seed=None, depth: int | None = None) -> BrickworkCircuit:
    """Sample a brickwork circuit of ``depth`` (default ``2L``) layers."""
    if L < 2 or L % 2:
        raise ValueError(f"L must be even and >= 2, got {L}")
    if ensemble.kind is EnsembleKind.GLOBAL_HAAR:
        raise ValueError("global Haar unitaries are not brickwork circuits")
    depth = 2 * L if depth is None else depth
    rng = _rng(seed)
    repeated = None
    if ensemble.kind is EnsembleKind.BRICKWORK_DUAL_UNITARY:
        repeated = make_dual_unitary_gate(ensemble.J, rng)
    circ = BrickworkCircuit(L)
    for i in range(depth):
        layer = []
        for q in layer_pairs(L, i):
            if repeated is not None:
                g = repeated
            elif ensemble.kind is EnsembleKind.BRICKWORK_HAAR:
                g = sample_haar_unitary(4, rng)
            else:
                g = sample_two_qubit_clifford(rng)
            layer.append((q, g))
        circ.layers.append(layer)
    return circ


def sample_circuit_unitary(L: int, ensemble: GateEnsemble, seed=None, depth: int | None = None) -> np.ndarray:
    """Dense ``2^L x 2^L`` unitary drawn from ``ensemble``."""
    if ensemble.kind is EnsembleKind.GLOBAL_HAAR:
        return sample_haar_unitary(2**L, seed)
    return build_brickwork(L, ensemble, seed, depth).unitary()


def gate_unitaries(circ: BrickworkCircuit) -> Sequence[np.ndarray]:
    return [g for layer in circ.layers for _, g in layer]


def pauli_2q(label: str) -> np.ndarray:
    table = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
    return kron(table[label[0]], table[label[1]])
