"""A-OTOC of a concrete noisy encoding-decoding circuit ``C = U^dagger E^(x)k U``.

``C`` acts on observables (Heisenberg picture) as
``Q -> U^dagger E^(x)k(U Q U^dagger) U``, noise on qubits ``0 .. k-1``; its
state-evolution adjoint is ``rho -> U^dagger (E^dagger)^(x)k(U rho U^dagger) U``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .channels import QubitChannel
from .circuits import BrickworkCircuit
from .tensor import QubitLayout, apply_1q_channel, partial_trace

DEFAULT_MAX_L = 8


class ResourceGuardError(RuntimeError):
    """Dense simulation requested beyond the configured qubit limit."""


def max_dense_qubits() -> int:
    return int(os.environ.get("AOTOC_MAX_L", DEFAULT_MAX_L))


def _check_size(L: int) -> None:
    limit = max_dense_qubits()
    if L > limit:
        raise ResourceGuardError(
            f"dense simulation of L={L} exceeds the limit {limit}; raise AOTOC_MAX_L to override"
        )


@dataclass(frozen=True)
class AotocEstimate:
    """Sample mean with its standard error over the outer (circuit) loop."""

    value: float
    stderr: float
    n_circuits: int
    n_states: int
    seed: int | None


def _dense(u) -> np.ndarray:
    return u.unitary() if isinstance(u, BrickworkCircuit) else np.asarray(u, dtype=complex)


def _noise(m: np.ndarray, kraus, k: int, n: int) -> np.ndarray:
    for q in range(k):
        m = apply_1q_channel(m, kraus, q, n)
    return m


def apply_heisenberg(op: np.ndarray, u, c: QubitChannel, k: int) -> np.ndarray:
    """``U^dagger E^(x)k(U op U^dagger) U``."""
    u = _dense(u)
    n = u.shape[0].bit_length() - 1
    return u.conj().T @ _noise(u @ op @ u.conj().T, c.kraus, k, n) @ u


def apply_circuit_channel(rho: np.ndarray, u, c: QubitChannel, k: int) -> np.ndarray:
    """Schrodinger-picture action ``U^dagger (E^dagger)^(x)k(U rho U^dagger) U``."""
    u = _dense(u)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != u.shape:
        raise ValueError(f"state of shape {rho.shape} does not match circuit {u.shape}")
    n = u.shape[0].bit_length() - 1
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} qubits")
    adj = [kk.conj().T for kk in c.kraus]
    return u.conj().T @ _noise(u @ rho @ u.conj().T, adj, k, n) @ u


def aotoc_exact(u, c: QubitChannel, k: int, layout: QubitLayout) -> float:
    """Bipartite A-OTOC ``d^-2 Tr((d_B S - S_AA') C^(x)2(S_AA'))`` of one circuit.

    With ``S_AA' = sum_ab (e_ab (x) 1_B) (x) (e_ba (x) 1_B)`` and
    ``C_ab = C(e_ab (x) 1_B)`` (so ``C_ba = C_ab^dagger``) the trace reduces to
    ``sum_ab d_B ||C_ab||^2 - ||Tr_B C_ab||^2``.
    """
    _check_size(layout.L)
    u = _dense(u)
    d, d_a, d_b = layout.d, layout.d_A, layout.d_B
    if u.shape != (d, d):
        raise ValueError(f"unitary of shape {u.shape} does not match L={layout.L}")
    n = layout.L
    ud = u.conj().T
    total = 0.0
    for a in range(d_a):
        ua = u[:, a * d_b : (a + 1) * d_b]
        for b in range(a, d_a):
            ub = u[:, b * d_b : (b + 1) * d_b]
            y = _noise(ua @ ub.conj().T, c.kraus, k, n)
            cab = ud @ y @ u
            blocks = np.einsum("xbyb->xy", cab.reshape(d_a, d_b, d_a, d_b))
            term = d_b * np.vdot(cab, cab).real - np.vdot(blocks, blocks).real
            total += term if a == b else 2 * term
    return float(total / d**2)


def linear_entropy(rho: np.ndarray) -> float:
    return float(1.0 - np.vdot(rho, rho).real)


def aotoc_state_sample(u, c: QubitChannel, k: int, layout: QubitLayout, psi: np.ndarray) -> float:
    """Single-state term of the state-average formula for one ``|psi>`` on A.

    ``N_A [S_L(Tr_B C~(psi)) - d_B (S_L(C~(psi)) - S_L^min)]`` with
    ``C~(psi) = C(psi (x) 1_B / d_B)`` using the same map ``C`` as
    :func:`aotoc_exact`.
    """
    u = _dense(u)
    d_a, d_b = layout.d_A, layout.d_B
    psi = np.asarray(psi, dtype=complex).reshape(d_a)
    # U (psi (x) 1_B) U^dagger / d_B = W W^dagger with W = U (psi (x) 1_B) / sqrt(d_B)
    w = np.einsum("xab,a->xb", u.reshape(layout.d, d_a, d_b), psi) / np.sqrt(d_b)
    n = layout.L
    out = u.conj().T @ _noise(w @ w.conj().T, c.kraus, k, n) @ u
    s_full = linear_entropy(out)
    s_a = linear_entropy(partial_trace(out, "B", layout))
    n_a = (d_a + 1) / d_a
    return n_a * (s_a - d_b * (s_full - (1.0 - 1.0 / d_b)))


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def aotoc_state_estimate(u, c: QubitChannel, k: int, layout: QubitLayout, n_states: int, seed) -> AotocEstimate:
    """Monte-Carlo estimate of the A-OTOC of one circuit from Haar states on A."""
    if n_states < 2:
        raise ValueError("need at least two states for a standard error")
    _check_size(layout.L)
    u = _dense(u)
    rng = np.random.default_rng(seed)
    vals = np.array(
        [aotoc_state_sample(u, c, k, layout, haar_state(layout.d_A, rng)) for _ in range(n_states)]
    )
    return AotocEstimate(
        value=float(vals.mean()),
        stderr=float(vals.std(ddof=1) / np.sqrt(n_states)),
        n_circuits=1,
        n_states=n_states,
        seed=seed if isinstance(seed, int) else None,
    )

