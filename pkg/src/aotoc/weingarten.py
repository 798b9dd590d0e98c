"""Exact Haar average of the A-OTOC through fourth-moment Weingarten calculus.

The average of ``(U^dagger)^(x)4 O U^(x)4`` over ``U(2^L)`` is a combination of
the 24 permutation operators ``T_pi`` on four copies. Both ``O`` and the
permutations factor over qubits, so every trace below is a product of
single-qubit 16x16 traces and the whole evaluation is ``O(24^2)`` scalar work
for any ``L``. Weingarten values are kept as exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np
import sympy

from .channels import QubitChannel
from .closed_form import CircuitParams, NumericalContractError, _checked_unit_interval
from .tensor import QubitLayout

# -- the symmetric group S4 ------------------------------------------------


@dataclass(frozen=True, order=True)
class Perm:
    """A permutation of ``{0, 1, 2, 3}`` stored by its images."""

    images: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        # (self * other)(i) = self(other(i))
        return Perm(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(len(self.images)):
            if start in seen:
                continue
            cyc = []
            j = start
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    @property
    def n_cycles(self) -> int:
        return len(self.cycles())

    @property
    def sign(self) -> int:
        return (-1) ** (len(self.images) - self.n_cycles)


IDENTITY = Perm((0, 1, 2, 3))


def transposition(i: int, j: int) -> Perm:
    im = list(range(4))
    im[i], im[j] = im[j], im[i]
    return Perm(tuple(im))


@lru_cache(maxsize=None)
def s4_elements() -> tuple[Perm, ...]:
    return tuple(Perm(p) for p in itertools.permutations(range(4)))


PARTITIONS_OF_4: tuple[tuple[int, ...], ...] = ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))


def _mn_character(shape: tuple[int, ...], rest: tuple[int, ...]) -> int:
    # Murnaghan-Nakayama on beta-sets: removing a rim hook of length r moves
    # one bead from position b to b - r; the sign counts beads jumped over.
    if not rest:
        return 1
    r, tail = rest[0], rest[1:]
    n = len(shape)
    beta = [shape[i] + n - 1 - i for i in range(n)]
    beads = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in beads:
            continue
        height = sum(1 for x in beads if nb < x < b)
        new = sorted((beads - {b}) | {nb}, reverse=True)
        parts = tuple(x - (n - 1 - i) for i, x in enumerate(new))
        parts = tuple(p for p in parts if p > 0)
        total += (-1) ** height * _mn_character(parts, tail)
    return total


@lru_cache(maxsize=None)
def character(shape: tuple[int, ...], cycle_type: tuple[int, ...]) -> int:
    """Irreducible character of ``S_n`` at a conjugacy class (Murnaghan-Nakayama)."""
    if sum(shape) != sum(cycle_type):
        raise ValueError(f"partition {shape} and cycle type {cycle_type} differ in size")
    return _mn_character(tuple(shape), tuple(cycle_type))


def s4_character(shape: tuple[int, ...], pi: Perm) -> int:
    return character(tuple(shape), pi.cycle_type)


def irrep_dim(shape: tuple[int, ...]) -> int:
    return character(tuple(shape), (1,) * sum(shape))


def projector_trace(shape: tuple[int, ...], d: int) -> int:
    """Trace of the isotypic projector of ``shape`` on ``(C^d)^(x)4``."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    dl = irrep_dim(shape)
    s = sum(s4_character(shape, sig) * d**sig.n_cycles for sig in s4_elements())
    val = Fraction(dl * s, factorial(4))
    assert val.denominator == 1
    return int(val)


# -- Weingarten function ---------------------------------------------------

_CLASSES = ((1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,))


@lru_cache(maxsize=64)
def weingarten_class_values(d: int) -> dict[tuple[int, ...], Fraction]:
    """Exact ``Wg(cycle type; d)`` from the Gram system ``sum_s Wg(s) d^c(s^-1 r) = delta``.

    ``Wg`` is a class function, so the 24x24 Gram inverse reduces to five
    unknowns; one equation per class representative determines them and all
    24 equations are then checked exactly.
    """
    if d < 4:
        raise ValueError(f"Weingarten table needs d >= 4 (d >= k), got {d}")
    els = s4_elements()
    reps = {ct: next(s for s in els if s.cycle_type == ct) for ct in _CLASSES}

    def row(rho):
        r = [0] * 5
        for s in els:
            r[_CLASSES.index(s.cycle_type)] += d ** (s.inverse() * rho).n_cycles
        return r

    a = sympy.Matrix([row(reps[ct]) for ct in _CLASSES])
    b = sympy.Matrix([1, 0, 0, 0, 0])
    sol = a.LUsolve(b)
    vals = {ct: Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for ct, v in zip(_CLASSES, sol)}
    for rho in els:
        lhs = sum(vals[s.cycle_type] * d ** (s.inverse() * rho).n_cycles for s in els)
        if lhs != (1 if rho == IDENTITY else 0):
            raise ArithmeticError("Gram system solution failed exact verification")
    return vals


def weingarten_character_sum(d: int) -> dict[tuple[int, ...], Fraction]:
    """Second construction of ``Wg`` from characters and projector traces.

    ``Tr(Pi_lambda)`` counts each ``U(d)`` irrep with multiplicity ``d_lambda``,
    hence the third power of ``d_lambda`` in the numerator.
    """
    out = {}
    for ct in _CLASSES:
        acc = Fraction(0)
        for lam in PARTITIONS_OF_4:
            tr = projector_trace(lam, d)
            if tr == 0:
                continue
            acc += Fraction(irrep_dim(lam) ** 3 * character(lam, ct), factorial(4) ** 2 * tr)
        out[ct] = acc
    return out


@dataclass(frozen=True)
class WeingartenTable:
    """Gram and Weingarten matrices of ``S4`` acting on ``(C^d)^(x)4``.

    ``gram[i, j] = d^c(pi_i^-1 pi_j)`` and ``wg`` is its inverse, both indexed by
    ``s4_elements()`` order. Entries are floats; use ``exact`` for rationals.
    """

    d: int
    gram: np.ndarray
    wg: np.ndarray
    exact: dict = field(repr=False)


def weingarten_table(d: int) -> WeingartenTable:
    vals = weingarten_class_values(d)
    els = s4_elements()
    gram = np.array([[float(d) ** (p.inverse() * s).n_cycles for s in els] for p in els])
    wg = np.array([[float(vals[(p.inverse() * s).cycle_type]) for s in els] for p in els])
    return WeingartenTable(d=d, gram=gram, wg=wg, exact=vals)


# -- single-qubit four-copy operators --------------------------------------


@lru_cache(maxsize=None)
def _perm_matrix(images: tuple[int, ...], dim: int = 2) -> np.ndarray:
    # T_pi moves the tensor factor in slot i to slot pi(i)
    n = dim**4
    m = np.zeros((n, n))
    for idx in itertools.product(range(dim), repeat=4):
        out = [0] * 4
        for i in range(4):
            out[images[i]] = idx[i]
        m[np.ravel_multi_index(out, (dim,) * 4), np.ravel_multi_index(idx, (dim,) * 4)] = 1.0
    m.setflags(write=False)
    return m


def perm_operator(pi: Perm, dim: int = 2) -> np.ndarray:
    """Representation of ``pi`` on ``(C^dim)^(x)4``; ``T_p T_q = T_(pq)``."""
    return _perm_matrix(pi.images, dim)


def four_copy_noise_factor(c: QubitChannel) -> np.ndarray:
    """``sum_ij K_i (x) K_j (x) K_i^dagger (x) K_j^dagger`` on one qubit (16x16)."""
    acc = np.zeros((16, 16), dtype=complex)
    for a in c.kraus:
        for b in c.kraus:
            acc += np.kron(np.kron(np.kron(a, b), a.conj().T), b.conj().T)
    return acc


def _qubit_cycle_counts():
    """Cycle counts of the three per-qubit factors in the outer trace.

    For each ``pi`` the A-qubit factor is ``s13 s24 t_pi s12 s34``, and the
    B-qubit factor is ``s13 s24 t_pi s34`` (``d_B S_34`` term) or
    ``s13 s24 t_pi`` (``S_A3A4`` term). The trace of a permutation operator
    on ``(C^2)^(x)4`` is ``2^cycles``.
    """
    s13s24 = transposition(0, 2) * transposition(1, 3)
    s12s34 = transposition(0, 1) * transposition(2, 3)
    s34 = transposition(2, 3)
    out = []
    for pi in s4_elements():
        out.append(
            (
                (s13s24 * pi * s12s34).n_cycles,
                (s13s24 * pi * s34).n_cycles,
                (s13s24 * pi).n_cycles,
            )
        )
    return out


@lru_cache(maxsize=256)
def _sigma_coefficients(L: int) -> tuple[float, ...]:
    """Exact ``d^c(sigma) d^-2 sum_pi Wg(pi, sigma) Tr(outer_pi)``, rounded once."""
    layout = QubitLayout(L)
    d, d_b, half = layout.d, layout.d_B, L // 2
    vals = weingarten_class_values(d)
    els = s4_elements()
    outer = [d_b * 2 ** (half * (ca + cb)) - 2 ** (half * (ca + cc)) for ca, cb, cc in _qubit_cycle_counts()]
    coefs = []
    for sig in els:
        acc = sum(vals[(pi.inverse() * sig).cycle_type] * outer[i] for i, pi in enumerate(els))
        coefs.append(float(acc * Fraction(d**sig.n_cycles, d * d)))
    return tuple(coefs)


@lru_cache(maxsize=256)
def _b_coefficients(L: int) -> np.ndarray:
    # W[pi, sigma] * 2^(c(sigma) L), exact then rounded
    d = 2**L
    vals = weingarten_class_values(d)
    els = s4_elements()
    return np.array(
        [[float(vals[(p.inverse() * s).cycle_type] * d**s.n_cycles) for s in els] for p in els]
    )


def noise_traces(c: QubitChannel) -> np.ndarray:
    """``Tr(X2 t_sigma^dagger)`` for every ``sigma``, in ``s4_elements()`` order."""
    x2 = four_copy_noise_factor(c)
    return np.array([np.trace(x2 @ perm_operator(s).T) for s in s4_elements()])


def haar_averaged_g_exact(c: QubitChannel, p: CircuitParams) -> float:
    """Exact Haar average of the bipartite A-OTOC of ``U^dagger E^(x)k U``.

    The outer trace is ``Tr(S13 S24 Phi(O) (S_A1A2 (x) (d_B S34 - S_A3A4)))``
    with ``Phi(O) = sum_pi b_pi T_pi`` and
    ``b_pi = sum_sigma Wg(pi^-1 sigma) Tr(O T_sigma^dagger)``.
    """
    f = noise_traces(c)
    els = s4_elements()
    scaled = np.array([(f[i] / 2**s.n_cycles) ** p.k for i, s in enumerate(els)])

    # b_pi with the common factor 2^(-c(sigma) k) already folded into ``scaled``
    b = _b_coefficients(p.L) @ scaled
    scale = max(1.0, float(np.max(np.abs(b))))
    if np.max(np.abs(b.imag)) > 1e-10 * scale:
        raise NumericalContractError(f"b_pi has imaginary residue {np.max(np.abs(b.imag)):.3e}")

    g = complex(np.dot(np.array(_sigma_coefficients(p.L)), scaled))
    return _checked_unit_interval(g, f"haar_averaged_g_exact(L={p.L}, k={p.k})")


# -- literal dense reference -----------------------------------------------


def dense_four_copy_g(c: QubitChannel, p: CircuitParams) -> float:
    """Evaluate the four-copy trace with full ``(2^L)^4``-dimensional operators.

    No per-qubit factorization: ``O``, the permutations and the swaps are all
    built on four copies of the whole register. Only practical for ``L = 2``.
    """
    L, k = p.L, p.k
    layout = QubitLayout(L)
    d, d_a, d_b = layout.d, layout.d_A, layout.d_B
    if d**4 > 4096:
        raise ValueError("dense four-copy reference is limited to L <= 3")

    # Kraus operators of E^(x)k (x) id on the full register
    full = []
    for combo in itertools.product(c.kraus, repeat=k):
        m = np.eye(1)
        for kk in combo:
            m = np.kron(m, kk)
        full.append(np.kron(m, np.eye(2 ** (L - k))))
    o = np.zeros((d**4, d**4), dtype=complex)
    for a in full:
        for b in full:
            o += np.kron(np.kron(np.kron(a, b), a.conj().T), b.conj().T)

    table = weingarten_table(d)
    els = s4_elements()
    t = [perm_operator(s, d) for s in els]
    cvec = np.array([np.trace(o @ ts.T) for ts in t])
    bvec = table.wg @ cvec
    phi = sum(bi * ti for bi, ti in zip(bvec, t))

    # subsystem swaps on four copies of (A (x) B): tensor legs (a1 b1 a2 b2 a3 b3 a4 b4)
    def leg_swap(pairs):
        dims = [d_a, d_b] * 4
        perm = list(range(8))
        for i, j in pairs:
            perm[i], perm[j] = perm[j], perm[i]
        n = d**4
        eye = np.eye(n).reshape(dims + [n])
        return eye.transpose(perm + [8]).reshape(n, n)

    s13s24 = leg_swap([(0, 4), (1, 5)]) @ leg_swap([(2, 6), (3, 7)])
    s_a1a2 = leg_swap([(0, 2)])
    s34 = leg_swap([(4, 6), (5, 7)])
    s_a3a4 = leg_swap([(4, 6)])
    m34 = d_b * s34 - s_a3a4
    g = np.trace(s13s24 @ phi @ s_a1a2 @ m34) / d**2
    return _checked_unit_interval(complex(g), "dense_four_copy_g")


def haar_mc_average_g(c: QubitChannel, p: CircuitParams, n: int, seed: int):
    """Mean and standard error of the exact A-OTOC over ``n`` global Haar draws."""
    from .otoc import AotocEstimate, aotoc_exact
    from .circuits import sample_haar_unitary

    layout = QubitLayout(p.L)
    ss = np.random.SeedSequence(seed)
    vals = np.array(
        [aotoc_exact(sample_haar_unitary(layout.d, child), c, p.k, layout) for child in ss.spawn(n)]
    )
    err = float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return AotocEstimate(value=float(vals.mean()), stderr=err, n_circuits=n, n_states=0, seed=seed)
