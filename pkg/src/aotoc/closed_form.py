"""Closed-form Haar averages of the bipartite A-OTOC of ``U^dagger E^(x)k U``.

Every finite-size expression is evaluated after dividing through by ``2^(6L)``,
so only powers of ``1 / 2^L`` ever appear and ``L`` can be arbitrarily large.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import ChannelMoments, QubitChannel, channel_kraus_rank, channel_moments

IMAG_TOL = 1e-10


class NumericalContractError(ArithmeticError):
    """A result violated a numerical contract (imaginary residue, range)."""


@dataclass(frozen=True)
class CircuitParams:
    """Chain length ``L`` (even) and number ``k`` of noisy sites."""

    L: int
    k: int

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ValueError(f"L must be even and >= 2, got {self.L}")
        if not 1 <= self.k <= self.L:
            raise ValueError(f"k must satisfy 1 <= k <= L, got k={self.k}, L={self.L}")


def _as_moments(m) -> ChannelMoments:
    return channel_moments(m) if isinstance(m, QubitChannel) else m


def _checked_unit_interval(g: complex, what: str) -> float:
    if abs(g.imag) > IMAG_TOL:
        raise NumericalContractError(f"{what}: imaginary residue {g.imag:.3e}")
    v = g.real
    if v < -1e-9 or v > 1 + 1e-9:
        raise NumericalContractError(f"{what}: value {v!r} outside [0, 1]")
    return min(max(v, 0.0), 1.0) + 0.0  # no negative zero


def _real_t1(m: ChannelMoments) -> float:
    if abs(m.t1.imag) > IMAG_TOL:
        raise NumericalContractError(f"Tr X has imaginary part {m.t1.imag:.3e}")
    return m.t1.real


def finite_terms(m: ChannelMoments, L: int, k: int, *, as_printed: bool = False) -> np.ndarray:
    """The nine bracketed terms of the finite-``L`` average, each already
    multiplied by ``2^(-4k) / 2^(6L)``.

    With ``as_printed=True`` the third and fifth coefficients are taken exactly
    as they appear in the original typeset statement, which does not vanish for
    the identity channel; the default uses the coefficients that reproduce the
    exact Weingarten average (see ``weingarten.haar_averaged_g_exact``).
    """
    u = 4.0 ** (-L)  # 2^(-2L)
    if as_printed:
        c3 = -2.0 * (u - 2 * u * u)
        c5 = -20.0 * u * u
    else:
        c3 = -2.0 * (u - 4 * u * u)
        c5 = 20.0 * u * u
    return np.array(
        [
            (1 - 4 * u) * (m.t1 / 4) ** (2 * k),
            -6.0 * (u - 4 * u * u) * ((m.m2 / 8) ** k).real,
            c3 * (m.t1 / 4) ** k,
            -2.0 * (u + 6 * u * u) * (m.m4 / 8) ** k,
            c5 * ((m.m5 / 4) ** k).real,
            -2.0 * (u * u + 6 * u**3) * (m.m6 / 2) ** k,
            (u - 4 * u * u) * (m.m7 / 4) ** k,
            -(1 - 12 * u + 22 * u * u) * (m.m8 / 4) ** k,
            (u - 12 * u * u + 12 * u**3) * (2 * m.m9) ** k,
        ],
        dtype=complex,
    )


def _normalized_prefactor(L: int) -> float:
    # -(2^-L - 2^-2L) 2^(6L) / prod(2^L + j), divided through by 2^(6L)
    q = 2.0 ** (-L)
    den = (1 - 3 * q) * (1 - 2 * q) * (1 + q) * (1 + 2 * q) * (1 + 3 * q)
    return -(1 - q) / den


def g_finite(m, p: CircuitParams, *, as_printed: bool = False) -> float:
    """Haar-averaged bipartite A-OTOC on a finite chain.

    Parameters
    ----------
    m : ChannelMoments or QubitChannel
    p : CircuitParams
    as_printed : bool
        Use the coefficients as originally typeset (for comparison only).
    """
    m = _as_moments(m)
    _real_t1(m)
    g = _normalized_prefactor(p.L) * finite_terms(m, p.L, p.k, as_printed=as_printed).sum()
    if as_printed:
        return float(g.real)
    return _checked_unit_interval(complex(g), f"g_finite(L={p.L}, k={p.k})")


def g_thermo(m, k: int) -> float:
    """Infinite-chain limit ``(||X||^2 / 4)^k - (Tr X / 4)^(2k)``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    m = _as_moments(m)
    t1 = _real_t1(m)
    g = (m.m8 / 4) ** k - (t1 / 4) ** (2 * k)
    return _checked_unit_interval(complex(g), f"g_thermo(k={k})")


def g_unitary_example(theta: float, k: int) -> float:
    return 1.0 - math.cos(theta) ** (4 * k)


def g_depol_example(p: float, k: int) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return (1 - 1.5 * p + 0.75 * p * p) ** k - (1 - 0.75 * p) ** (2 * k)


class ExtensiveLimit(enum.Enum):
    """Behaviour of the average when ``k`` grows proportionally to ``L``."""

    MAXIMAL_SCRAMBLING = "MaximalScrambling"
    VANISHING_AOTOC = "VanishingAotoc"
    NO_EFFECT = "NoEffect"


def classify_extensive_limit(c: QubitChannel) -> ExtensiveLimit:
    """Limit of the average for ``k = alpha L``, ``L -> infinity``, alpha > 0.

    The identity gives zero for every ``k``. Any other unitary saturates the
    first term at 1 while the second decays, so the limit is 1. Any channel of
    Kraus rank above one has both terms decaying to 0.
    """
    if c.is_identity:
        return ExtensiveLimit.NO_EFFECT
    if channel_kraus_rank(c) == 1:
        return ExtensiveLimit.MAXIMAL_SCRAMBLING
    return ExtensiveLimit.VANISHING_AOTOC


def depol_peak(k: int, grid_step: float = 1e-4, xtol: float = 1e-10) -> float | None:
    """Interior maximizer ``p*`` of the infinite-chain depolarizing curve.

    Returns ``None`` when the maximum over ``[0, 1]`` sits at ``p = 1``, which
    is the case for ``k`` equal to 1 or 2.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = int(round(1.0 / grid_step))
    ps = np.linspace(0.0, 1.0, n + 1)
    vals = (1 - 1.5 * ps + 0.75 * ps**2) ** k - (1 - 0.75 * ps) ** (2 * k)
    i = int(np.argmax(vals))
    if i == 0 or i == n:
        return None
    res = minimize_scalar(
        lambda p: -g_depol_example(p, k),
        bracket=(ps[i - 1], ps[i], ps[i + 1]),
        method="golden",
        options={"xtol": xtol},
    )
    return float(res.x)
