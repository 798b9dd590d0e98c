"""Single-qubit noise channels and the scalar invariants of their natural
representation.

A channel is stored as its Kraus list ``{K_i}`` acting in the Heisenberg
picture, ``E(O) = sum_i K_i O K_i^dagger``. The state-evolution map is the
adjoint ``E^dagger(rho) = sum_i K_i^dagger rho K_i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .tensor import ATOL, I2, PAULIS, swap_operator


class ChannelError(ValueError):
    """Raised for invalid Kraus data or channel specifications."""


class QubitChannel:
    """A single-qubit CP map given by 2x2 Kraus matrices.

    Parameters
    ----------
    kraus : sequence of array_like
        Kraus operators of the Heisenberg-picture map.
    strict : bool
        When true (default) both ``sum K^dagger K`` and ``sum K K^dagger`` must be
        the identity. With ``strict=False`` only unitality ``sum K K^dagger = I``
        is required, which is the weaker condition ``E^dagger`` being CPTP.
    """

    def __init__(self, kraus: Sequence, *, strict: bool = True, name: str = "kraus"):
        ks = [np.array(k, dtype=complex) for k in kraus]
        if not ks:
            raise ChannelError("empty Kraus list")
        for k in ks:
            if k.shape != (2, 2):
                raise ChannelError(f"Kraus operators must be 2x2, got {k.shape}")
            if not np.all(np.isfinite(k)):
                raise ChannelError("non-finite Kraus entry")
        unital = sum(k @ k.conj().T for k in ks)
        if not np.allclose(unital, I2, atol=ATOL, rtol=0):
            raise ChannelError("channel is not unital: sum K K^dagger != I")
        if strict:
            tp = sum(k.conj().T @ k for k in ks)
            if not np.allclose(tp, I2, atol=ATOL, rtol=0):
                raise ChannelError("channel is not trace preserving: sum K^dagger K != I")
        self.kraus: tuple[np.ndarray, ...] = tuple(ks)
        for k in self.kraus:
            k.setflags(write=False)
        self.strict = strict
        self.name = name

    def __repr__(self) -> str:
        return f"QubitChannel({self.name}, {len(self.kraus)} Kraus ops)"

    def __call__(self, op: np.ndarray) -> np.ndarray:
        """Heisenberg action on a 2x2 operator."""
        return sum(k @ op @ k.conj().T for k in self.kraus)

    def adjoint_apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(k.conj().T @ rho @ k for k in self.kraus)

    @property
    def is_identity(self) -> bool:
        return bool(np.allclose(natural_rep(self), np.eye(4), atol=ATOL, rtol=0))

    @property
    def is_unitary(self) -> bool:
        """True when all Kraus operators are proportional to one unitary."""
        return channel_kraus_rank(self) == 1


def identity_channel() -> QubitChannel:
    return QubitChannel([I2], name="identity")


def make_depolarizing(p: float) -> QubitChannel:
    """Depolarize with probability ``p``: ``O -> p Tr(O) I / 2 + (1 - p) O``."""
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"depolarizing probability must lie in [0, 1], got {p}")
    if p == 0.0:
        return QubitChannel([I2], name="depolarizing(p=0)")
    ks = [np.sqrt(1 - 3 * p / 4) * I2] + [np.sqrt(p) / 2 * s for s in PAULIS]
    return QubitChannel(ks, name=f"depolarizing(p={p:g})")


def make_rotation(axis: Sequence[float], theta: float) -> QubitChannel:
    """Unitary channel with the single Kraus operator ``exp(i theta n.sigma)``."""
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise ChannelError(f"rotation axis must be a unit 3-vector, got {axis}")
    gen = sum(c * s for c, s in zip(n, PAULIS))
    v = expm(1j * theta * gen)
    return QubitChannel([v], name=f"rotation(theta={theta:g})")


def adjoint_channel(c: QubitChannel) -> QubitChannel:
    return QubitChannel(
        [k.conj().T for k in c.kraus], strict=c.strict, name=f"adjoint({c.name})"
    )


def natural_rep(c: QubitChannel) -> np.ndarray:
    """``X = sum_i K_i (x) K_i^dagger`` as a 4x4 matrix."""
    return sum(np.kron(k, k.conj().T) for k in c.kraus)


def channel_kraus_rank(c: QubitChannel, tol: float = 1e-9) -> int:
    """Minimal number of Kraus operators (rank of the Choi matrix)."""
    vecs = np.array([k.ravel() for k in c.kraus])
    sv = np.linalg.svd(vecs, compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def _ptrace_first(x: np.ndarray) -> np.ndarray:
    return np.einsum("ijik->jk", x.reshape(2, 2, 2, 2))


def _ptrace_second(x: np.ndarray) -> np.ndarray:
    return np.einsum("ijkj->ik", x.reshape(2, 2, 2, 2))


@dataclass(frozen=True)
class ChannelMoments:
    """Scalar invariants of a channel's natural representation ``X``.

    Attributes
    ----------
    t1 : complex
        ``Tr X``.
    m2 : complex
        ``Tr[(Tr_1 X)^2]``.
    m4 : complex
        ``Tr(Tr_1 X  Tr_2 X)``.
    m5 : complex
        ``Tr[(E (x) id)(X)]``, the channel applied to the first factor of ``X``.
    m6 : complex
        ``Tr(S X^2)`` with ``S`` the two-qubit swap.
    m7 : complex
        ``Tr(X^2)``.
    m8 : float
        ``Tr(X^dagger X)``.
    m9 : float
        Purity of ``E^dagger(I / 2)``.
    """

    t1: complex
    m2: complex
    m4: complex
    m5: complex
    m6: complex
    m7: complex
    m8: float
    m9: float

    def as_dict(self) -> dict[str, complex]:
        return dict(self.__dict__)


def channel_moments(c: QubitChannel) -> ChannelMoments:
    x = natural_rep(c)
    t1x = _ptrace_first(x)
    t2x = _ptrace_second(x)
    x4 = x.reshape(2, 2, 2, 2)
    ex = np.empty_like(x4)
    for j in range(2):
        for l in range(2):
            ex[:, j, :, l] = c(x4[:, j, :, l])
    r = c.adjoint_apply(I2 / 2)
    return ChannelMoments(
        t1=complex(np.trace(x)),
        m2=complex(np.trace(t1x @ t1x)),
        m4=complex(np.trace(t1x @ t2x)),
        m5=complex(np.trace(ex.reshape(4, 4))),
        m6=complex(np.trace(swap_operator(2) @ x @ x)),
        m7=complex(np.trace(x @ x)),
        m8=float(np.real(np.vdot(x, x))),
        m9=float(np.real(np.trace(r @ r))),
    )


# -- text specs ------------------------------------------------------------

_TOKEN = re.compile(r"\S+")


def _read_kraus_file(path: str) -> list[np.ndarray]:
    text = Path(path).read_text()
    blocks = [b for b in re.split(r"\n\s*\n", text.strip()) if b.strip()]
    mats = []
    for b in blocks:
        lines = [ln for ln in b.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        vals = [complex(tok.replace("i", "j")) for ln in lines for tok in ln.split()]
        if len(vals) != 4:
            raise ChannelError(f"Kraus block in {path} has {len(vals)} entries, expected 4")
        mats.append(np.array(vals, dtype=complex).reshape(2, 2))
    return mats


def parse_channel_spec(spec: str) -> QubitChannel:
    """Build a channel from ``key=value`` text.

    Examples: ``"type=depolarizing p=0.3"``,
    ``"type=rotation nx=0 ny=0 nz=1 theta=1.57"``, ``"type=kraus file=k.txt"``,
    ``"type=identity"``.
    """
    fields: dict[str, str] = {}
    for m in _TOKEN.finditer(spec):
        tok = m.group()
        if "=" not in tok:
            raise ChannelError(f"line 1, column {m.start() + 1}: expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        if key in fields:
            raise ChannelError(f"line 1, column {m.start() + 1}: duplicate key {key!r}")
        fields[key] = val

    def num(key, default=None):
        if key not in fields:
            if default is None:
                raise ChannelError(f"line 1, column {len(spec) + 1}: missing {key}=")
            return default
        try:
            return float(fields[key])
        except ValueError:
            col = spec.find(key + "=") + 1
            raise ChannelError(f"line 1, column {col}: {key} is not a number: {fields[key]!r}")

    kind = fields.get("type")
    if kind is None:
        raise ChannelError("line 1, column 1: missing type=")
    if kind == "depolarizing":
        return make_depolarizing(num("p"))
    if kind == "rotation":
        axis = (num("nx", 0.0), num("ny", 0.0), num("nz", 0.0))
        return make_rotation(axis, num("theta"))
    if kind == "identity":
        return identity_channel()
    if kind == "kraus":
        if "file" not in fields:
            raise ChannelError(f"line 1, column {len(spec) + 1}: missing file=")
        return QubitChannel(_read_kraus_file(fields["file"]), name=f"kraus({fields['file']})")
    col = spec.find("type=") + 6
    raise ChannelError(f"line 1, column {col}: unknown channel type {kind!r}")
