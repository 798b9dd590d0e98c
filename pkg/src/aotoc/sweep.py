"""Parameter sweeps over noise strength for random-circuit ensembles.

Configs are flat ``key = value`` files with ``#`` comments. Results are CSV
rows with 17 significant digits, so a sweep reads back losslessly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .channels import make_depolarizing, make_rotation
from .circuits import (
    EnsembleKind,
    GateEnsemble,
    dual_unitary_core,
    operator_entangling_power,
    sample_circuit_unitary,
)
from .closed_form import CircuitParams, g_finite, g_thermo
from .otoc import _check_size, aotoc_state_sample, haar_state
from .tensor import QubitLayout


class ConfigError(ValueError):
    pass


CHANNEL_FAMILIES = ("rotation", "depolarizing")
MODES = ("sweep", "ep_deviation")


@dataclass
class SweepConfig:
    ensemble: EnsembleKind
    L: int
    k: int
    channel: str
    values: list[float]
    n_circuits: int = 5
    n_states: int = 5
    seed: int = 0
    depth: int | None = None
    J: float | None = None
    mode: str = "sweep"
    J_values: list[float] = field(default_factory=list)
    output: str | None = None

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ConfigError(f"L must be even and >= 2, got {self.L}")
        if not 1 <= self.k <= self.L:
            raise ConfigError(f"k must satisfy 1 <= k <= L, got {self.k}")
        if self.channel not in CHANNEL_FAMILIES:
            raise ConfigError(f"channel must be one of {CHANNEL_FAMILIES}, got {self.channel!r}")
        if not self.values:
            raise ConfigError("parameter grid is empty")
        if self.n_circuits < 1 or self.n_states < 2:
            raise ConfigError("need n_circuits >= 1 and n_states >= 2")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "ep_deviation":
            if self.ensemble is not EnsembleKind.BRICKWORK_DUAL_UNITARY:
                raise ConfigError("ep_deviation mode needs ensemble = brickwork_dual_unitary")
            if len(self.values) != 1:
                raise ConfigError("ep_deviation mode takes exactly one noise value")
            if not self.J_values:
                raise ConfigError("ep_deviation mode needs J_values")
        elif self.ensemble is EnsembleKind.BRICKWORK_DUAL_UNITARY and self.J is None:
            raise ConfigError("dual-unitary sweeps need J")
        if self.channel == "depolarizing" and not all(0 <= v <= 1 for v in self.values):
            raise ConfigError("depolarizing values must lie in [0, 1]")


_INT_KEYS = {"L", "k", "n_circuits", "n_states", "seed", "depth", "n_points"}
_FLOAT_KEYS = {"J", "param_min", "param_max"}
_LIST_KEYS = {"values", "J_values"}
_STR_KEYS = {"ensemble", "channel", "mode", "output"}


def _parse_value(expr: str) -> float:
    # allow "pi/2" style constants in configs
    expr = expr.strip()
    try:
        return float(expr)
    except ValueError:
        pass
    allowed = set("0123456789.+-*/() eE")
    body = expr.replace("pi", "")
    if not set(body) <= allowed:
        raise ValueError(expr)
    return float(eval(expr, {"__builtins__": {}}, {"pi": math.pi}))


def parse_config(text: str) -> SweepConfig:
    raw: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, val = (s.strip() for s in body.split("=", 1))
        try:
            if key in _INT_KEYS:
                raw[key] = int(val)
            elif key in _FLOAT_KEYS:
                raw[key] = _parse_value(val)
            elif key in _LIST_KEYS:
                raw[key] = [_parse_value(v) for v in val.split(",") if v.strip()]
            elif key in _STR_KEYS:
                raw[key] = val
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {val!r}") from None

    missing = [k for k in ("ensemble", "L", "k", "channel") if k not in raw]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    if "values" not in raw:
        if not {"param_min", "param_max", "n_points"} <= raw.keys():
            raise ConfigError("give either 'values' or param_min/param_max/n_points")
        n = raw.pop("n_points")
        if n < 1:
            raise ConfigError("n_points must be >= 1")
        raw["values"] = [float(v) for v in np.linspace(raw.pop("param_min"), raw.pop("param_max"), n)]
    else:
        for k in ("param_min", "param_max", "n_points"):
            raw.pop(k, None)
    try:
        raw["ensemble"] = EnsembleKind(raw["ensemble"])
    except ValueError:
        raise ConfigError(f"unknown ensemble {raw['ensemble']!r}") from None
    return SweepConfig(**raw)


def load_config(path) -> SweepConfig:
    return parse_config(Path(path).read_text())


@dataclass(frozen=True)
class ResultRow:
    parameter: float
    estimate: float
    stderr: float
    g_finite: float
    g_thermo: float
    ensemble: str
    L: int
    k: int
    seed: int
    channel: str
    J: float | None = None
    E_p: float | None = None


CSV_FIELDS = [f.name for f in fields(ResultRow)]


def make_channel(family: str, value: float):
    if family == "rotation":
        return make_rotation((0.0, 0.0, 1.0), value)
    return make_depolarizing(value)


def estimate_point(cfg: SweepConfig, ensemble: GateEnsemble, value: float, item: int) -> tuple[float, float]:
    """Mean and stderr over circuits of the per-circuit state average."""
    layout = QubitLayout(cfg.L)
    chan = make_channel(cfg.channel, value)
    means = []
    for ci in range(cfg.n_circuits):
        circ_seed = np.random.SeedSequence(cfg.seed, spawn_key=(item, ci, 0))
        state_rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(item, ci, 1)))
        u = sample_circuit_unitary(cfg.L, ensemble, np.random.default_rng(circ_seed), cfg.depth)
        vals = [
            aotoc_state_sample(u, chan, cfg.k, layout, haar_state(layout.d_A, state_rng))
            for _ in range(cfg.n_states)
        ]
        means.append(float(np.mean(vals)))
    means = np.array(means)
    err = float(means.std(ddof=1) / np.sqrt(len(means))) if len(means) > 1 else 0.0
    return float(means.mean()), err


def run_sweep(cfg: SweepConfig) -> list[ResultRow]:
    """Evaluate the configured sweep. Deterministic for a fixed seed."""
    _check_size(cfg.L)
    params = CircuitParams(cfg.L, cfg.k)
    rows = []
    if cfg.mode == "ep_deviation":
        value = cfg.values[0]
        chan = make_channel(cfg.channel, value)
        gf, gt = g_finite(chan, params), g_thermo(chan, cfg.k)
        for i, J in enumerate(cfg.J_values):
            ens = GateEnsemble(EnsembleKind.BRICKWORK_DUAL_UNITARY, J)
            est, err = estimate_point(cfg, ens, value, i)
            rows.append(
                ResultRow(value, est, err, gf, gt, ens.label, cfg.L, cfg.k, cfg.seed, cfg.channel,
                          J, operator_entangling_power(dual_unitary_core(J)))
            )
        return rows

    ens = GateEnsemble(cfg.ensemble, cfg.J)
    e_p = operator_entangling_power(dual_unitary_core(cfg.J)) if cfg.J is not None else None
    for i, value in enumerate(cfg.values):
        chan = make_channel(cfg.channel, value)
        est, err = estimate_point(cfg, ens, value, i)
        rows.append(
            ResultRow(value, est, err, g_finite(chan, params), g_thermo(chan, cfg.k),
                      ens.label, cfg.L, cfg.k, cfg.seed, cfg.channel, cfg.J, e_p)
        )
    return rows


# -- CSV -------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def rows_to_csv(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([_fmt(getattr(r, f)) for f in CSV_FIELDS])
    return buf.getvalue()


def write_csv(rows: list[ResultRow], path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(rows))


def read_csv(path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_FIELDS:
            raise ConfigError(f"{path}: unexpected header {reader.fieldnames}")
        rows = []
        for lineno, rec in enumerate(reader, 2):
            try:
                rows.append(
                    ResultRow(
                        parameter=float(rec["parameter"]),
                        estimate=float(rec["estimate"]),
                        stderr=float(rec["stderr"]),
                        g_finite=float(rec["g_finite"]),
                        g_thermo=float(rec["g_thermo"]),
                        ensemble=rec["ensemble"],
                        L=int(rec["L"]),
                        k=int(rec["k"]),
                        seed=int(rec["seed"]),
                        channel=rec["channel"],
                        J=float(rec["J"]) if rec["J"] else None,
                        E_p=float(rec["E_p"]) if rec["E_p"] else None,
                    )
                )
            except (TypeError, ValueError):
                raise ConfigError(f"{path}, line {lineno}: malformed row") from None
    return rows


# -- dual-unitary deviation ------------------------------------------------


@dataclass(frozen=True)
class DeviationTable:
    e_p: np.ndarray
    deviation: np.ndarray
    stderr: np.ndarray
    loglog_slope: float | None


def ep_deviation_table(rows: list[ResultRow]) -> DeviationTable:
    """``g_finite - estimate`` against entangling power, sorted by ``E_p``.

    The slope is a least-squares fit of ``log(deviation)`` on ``log(E_p)``
    over points where both are positive; ``None`` with fewer than two.
    """
    rs = sorted((r for r in rows if r.E_p is not None), key=lambda r: r.E_p)
    e_p = np.array([r.E_p for r in rs])
    dev = np.array([r.g_finite - r.estimate for r in rs])
    err = np.array([r.stderr for r in rs])
    ok = (e_p > 0) & (dev > 0)
    slope = float(np.polyfit(np.log(e_p[ok]), np.log(dev[ok]), 1)[0]) if ok.sum() >= 2 else None
    return DeviationTable(e_p, dev, err, slope)
