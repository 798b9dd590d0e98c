import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from aotoc import cli
from aotoc.cli import main
from aotoc.closed_form import NumericalContractError
from aotoc.sweep import (
    ConfigError,
    ResultRow,
    ep_deviation_table,
    parse_config,
    read_csv,
    rows_to_csv,
    run_sweep,
    write_csv,
)
from aotoc.svgplot import render_svg

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

SMALL = """
# tiny sweep for tests
ensemble = brickwork_haar
L = 4
k = 1
channel = rotation
param_min = 0
param_max = pi/2
n_points = 3
n_circuits = 2
n_states = 3
seed = 5
"""


def test_parse_config():
    cfg = parse_config(SMALL)
    assert cfg.L == 4 and cfg.n_circuits == 2
    assert cfg.values == pytest.approx([0, math.pi / 4, math.pi / 2])


@pytest.mark.parametrize(
    "text, msg",
    [
        (SMALL + "bogus = 1\n", "line 13"),
        (SMALL + "L = four\n", "line 13"),
        (SMALL + "no equals sign\n", "line 13"),
        (SMALL.replace("L = 4", "L = 5"), "even"),
        (SMALL.replace("n_points = 3", "n_points = 0"), "n_points"),
        (SMALL.replace("channel = rotation", "channel = amplitude"), "channel"),
        ("L = 4\n", "missing"),
        (SMALL.replace("ensemble = brickwork_haar", "ensemble = brickwork_dual_unitary"), "J"),
        (SMALL + "values = __import__\n", "line 13"),
    ],
)
def test_config_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text)


def test_shipped_configs_parse():
    names = sorted(p.name for p in CONFIGS.glob("*.cfg"))
    assert len(names) >= 5
    for p in CONFIGS.glob("*.cfg"):
        cfg = parse_config(p.read_text())
        assert cfg.L == 8


def test_sweep_deterministic_and_round_trips(tmp_path):
    cfg = parse_config(SMALL)
    rows = run_sweep(cfg)
    assert len(rows) == 3
    assert rows_to_csv(rows) == rows_to_csv(run_sweep(cfg))
    path = tmp_path / "out.csv"
    write_csv(rows, path)
    assert read_csv(path) == rows
    assert rows[0].estimate == pytest.approx(0, abs=1e-12)
    for r in rows:
        assert all(math.isfinite(v) for v in (r.estimate, r.stderr, r.g_finite, r.g_thermo))


def test_dual_unitary_below_closed_form():
    cfg = parse_config(
        "ensemble = brickwork_dual_unitary\nJ = 0.7\nL = 4\nk = 1\nchannel = depolarizing\n"
        "values = 0.5, 1\nn_circuits = 3\nn_states = 4\nseed = 1\n"
    )
    for r in run_sweep(cfg):
        assert r.estimate < r.g_finite
        assert r.E_p == pytest.approx(0.0367, abs=1e-3)


def test_ep_deviation_table():
    rows = [
        ResultRow(1.0, est, 0.01, 0.2, 0.19, "du", 8, 1, 0, "depolarizing", J, ep)
        for est, J, ep in [(0.15, 0.6, 0.4), (0.0, 0.78, 0.0), (0.1, 0.7, 0.1), (0.19, 0.4, 0.8)]
    ]
    tab = ep_deviation_table(rows)
    np.testing.assert_allclose(tab.e_p, [0.0, 0.1, 0.4, 0.8])
    np.testing.assert_allclose(tab.deviation, [0.2, 0.1, 0.05, 0.01])
    expected = np.polyfit(np.log([0.1, 0.4, 0.8]), np.log([0.1, 0.05, 0.01]), 1)[0]
    assert tab.loglog_slope == pytest.approx(expected)


def test_svg_rendering():
    rows = [
        ResultRow(t, 1 - math.cos(t) ** 4, 0.01, 1 - math.cos(t) ** 4, 1 - math.cos(t) ** 4, "brickwork_haar", 8, 1, 0, "rotation")
        for t in np.linspace(0, math.pi / 2, 5)
    ]
    svg = render_svg(rows)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 2 and svg.count("<circle") == 6
    with pytest.raises(ConfigError):
        render_svg([])


def test_cli_analytic(capsys):
    assert main(["analytic", "--channel", "type=rotation nz=1 theta=1.5708", "--L", "inf", "--k", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(1.0, abs=1e-6)
    assert main(["analytic", "--channel", "type=depolarizing p=0", "--L", "8", "--k", "1"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert main(["analytic", "--channel", "type=depolarizing p=1", "--L", "inf"]) == 0
    assert capsys.readouterr().out.strip() == "0.1875"


def test_cli_oracle(capsys):
    assert main(["oracle", "--channel", "type=depolarizing p=0.3", "--L", "4"]) == 0
    out = capsys.readouterr().out
    delta = float(out.split("|delta|")[1].split()[0])
    assert delta <= 1e-9
    assert main(["oracle", "--channel", "type=identity", "--L", "6", "--mc", "3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [float(l.split()[1]) for l in lines[:2]] == [0.0, 0.0]
    assert float(lines[3].split()[1]) == pytest.approx(0, abs=1e-12)


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    assert main(["analytic", "--channel", "type=nope", "--L", "4"]) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("L = 3\n")
    assert main(["sweep", str(bad), "-o", str(tmp_path / "x.csv")]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["analytic"])
    assert exc.value.code == 1

    def breach(*args, **kwargs):
        raise NumericalContractError("imaginary residue 1e-3")

    monkeypatch.setattr(cli, "g_thermo", breach)
    assert main(["analytic", "--channel", "type=identity", "--L", "inf"]) == 2


def test_cli_sweep_and_plot(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(SMALL)
    out = tmp_path / "s.csv"
    assert main(["sweep", str(cfg), "-o", str(out)]) == 0
    svg = tmp_path / "s.svg"
    assert main(["plot", str(out), str(svg)]) == 0
    assert "<polyline" in svg.read_text()
    empty = tmp_path / "e.csv"
    empty.write_text(out.read_text().splitlines()[0] + "\n")
    assert main(["plot", str(empty), str(tmp_path / "e.svg")]) == 1
    assert not (tmp_path / "e.svg").exists()


def test_cli_peak(capsys):
    assert main(["peak", "--k", "1", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].endswith("none") and 0.45 < float(out[1].split("=")[-1]) < 0.55


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "aotoc", "peak", "--k", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and "none" in res.stdout
