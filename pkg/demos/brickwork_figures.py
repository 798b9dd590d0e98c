"""Run the shipped sweep configs and render each result as SVG.

Brickwork circuits of Haar two-qubit gates track the Haar closed form at
L = 8. Dual-unitary brickworks with small entangling power fall below it.
Clifford brickworks only see the non-Pauli part of the noise, so their curves
do not follow the closed form (see clifford_pauli_noise.py).

Usage: python demos/brickwork_figures.py [config names...]
"""

import sys
from pathlib import Path

from aotoc.sweep import ep_deviation_table, load_config, run_sweep, write_csv
from aotoc.svgplot import write_svg

root = Path(__file__).resolve().parent.parent
names = sys.argv[1:] or sorted(p.stem for p in (root / "configs").glob("*.cfg"))
out_dir = root / "results"

for name in names:
    cfg = load_config(root / "configs" / f"{name}.cfg")
    rows = run_sweep(cfg)
    write_csv(rows, out_dir / f"{name}.csv")
    write_svg(rows, out_dir / f"{name}.svg")
    worst = max(abs(r.estimate - r.g_finite) for r in rows)
    print(f"{name:<28} {len(rows)} points, max |estimate - finite L| = {worst:.3f}")
    if cfg.mode == "ep_deviation":
        tab = ep_deviation_table(rows)
        for e, d in zip(tab.e_p, tab.deviation):
            print(f"    E_p = {e:.3f}   deviation = {d:.4f}")
        print(f"    log-log slope {tab.loglog_slope:.3f}")
