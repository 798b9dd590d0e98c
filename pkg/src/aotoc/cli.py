"""Command-line entry point: ``aotoc {analytic,oracle,sweep,plot,peak}``.

Exit status is 0 on success, 1 for usage, config or input errors and 2 when
a numerical contract is violated.
"""

from __future__ import annotations

import argparse
import sys

from .channels import ChannelError, parse_channel_spec
from .closed_form import CircuitParams, NumericalContractError, depol_peak, g_finite, g_thermo
from .otoc import ResourceGuardError
from .sweep import ConfigError, ep_deviation_table, load_config, read_csv, run_sweep, write_csv
from .svgplot import write_svg
from .weingarten import haar_averaged_g_exact, haar_mc_average_g

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _length(text: str):
    if text == "inf":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"L must be an even integer or 'inf', got {text!r}") from None


def cmd_analytic(args) -> int:
    chan = parse_channel_spec(args.channel)
    if args.L is None:
        val = g_thermo(chan, args.k)
    else:
        val = g_finite(chan, CircuitParams(args.L, args.k))
    print(f"{val:.12g}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    chan = parse_channel_spec(args.channel)
    p = CircuitParams(args.L, args.k)
    closed = g_finite(chan, p)
    oracle = haar_averaged_g_exact(chan, p)
    print(f"g_finite       {closed:.12g}")
    print(f"weingarten     {oracle:.12g}")
    print(f"|delta|        {abs(closed - oracle):.3e}")
    if args.mc:
        est = haar_mc_average_g(chan, p, args.mc, args.seed)
        print(f"monte_carlo    {est.value:.12g} +- {est.stderr:.3g} (n={args.mc}, seed={args.seed})")
        for name, ref in (("g_finite", closed), ("weingarten", oracle)):
            z = abs(est.value - ref) / est.stderr if est.stderr > 0 else 0.0
            print(f"mc - {name:<10} {est.value - ref:+.3e} ({z:.2f} stderr)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    out = args.output or cfg.output
    if out is None:
        raise ConfigError("no output path: set 'output' in the config or pass -o")
    rows = run_sweep(cfg)
    write_csv(rows, out)
    print(f"wrote {len(rows)} rows to {out}")
    if cfg.mode == "ep_deviation":
        tab = ep_deviation_table(rows)
        for e, dv, s in zip(tab.e_p, tab.deviation, tab.stderr):
            print(f"E_p={e:.4f}  delta={dv:.6f} +- {s:.6f}")
        slope = "n/a" if tab.loglog_slope is None else f"{tab.loglog_slope:.4f}"
        print(f"log-log slope: {slope}")
    return EXIT_OK


def cmd_plot(args) -> int:
    rows = read_csv(args.csv)
    write_svg(rows, args.svg)
    print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_peak(args) -> int:
    for k in args.k:
        p = depol_peak(k)
        print(f"k={k}  p*={'none' if p is None else f'{p:.10f}'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aotoc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analytic", help="closed-form Haar average (finite L or L=inf)")
    p.add_argument("--channel", required=True, help='e.g. "type=depolarizing p=0.3"')
    p.add_argument("--L", type=_length, required=True, help="even chain length or 'inf'")
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("oracle", help="compare the closed form with the Weingarten and Monte-Carlo routes")
    p.add_argument("--channel", required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mc", type=int, default=0, help="number of global Haar draws (0 to skip)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="run a sweep config and write CSV")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="render a sweep CSV as SVG")
    p.add_argument("csv")
    p.add_argument("svg")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("peak", help="interior maximizer of the depolarizing curve")
    p.add_argument("--k", type=int, nargs="+", default=list(range(1, 13)))
    p.set_defaults(func=cmd_peak)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalContractError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ChannelError, ConfigError, ResourceGuardError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
