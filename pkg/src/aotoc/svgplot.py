"""Minimal hand-written SVG rendering of sweep results."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .sweep import ConfigError, ResultRow

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=30, bottom=55)


class _Axes:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi == xlo:
            xlo, xhi = xlo - 0.5, xhi + 0.5
        if yhi == ylo:
            ylo, yhi = ylo - 0.5, yhi + 0.5
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi
        self.w = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.h = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def x(self, v: float) -> float:
        return MARGIN["left"] + (v - self.xlo) / (self.xhi - self.xlo) * self.w

    def y(self, v: float) -> float:
        return MARGIN["top"] + (self.yhi - v) / (self.yhi - self.ylo) * self.h


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _polyline(ax: _Axes, xs, ys, color: str, dash: str = "") -> str:
    pts = " ".join(f"{ax.x(a):.2f},{ax.y(b):.2f}" for a, b in zip(xs, ys))
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return f'<polyline fill="none" stroke="{color}" stroke-width="2"{extra} points="{pts}"/>'


def render_svg(rows: list[ResultRow], title: str | None = None) -> str:
    """SVG text with analytic curves and estimate +- stderr markers.

    The x axis is the noise parameter, or ``E_p`` for entangling-power
    deviation tables (rows that share one parameter value but differ in ``E_p``).
    """
    if not rows:
        raise ConfigError("no data rows to plot")
    by_ep = len({r.parameter for r in rows}) == 1 and all(r.E_p is not None for r in rows) and len(rows) > 1
    xkey = "E_p" if by_ep else "parameter"
    rows = sorted(rows, key=lambda r: getattr(r, xkey))
    xs = [getattr(r, xkey) for r in rows]
    lows = [r.estimate - r.stderr for r in rows]
    highs = [r.estimate + r.stderr for r in rows]
    ylo = min(0.0, *lows, *(r.g_finite for r in rows), *(r.g_thermo for r in rows))
    yhi = max(*highs, *(r.g_finite for r in rows), *(r.g_thermo for r in rows))
    ax = _Axes(min(xs), max(xs), ylo, yhi * 1.05 if yhi > 0 else 1.0)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    for t in _ticks(ax.xlo, ax.xhi):
        px = ax.x(t)
        out.append(f'<line x1="{px:.2f}" y1="{y0}" x2="{px:.2f}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{y0 + 18}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(ax.ylo, ax.yhi):
        py = ax.y(t)
        out.append(f'<line x1="{x0 - 5}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{py + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    xlabel = "E_p" if by_ep else f"{rows[0].channel} parameter"
    out.append(f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="18" y="{(y0 + y1) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2})">A-OTOC</text>'
    )
    head = title or f"{rows[0].ensemble}, L={rows[0].L}, k={rows[0].k}"
    out.append(f'<text x="{(x0 + x1) / 2}" y="18" text-anchor="middle">{escape(head)}</text>')

    out.append(_polyline(ax, xs, [r.g_finite for r in rows], "#1f77b4"))
    out.append(_polyline(ax, xs, [r.g_thermo for r in rows], "#7f7f7f", "6,4"))
    for x, r, lo, hi in zip(xs, rows, lows, highs):
        px = ax.x(x)
        out.append(
            f'<line x1="{px:.2f}" y1="{ax.y(lo):.2f}" x2="{px:.2f}" y2="{ax.y(hi):.2f}" stroke="#d62728"/>'
        )
        out.append(f'<circle cx="{px:.2f}" cy="{ax.y(r.estimate):.2f}" r="3.5" fill="#d62728"/>')

    lx = x1 + 15
    legend = [("#1f77b4", "finite L", ""), ("#7f7f7f", "L to infinity", "6,4")]
    for i, (color, label, dash) in enumerate(legend):
        ly = y1 + 15 + 20 * i
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"{extra}/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}">{label}</text>')
    ly = y1 + 55
    out.append(f'<circle cx="{lx + 12}" cy="{ly}" r="3.5" fill="#d62728"/>')
    out.append(f'<text x="{lx + 30}" y="{ly + 4}">sampled</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(rows: list[ResultRow], path, title: str | None = None) -> None:
    Path(path).write_text(render_svg(rows, title))
