"""Minimal self-contained SVG log-log plotting, string in, string out."""

from __future__ import annotations

from math import floor, log10

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 160, 40, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _decades(lo: float, hi: float) -> list[float]:
    first = floor(log10(lo))
    last = floor(log10(hi)) + 1
    return [10.0**e for e in range(first, last + 1) if lo / 2 <= 10.0**e <= hi * 2]


def render_loglog(series, title: str, xlabel: str, ylabel: str) -> str:
    """Render (label, xs, ys) triples as a log-log line chart.

    Points with nonpositive coordinates are dropped (they have no place on
    logarithmic axes).
    """
    cleaned = []
    for label, xs, ys in series:
        pts = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
        if pts:
            cleaned.append((label, pts))
    if not cleaned:
        raise ValueError("nothing to plot: no positive data points")
    xs_all = [x for _, pts in cleaned for x, _ in pts]
    ys_all = [y for _, pts in cleaned for _, y in pts]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo / 2, x_hi * 2
    if y_lo == y_hi:
        y_lo, y_hi = y_lo / 2, y_hi * 2

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        t = (log10(x) - log10(x_lo)) / (log10(x_hi) - log10(x_lo))
        return MARGIN_LEFT + t * plot_w

    def py(y: float) -> float:
        t = (log10(y) - log10(y_lo)) / (log10(y_hi) - log10(y_lo))
        return MARGIN_TOP + (1.0 - t) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="16">{title}</text>',
    ]
    axis = f'{MARGIN_LEFT},{MARGIN_TOP} {MARGIN_LEFT},{MARGIN_TOP + plot_h} {MARGIN_LEFT + plot_w},{MARGIN_TOP + plot_h}'
    out.append(f'<polyline points="{axis}" fill="none" stroke="black" stroke-width="1"/>')

    for tick in _decades(x_lo, x_hi):
        if not (x_lo <= tick <= x_hi):
            continue
        x = px(tick)
        out.append(
            f'<line x1="{x:.1f}" y1="{MARGIN_TOP + plot_h}" x2="{x:.1f}" '
            f'y2="{MARGIN_TOP + plot_h + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{x:.1f}" y="{MARGIN_TOP + plot_h + 20}" text-anchor="middle" '
            f'font-size="11">{tick:g}</text>'
        )
    for tick in _decades(y_lo, y_hi):
        if not (y_lo <= tick <= y_hi):
            continue
        y = py(tick)
        out.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.1f}" x2="{MARGIN_LEFT}" y2="{y:.1f}" stroke="black"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="11">{tick:g}</text>'
        )
    out.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 16}" text-anchor="middle" '
        f'font-size="13">{xlabel}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 20 {MARGIN_TOP + plot_h / 2:.1f})">{ylabel}</text>'
    )

    for i, (label, pts) in enumerate(cleaned):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.8"/>')
        for x, y in pts:
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.4" fill="{color}"/>')
        ly = MARGIN_TOP + 16 + 18 * i
        lx = MARGIN_LEFT + plot_w + 12
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 28}" y="{ly}" font-size="12">{label}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
