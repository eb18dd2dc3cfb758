"""CSV tables and the SVG rate-curve figure."""

from __future__ import annotations

import csv
import io
import math
from typing import Sequence
from xml.sax.saxutils import escape

RATE_COLUMNS = ("t", "hits", "censored", "p_hat", "empirical_rate",
                "theoretical_rate", "ci_low", "ci_high")


def fmt(value) -> str:
    """Shortest round-trip text for a number; ``inf`` for infinities."""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def rate_csv(rows: Sequence) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RATE_COLUMNS)
    for row in rows:
        writer.writerow([fmt(getattr(row, c)) for c in RATE_COLUMNS])
    return buf.getvalue()


def read_rate_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for rec in reader:
        out.append({k: (int(v) if k in ("hits", "censored") else float(v)) for k, v in rec.items()})
    return out


def table_csv(header: Sequence[str], records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        writer.writerow([fmt(v) for v in rec])
    return buf.getvalue()


def rate_svg(rows: Sequence, title: str = "", width: int = 640, height: int = 420) -> str:
    """Empirical rates (blue) against the theoretical parabola (red).

    Both series are drawn from the rows as given; rows whose empirical rate is
    infinite (no tail hits) have no empirical point. Every marker carries its
    exact values in ``data-t`` / ``data-rate`` attributes.
    """
    left, right, top, bottom = 64, 20, 36, 48
    ts = [r.t for r in rows]
    emp = [(r.t, r.empirical_rate) for r in rows if math.isfinite(r.empirical_rate)]
    theo = [(r.t, r.theoretical_rate) for r in rows]
    x_max = max(ts) if ts else 1.0
    y_max = max([y for _, y in emp + theo] + [1e-12]) * 1.05

    def px(t):
        return left + (width - left - right) * t / x_max

    def py(y):
        return height - bottom - (height - top - bottom) * y / y_max

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="14">{escape(title)}</text>')
    x0, y0 = px(0), py(0)
    out.append(f'<g class="axes" stroke="black" stroke-width="1">'
               f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{px(x_max):.2f}" y2="{y0:.2f}"/>'
               f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{py(y_max):.2f}"/></g>')
    ticks = ['<g class="ticks" font-family="sans-serif" font-size="10">']
    for k in range(6):
        tx, ty = x_max * k / 5, y_max * k / 5
        ticks.append(f'<text x="{px(tx):.2f}" y="{y0 + 14:.2f}" text-anchor="middle">{tx:.3g}</text>')
        ticks.append(f'<text x="{x0 - 6:.2f}" y="{py(ty) + 3:.2f}" text-anchor="end">{ty:.3g}</text>')
    ticks.append("</g>")
    out += ticks
    out.append(f'<text x="{(left + width - right) / 2:.1f}" y="{height - 10}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">t</text>')
    out.append(f'<text x="14" y="{(top + height - bottom) / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 14 {(top + height - bottom) / 2:.1f})">rate</text>')

    for name, colour, pts in (("empirical", "blue", emp), ("theoretical", "red", theo)):
        out.append(f'<g class="series" data-name="{name}" stroke="{colour}" fill="{colour}">')
        if len(pts) > 1:
            coords = " ".join(f"{px(t):.2f},{py(y):.2f}" for t, y in pts)
            out.append(f'<polyline fill="none" stroke-width="1.5" points="{coords}"/>')
        for t, y in pts:
            out.append(f'<circle cx="{px(t):.2f}" cy="{py(y):.2f}" r="2" '
                       f'data-t="{fmt(t)}" data-rate="{fmt(y)}"/>')
        out.append("</g>")

    lx, ly = width - right - 150, top + 6
    out.append('<g class="legend" font-family="sans-serif" font-size="11">')
    for i, (label, colour) in enumerate((("empirical rate", "blue"), ("theoretical rate", "red"))):
        yy = ly + 16 * i
        out.append(f'<line x1="{lx}" y1="{yy}" x2="{lx + 20}" y2="{yy}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{yy + 4}">{label}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
