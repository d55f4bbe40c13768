"""Number-line diagrams of labelled orbit points (SVG 1.1, line/circle/text only)."""
from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape

from .sided import SidedPoint

__all__ = ["render_numberline", "numberline_layout"]

WIDTH, HEIGHT, MARGIN = 800, 140, 40
AXIS_Y = 70
COLORS = {"above": "#d97706", "below": "#1d4ed8", "critical": "#dc2626"}


def _key(p):
    return p if isinstance(p, SidedPoint) else SidedPoint(p)


def numberline_layout(points: list) -> list:
    """Sort (label, value, placement) triples by exact order and assign x positions.

    value may be a field element or a SidedPoint; placement is "above",
    "below" or "critical". Returns dicts with label, x, placement, rank.
    Equal values share a rank and an x position.
    """
    items = [(label, _key(v), place) for label, v, place in points]
    order = list(range(len(items)))
    # insertion sort with the exact comparison (the lists are short)
    for i in range(1, len(order)):
        j = i
        while j > 0 and items[order[j - 1]][1].value > items[order[j]][1].value:
            order[j - 1], order[j] = order[j], order[j - 1]
            j -= 1
    out, rank, prev = [], -1, None
    for i in order:
        label, p, place = items[i]
        if prev is None or prev.value != p.value:
            rank += 1
        prev = p
        x = MARGIN + float(p.value) * (WIDTH - 2 * MARGIN)
        out.append({"label": label, "value": float(p.value), "x": round(x, 3), "placement": place, "rank": rank})
    return out


def render_numberline(points: list, path: Optional[str] = None, title: str = "") -> str:
    """SVG text for the labelled points; written to ``path`` when given."""
    layout = numberline_layout(points)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}">',
        f'<line x1="{MARGIN}" y1="{AXIS_Y}" x2="{WIDTH - MARGIN}" y2="{AXIS_Y}" stroke="black" stroke-width="1.5"/>',
    ]
    if title:
        lines.append(f'<text x="{MARGIN}" y="16" font-size="12">{escape(title)}</text>')
    stack = {}  # stacked labels at a shared position
    for item in layout:
        x, place = item["x"], item["placement"]
        color = COLORS.get(place, "black")
        r = 4 if place == "critical" else 3
        lines.append(f'<circle cx="{x}" cy="{AXIS_Y}" r="{r}" fill="{color}"/>')
        if place == "critical" and not item["label"]:
            continue
        side = "below" if place == "below" else "above"
        k = stack.get((item["rank"], side), 0)
        stack[(item["rank"], side)] = k + 1
        y = AXIS_Y + 20 + 14 * k if side == "below" else AXIS_Y - 10 - 14 * k
        lines.append(
            f'<text x="{x}" y="{y}" font-size="11" text-anchor="middle" fill="{color}">{escape(item["label"])}</text>'
        )
    lines.append("</svg>")
    svg = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(svg)
    return svg
