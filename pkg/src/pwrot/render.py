"""Text tables and deterministic SVG output."""

from __future__ import annotations

import hashlib
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclotomic import Cyclo, approx
from .geometry import ConvexRegion, intersect, point, polygon
from .induction import ReturnStructure, Substitution

__all__ = ["emit_tables", "compact_word", "render_svg", "window_region", "DIGITS"]

# coordinates are written with this many decimals
DIGITS = 9


def compact_word(w: str) -> str:
    """Run-length form, e.g. 0111000 -> 0 1^3 0^3."""
    if not w:
        return ""
    out = []
    k = 0
    while k < len(w):
        j = k
        while j < len(w) and w[j] == w[k]:
            j += 1
        run = j - k
        out.append(w[k] if run == 1 else f"{w[k]}^{run}")
        k = j
    return " ".join(out)


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = []
    for k, r in enumerate(rows):
        lines.append(" | ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
        if k == 0:
            lines.append("-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit_tables(obj: ReturnStructure | Substitution) -> str:
    if isinstance(obj, Substitution):
        letters = list(obj.images)
        if not letters:
            return ""
        return _table([letters, [obj.images[a] for a in letters]])
    rows = [["label", "return word", "compact", "rotation power", "translation"]]
    for p in obj.pieces:
        k = p.map.rotation_power()
        rows.append([p.label, p.word, compact_word(p.word), "-" if k is None else str(k), _fmt_point(p.map.trans)])
    return _table(rows)


def _fmt_point(z: Cyclo) -> str:
    x, y = _round_xy(z)
    return f"({x}, {y})"


def _round(iv_val) -> str:
    # the endpoints are exact binary numbers; the box is far narrower than 1e-9
    mid = (float(iv_val.a) + float(iv_val.b)) / 2
    s = f"{mid:.{DIGITS}f}"
    if s.lstrip("-").strip("0.") == "":
        s = f"{0:.{DIGITS}f}"
    return s


def _round_xy(z: Cyclo) -> tuple[str, str]:
    re_iv, im_iv = approx(z, 64)
    return _round(re_iv), _round(im_iv)


def window_region(window: Sequence, n: int) -> ConvexRegion:
    x0, y0, x1, y1 = (Fraction(v) for v in window)
    if not (x0 < x1 and y0 < y1):
        raise ValueError("window must satisfy x0 < x1 and y0 < y1")
    return polygon([point(x0, y0, n), point(x1, y0, n), point(x1, y1, n), point(x0, y1, n)])


def _colour(key: str) -> str:
    h = hashlib.sha256(key.encode()).hexdigest()
    r, g, b = (int(h[k:k + 2], 16) for k in (0, 2, 4))
    # keep fills light so edges stay visible
    return "#{:02x}{:02x}{:02x}".format(128 + r // 2, 128 + g // 2, 128 + b // 2)


def render_svg(items: Iterable[tuple[str, ConvexRegion]], window: Sequence, out: str | None = None, n: int | None = None) -> str:
    """One polygon per (label, region) clipped to ``window``; y points up."""
    items = list(items)
    x0, y0, x1, y1 = (Fraction(v) for v in window)
    if n is None:
        n = items[0][1].n if items else 4
    box = window_region(window, n)
    w, h = float(x1 - x0), float(y1 - y0)
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{float(x0)} {-float(y1)} {w} {h}" '
        f'width="800" height="{round(800 * h / w)}">',
        f"<metadata>coordinates rounded from certified intervals to 1e-{DIGITS}; window {x0},{y0},{x1},{y1}</metadata>",
        f'<rect x="{float(x0)}" y="{-float(y1)}" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    body = []
    stroke = max(w, h) / 800
    for label, r in items:
        clipped = intersect(r, box) if r.n == n else r
        if clipped.empty:
            continue
        pts = []
        for v in clipped.vertices():
            x, y = _round_xy(v)
            y = y[1:] if y.startswith("-") else ("-" + y if y.strip("0.") else y)
            pts.append(f"{x},{y}")
        body.append(
            f'<polygon data-label="{label}" points="{" ".join(pts)}" fill="{_colour(label)}" '
            f'stroke="#000000" stroke-width="{stroke:.6g}"/>'
        )
    text = "\n".join(head + body + ["</svg>"]) + "\n"
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
