"""CSV tables and an SVG convergence chart for sweep records."""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from typing import Iterable, Sequence, TextIO
from xml.sax.saxutils import escape

from .errors import ParseError
from .quadrature import SweepRecord

__all__ = ["CSV_COLUMNS", "write_csv", "read_csv", "records_to_csv", "render_svg"]

CSV_COLUMNS = ("method", "n", "h", "value", "abs_error", "elapsed_ns", "error")


def _fmt(x: float | None) -> str:
    return "" if x is None else format(x, ".17g")


def _opt_float(text: str) -> float | None:
    return None if text == "" else float(text)


def write_csv(records: Iterable[SweepRecord], stream: TextIO) -> None:
    """Rows in the given order; floats with 17 significant digits.

    Failed entries keep empty numeric fields and carry the failure in the
    trailing ``error`` column.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.method, r.n, _fmt(r.h), _fmt(r.value), _fmt(r.abs_error),
                         r.elapsed_ns, r.error or ""])


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def read_csv(stream: TextIO) -> list[SweepRecord]:
    """Inverse of :func:`write_csv`."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ParseError(f"unexpected CSV header {header!r}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"line {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
        try:
            out.append(SweepRecord(
                method=row[0],
                n=int(row[1]),
                h=_opt_float(row[2]),
                value=_opt_float(row[3]),
                abs_error=_opt_float(row[4]),
                elapsed_ns=int(row[5]),
                error=row[6] or None,
            ))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return out


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
ERROR_FLOOR = 1e-17


def render_svg(records: Sequence[SweepRecord], title: str = "", width: int = 640, height: int = 420) -> str:
    """Absolute error against ``n`` on a log scale, one polyline per method.

    Exact hits (error 0) are drawn at ``ERROR_FLOOR``; failed entries and
    entries without a reference are left out.
    """
    series: dict[str, list[tuple[int, float]]] = defaultdict(list)
    for r in records:
        if r.abs_error is None:
            continue
        series[r.method].append((r.n, max(r.abs_error, ERROR_FLOOR)))
    left, right, top, bottom = 70, 110, 40, 50
    pw, ph = width - left - right, height - top - bottom

    points = [pt for pts in series.values() for pt in pts]
    if points:
        n_lo = min(p[0] for p in points)
        n_hi = max(p[0] for p in points)
        e_lo = math.floor(math.log10(min(p[1] for p in points)))
        e_hi = math.ceil(math.log10(max(p[1] for p in points)))
    else:
        n_lo, n_hi, e_lo, e_hi = 0, 1, -16, 0
    if n_hi == n_lo:
        n_hi = n_lo + 1
    if e_hi == e_lo:
        e_hi = e_lo + 1

    def sx(n: float) -> float:
        return left + pw * (n - n_lo) / (n_hi - n_lo)

    def sy(err: float) -> float:
        return top + ph * (e_hi - math.log10(err)) / (e_hi - e_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{left + pw / 2:.1f}" y="{top - 15}" text-anchor="middle" '
                     f'font-size="14">{escape(title)}</text>')
    step = max(1, (e_hi - e_lo) // 8)
    for e in range(e_lo, e_hi + 1, step):
        y = sy(10.0**e)
        parts.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + pw}" y2="{y:.1f}" '
                     f'stroke="#dddddd"/>')
        parts.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end">1e{e}</text>')
    for k in range(6):
        n = n_lo + (n_hi - n_lo) * k / 5
        x = sx(n)
        parts.append(f'<text x="{x:.1f}" y="{top + ph + 18}" text-anchor="middle">{n:g}</text>')
    parts.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">n</text>')
    parts.append(f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" '
                 f'transform="rotate(-90 18 {top + ph / 2:.1f})">absolute error</text>')

    for i, (method, pts) in enumerate(sorted(series.items())):
        colour = _PALETTE[i % len(_PALETTE)]
        pts = sorted(pts)
        coords = " ".join(f"{sx(n):.1f},{sy(e):.1f}" for n, e in pts)
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" '
                     f'points="{coords}"/>')
        ly = top + 20 * (i + 1)
        parts.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 30}" y2="{ly}" '
                     f'stroke="{colour}" stroke-width="2"/>')
        parts.append(f'<text x="{left + pw + 36}" y="{ly + 4}">{escape(method)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
