"""CSV, JSON and SVG emission with write-temp-then-rename."""
from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterable, Sequence
from xml.sax.saxutils import escape

import numpy as np


def fmt(x: float) -> str:
    # 17 significant digits round-trips every IEEE double
    return format(float(x), ".17g")


def csv_text(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = [[float(v) for v in line.rstrip("\n").split(",")] for line in fh if line.strip()]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def svg_line_chart(x, y, title: str = "", xlabel: str = "", ylabel: str = "",
                   width: int = 640, height: int = 400) -> str:
    """Self-contained SVG polyline chart."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = 0.0, float(y.max()) or 1.0
    px = left + (x - x0) / ((x1 - x0) or 1.0) * pw
    py = top + ph - (y - y0) / (y1 - y0) * ph
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="1" points="{points}"/>',
        f'<text x="{width / 2}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{left + pw / 2}" y="{height - 12}" text-anchor="middle" font-size="12">'
        f'{escape(xlabel)}</text>',
        f'<text x="16" y="{top + ph / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {top + ph / 2})">{escape(ylabel)}</text>',
        f'<text x="{left}" y="{height - 32}" text-anchor="middle" font-size="10">{x0:.3g}</text>',
        f'<text x="{left + pw}" y="{height - 32}" text-anchor="middle" font-size="10">{x1:.3g}</text>',
        f'<text x="{left - 6}" y="{top + 4}" text-anchor="end" font-size="10">{y1:.3g}</text>',
        f'<text x="{left - 6}" y="{top + ph}" text-anchor="end" font-size="10">0</text>',
        "</svg>",
        "",
    ])
