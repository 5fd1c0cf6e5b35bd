"""X-ray of f: the curves Im f = 0 (f real) and Re f = 0 (f purely imaginary).

f is sampled on a rectangular grid with the fixed-point series kernel, the
zero sets of Im f and Re f are traced by marching squares, and the result is
written as a standalone SVG.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from xml.sax.saxutils import escape

import mpmath
import numpy as np

from .output import atomic_write
from .precision import to_fraction
from .errors import PrecisionOverflow
from .series import MAX_DIGITS, FixedPointSeries, truncation_plan

REAL_LOCUS = "real-locus"
IMAG_LOCUS = "imag-locus"
DEFAULT_BOX = (-2, 30, -16, 16)
DEFAULT_STYLE = {REAL_LOCUS: "red", IMAG_LOCUS: "blue"}


@dataclass(frozen=True)
class GridSpec:
    box: tuple = DEFAULT_BOX
    nx: int = 600
    ny: int = 400
    eps: float = 1e-10

    def __post_init__(self):
        x_min, x_max, y_min, y_max = self.box
        if not (x_min < x_max and y_min < y_max):
            raise ValueError("box must satisfy x_min < x_max and y_min < y_max")
        if self.nx < 16 or self.ny < 16:
            raise ValueError("nx and ny must be >= 16")

    def axis(self, lo, hi, n) -> list[Fraction]:
        lo, hi = to_fraction(lo), to_fraction(hi)
        return [lo + (hi - lo) * k / (n - 1) for k in range(n)]

    @property
    def xs(self) -> list[Fraction]:
        return self.axis(self.box[0], self.box[1], self.nx)

    @property
    def ys(self) -> list[Fraction]:
        return self.axis(self.box[2], self.box[3], self.ny)


@dataclass
class Grid:
    """Samples of f; ``values[i, j]`` is f(xs[j] + i ys[i])."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    error_bound: float
    spec: GridSpec | None = None


@dataclass
class Polyline:
    kind: str
    points: list


@dataclass
class ContourSet:
    polylines: list = field(default_factory=list)

    def of_kind(self, kind: str) -> list:
        return [p for p in self.polylines if p.kind == kind]

    def __len__(self):
        return len(self.polylines)


def _to_float(s: int, bits: int) -> float:
    shift = max(0, abs(s).bit_length() - 60)
    return math.ldexp(float(s >> shift), shift - bits)


def _row_job(args):
    N, bits, y, xs = args
    kernel = FixedPointSeries(N, bits)
    yi = kernel.to_fixed(y)
    row = np.empty(len(xs), dtype=complex)
    for j, x in enumerate(xs):
        sr, si = kernel.sum_complex(kernel.to_fixed(x), yi)
        row[j] = complex(_to_float(sr, kernel.bits), _to_float(si, kernel.bits))
    return row


def _max_modulus(spec: GridSpec) -> float:
    x_min, x_max, y_min, y_max = spec.box
    return max(math.hypot(x, y) for x in (x_min, x_max) for y in (y_min, y_max))


def sample_grid(spec: GridSpec = GridSpec(), workers: int | None = None) -> Grid:
    """Evaluate f at every grid node with one truncation plan sized for the box."""
    r = _max_modulus(spec) * (1 + 1e-12)
    plan = truncation_plan(r, spec.eps)
    if plan.digits > MAX_DIGITS:
        raise PrecisionOverflow(f"box needs {plan.digits} digits, cap is {MAX_DIGITS}")
    kernel = FixedPointSeries(plan.N, plan.bits)
    xs, ys = spec.xs, spec.ys
    jobs = [(plan.N, plan.bits, y, xs) for y in ys]
    workers = workers or os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_row_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_row_job(job) for job in jobs]
    with mpmath.workprec(64):
        u = mpmath.ldexp(1, -kernel.bits)
        bound = kernel.error_bound(r) + mpmath.cosh(r) * u
    return Grid(
        xs=np.array([float(x) for x in xs]),
        ys=np.array([float(y) for y in ys]),
        values=np.vstack(rows),
        error_bound=float(bound),
        spec=spec,
    )


def _edge_point(field_, xs, ys, edge):
    kind, i, j = edge
    if kind == "h":
        v0, v1 = field_[i, j], field_[i, j + 1]
        s = v0 / (v0 - v1)
        return (xs[j] + s * (xs[j + 1] - xs[j]), ys[i])
    v0, v1 = field_[i, j], field_[i + 1, j]
    s = v0 / (v0 - v1)
    return (xs[j], ys[i] + s * (ys[i + 1] - ys[i]))


def _cell_segments(field_, above, i, j):
    """Segments (pairs of edge keys) crossing cell (i, j).

    Corners are BL=(i,j), BR=(i,j+1), TR=(i+1,j+1), TL=(i+1,j); saddles are
    resolved by the mean of the four corners standing in for the centre.
    """
    bottom, top = ("h", i, j), ("h", i + 1, j)
    left, right = ("v", i, j), ("v", i, j + 1)
    bl, br, tr, tl = above[i, j], above[i, j + 1], above[i + 1, j + 1], above[i + 1, j]
    crossing = [e for e, a, b in ((bottom, bl, br), (right, br, tr), (top, tl, tr), (left, bl, tl)) if a != b]
    if len(crossing) == 2:
        return [tuple(crossing)]
    if len(crossing) != 4:
        return []
    centre = (field_[i, j] + field_[i, j + 1] + field_[i + 1, j + 1] + field_[i + 1, j]) / 4
    centre_above = centre >= 0
    # the corners sharing the centre's side are joined through the middle
    if bl == centre_above:
        return [(bottom, right), (top, left)]
    return [(left, bottom), (right, top)]


def _chain(segments):
    """Join segments sharing edge keys into polylines of edge keys."""
    adjacency: dict = {}
    for a, b in segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    visited_edges = set()
    chains = []

    def walk(start):
        chain = [start]
        current = start
        while True:
            nxt = None
            for cand in adjacency[current]:
                key = (current, cand) if current <= cand else (cand, current)
                if key not in visited_edges:
                    visited_edges.add(key)
                    nxt = cand
                    break
            if nxt is None:
                return chain
            chain.append(nxt)
            current = nxt

    ends = sorted(k for k, v in adjacency.items() if len(v) == 1)
    for start in ends:
        if any(((start, c) if start <= c else (c, start)) not in visited_edges for c in adjacency[start]):
            chains.append(walk(start))
    for start in sorted(adjacency):
        if any(((start, c) if start <= c else (c, start)) not in visited_edges for c in adjacency[start]):
            chains.append(walk(start))
    return chains


def _trace(field_, xs, ys, kind):
    above = field_ >= 0
    ny, nx = field_.shape
    corners = (
        above[:-1, :-1].astype(np.int8)
        + above[:-1, 1:].astype(np.int8)
        + above[1:, 1:].astype(np.int8)
        + above[1:, :-1].astype(np.int8)
    )
    active = np.argwhere((corners > 0) & (corners < 4))
    segments = []
    for i, j in active:
        segments.extend(_cell_segments(field_, above, int(i), int(j)))
    polylines = []
    for chain in _chain(segments):
        points = [_edge_point(field_, xs, ys, e) for e in chain]
        if len(points) >= 2:
            polylines.append(Polyline(kind, [(float(x), float(y)) for x, y in points]))
    return polylines


def extract_contours(grid: Grid) -> ContourSet:
    """Marching-squares zero curves of Im f (real-locus) and Re f (imag-locus)."""
    values = grid.values
    return ContourSet(
        _trace(values.imag, grid.xs, grid.ys, REAL_LOCUS) + _trace(values.real, grid.xs, grid.ys, IMAG_LOCUS)
    )


def real_axis_crossings(contours: ContourSet, kind: str = IMAG_LOCUS) -> list[float]:
    """Sorted x where polylines of ``kind`` cross y = 0."""
    xs = []
    for line in contours.of_kind(kind):
        pts = line.points
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if y0 == 0 and y1 == 0:
                continue
            if y0 == 0:
                xs.append(x0)
            elif y0 * y1 < 0:
                xs.append(x0 + (x1 - x0) * y0 / (y0 - y1))
        if pts[-1][1] == 0 and (len(pts) < 2 or pts[-2][1] != 0):
            xs.append(pts[-1][0])
    return sorted(set(xs))


def _ticks(lo, hi, target=8):
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    k = 0
    while start + k * step <= hi + 1e-9 * step:
        ticks.append(start + k * step)
        k += 1
    return ticks


def svg_text(contours: ContourSet, box=DEFAULT_BOX, style=None, size: int = 800, title: str | None = None) -> str:
    if not len(contours):
        raise ValueError("contour set is empty")
    style = {**DEFAULT_STYLE, **(style or {})}
    x_min, x_max, y_min, y_max = (float(v) for v in box)
    margin = 60
    plot = size - 2 * margin
    scale = plot / max(x_max - x_min, y_max - y_min)
    width = (x_max - x_min) * scale
    height = (y_max - y_min) * scale

    def px(x, y):
        return margin + (x - x_min) * scale, margin + (y_max - y) * scale

    title = title or f"x-ray of f on [{x_min:g}, {x_max:g}] x [{y_min:g}, {y_max:g}]"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<text x="{size / 2:.1f}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<rect x="{margin}" y="{margin}" width="{width:.2f}" height="{height:.2f}" fill="none" stroke="black"/>',
    ]
    for tx in _ticks(x_min, x_max):
        x, y = px(tx, y_min)
        out.append(f'<line x1="{x:.2f}" y1="{y:.2f}" x2="{x:.2f}" y2="{y + 5:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{x:.2f}" y="{y + 18:.2f}" text-anchor="middle" font-family="sans-serif" font-size="11">{tx:g}</text>'
        )
    for ty in _ticks(y_min, y_max):
        x, y = px(x_min, ty)
        out.append(f'<line x1="{x - 5:.2f}" y1="{y:.2f}" x2="{x:.2f}" y2="{y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{x - 8:.2f}" y="{y + 4:.2f}" text-anchor="end" font-family="sans-serif" font-size="11">{ty:g}</text>'
        )
    for kind in (REAL_LOCUS, IMAG_LOCUS):
        colour = style[kind]
        for line in contours.of_kind(kind):
            pts = " ".join("{:.2f},{:.2f}".format(*px(x, y)) for x, y in line.points)
            out.append(f'<polyline class="{kind}" points="{pts}" fill="none" stroke="{colour}" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(contours: ContourSet, path, box=DEFAULT_BOX, style=None, size: int = 800) -> str:
    """Write the x-ray SVG (red: f real, blue: f purely imaginary) to ``path``."""
    text = svg_text(contours, box, style, size)
    try:
        atomic_write(path, text)
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
    return text


def grid_csv(grid: Grid, path) -> None:
    """Dump the samples as ``x,y,re,im`` rows."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "re", "im"])
    for i, y in enumerate(grid.ys):
        for j, x in enumerate(grid.xs):
            v = grid.values[i, j]
            writer.writerow([repr(float(x)), repr(float(y)), repr(v.real), repr(v.imag)])
    atomic_write(path, buf.getvalue())
