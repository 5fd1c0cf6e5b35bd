import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from hsine import series, xray
from hsine.errors import PrecisionOverflow

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def small_grid():
    return xray.sample_grid(xray.GridSpec(nx=64, ny=64), workers=1)


def synthetic(func, box=(-1, 1, -1, 1), n=41):
    xs = np.linspace(box[0], box[1], n)
    ys = np.linspace(box[2], box[3], n)
    X, Y = np.meshgrid(xs, ys)
    return xray.Grid(xs, ys, func(X + 1j * Y), 0.0)


def test_gridspec_validation():
    with pytest.raises(ValueError):
        xray.GridSpec(box=(1, 0, -1, 1))
    with pytest.raises(ValueError):
        xray.GridSpec(nx=8)


def test_conjugate_symmetry(small_grid):
    v = small_grid.values
    scale = np.abs(v).max()
    assert np.max(np.abs(v - np.conj(v[::-1]))) <= 1e-12 * scale


def test_matches_pointwise_series(small_grid):
    for i, j in ((0, 0), (10, 50), (63, 63), (31, 5)):
        z = complex(small_grid.xs[j], small_grid.ys[i])
        ref = complex(series.eval_f_series(z, 1e-12).value)
        assert abs(small_grid.values[i, j] - ref) <= 1e-9 * max(1, abs(ref))


def test_real_row_and_origin():
    grid = xray.sample_grid(xray.GridSpec(box=(-2, 30, -16, 16), nx=33, ny=33), workers=1)
    row = grid.values[16]
    assert grid.ys[16] == 0
    assert np.all(np.abs(row.imag) <= grid.error_bound)
    j0 = int(np.argmin(np.abs(grid.xs)))
    assert grid.xs[j0] == 0 and grid.values[16, j0] == 0


def test_precision_overflow_propagates():
    with pytest.raises(PrecisionOverflow):
        xray.sample_grid(xray.GridSpec(box=(0, 1e6, 0, 1), nx=16, ny=16))


def test_synthetic_identity_contours():
    # f(z) = z: real on y = 0, purely imaginary on x = 0
    grid = synthetic(lambda z: z, box=(-1, 1.05, -1, 1.05))
    contours = xray.extract_contours(grid)
    (real,) = contours.of_kind(xray.REAL_LOCUS)
    (imag,) = contours.of_kind(xray.IMAG_LOCUS)
    assert all(abs(y) < 1e-12 for _, y in real.points)
    assert all(abs(x) < 1e-12 for x, _ in imag.points)
    assert min(x for x, _ in real.points) == pytest.approx(-1)
    assert max(x for x, _ in real.points) == pytest.approx(1.05)


def test_synthetic_circle_is_closed():
    grid = synthetic(lambda z: (np.abs(z) ** 2 - 0.25) + 1j * 0.3)
    contours = xray.extract_contours(grid)
    (circle,) = contours.of_kind(xray.IMAG_LOCUS)
    assert circle.points[0] == circle.points[-1]
    radii = [math.hypot(x, y) for x, y in circle.points]
    assert max(abs(r - 0.5) for r in radii) < 0.01


def test_saddle_cell_gives_two_segments():
    # checkerboard signs of Re f; the mean 0 counts as above, so the
    # positive diagonal stays connected and the negative corners are cut off
    values = np.array([[1 + 1j, -1 + 1j], [-1 + 1j, 1 + 1j]])
    grid = xray.Grid(np.array([0.0, 1.0]), np.array([0.0, 1.0]), values, 0.0)
    a = xray.extract_contours(grid)
    assert len(a.of_kind(xray.IMAG_LOCUS)) == 2
    assert not a.of_kind(xray.REAL_LOCUS)
    assert [p.points for p in a.polylines] == [p.points for p in xray.extract_contours(grid).polylines]
    for line in a.polylines:
        assert sorted(line.points) in ([(0.0, 0.5), (0.5, 1.0)], [(0.5, 0.0), (1.0, 0.5)])


def test_contour_points_are_accurate(small_grid):
    contours = xray.extract_contours(small_grid)
    dx = small_grid.xs[1] - small_grid.xs[0]
    rng = np.random.default_rng(3)
    pts = [(line.kind, p) for line in contours.polylines for p in line.points]
    for k in rng.choice(len(pts), size=40, replace=False):
        kind, (x, y) = pts[k]
        value = complex(series.eval_f_series(complex(x, y), 1e-12).value)
        slope = abs(complex(series.eval_f_prime(complex(x, y), 1e-12).value))
        part = value.imag if kind == xray.REAL_LOCUS else value.real
        assert abs(part) < 10 * dx * slope


def test_points_inside_box(small_grid):
    x0, x1, y0, y1 = xray.DEFAULT_BOX
    contours = xray.extract_contours(small_grid)
    for line in contours.polylines:
        assert len(line.points) >= 2
        for x, y in line.points:
            assert x0 <= x <= x1 and y0 <= y <= y1


def test_svg_structure_and_colors(small_grid, tmp_path):
    contours = xray.extract_contours(small_grid)
    path = tmp_path / "x.svg"
    xray.render_svg(contours, path)
    root = ET.parse(path).getroot()
    lines = list(root.iter(SVG + "polyline"))
    red = [p for p in lines if p.get("stroke") == "red"]
    blue = [p for p in lines if p.get("stroke") == "blue"]
    assert len(red) >= 2 and len(blue) >= 2
    assert root.get("viewBox") == "0 0 800 800"
    assert any(t.text and t.text.startswith("x-ray") for t in root.iter(SVG + "text"))

    swapped = tmp_path / "s.svg"
    xray.render_svg(contours, swapped, style={xray.REAL_LOCUS: "blue", xray.IMAG_LOCUS: "red"})
    swapped_lines = list(ET.parse(swapped).getroot().iter(SVG + "polyline"))
    assert [p.get("points") for p in swapped_lines] == [p.get("points") for p in lines]
    assert [p.get("stroke") for p in swapped_lines] == [
        {"red": "blue", "blue": "red"}[p.get("stroke")] for p in lines
    ]


def test_svg_deterministic(small_grid, tmp_path):
    contours = xray.extract_contours(small_grid)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    xray.render_svg(contours, a)
    xray.render_svg(xray.extract_contours(xray.sample_grid(xray.GridSpec(nx=64, ny=64), workers=1)), b)
    assert a.read_bytes() == b.read_bytes()


def test_empty_contours_write_nothing(tmp_path):
    path = tmp_path / "empty.svg"
    with pytest.raises(ValueError):
        xray.render_svg(xray.ContourSet(), path)
    assert not path.exists()
    assert list(tmp_path.iterdir()) == []


def test_io_error_names_path(small_grid, tmp_path):
    contours = xray.extract_contours(small_grid)
    target = tmp_path / "missing" / "x.svg"
    with pytest.raises(OSError, match="missing"):
        xray.render_svg(contours, target)


def test_grid_csv(tmp_path):
    grid = xray.sample_grid(xray.GridSpec(nx=16, ny=16), workers=1)
    path = tmp_path / "grid.csv"
    xray.grid_csv(grid, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,re,im"
    assert len(lines) == 1 + 16 * 16


def test_parallel_rows_match_serial():
    spec = xray.GridSpec(nx=16, ny=16)
    assert np.array_equal(xray.sample_grid(spec, workers=1).values, xray.sample_grid(spec, workers=2).values)


def test_refinement_moves_contours_less_than_a_cell():
    from scipy.spatial import cKDTree

    coarse = xray.sample_grid(xray.GridSpec(nx=100, ny=80), workers=1)
    fine = xray.sample_grid(xray.GridSpec(nx=200, ny=160), workers=1)
    c1, c2 = xray.extract_contours(coarse), xray.extract_contours(fine)
    diag = math.hypot(coarse.xs[1] - coarse.xs[0], coarse.ys[1] - coarse.ys[0])
    for kind in (xray.REAL_LOCUS, xray.IMAG_LOCUS):
        tree = cKDTree([p for line in c2.of_kind(kind) for p in line.points])
        dist, _ = tree.query([p for line in c1.of_kind(kind) for p in line.points])
        assert dist.max() < diag
