"""Named invariant checks run by ``hsine crosscheck``.

Each check returns ``(ok, detail)``.  They are cheap enough to run together
in a minute or two on one core.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

from . import asymptotics, quadrature, riesz, series, xray, zeros
from .dilog import dilog as li2
from .precision import PrecisionContext, gr_identity, lemma_identity


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[], tuple]


def _exact_identities():
    bad = [n for n in range(1, 301) if lemma_identity(n)[0] != lemma_identity(n)[1] or gr_identity(n)[0] != gr_identity(n)[1]]
    return not bad, f"n <= 300, failures {bad[:5]}"


def _euler_equation():
    ctx = PrecisionContext(30)
    rng = random.Random(20240601)
    worst = mpmath.mpf(0)
    with mpmath.workdps(40):
        for _ in range(1000):
            z = mpmath.mpc(rng.uniform(0.001, 0.999), rng.uniform(-3, 3))
            lhs = li2(z, ctx) + li2(1 - z, ctx)
            res = abs(lhs - mpmath.pi**2 / 6 + mpmath.log(z) * mpmath.log(1 - z))
            worst = max(worst, res)
    return worst <= mpmath.mpf(10) ** -29, f"max residual {mpmath.nstr(worst, 3)}"


def _dilog_conjugate():
    ctx = PrecisionContext(30)
    worst = 0
    with mpmath.workdps(50):
        for z in (mpmath.mpc(0.3, 0.7), mpmath.mpc(-2, 1), mpmath.mpc(3, -0.5), mpmath.mpc(0.9, 5)):
            worst = max(worst, abs(li2(mpmath.conj(z), ctx) - mpmath.conj(li2(z, ctx))))
    return worst <= mpmath.mpf(10) ** -29, f"max |Li2(conj z) - conj Li2(z)| {mpmath.nstr(worst, 3)}"


def _dilog_monotone():
    lo, hi = PrecisionContext(30), PrecisionContext(60)
    worst = 0
    for z in (mpmath.mpc(0.3, 0.7), mpmath.mpc(-5, 2), mpmath.mpf(0.5), mpmath.mpc(2, 0.1)):
        with mpmath.workdps(70):
            worst = max(worst, abs(li2(z, lo) - li2(z, hi)))
    return worst <= mpmath.mpf(10) ** -29, f"30 vs 60 digits differ by {mpmath.nstr(worst, 3)}"


def _series_odd_real():
    worst = 0
    for z in (mpmath.mpc(3, 2), mpmath.mpc(-7.5, 11), mpmath.mpc(20, -4)):
        a, b = series.eval_f_series(z), series.eval_f_series(-z)
        with mpmath.workdps(60):
            ok = abs(a.value + b.value) <= a.error_bound + b.error_bound
        if not ok:
            return False, f"oddness fails at {z}"
    for t in (0.5, 7, 33.3, 120):
        ev = series.eval_f_series(complex(t, 0))
        worst = max(worst, abs(ev.imag))
        if abs(ev.imag) > ev.error_bound:
            return False, f"imaginary part at real t={t}"
    return True, "f(-z) = -f(z) and Im f(t) = 0 within bounds"


def _triple_zero():
    worst = 0
    for t in ("1e-3", "1e-4"):
        ev = series.eval_f_series(t, 1e-40)
        ratio = ev.value / mpmath.mpf(t) ** 3
        worst = max(worst, abs(ratio * -18 - 1))
    return worst <= 1e-5, f"relative deviation of f(t)/t^3 from -1/18: {mpmath.nstr(worst, 3)}"


def _linear_bound():
    ts = [k / 2 for k in range(1, 401)]
    bad = [t for t in ts if abs(series.eval_f_series(t, 1e-12).value) > 2 * t]
    return not bad, f"|f(t)| <= 2t on {len(ts)} samples of (0, 200]"


def _eps_strictness():
    for t in (1, 17.25, 60):
        loose = series.eval_f_series(t, 1e-10)
        tight = series.eval_f_series(t, 1e-30)
        if abs(loose.value - tight.value) > loose.error_bound:
            return False, f"t={t}"
    return True, "tightening eps stays within the loose bound"


def _g_symmetry():
    for x in (0.01, 0.3, 0.5, 0.97):
        if not isinstance(quadrature.g_kernel(x), mpmath.mpf):
            return False, f"g({x}) not real"
    z = mpmath.mpc(0.4, 0.8)
    with mpmath.workdps(50):
        d = abs(quadrature.g_kernel(mpmath.conj(z)) - mpmath.conj(quadrature.g_kernel(z)))
    return d < 1e-28, f"|g(conj z) - conj g(z)| = {mpmath.nstr(d, 3)}"


def _inner_j():
    worst = 0
    for a in (0.1, 0.3, 0.5, 0.7, 0.9):
        worst = max(worst, abs(float(quadrature.inner_J(a)) - quadrature.inner_J_bruteforce(a, 1e-5)))
    return worst <= 1e-5, f"max |J - J_bruteforce| = {worst:.2e}"


def _representations():
    worst = 0
    for t in (1, 2, 5, 10, 20, 50):
        s = series.eval_f_series(t)
        four = quadrature.eval_f_fourier(t)
        lap = quadrature.eval_f_laplace(t)
        for other in (four, lap):
            d = abs(s.value - other.value)
            worst = max(worst, d)
            if d > s.error_bound + other.error_bound + mpmath.mpf(10) ** -25:
                return False, f"t={t} {other.method} off by {mpmath.nstr(d, 3)}"
    return True, f"max disagreement {mpmath.nstr(worst, 3)}"


def _decay():
    peak = max(abs(series.eval_f_series(100 + k / 2, 1e-12).value) for k in range(201))
    return peak <= 0.15, f"max |f| on [100, 200] = {mpmath.nstr(peak, 6)}"


def _coefficients_by_differences():
    """Compare A_n, C_n against numerical derivatives of g with the log parts removed."""
    coeffs = asymptotics.expansion_coefficients(60, PrecisionContext(80))
    worst = mpmath.mpf(0)
    with mpmath.workdps(90):
        z0 = mpmath.mpf("2e-3")
        B = [mpmath.mpf(b.numerator) / b.denominator for b in coeffs.B]
        A = [mpmath.mpf(a.numerator) / a.denominator for a in coeffs.A]
        D = [mpmath.mpf(d.numerator) / d.denominator for d in coeffs.D]

        def regular0(z):
            return quadrature._g(z) - mpmath.log(z) * mpmath.polyval(B[::-1], z)

        def regular1(w):
            return quadrature._g(1 - w) - mpmath.log(w) ** 2 * mpmath.polyval(D[::-1], w)

        for func, table in ((regular0, A), (regular1, coeffs.C)):
            for k in range(6):
                numeric = mpmath.diff(func, z0, k, h=mpmath.mpf("1e-8")) / mpmath.factorial(k)
                predicted = mpmath.fsum(table[n] * mpmath.binomial(n, k) * z0 ** (n - k) for n in range(k, len(table)))
                worst = max(worst, abs(numeric - predicted))
    return worst <= 1e-8, f"max deviation {mpmath.nstr(worst, 3)}"


def _order_one_vs_first_order():
    vals = []
    for t in (100, 400):
        d = abs(asymptotics.eval_J_asymptotic(t, 1).f - asymptotics.first_order_f(t))
        vals.append(d * t)
    return all(v < 1e-6 for v in vals), f"t*|Im J_1 - first_order| = {[mpmath.nstr(v, 3) for v in vals]}"


def _residual_ratio():
    r = {t: abs(series.eval_f_series(t).value - asymptotics.first_order_f(t)) for t in (50, 100, 200, 400, 800)}
    ratios = {t: r[2 * t] / r[t] for t in (50, 100, 200, 400)}
    detail = ", ".join(f"r({2 * t})/r({t})={mpmath.nstr(q, 3)}" for t, q in ratios.items())
    return all(q <= 0.6 for q in ratios.values()), detail


def _zero_properties():
    recs = zeros.zeros_table(45, tol=1e-20)
    spacing = [recs[n + 1].t - recs[n - 1].t for n in range(20, 44)]
    spacing_ok = all(abs(s - 2 * mpmath.pi) < 0.05 for s in spacing)
    slopes = [abs(series.eval_f_prime(r.t).value) for r in recs]
    again = zeros.zeros_table(45, tol=1e-21)
    moved = max(abs(a.t - b.t) for a, b in zip(recs, again))
    ok = spacing_ok and min(slopes) > 1e-3 and moved <= 1e-20
    return ok, f"spacing ok={spacing_ok}, min |f'|={mpmath.nstr(min(slopes), 3)}, max shift={mpmath.nstr(moved, 3)}"


def _xray_checks():
    grid = xray.sample_grid(xray.GridSpec(nx=150, ny=100))
    contours = xray.extract_contours(grid)
    dx = grid.xs[1] - grid.xs[0]
    dy = grid.ys[1] - grid.ys[0]
    diag = math.hypot(dx, dy)
    rng = np.random.default_rng(7)
    points = [(line.kind, p) for line in contours.polylines for p in line.points]
    for idx in rng.choice(len(points), size=100, replace=False):
        kind, (x, y) = points[idx]
        z = mpmath.mpc(x, y)
        value = series.eval_f_series(z, 1e-12).value
        slope = abs(series.eval_f_prime(z, 1e-12).value)
        part = mpmath.im(value) if kind == xray.REAL_LOCUS else mpmath.re(value)
        if abs(part) >= 10 * max(dx, dy) * slope:
            return False, f"contour point ({x:.3f}, {y:.3f}) off by {mpmath.nstr(part, 3)}"
    fine = xray.extract_contours(xray.sample_grid(xray.GridSpec(nx=300, ny=200)))
    from scipy.spatial import cKDTree

    for kind in (xray.REAL_LOCUS, xray.IMAG_LOCUS):
        tree = cKDTree([p for line in fine.of_kind(kind) for p in line.points])
        coarse = np.array([p for line in contours.of_kind(kind) for p in line.points])
        dist, _ = tree.query(coarse)
        if dist.max() >= diag:
            return False, f"{kind} moved {dist.max():.3f} >= cell diagonal {diag:.3f} on refinement"
    return True, "100 re-evaluated points and grid doubling within tolerance"


def _riesz_checks():
    for x in (0.5, 1, 5, 10, 20):
        p, m = riesz.riesz_F_power(x, 1e-12), riesz.riesz_F_mobius(x, 1e-12)
        if abs(float(p.value) - m.value) > p.tail_bound + m.tail_bound:
            return False, f"power vs mobius at x={x}"
    for x in (1e2, 1e3):
        N = riesz.mobius_terms_needed(x, 1e-10)
        a = riesz.riesz_F_mobius(x, N=N)
        b = riesz.riesz_F_mobius(x, N=2 * N)
        if abs(a.value - b.value) > a.tail_bound:
            return False, f"partial sums N, 2N at x={x}"
    for t in (0.5, 1, 2, 4):
        lhs, rhs = riesz.halfint_cos_identity(t, 1e-10)
        if abs(lhs - rhs) > 1e-10:
            return False, f"cosine identity at t={t}"
    return True, "power/mobius, partial-sum stability and cosine identity"


CHECKS = [
    Check("exact-identities", _exact_identities),
    Check("dilog-euler-equation", _euler_equation),
    Check("dilog-conjugation", _dilog_conjugate),
    Check("dilog-precision-monotone", _dilog_monotone),
    Check("series-odd-and-real", _series_odd_real),
    Check("series-triple-zero", _triple_zero),
    Check("series-linear-bound", _linear_bound),
    Check("series-eps-strictness", _eps_strictness),
    Check("kernel-symmetry", _g_symmetry),
    Check("region-reduction", _inner_j),
    Check("representation-agreement", _representations),
    Check("decay-on-100-200", _decay),
    Check("expansion-coefficients", _coefficients_by_differences),
    Check("order-one-block", _order_one_vs_first_order),
    Check("asymptotic-residual-ratio", _residual_ratio),
    Check("zero-table-properties", _zero_properties),
    Check("xray-contours", _xray_checks),
    Check("riesz", _riesz_checks),
]
