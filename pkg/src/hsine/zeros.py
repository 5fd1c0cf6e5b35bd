"""Real zeros of f: sign-change scan on a coarse grid, then Newton inside the bracket."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .precision import to_fraction, to_mpf
from .series import eval_f_prime, eval_f_series

logger = logging.getLogger(__name__)

COARSE_STEP = Fraction(1, 4)
DEFAULT_TOL = 1e-20
MAX_ITER = 400


@dataclass
class ZeroRecord:
    index: int
    t: mpmath.mpf
    residual: mpmath.mpf
    bracket: tuple


def _sign(t, eps) -> int:
    value = eval_f_series(t, eps).value
    return (value > 0) - (value < 0)


def _grid(t_min, t_max, step):
    lo, hi, step = to_fraction(t_min), to_fraction(t_max), to_fraction(step)
    k = 0
    while lo + k * step < hi:
        yield lo + k * step
        k += 1
    yield hi


def bracket_zeros(t_min, t_max, coarse_step=COARSE_STEP, eps=1e-20) -> list[tuple[Fraction, Fraction]]:
    """Grid intervals of [t_min, t_max] on which f changes sign.

    A grid point where f vanishes exactly is returned as a bracket of zero
    width.
    """
    if not 0 < to_fraction(t_min) < to_fraction(t_max):
        raise ValueError("need 0 < t_min < t_max")
    if to_fraction(coarse_step) > Fraction(1, 2):
        raise ValueError("coarse_step must be <= 0.5")
    brackets = []
    prev_t = prev_s = None
    for t in _grid(t_min, t_max, coarse_step):
        s = _sign(t, eps)
        if s == 0:
            brackets.append((t, t))
        elif prev_s is not None and prev_s * s < 0:
            brackets.append((prev_t, t))
        prev_t, prev_s = t, s
    return brackets


def refine_zero(bracket, tol=DEFAULT_TOL, index: int = 0) -> ZeroRecord:
    """Safeguarded Newton on a sign-change bracket.

    Returns t with |f(t)| <= tol * max(1, |f'(t)|) and a final bracket of
    width <= tol around it.  Newton steps that leave the bracket are replaced
    by bisection.
    """
    tol = mpmath.mpf(tol)
    if not 1e-30 <= tol:
        raise ValueError("tol must be >= 1e-30")
    digits = 30 + int(math.ceil(-math.log10(float(tol))))
    eps = float(tol) * 1e-8
    with mpmath.workdps(digits):
        lo, hi = to_mpf(bracket[0]), to_mpf(bracket[1])
        if lo == hi:
            ev = eval_f_series(lo, eps)
            return ZeroRecord(index, lo, abs(ev.value), (lo, hi))
        s_lo = _sign(lo, eps)
        s_hi = _sign(hi, eps)
        if s_lo * s_hi >= 0:
            raise ValueError(f"no sign change on [{lo}, {hi}]")
        t = (lo + hi) / 2
        for _ in range(MAX_ITER):
            value = eval_f_series(t, eps).value
            slope = eval_f_prime(t, eps).value
            s = (value > 0) - (value < 0)
            if s == 0:
                return ZeroRecord(index, t, mpmath.mpf(0), (t, t))
            if s == s_lo:
                lo = t
            else:
                hi = t
            if abs(value) <= tol * max(1, abs(slope)) and hi - lo <= tol:
                return ZeroRecord(index, t, abs(value), (lo, hi))
            if abs(value) <= tol * max(1, abs(slope)):
                # residual small: certify with a bracket of width tol around t
                a, b = max(lo, t - tol / 2), min(hi, t + tol / 2)
                sa, sb = _sign(a, eps), _sign(b, eps)
                if sa * sb <= 0:
                    return ZeroRecord(index, t, abs(value), (a, b))
            step = value / slope if slope != 0 else None
            candidate = t - step if step is not None else None
            if candidate is None or not lo < candidate < hi:
                logger.debug("Newton left [%s, %s]; bisecting", lo, hi)
                candidate = (lo + hi) / 2
            t = candidate
        raise ArithmeticError(f"refinement did not converge on {bracket}")


def _refine_job(args):
    bracket, tol, index = args
    return refine_zero(bracket, tol, index)


def zeros_table(count: int, tol=DEFAULT_TOL, coarse_step=COARSE_STEP, workers: int = 1) -> list[ZeroRecord]:
    """The first ``count`` positive zeros of f in increasing order."""
    if not 0 <= count <= 100:
        raise ValueError("count must be in 0..100")
    if count == 0:
        return []
    step = to_fraction(coarse_step)
    eps = 1e-20
    brackets = []
    prev_t, prev_s = step, _sign(step, eps)
    k = 1
    while len(brackets) < count:
        k += 1
        t = k * step
        s = _sign(t, eps)
        if s == 0:
            brackets.append((t, t))
        elif prev_s * s < 0:
            brackets.append((prev_t, t))
        prev_t, prev_s = t, s
    jobs = [(b, tol, i + 1) for i, b in enumerate(brackets)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_refine_job, jobs))
    return [_refine_job(job) for job in jobs]


def zeros_csv(records) -> str:
    """CSV text with header ``index,t,residual``; t to 15 significant digits."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["index", "t", "residual"])
    for rec in records:
        writer.writerow([rec.index, mpmath.nstr(rec.t, 15), mpmath.nstr(rec.residual, 3)])
    return out.getvalue()
