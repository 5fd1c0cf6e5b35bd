"""Integral representations of f.

* Fourier form:  f(t) = int_0^1 g(x) sin(t x) dx with
  g(z) = (log^2(1-z)/2 - pi^2/6 + Li2(1-z)) / z.
* Laplace form:  f(t) = Im J(t),
  J(t) = i int_0^inf g(iy) e^{-ty} dy - i e^{it} int_0^inf g(1+iy) e^{-ty} dy.
* The region integral J(a) over the unit square, in closed form and by
  brute-force 2-D quadrature.
* The defining triple integral, as a low-precision oracle for small t.
"""

from __future__ import annotations

import math
import warnings

import mpmath
import numpy as np
from scipy import integrate as sci_integrate

from .dilog import _li2, check_omega
from .errors import ConvergenceFailure, DomainError
from .integrate import gauss_panel, tanh_sinh
from .precision import PrecisionContext, fraction_to_mpf, harmonic, resolve
from .series import Evaluation

NEAR_ZERO = 1e-3
PANEL_THRESHOLD = 10


def _g_near_zero(z):
    """sum A_n z^n + log z sum B_n z^n with A_n = H_{n+1}/(n+1) - 2/(n+1)^2, B_n = 1/(n+1)."""
    eps = mpmath.eps
    regular = 0
    singular = 0
    power = mpmath.mpf(1)
    n = 0
    while True:
        m = n + 1
        a_n = fraction_to_mpf(harmonic(m)) / m - mpmath.mpf(2) / (m * m)
        regular += a_n * power
        singular += power / m
        if abs(power) < eps:
            break
        power *= z
        n += 1
    return regular + singular * mpmath.log(z)


def _g(z):
    """g at the current precision; z must lie in the two-cut plane and be nonzero."""
    if abs(z) < NEAR_ZERO:
        return _g_near_zero(z)
    one_minus = 1 - z
    log1m = mpmath.log(one_minus)
    if mpmath.re(z) > 0.5:
        return (log1m**2 / 2 - mpmath.pi**2 / 6 + _li2(one_minus)) / z
    # Euler reflection form, free of cancellation for small |z|
    return (log1m**2 / 2 - _li2(z) - mpmath.log(z) * log1m) / z


def g_kernel(z, ctx: PrecisionContext | None = None):
    """The Fourier kernel g(z), holomorphic on the plane cut along (-inf,0] and [1,inf).

    Real arguments in (0, 1) give an mpf.
    """
    ctx = resolve(ctx)
    with mpmath.workdps(ctx.effective + 5):
        z = mpmath.mpmathify(z)
        check_omega(z)
        if isinstance(z, mpmath.mpc) and z.imag == 0:
            z = z.real
        value = _g(z)
    with ctx.workdps():
        return +value


def inner_J(a, ctx: PrecisionContext | None = None):
    """J(a) = log^2(1-a)/2 - pi^2/6 + Li2(1-a) for 0 < a < 1.

    Equal to a*g(a); for a < 1/2 the reflected form is used so that J(a) -> 0
    as a -> 0 without cancellation.
    """
    ctx = resolve(ctx)
    with mpmath.workdps(ctx.effective + 5):
        a = mpmath.mpf(a)
        if not 0 < a < 1:
            raise DomainError("inner_J needs 0 < a < 1")
        log1m = mpmath.log1p(-a)
        if a > 0.5:
            value = log1m**2 / 2 - mpmath.pi**2 / 6 + _li2(1 - a)
        else:
            value = log1m**2 / 2 - _li2(a) - mpmath.log(a) * log1m
    with ctx.workdps():
        return +value


def _quad(func, a, b, tol, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("error", sci_integrate.IntegrationWarning)
        try:
            return sci_integrate.quad(func, a, b, epsabs=tol, epsrel=0, limit=200, **kwargs)
        except sci_integrate.IntegrationWarning as exc:
            raise ConvergenceFailure(f"adaptive quadrature failed: {exc}") from exc


def inner_J_bruteforce(a: float, tol: float = 1e-6) -> float:
    """J(a) by nested adaptive quadrature over the pieces of the unit square.

    On {x <= a} the integrand is x/((1-x)(1-xy)); on {x > a, xy <= a} it is
    -1/((1-y)(1-xy)); on {xy > a} it vanishes.
    """
    if not 0 < a < 1:
        raise DomainError("inner_J_bruteforce needs 0 < a < 1")
    if tol < 1e-6:
        raise ValueError("tol must be >= 1e-6")
    inner_tol = tol / 20

    def s1_inner(y):
        return _quad(lambda x: x / ((1 - x) * (1 - x * y)), 0, a, inner_tol)[0]

    def s2_inner(x):
        # closed-form-free: integrate in y up to a/x
        return _quad(lambda y: 1 / ((1 - y) * (1 - x * y)), 0, a / x, inner_tol)[0]

    s1, _ = _quad(s1_inner, 0, 1, tol / 4)
    s2, _ = _quad(s2_inner, a, 1, tol / 4)
    return s1 - s2


def _fourier_integrand(t):
    def integrand(x):
        return _g(x) * mpmath.sin(t * x)

    return integrand


def eval_f_fourier(t, tol=1e-15, ctx: PrecisionContext | None = None) -> Evaluation:
    """f(t) for real t from int_0^1 g(x) sin(t x) dx.

    For |t| > 10 the interval is cut at the zeros x = k pi/t of sin(t x); the
    first and last panels (which carry the log and log^2 endpoint
    singularities of g) use tanh-sinh, interior panels Gauss-Legendre.
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        t = mpmath.mpf(t)
        if t == 0:
            return Evaluation(mpmath.mpf(0), mpmath.mpf(0), "fourier", 0, ctx.decimal_digits)
        sign = 1 if t > 0 else -1
        t = abs(t)
        integrand = _fourier_integrand(t)
        tol = mpmath.mpf(tol)
        if t <= PANEL_THRESHOLD:
            value, err = tanh_sinh(integrand, 0, 1, tol)
            panels = 1
        else:
            width = mpmath.pi / t
            count = int(mpmath.floor(1 / width))
            edges = [k * width for k in range(count + 1)]
            # fold a short remainder into the last panel
            if 1 - edges[-1] < width / 2:
                edges[-1] = mpmath.mpf(1)
            else:
                edges.append(mpmath.mpf(1))
            panels = len(edges) - 1
            panel_tol = tol / (2 * panels)
            value = 0
            err = 0
            for k in range(panels):
                lo, hi = edges[k], edges[k + 1]
                if k == 0 or k == panels - 1:
                    v, e = tanh_sinh(integrand, lo, hi, panel_tol)
                else:
                    v, e = gauss_panel(integrand, lo, hi)
                value += v
                err += e
        if err > tol:
            raise ConvergenceFailure(
                f"Fourier quadrature error estimate {mpmath.nstr(err, 3)} exceeds tol", last_correction=err
            )
        return Evaluation(sign * value, err, "fourier", panels, ctx.decimal_digits)


def eval_J_laplace(t, tol=1e-15, ctx: PrecisionContext | None = None) -> Evaluation:
    """J(t) from its two Laplace integrals; Im J(t) = f(t) for t >= 1.

    With y = u/t both integrals become int_0^U h(u) e^{-u} du / t, truncated
    at U = (digits + 5) ln 10 where the neglected tail is below 10^-(digits+5)
    times max |g| on the contour.
    """
    ctx = resolve(ctx)
    with ctx.workdps():
        t = mpmath.mpf(t)
        if t < 1:
            raise DomainError("eval_J_laplace needs t >= 1")
        tol = mpmath.mpf(tol)
        upper = (ctx.effective + 5) * mpmath.log(10)
        j = mpmath.mpc(0, 1)

        def left(u):
            return _g(j * (u / t)) * mpmath.exp(-u)

        def right(u):
            return _g(1 + j * (u / t)) * mpmath.exp(-u)

        values = []
        err = 0
        for h in (left, right):
            total = 0
            for lo, hi in ((0, 1), (1, upper)):
                v, e = tanh_sinh(h, lo, hi, tol * t / 8)
                total += v
                err += e / t
            values.append(total / t)
        # |g| grows at most like log^2 on the contour; the tail is far below tol
        value = j * values[0] - j * mpmath.expj(t) * values[1]
        return Evaluation(value, err, "laplace", 4, ctx.decimal_digits)


def eval_f_laplace(t, tol=1e-15, ctx: PrecisionContext | None = None) -> Evaluation:
    """f(t) = Im J(t) via the Laplace representation."""
    ev = eval_J_laplace(t, tol, ctx)
    return Evaluation(mpmath.im(ev.value), ev.error_bound, "laplace", ev.terms_used, ev.digits)


def _triple_integrand(z, y, x):
    # {sin x + sin(x-y) - sin(x-z) - sin(x-y+z)} / (x y z) rewritten by sum-to-product;
    # its z -> 0 limit (cos x - cos(x-y))/(x y) is reached without cancellation.
    half_sinc = 0.5 * np.sinc(z / (2 * np.pi))  # sin(z/2)/z
    return -4.0 * half_sinc * math.sin(x - y / 2) * math.sin((y - z) / 2) / (x * y)


def triple_integral_direct(t: float, tol: float = 1e-8) -> float:
    """f(t) straight from the nested integral over 0 < z < y < x < t (double precision)."""
    if not 0 < t <= 5:
        raise DomainError("triple_integral_direct is an oracle for 0 < t <= 5")
    if tol < 1e-10:
        raise ValueError("tol below 1e-10 is not attainable in double precision")
    with warnings.catch_warnings():
        warnings.simplefilter("error", sci_integrate.IntegrationWarning)
        try:
            value, _ = sci_integrate.tplquad(
                _triple_integrand,
                0,
                t,
                lambda x: 0.0,
                lambda x: x,
                lambda x, y: 0.0,
                lambda x, y: y,
                epsabs=tol / 10,
                epsrel=0,
            )
        except sci_integrate.IntegrationWarning as exc:
            raise ConvergenceFailure(f"triple integral failed: {exc}") from exc
    return value


__all__ = [
    "g_kernel",
    "inner_J",
    "inner_J_bruteforce",
    "eval_f_fourier",
    "eval_J_laplace",
    "eval_f_laplace",
    "triple_integral_direct",
    "DomainError",
]
