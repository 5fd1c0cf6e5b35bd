"""Quadrature rules at mpmath working precision.

``tanh_sinh`` is the double-exponential rule with level doubling; nodes are
generated from their distance to the nearer endpoint, so integrands with log
or log^2 endpoint singularities are sampled accurately right up to the end.
``gauss_legendre`` is a fixed-order rule for smooth panels.
"""

from __future__ import annotations

import threading

import mpmath

from .errors import ConvergenceFailure

MAX_LEVEL = 20

_lock = threading.Lock()
_de_cache: dict = {}
_gl_cache: dict = {}


def _de_level(level: int, prec: int):
    """Nodes added at ``level``: list of (d, w) with d = (1 - x)/2 for x = tanh(pi/2 sinh t).

    Level 0 holds t = 0 and integer t; level l > 0 holds the odd multiples of 2^-l.
    Weights already include the step h = 2^-level and the factor 1/2 of the map.
    """
    key = (level, prec)
    nodes = _de_cache.get(key)
    if nodes is not None:
        return nodes
    with mpmath.workprec(prec + 20):
        h = mpmath.ldexp(1, -level)
        half_pi = mpmath.pi / 2
        # beyond t_max the weights are below 2^-prec
        t_max = mpmath.log(4 / mpmath.pi * (prec + 20) * mpmath.log(2)) + 1
        nodes = []
        k = 0 if level == 0 else 1
        step = 1 if level == 0 else 2
        while True:
            t = k * h
            if t > t_max:
                break
            s = half_pi * mpmath.sinh(t)
            e2s = mpmath.exp(2 * s)
            d = 1 / (e2s + 1)  # (1 - tanh s)/2
            w = h * half_pi * mpmath.cosh(t) / mpmath.cosh(s) ** 2 / 2
            nodes.append((d, w))
            k += step
    with _lock:
        _de_cache[key] = nodes
    return nodes


def tanh_sinh(f, a, b, tol, max_level: int = 12, min_level: int = 3):
    """Integrate f over (a, b), a < b finite, returning (value, error_estimate).

    f is never evaluated at the endpoints.  The estimate is the last change
    between successive levels; ConvergenceFailure is raised if it stays above
    tol at ``max_level``.
    """
    if max_level > MAX_LEVEL:
        raise ValueError(f"max_level must be <= {MAX_LEVEL}")
    prec = mpmath.mp.prec
    a = mpmath.mpf(a)
    b = mpmath.mpf(b)
    length = b - a
    total = 0
    previous = None
    correction = None
    for level in range(max_level + 1):
        partial = 0
        for d, w in _de_level(level, prec):
            offset = length * d
            if d == mpmath.mpf(0.5):
                partial += w * f(a + offset)
                continue
            left = a + offset
            right = b - offset
            if left != a:
                partial += w * f(left)
            if right != b:
                partial += w * f(right)
        # halving h: old sum is rescaled and the new odd nodes added
        total = partial if level == 0 else total / 2 + partial
        if previous is not None:
            correction = abs(total - previous)
            if level >= min_level and correction <= tol:
                return total * length, correction * length
        previous = total
    raise ConvergenceFailure(
        f"tanh-sinh did not reach tol {mpmath.nstr(tol, 3)} by level {max_level}",
        level=max_level,
        last_correction=correction * length if correction is not None else None,
    )


def _legendre_nodes(n: int, prec: int):
    key = (n, prec)
    rule = _gl_cache.get(key)
    if rule is not None:
        return rule
    with mpmath.workprec(prec + 20):
        rule = []
        eps = mpmath.ldexp(1, -prec - 10)
        for i in range(1, n // 2 + 1):
            x = mpmath.cos(mpmath.pi * (i - mpmath.mpf(0.25)) / (n + mpmath.mpf(0.5)))
            while True:
                p0, p1 = mpmath.mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            w = 2 / ((1 - x * x) * dp * dp)
            rule.append((x, w))
    with _lock:
        _gl_cache[key] = rule
    return rule


def gauss_legendre(f, a, b, n: int = 24):
    """n-point Gauss-Legendre rule on [a, b], n even."""
    if n % 2:
        raise ValueError("n must be even")
    half = (mpmath.mpf(b) - a) / 2
    mid = (mpmath.mpf(b) + a) / 2
    total = 0
    for x, w in _legendre_nodes(n, mpmath.mp.prec):
        total += w * (f(mid - half * x) + f(mid + half * x))
    return total * half


def gauss_panel(f, a, b, n: int = 24, n_check: int = 16):
    """Gauss-Legendre value on [a, b] with |G_n - G_n_check| as error estimate."""
    value = gauss_legendre(f, a, b, n)
    check = gauss_legendre(f, a, b, n_check)
    return value, abs(value - check)
