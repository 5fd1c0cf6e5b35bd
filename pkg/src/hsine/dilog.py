"""Dilogarithm on the plane cut along (-inf, 0] and [1, +inf).

The argument is first mapped by inversion (|z| > 1) and reflection
(Re z > 1/2) into the region |w| <= 1, Re w <= 1/2.  There the Taylor series
is used when |w| <= 1/2, and otherwise the Bernoulli series in
u = -log(1 - w), which converges geometrically with ratio |u|/(2 pi) <= 0.21
on that region.  The Bernoulli branch covers the neighbourhood of
exp(+-i pi/3), where no image of z under the usual functional equations
falls inside the disc of radius 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import DomainError
from .precision import PrecisionContext, resolve

UNIT_INTERVAL = "unit-interval"
UPPER_STRIP = "upper-strip"
GENERAL = "general"


@dataclass(frozen=True)
class CutPlanePoint:
    """A point of the two-cut plane together with a coarse region label."""

    z: mpmath.mpc
    region: str

    @classmethod
    def of(cls, z) -> "CutPlanePoint":
        z = mpmath.mpc(z)
        check_omega(z)
        if z.imag == 0:
            region = UNIT_INTERVAL
        elif z.imag > 0 and 0 <= z.real <= 1:
            region = UPPER_STRIP
        else:
            region = GENERAL
        return cls(z, region)


def on_cut(z) -> bool:
    """True if z lies on (-inf, 0] or [1, +inf)."""
    z = mpmath.mpc(z)
    return z.imag == 0 and (z.real <= 0 or z.real >= 1)


def check_omega(z) -> None:
    if on_cut(z):
        raise DomainError(f"{mpmath.nstr(mpmath.mpc(z), 15)} lies on a branch cut (-inf,0] or [1,+inf)")


def _taylor(w):
    eps = mpmath.eps
    total = w
    power = w
    tiny = eps * abs(w)
    k = 1
    while True:
        k += 1
        power *= w
        term = power / (k * k)
        total += term
        if abs(term) < tiny:
            return total


def _bernoulli_series(w):
    u = -mpmath.log(1 - w)
    u2 = u * u
    total = u - u2 / 4
    power = u  # u^(2k+1)/(2k+1)!
    eps = mpmath.eps * abs(u)
    k = 0
    while True:
        k += 1
        power = power * u2 / ((2 * k) * (2 * k + 1))
        term = mpmath.bernoulli(2 * k) * power
        total += term
        if abs(term) < eps:
            return total


def _li2(z):
    """Li2 at the current mpmath precision; no domain check."""
    if z == 0:
        return mpmath.mpf(0) * z
    if z == 1:
        return mpmath.pi**2 / 6
    if abs(z) > 1:
        # Li2(z) + Li2(1/z) = -pi^2/6 - log^2(-z)/2, z off [0, 1]
        return -mpmath.pi**2 / 6 - mpmath.log(-z) ** 2 / 2 - _li2(1 / z)
    if mpmath.re(z) > 0.5:
        # Li2(z) + Li2(1-z) = pi^2/6 - log z log(1-z)
        return mpmath.pi**2 / 6 - mpmath.log(z) * mpmath.log(1 - z) - _li2(1 - z)
    if abs(z) <= 0.5:
        return _taylor(z)
    return _bernoulli_series(z)


def dilog(z, ctx: PrecisionContext | None = None):
    """Li2(z) for z in the two-cut plane; z = 0 and z = 1 are accepted as limits.

    Returns an mpf for real arguments and an mpc otherwise.

    >>> import mpmath
    >>> mpmath.nstr(dilog(0.5), 12)
    '0.582240526465'
    """
    ctx = resolve(ctx)
    with mpmath.workdps(ctx.effective + 5):
        z = mpmath.mpmathify(z)
        if z != 0 and z != 1:
            check_omega(z)
        if isinstance(z, mpmath.mpc) and z.imag == 0:
            z = z.real
        value = _li2(z)
    with ctx.workdps():
        return +value
