"""Precision contexts, exact harmonic-number arithmetic and integer polygamma values.

Exact quantities are :class:`fractions.Fraction`; real and complex results are
mpmath ``mpf``/``mpc`` values produced at the effective precision of a
:class:`PrecisionContext`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

HARMONIC_CAP = 10_000


@dataclass(frozen=True)
class PrecisionContext:
    """Requested precision in decimal digits plus guard digits."""

    decimal_digits: int = 30
    guard_digits: int = 10

    def __post_init__(self):
        if self.decimal_digits < 15:
            raise ValueError("decimal_digits must be >= 15")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be >= 0")

    @property
    def effective(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def bits(self) -> int:
        return int(self.effective * 3.3219280948873626) + 1

    def workdps(self):
        """Context manager setting mpmath's working precision to ``effective`` digits."""
        return mpmath.workdps(self.effective)

    def tolerance(self):
        return mpmath.mpf(10) ** (-self.decimal_digits)


DEFAULT_CONTEXT = PrecisionContext()


def resolve(ctx: PrecisionContext | None) -> PrecisionContext:
    return DEFAULT_CONTEXT if ctx is None else ctx


class _PartialSums:
    """Append-only table of exact partial sums sum_{k<=n} 1/k**power.

    Readers never lock; extension is serialized.
    """

    def __init__(self, power: int, cap: int = HARMONIC_CAP):
        self.power = power
        self.cap = cap
        self._values = [Fraction(0)]
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> Fraction:
        values = self._values
        if n < len(values):
            return values[n]
        if n > self.cap:
            # past the cap nothing is memoized
            start = len(values) - 1
            acc = values[start]
            for k in range(start + 1, n + 1):
                acc += Fraction(1, k**self.power)
            return acc
        with self._lock:
            while len(self._values) <= n:
                k = len(self._values)
                self._values.append(self._values[-1] + Fraction(1, k**self.power))
        return self._values[n]


_harmonic = _PartialSums(1)
_harmonic2 = _PartialSums(2)


def harmonic(n: int) -> Fraction:
    """Exact harmonic number H_n = 1 + 1/2 + ... + 1/n (H_0 = 0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _harmonic[n]


def harmonic_squares(n: int) -> Fraction:
    """Exact sum_{k=1..n} 1/k**2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _harmonic2[n]


def harmonic_real(n: int, ctx: PrecisionContext | None = None):
    """H_n as an mpf; exact conversion below the cap, digamma identity above it."""
    ctx = resolve(ctx)
    with ctx.workdps():
        if n <= HARMONIC_CAP:
            return fraction_to_mpf(harmonic(n))
        return mpmath.psi(0, n + 1) + mpmath.euler


def lemma_identity(n: int) -> tuple[Fraction, Fraction]:
    """Both sides of sum (-1)^k C(n,k)/k^2 = -sum H_k/k, k = 1..n, exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = sum((Fraction((-1) ** k * comb(n, k), k * k) for k in range(1, n + 1)), Fraction(0))
    rhs = -sum((harmonic(k) / k for k in range(1, n + 1)), Fraction(0))
    return lhs, rhs


def gr_identity(n: int) -> tuple[Fraction, Fraction]:
    """Both sides of sum (-1)^(k+1) C(n,k)/k = H_n, k = 1..n, exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = sum((Fraction((-1) ** (k + 1) * comb(n, k), k) for k in range(1, n + 1)), Fraction(0))
    return lhs, harmonic(n)


def euler_gamma(ctx: PrecisionContext | None = None):
    # mpmath caches constants per working precision
    with resolve(ctx).workdps():
        return +mpmath.euler


def pi(ctx: PrecisionContext | None = None):
    with resolve(ctx).workdps():
        return +mpmath.pi


def digamma_int(n: int, ctx: PrecisionContext | None = None):
    """Psi(n+1) = H_n - gamma."""
    if n < 0:
        raise ValueError("n must be non-negative")
    ctx = resolve(ctx)
    with ctx.workdps():
        return harmonic_real(n, ctx) - mpmath.euler


def trigamma_int(n: int, ctx: PrecisionContext | None = None):
    """Psi'(n+1) = pi^2/6 - sum_{k<=n} 1/k^2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    ctx = resolve(ctx)
    with ctx.workdps():
        if n <= HARMONIC_CAP:
            return mpmath.pi**2 / 6 - fraction_to_mpf(harmonic_squares(n))
        return mpmath.psi(1, n + 1)


def fraction_to_mpf(q: Fraction):
    """Round an exact rational to the current mpmath precision."""
    return mpmath.mpf(q.numerator) / q.denominator


def to_mpf(x):
    """mpf at the current precision from any real input, Fractions included."""
    if isinstance(x, Fraction):
        return fraction_to_mpf(x)
    return mpmath.mpf(x)


def to_fraction(x) -> Fraction:
    """Exact rational value of a real input (int, float, decimal string, Fraction, mpf)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        if not mpmath.isfinite(x):
            raise ValueError("non-finite input")
        sign, man, exp, _ = x._mpf_
        man = -int(man) if sign else int(man)
        return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def split_complex(z) -> tuple[Fraction, Fraction]:
    """Exact (real, imag) parts of a real or complex input."""
    if isinstance(z, mpmath.mpc):
        return to_fraction(z.real), to_fraction(z.imag)
    if isinstance(z, complex):
        return Fraction(z.real), Fraction(z.imag)
    return to_fraction(z), Fraction(0)
