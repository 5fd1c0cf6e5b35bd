"""Power series of f and f'.

    f(z) = sum_{n>=1} (-1)^n c_n z^(2n+1) / (2n+1)!,
    c_n  = (sum_{k=1}^{2n+1} H_{k-1}/k) / (2n+1).

Terms grow to about e^|z| before the factorials win, so the sum is carried out
in binary fixed point on Python integers at a working precision chosen from
the truncation plan, with an a-priori bound on every rounding step.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import PrecisionOverflow
from .precision import HARMONIC_CAP, harmonic, split_complex

MAX_DIGITS = 100_000
GUARD_DIGITS = 10

_LOG2_10 = math.log2(10)


@dataclass
class Evaluation:
    """A value with a certified absolute error bound and the method that produced it."""

    value: mpmath.mpf | mpmath.mpc
    error_bound: mpmath.mpf
    method: str
    terms_used: int = 0
    digits: int = 0

    @property
    def real(self):
        return mpmath.re(self.value)

    @property
    def imag(self):
        return mpmath.im(self.value)


@dataclass(frozen=True)
class TruncationPlan:
    N: int
    digits: int
    eps: object = field(compare=False)

    @property
    def bits(self) -> int:
        return int(math.ceil(self.digits * _LOG2_10))


class _Coefficients:
    """Exact inner sums S_m = sum_{k<=m} H_{k-1}/k and the series coefficients."""

    def __init__(self, cap: int = HARMONIC_CAP):
        self.cap = cap
        self._inner = [Fraction(0)]  # S_0
        self._harm = Fraction(0)  # H_{len-1}
        self._lock = threading.Lock()

    def inner(self, m: int) -> Fraction:
        if m >= len(self._inner):
            with self._lock:
                while len(self._inner) <= m:
                    k = len(self._inner)
                    self._inner.append(self._inner[-1] + self._harm / k)
                    self._harm += Fraction(1, k)
        return self._inner[m]

    def coefficient(self, n: int) -> Fraction:
        m = 2 * n + 1
        return self.inner(m) / m


_COEFFS = _Coefficients()


def series_coefficient(n: int) -> Fraction:
    """Exact c_n; c_0 = 0, c_1 = 1/3, c_2 = 3/8."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _COEFFS.coefficient(n)


def _round_fraction(q: Fraction, bits: int) -> int:
    num = q.numerator << bits
    return (2 * num + q.denominator) // (2 * q.denominator)


def _fixed_coefficients(N: int, bits: int) -> list[int]:
    """c_n rounded to ``bits`` fractional bits, n = 0..N.

    Up to the cap the values come from exact rationals; beyond it the
    recurrences run in fixed point with 40 guard bits.
    """
    out = []
    upto = min(N, (HARMONIC_CAP - 1) // 2)
    for n in range(upto + 1):
        out.append(_round_fraction(_COEFFS.coefficient(n), bits))
    if N > upto:
        g = bits + 40
        m = 2 * upto + 1
        harm = _round_fraction(harmonic(m), g)
        inner = _round_fraction(_COEFFS.inner(m), g)
        for _ in range(upto + 1, N + 1):
            for k in (m + 1, m + 2):
                inner += harm // k
                harm += (1 << g) // k
            m += 2
            out.append((inner // m) >> 40)
    return out


class FixedPointSeries:
    """Summation kernel for a fixed term count and working precision.

    With ``derivative=True`` it sums f'(z) = sum (-1)^n c_n z^(2n)/(2n)!.
    All c_n lie in [0, 1], which the error bound relies on.
    """

    _cache: dict = {}
    _cache_lock = threading.Lock()

    def __init__(self, N: int, bits: int, derivative: bool = False):
        self.N = N
        self.bits = -(-bits // 64) * 64  # round up so nearby plans share tables
        self.derivative = derivative
        key = (N, self.bits)
        with self._cache_lock:
            coeffs = self._cache.get(key)
            if coeffs is None:
                if len(self._cache) > 64:
                    self._cache.clear()
                coeffs = _fixed_coefficients(N, self.bits)
                self._cache[key] = coeffs
        self.coeffs = coeffs

    def to_fixed(self, q: Fraction) -> int:
        return _round_fraction(q, self.bits)

    def sum_real(self, x: int) -> int:
        bits, coeffs = self.bits, self.coeffs
        x2 = (x * x) >> bits
        if self.derivative:
            p, off = 1 << bits, 0
        else:
            p, off = x, 1
        s = 0
        for n in range(1, self.N + 1):
            p = ((p * x2) >> bits) // ((2 * n - 1 + off) * (2 * n + off))
            term = (coeffs[n] * p) >> bits
            s = s + term if n % 2 == 0 else s - term
        return s

    def sum_complex(self, zr: int, zi: int) -> tuple[int, int]:
        bits, coeffs = self.bits, self.coeffs
        ar = (zr * zr - zi * zi) >> bits
        ai = (2 * zr * zi) >> bits
        if self.derivative:
            pr, pim, off = 1 << bits, 0, 0
        else:
            pr, pim, off = zr, zi, 1
        sr = si = 0
        for n in range(1, self.N + 1):
            d = (2 * n - 1 + off) * (2 * n + off)
            pr, pim = ((pr * ar - pim * ai) >> bits) // d, ((pr * ai + pim * ar) >> bits) // d
            c = coeffs[n]
            tr = (c * pr) >> bits
            ti = (c * pim) >> bits
            if n % 2 == 0:
                sr += tr
                si += ti
            else:
                sr -= tr
                si -= ti
        return sr, si

    def error_bound(self, r) -> mpmath.mpf:
        """Certified bound on |sum - f(z)| (or f') for |z| <= r, z exactly representable.

        Combines the tail beyond N and all rounding in the fixed-point loop.
        """
        with mpmath.workprec(64):
            r = mpmath.mpf(r)
            u = mpmath.ldexp(1, -self.bits)
            eta = 2 * u
            r2 = r * r + eta
            off = 0 if self.derivative else 1
            magnitude = mpmath.mpf(1) if self.derivative else r  # |z|^(2n+off)/(2n+off)!
            delta = mpmath.mpf(0)  # the starting p is exact
            rounding = mpmath.mpf(0)
            sq2u = 2 * u
            for n in range(1, self.N + 1):
                d = (2 * n - 1 + off) * (2 * n + off)
                delta = (delta * r2 + magnitude * eta + sq2u) / d + sq2u
                magnitude = magnitude * r * r / d
                rounding += delta + u * (magnitude + delta) + sq2u
            # tail: majorant terms r^k / k!, k = 2n + off, n > N
            k = 2 * (self.N + 1) + off
            first = magnitude * r * r / ((k - 1) * k)
            q = r * r / ((k + 1) * (k + 2))
            if q >= 1:
                return mpmath.inf
            tail = first / (1 - q)
            return (rounding + tail) * mpmath.mpf(1.01)


def truncation_plan(t_abs, eps, guard: int = GUARD_DIGITS) -> TruncationPlan:
    """Term count and working digits for summing the series at |z| = t_abs.

    N is the smallest integer with N > 3 t_abs and N >= log2(1/eps)/2; the
    digits cover the largest term (about e^t_abs), the target eps and the
    guard digits.
    """
    with mpmath.workprec(64):
        eps = mpmath.mpf(eps)
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        t = mpmath.mpf(t_abs)
        if t < 0:
            raise ValueError("t_abs must be >= 0")
        lg = -mpmath.log(eps, 2)
        n_eps = int(mpmath.ceil(lg / 2))
        n_t = int(mpmath.floor(3 * t)) + 1
        N = max(n_eps, n_t)
        magnitude_digits = max(mpmath.mpf(0), (t + mpmath.log(N / mpmath.e)) / mpmath.log(10))
        digits = int(mpmath.ceil(magnitude_digits + lg * mpmath.log10(2))) + guard
        return TruncationPlan(N=N, digits=max(digits, 15 + guard), eps=eps)


def _to_mpf_exact(s: int, bits: int):
    with mpmath.workprec(max(s.bit_length(), 1) + 8):
        return mpmath.ldexp(mpmath.mpf(s), -bits)


def _evaluate(z, eps, derivative, max_digits):
    re_q, im_q = split_complex(z)
    is_complex = isinstance(z, (complex, mpmath.mpc))
    with mpmath.workprec(64):
        r = abs(mpmath.mpc(mpmath.mpf(re_q.numerator) / re_q.denominator, mpmath.mpf(im_q.numerator) / im_q.denominator))
        r = r * (1 + mpmath.mpf(2) ** -50)
    plan = truncation_plan(r, eps)
    if plan.digits > max_digits:
        raise PrecisionOverflow(f"plan needs {plan.digits} digits, cap is {max_digits}")
    kernel = FixedPointSeries(plan.N, plan.bits, derivative)
    bits = kernel.bits
    zr, zi = kernel.to_fixed(re_q), kernel.to_fixed(im_q)
    with mpmath.workprec(64):
        u = mpmath.ldexp(1, -bits)
        r_hat = r + u
        bound = kernel.error_bound(r_hat)
        # f evaluated at the rounded point: add max|f'| |dz| <= cosh(r) u (same for f'')
        bound += mpmath.cosh(r_hat) * u
    if is_complex:
        sr, si = kernel.sum_complex(zr, zi)
        with mpmath.workprec(max(sr.bit_length(), si.bit_length(), 1) + 8):
            value = mpmath.mpc(_to_mpf_exact(sr, bits), _to_mpf_exact(si, bits))
    else:
        value = _to_mpf_exact(kernel.sum_real(zr), bits)
    return Evaluation(
        value=value,
        error_bound=bound,
        method="series",
        terms_used=plan.N,
        digits=plan.digits,
    )


def eval_f_series(z, eps=1e-30, max_digits: int = MAX_DIGITS) -> Evaluation:
    """f(z) from the power series with a certified absolute error bound.

    Real inputs (int, float, decimal string, Fraction, mpf) give an mpf value,
    complex inputs an mpc.  Inputs are taken as exact binary/decimal values.
    """
    return _evaluate(z, eps, False, max_digits)


def eval_f_prime(z, eps=1e-30, max_digits: int = MAX_DIGITS) -> Evaluation:
    """f'(z) from the termwise differentiated series."""
    ev = _evaluate(z, eps, True, max_digits)
    ev.method = "series-derivative"
    return ev
