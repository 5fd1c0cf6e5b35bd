"""Riesz function F(x), the Moebius kernel g(t) and a Fourier-cosine identity.

F(x) = sum_{n>=1} (-1)^(n+1) x^n / ((n-1)! zeta(2n)) = x sum_n mu(n) n^-2 exp(-x/n^2).

Every value carries a bound built from explicit remainder estimates.
"""

from __future__ import annotations

import csv
import io
import math
import threading
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ConvergenceFailure, PrecisionOverflow, SieveTooSmall
from .integrate import gauss_panel

SIEVE_LIMIT = 10**7
DEFAULT_SIEVE = 10**6
POWER_X_MAX = 10**4
_U = 2.0**-53


@dataclass(frozen=True)
class MoebiusTable:
    """mu[n] and M[n] = mu[1] + ... + mu[n] for 0 <= n <= N (index 0 holds 0)."""

    N: int
    mu: np.ndarray
    M: np.ndarray

    def mertens(self, x) -> int:
        n = int(math.floor(x))
        if n > self.N:
            raise SieveTooSmall(f"M({n}) needs a sieve of size >= {n}, have {self.N}")
        return int(self.M[max(n, 0)])


def moebius_sieve(N: int) -> MoebiusTable:
    if not 1 <= N <= SIEVE_LIMIT:
        raise ValueError(f"N must be in 1..{SIEVE_LIMIT}")
    mu = np.ones(N + 1, dtype=np.int8)
    mu[0] = 0
    composite = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        mu[p::p] *= -1
        if p * p <= N:
            mu[p * p :: p * p] = 0
    M = np.cumsum(mu, dtype=np.int64)
    mu.flags.writeable = False
    M.flags.writeable = False
    return MoebiusTable(N, mu, M)


_tables: dict = {}
_tables_lock = threading.Lock()


def default_table(N: int = DEFAULT_SIEVE) -> MoebiusTable:
    """Shared sieve of at least size N, built once per size."""
    with _tables_lock:
        for size, table in _tables.items():
            if size >= N:
                return table
        table = moebius_sieve(N)
        _tables[N] = table
        return table


@dataclass
class RieszEval:
    x: float
    value: object
    tail_bound: float
    method: str


def zeta_even(n: int, digits: int = 30):
    """(zeta(2n), bound) by direct summation with an Euler-Maclaurin tail.

    With s = 2n the tail from K on is K^(1-s)/(s-1) - K^-s/2 + Bernoulli
    corrections; all derivatives of u^-s alternate in sign, so the remainder
    is bounded by the first omitted correction.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = 2 * n
    with mpmath.workdps(digits + 10):
        target = mpmath.mpf(10) ** (-digits - 5)
        # 0 < sum_{k>=K} k^-s <= K^-s + K^(1-s)/(s-1): when that is already
        # below target no correction is needed
        cap = max(20, digits)
        K = 2
        while K < cap and mpmath.mpf(K) ** -s + mpmath.mpf(K) ** (1 - s) / (s - 1) >= target:
            K += 1
        head = mpmath.fsum(mpmath.mpf(k) ** -s for k in range(1, K))
        Kf = mpmath.mpf(K)
        crude = Kf**-s + Kf ** (1 - s) / (s - 1)
        if crude < target:
            return head + crude / 2, float(crude / 2 + target)
        tail = Kf ** (1 - s) / (s - 1) + Kf**-s / 2
        rising = mpmath.mpf(s)  # s (s+1) ... (s+2j-2)
        j = 1
        while True:
            term = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * rising * Kf ** (-s - 2 * j + 1)
            if abs(term) < target:
                bound = abs(term)
                break
            tail += term
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            j += 1
            if j > 10 * digits + 100:
                raise ConvergenceFailure(f"Euler-Maclaurin tail for zeta({s}) did not settle")
        value = head + tail
        return value, float(bound + target)


def _power_digits(x: float, eps: float) -> int:
    # largest term is below e^x; sum of |terms| below x e^x
    magnitude = (x + math.log(max(x, 1.0))) / math.log(10) if x > 0 else 0.0
    return int(math.ceil(magnitude + math.log10(1 / eps))) + 10


def riesz_F_power(x, eps: float = 1e-12) -> RieszEval:
    """F(x) from the power series, with zeta(2n) summed directly."""
    x = mpmath.mpf(x)
    if x < 0:
        raise ValueError("x must be >= 0")
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if x > POWER_X_MAX:
        raise PrecisionOverflow(f"power series limited to x <= {POWER_X_MAX}; use riesz_F_mobius")
    if x == 0:
        return RieszEval(0.0, mpmath.mpf(0), 0.0, "power-series")
    digits = _power_digits(float(x), eps)
    with mpmath.workdps(digits):
        total = mpmath.mpf(0)
        abs_total = mpmath.mpf(0)
        zeta_err = mpmath.mpf(0)
        power = x  # x^n/(n-1)!
        n = 1
        while True:
            z, zb = zeta_even(n, digits)
            term = power / z
            total += term if n % 2 else -term
            abs_total += abs(term)
            # d(1/zeta) <= zb since zeta >= 1
            zeta_err += power * zb
            power = power * x / n
            n += 1
            # majorant tail sum_{m>=n} x^m/(m-1)! with geometric ratio x/n
            if n > x:
                ratio = x / n
                tail = power / (1 - ratio)
                if tail < eps / 4:
                    break
        rounding = abs_total * mpmath.mpf(10) ** (-digits + 2)
        bound = float(tail + zeta_err + rounding)
        return RieszEval(float(x), +total, bound, "power-series")


def mobius_terms_needed(x: float, eps: float) -> int:
    """Smallest N with x^2/(3 N^3) <= eps."""
    if x == 0:
        return 1
    return max(1, int(math.ceil((x * x / (3 * eps)) ** (1 / 3))))


def riesz_F_mobius(x, eps: float = 1e-12, table: MoebiusTable | None = None, N: int | None = None) -> RieszEval:
    """F(x) from the Moebius sum.

    Splitting off sum mu(n)/n^2 = 6/pi^2 gives
    F(x) = 6x/pi^2 + x sum mu(n) n^-2 expm1(-x/n^2), whose tail past N is at
    most x sum_{n>N} x/n^4 <= x^2/(3 N^3).  Evaluated in double precision;
    the bound includes the rounding of the fsum-ed terms.
    """
    x = float(x)
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return RieszEval(0.0, 0.0, 0.0, "mobius")
    if N is None:
        N = mobius_terms_needed(x, eps)
    if table is None:
        if N > SIEVE_LIMIT:
            raise SieveTooSmall(f"x={x} at eps={eps} needs N={N} > sieve limit {SIEVE_LIMIT}")
        table = default_table(max(N, DEFAULT_SIEVE if N <= DEFAULT_SIEVE else N))
    if N > table.N:
        raise SieveTooSmall(f"needs N={N} but the sieve holds {table.N}")
    n = np.arange(1, N + 1, dtype=np.float64)
    mu = table.mu[1 : N + 1]
    mask = mu != 0
    n, mu = n[mask], mu[mask].astype(np.float64)
    terms = x * mu * np.expm1(-x / (n * n)) / (n * n)
    lead = 6 * x / math.pi**2
    value = math.fsum([lead, *terms.tolist()])
    rounding = 8 * _U * (float(np.sum(np.abs(terms))) + lead) + _U * abs(value)
    tail = x * x / (3.0 * float(N) ** 3)
    return RieszEval(x, value, tail + rounding, "mobius")


def _phi(x):
    return mpmath.cos(mpmath.mpf(1.5) * mpmath.atan(x)) / (1 + x * x) ** mpmath.mpf(0.75)


def halfint_cos_identity(t, tol: float = 1e-10, max_panels: int = 400):
    """(lhs, rhs) for sqrt(t) e^-t = pi^-1/2 int_0^inf phi(x) cos(x t) dx.

    phi(x) = cos(3/2 arctan x)/(1+x^2)^(3/4).  The integral is cut at the
    zeros of cos(x t); panel sums are accelerated with the Shanks/Wynn
    epsilon transformation.
    """
    with mpmath.workdps(30):
        t = mpmath.mpf(t)
        if t <= 0:
            raise ValueError("t must be > 0")
        lhs = mpmath.sqrt(t) * mpmath.exp(-t)
        half = mpmath.pi / t

        def integrand(x):
            return _phi(x) * mpmath.cos(x * t)

        def panel(a, b):
            # sub-panels narrow enough for the branch points of phi at x = +-i
            width = max(mpmath.mpf(0.5), a / 2)
            pieces = int(mpmath.ceil((b - a) / width))
            total = 0
            for k in range(pieces):
                lo = a + (b - a) * k / pieces
                hi = a + (b - a) * (k + 1) / pieces
                v, e = gauss_panel(integrand, lo, hi)
                if e > tol / 100:
                    raise ConvergenceFailure(f"panel [{lo}, {hi}] error {mpmath.nstr(e, 3)}")
                total += v
            return total

        partial = []
        s = panel(0, half / 2)
        partial.append(s)
        previous = None
        for k in range(1, max_panels + 1):
            s += panel((k - mpmath.mpf(0.5)) * half, (k + mpmath.mpf(0.5)) * half)
            partial.append(s)
            if k >= 20 and k % 10 == 0:
                table = mpmath.shanks(partial[-20:])
                estimate = table[-1][-1]
                if previous is not None and abs(estimate - previous) < tol / 100:
                    rhs = estimate / mpmath.sqrt(mpmath.pi)
                    return lhs, rhs
                previous = estimate
        raise ConvergenceFailure(f"cosine identity did not settle within {max_panels} panels")


def riesz_kernel_g(t, N: int = 10**4, table: MoebiusTable | None = None):
    """(partial sum to N, tail bound t^(-3/2)/N) of sum mu(n) n cos(3/2 arctan(n^2 t))/(1+n^4 t^2)^(3/4)."""
    t = float(t)
    if t <= 0:
        raise ValueError("t must be > 0")
    if table is None:
        if N > SIEVE_LIMIT:
            raise SieveTooSmall(f"N={N} exceeds sieve limit {SIEVE_LIMIT}")
        table = default_table(max(N, DEFAULT_SIEVE if N <= DEFAULT_SIEVE else N))
    if N > table.N:
        raise SieveTooSmall(f"needs N={N} but the sieve holds {table.N}")
    n = np.arange(1, N + 1, dtype=np.float64)
    mu = table.mu[1 : N + 1].astype(np.float64)
    a = n * n * t
    terms = mu * n * np.cos(1.5 * np.arctan(a)) / (1 + a * a) ** 0.75
    return math.fsum(terms.tolist()), t**-1.5 / N


def riesz_report(xs, eps: float = 1e-10) -> list[tuple]:
    """Rows (x, F_power or None, F_mobius, F_mobius/sqrt(x))."""
    rows = []
    for x in xs:
        x = float(x)
        power = float(riesz_F_power(x, eps).value) if x <= 100 else None
        mob = riesz_F_mobius(x, eps).value
        rows.append((x, power, mob, mob / math.sqrt(x) if x > 0 else 0.0))
    return rows


def riesz_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "F_power", "F_mobius", "F_scaled"])
    for x, p, m, s in rows:
        writer.writerow([repr(x), "" if p is None else repr(p), repr(m), repr(s)])
    return out.getvalue()
