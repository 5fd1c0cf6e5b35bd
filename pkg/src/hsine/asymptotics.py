"""Large-t expansion of J(t) (and of f(t) = Im J(t)).

Near the endpoints the kernel splits as

    g(z) = sum A_n z^n + log z sum B_n z^n                    (z -> 0)
    g(z) = sum C_n (1-z)^n + log^2(1-z) sum D_n (1-z)^n        (z -> 1)

and integrating the Laplace representation term by term gives four sums in
n!/t^(n+1).  The log-weighted integrals are

    int_0^inf y^n (log y + a) e^{-ty} dy   = n!/t^(n+1) (psi(n+1) - log t + a)
    int_0^inf y^n (log y + a)^2 e^{-ty} dy = n!/t^(n+1) (psi'(n+1) + (psi(n+1) - log t + a)^2)

with a = +i pi/2 on the imaginary axis (log(iy)) and a = -i pi/2 on the line
Re z = 1 (log(-iy)).  The square is insensitive to the overall sign, so the
second bracket may equally be written (gamma - H_n + log t + i pi/2)^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError
from .precision import (
    PrecisionContext,
    digamma_int,
    fraction_to_mpf,
    harmonic,
    resolve,
    trigamma_int,
)

DEFAULT_ORDER = 5
MAX_ORDER = 30


@dataclass(frozen=True)
class ExpansionCoefficients:
    """A_n, B_n, D_n exact; C_n = -psi'(n+1) at the context precision."""

    A: tuple
    B: tuple
    C: tuple
    D: tuple

    def __len__(self):
        return len(self.A)


def expansion_coefficients(N: int, ctx: PrecisionContext | None = None) -> ExpansionCoefficients:
    if N < 1:
        raise ValueError("N must be >= 1")
    ctx = resolve(ctx)
    A = tuple(harmonic(n + 1) / (n + 1) - Fraction(2, (n + 1) ** 2) for n in range(N))
    B = tuple(Fraction(1, n + 1) for n in range(N))
    with ctx.workdps():
        C = tuple(-trigamma_int(n, ctx) for n in range(N))
    D = tuple(Fraction(1, 2) for _ in range(N))
    return ExpansionCoefficients(A, B, C, D)


@dataclass
class AsymptoticEval:
    value: mpmath.mpc
    order: int
    residual_estimate: mpmath.mpf

    @property
    def f(self):
        return mpmath.im(self.value)


def _block(n, t, log_t, eit, coeffs, ctx, d_phase=-1):
    """Contribution of index n from all four sums.

    ``d_phase`` selects the sign of i pi/2 inside the log^2 bracket; -1 is
    the value fixed by log(-iy) = log y - i pi/2.
    """
    j = mpmath.mpc(0, 1)
    half_pi_i = j * mpmath.pi / 2
    scale = mpmath.factorial(n) / t ** (n + 1)
    a_n = fraction_to_mpf(coeffs.A[n])
    b_n = fraction_to_mpf(coeffs.B[n])
    d_n = fraction_to_mpf(coeffs.D[n])
    c_n = coeffs.C[n]
    psi = digamma_int(n, ctx)
    psi1 = trigamma_int(n, ctx)
    left = j ** (n + 1) * (a_n + b_n * (psi - log_t + half_pi_i))
    bracket = psi1 + (psi - log_t + d_phase * half_pi_i) ** 2
    right = -j * eit * (-j) ** n * (c_n + d_n * bracket)
    return (left + right) * scale


def eval_J_asymptotic(t, order: int = DEFAULT_ORDER, ctx: PrecisionContext | None = None) -> AsymptoticEval:
    """Partial sum of the expansion through index order-1.

    ``residual_estimate`` is the magnitude of the first omitted block (index
    ``order``); it is a heuristic, the series being divergent.
    """
    ctx = resolve(ctx)
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in 1..{MAX_ORDER}")
    with ctx.workdps():
        t = mpmath.mpf(t)
        if t <= 1:
            raise DomainError("eval_J_asymptotic needs t > 1")
        coeffs = expansion_coefficients(order + 1, ctx)
        log_t = mpmath.log(t)
        eit = mpmath.expj(t)
        total = mpmath.mpc(0)
        for n in range(order):
            total += _block(n, t, log_t, eit, coeffs, ctx)
        residual = abs(_block(order, t, log_t, eit, coeffs, ctx))
        return AsymptoticEval(total, order, residual)


def first_order_f(t, ctx: PrecisionContext | None = None):
    """Leading terms of f(t): the log^2 t/t, log t/t and 1/t parts of Im J."""
    ctx = resolve(ctx)
    with ctx.workdps():
        t = mpmath.mpf(t)
        if t <= 1:
            raise DomainError("first_order_f needs t > 1")
        gamma = mpmath.euler
        pi = mpmath.pi
        c, s = mpmath.cos(t), mpmath.sin(t)
        L = mpmath.log(t)
        return (
            -c / 2 * L**2
            + (pi * s / 2 - gamma * c - 1) * L
            + (5 * pi**2 * c / 24 - gamma**2 * c / 2 + gamma * pi * s / 2 - 1 - gamma)
        ) / t
