from fractions import Fraction

import mpmath
import pytest

from hsine import asymptotics, series
from hsine.asymptotics import _block
from hsine.errors import DomainError
from hsine.precision import PrecisionContext


def r(t):
    return abs(series.eval_f_series(t).value - asymptotics.first_order_f(t))


def test_coefficient_examples():
    c = asymptotics.expansion_coefficients(6)
    assert c.A[0] == -1 and c.B[0] == 1 and c.D[3] == Fraction(1, 2)
    with mpmath.workdps(40):
        assert abs(c.C[0] + mpmath.pi**2 / 6) < 1e-35
    assert all(b * (n + 1) == 1 for n, b in enumerate(c.B))
    assert all(c.C[n] < c.C[n + 1] < 0 for n in range(5))
    with pytest.raises(ValueError):
        asymptotics.expansion_coefficients(0)


def test_coefficients_match_kernel_derivatives():
    from hsine.checks import _coefficients_by_differences

    ok, detail = _coefficients_by_differences()
    assert ok, detail


def test_domain():
    with pytest.raises(DomainError):
        asymptotics.eval_J_asymptotic(1)
    with pytest.raises(DomainError):
        asymptotics.first_order_f(0.5)
    with pytest.raises(ValueError):
        asymptotics.eval_J_asymptotic(10, 31)


def test_order_one_is_first_order_f():
    for t in (100, 400):
        d = abs(asymptotics.eval_J_asymptotic(t, 1).f - asymptotics.first_order_f(t))
        assert d * t < 1e-20


def test_order_one_within_residual_estimate():
    ev = asymptotics.eval_J_asymptotic(100, 1)
    assert ev.residual_estimate >= 0
    assert abs(ev.f - series.eval_f_series(100).value) <= ev.residual_estimate


def test_more_terms_help_at_800():
    ref = series.eval_f_series(800).value
    e1 = abs(asymptotics.eval_J_asymptotic(800, 1).f - ref)
    e3 = abs(asymptotics.eval_J_asymptotic(800, 3).f - ref)
    assert e3 < e1 and e3 <= 1e-3


def test_leading_d_term():
    ctx = PrecisionContext(30)
    t = mpmath.mpf(10) ** 6
    with ctx.workdps():
        coeffs = asymptotics.expansion_coefficients(1, ctx)
        block = _block(0, t, mpmath.log(t), mpmath.expj(t), coeffs, ctx)
        lead = -mpmath.cos(t) * mpmath.log(t) ** 2 / (2 * t)
        assert abs(mpmath.im(block) - lead) < abs(lead) * 0.5


def test_adopted_phase_beats_flipped_phase():
    ctx = PrecisionContext(30)
    for t in (50, 100):
        ref = series.eval_f_series(t).value
        with ctx.workdps():
            tm = mpmath.mpf(t)
            coeffs = asymptotics.expansion_coefficients(6, ctx)
            args = (tm, mpmath.log(tm), mpmath.expj(tm), coeffs, ctx)
            adopted = sum(_block(n, *args, d_phase=-1) for n in range(5))
            flipped = sum(_block(n, *args, d_phase=+1) for n in range(5))
            assert abs(mpmath.im(adopted) - ref) < 1e-4
            assert abs(mpmath.im(flipped) - ref) > 1e-2


def test_first_order_scaled_residual():
    t = 100
    assert r(t) * t**2 / mpmath.log(t) ** 2 <= 5


def test_residual_ratio_holds_on_first_two_doublings():
    assert r(100) <= 0.6 * r(50)
    assert r(200) <= 0.6 * r(100)


def test_residual_ratio_all_doublings():
    """r(2t) <= 0.6 r(t) for t in 50, 100, 200, 400; fails at t = 200 (ratio 0.85)."""
    ratios = [r(2 * t) / r(t) for t in (50, 100, 200, 400)]
    assert all(q <= 0.6 for q in ratios), [mpmath.nstr(q, 3) for q in ratios]


def test_residual_envelope_decays():
    # the residual oscillates; its envelope over a period still shrinks on doubling
    def envelope(t):
        return max(r(t + k * 0.25) for k in range(26))

    for t in (50, 100, 200, 400):
        assert envelope(2 * t) <= 0.6 * envelope(t)


def test_zeros_near_cosine_zeros():
    """Each zero of cos t in [100, 150] has a zero of f within 0.5.

    Fails: the log t / t term shifts every second zero by about 0.8 to 1.1.
    """
    from hsine.zeros import bracket_zeros

    found = [(a + b) / 2 for a, b in bracket_zeros(100, 150, eps=1e-12)]
    for k in range(32, 48):
        c = (k + 0.5) * mpmath.pi
        if 100.5 < c < 149.5:
            assert min(abs(c - float(z)) for z in found) < 0.5


def test_zeros_near_first_order_zeros():
    from hsine.zeros import bracket_zeros

    found = [float((a + b) / 2) for a, b in bracket_zeros(100, 150, eps=1e-12)]
    grid = [100 + k / 100 for k in range(5001)]
    vals = [asymptotics.first_order_f(t) for t in grid]
    predicted = [grid[k] for k in range(5000) if vals[k] * vals[k + 1] < 0]
    assert len(predicted) == len(found)
    assert max(abs(a - b) for a, b in zip(found, predicted)) < 0.3
