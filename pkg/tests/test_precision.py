from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hsine import precision
from hsine.precision import PrecisionContext


@pytest.mark.parametrize("n, expected", [(0, Fraction(0)), (1, Fraction(1)), (5, Fraction(137, 60))])
def test_harmonic_examples(n, expected):
    assert precision.harmonic(n) == expected


def test_harmonic_rejects_negative():
    with pytest.raises(ValueError):
        precision.harmonic(-1)


def test_harmonic_matches_direct_sum():
    for n in (10, 123, 777):
        assert precision.harmonic(n) == sum(Fraction(1, k) for k in range(1, n + 1))


def test_harmonic_squares():
    assert precision.harmonic_squares(3) == Fraction(1) + Fraction(1, 4) + Fraction(1, 9)


@given(st.integers(min_value=1, max_value=300))
@settings(max_examples=60, deadline=None)
def test_identities_exact(n):
    lhs, rhs = precision.lemma_identity(n)
    assert lhs == rhs
    lhs, rhs = precision.gr_identity(n)
    assert lhs == rhs


def test_identity_small_cases():
    assert precision.lemma_identity(1) == (Fraction(-1), Fraction(-1))
    assert precision.gr_identity(2) == (Fraction(3, 2), Fraction(3, 2))


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(14)
    with pytest.raises(ValueError):
        PrecisionContext(30, -1)
    ctx = PrecisionContext(40, 5)
    assert ctx.effective == 45
    assert ctx.tolerance() == mpmath.mpf(10) ** -40


@pytest.mark.parametrize("n", [0, 1, 7, 50, 20_000])
def test_digamma_trigamma_at_integers(n):
    ctx = PrecisionContext(40)
    with mpmath.workdps(60):
        assert abs(precision.digamma_int(n, ctx) - mpmath.psi(0, n + 1)) < mpmath.mpf(10) ** -40
        assert abs(precision.trigamma_int(n, ctx) - mpmath.psi(1, n + 1)) < mpmath.mpf(10) ** -40


def test_constants():
    ctx = PrecisionContext(50)
    with mpmath.workdps(70):
        assert abs(precision.euler_gamma(ctx) - mpmath.euler) < mpmath.mpf(10) ** -50
        assert abs(precision.pi(ctx) - mpmath.pi) < mpmath.mpf(10) ** -50


@pytest.mark.parametrize(
    "value, expected",
    [
        (3, Fraction(3)),
        ("0.1", Fraction(1, 10)),
        (0.5, Fraction(1, 2)),
        (-2.25, Fraction(-9, 4)),
        (mpmath.mpf(-3.5), Fraction(-7, 2)),
        (mpmath.mpf(0), Fraction(0)),
        (mpmath.mpf(2) ** 70, Fraction(2**70)),
    ],
)
def test_to_fraction(value, expected):
    assert precision.to_fraction(value) == expected


def test_split_complex_keeps_signs():
    assert precision.split_complex(mpmath.mpc(-3, -2)) == (Fraction(-3), Fraction(-2))
    assert precision.split_complex(complex(1.5, -0.25)) == (Fraction(3, 2), Fraction(-1, 4))
