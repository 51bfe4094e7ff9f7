import math
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from chaosmoments import (
    CoefficientSequence,
    CumulantSequence,
    MomentSequence,
    cumulants_from_coefficients,
    cumulants_from_moments,
    moments_from_coefficients,
    target_coefficients,
    target_cumulants,
    target_moments,
)
from chaosmoments.errors import CapacityError, InvalidInputError
from chaosmoments.moments import (
    double_factorial,
    moments_from_cumulants_enum,
    moments_from_cumulants_recursive,
)
from chaosmoments.partitions import catalan_number, enumerate_noncrossing_partitions, enumerate_set_partitions


def partition_sum(kappa, n, noncrossing):
    # literal sum over partitions, one product per partition
    parts = enumerate_noncrossing_partitions(n) if noncrossing else enumerate_set_partitions(n)
    return sum(math.prod(kappa[len(b) - 1] for b in p.blocks) for p in parts)


def random_cumulants(rng, kind, R):
    vals = [0.0] + list(rng.normal(size=R - 1) * rng.uniform(0.1, 2.0))
    return CumulantSequence(kind, vals)


def abs_scale(c, R):
    # magnitude of the terms being summed, used to scale cancellation errors
    absc = CumulantSequence(c.kind, [abs(v) for v in c.values])
    return moments_from_cumulants_recursive(absc, R).as_array()


# forward conversion ----------------------------------------------------------

def test_enum_examples():
    classical = moments_from_cumulants_enum(target_cumulants("classical", 4))
    assert classical[4] == 9
    free = moments_from_cumulants_enum(target_cumulants("free", 6))
    assert free[6] == Fraction(33, 4)
    impostor = CoefficientSequence("classical", [1 / math.sqrt(2)] * 2)
    c = cumulants_from_coefficients(impostor, 6)
    assert float(moments_from_cumulants_enum(c)[6]) == pytest.approx(265, rel=1e-12)
    assert partition_sum(c.values, 6, False) == pytest.approx(265, rel=1e-12)


def test_recursive_examples():
    assert moments_from_cumulants_recursive(target_cumulants("classical", 6))[6] == 225
    assert moments_from_cumulants_recursive(target_cumulants("free", 4))[4] == Fraction(5, 2)


@pytest.mark.parametrize("kind,expected", [("classical", [1, 3, 15, 105]), ("free", [1, 2, 5, 14])])
def test_gaussian_and_semicircle(kind, expected):
    c = CumulantSequence(kind, (0, 1) + (0,) * 6)
    m = moments_from_cumulants_recursive(c)
    assert [m[2 * r] for r in range(1, 5)] == expected
    if kind == "classical":
        assert expected == [double_factorial(2 * r - 1) for r in range(1, 5)]
    else:
        assert expected == [catalan_number(r) for r in range(1, 5)]


@pytest.mark.parametrize("kind,R", [("classical", 8), ("free", 10)])
def test_enum_matches_literal_partition_sum(kind, R, rng):
    for _ in range(20):
        c = random_cumulants(rng, kind, R)
        m = moments_from_cumulants_enum(c).as_array()
        scale = abs_scale(c, R)
        for n in range(1, R + 1):
            ref = partition_sum(c.values, n, kind == "free")
            assert abs(m[n - 1] - ref) <= 1e-12 * max(1.0, scale[n - 1])


@pytest.mark.parametrize("kind,R", [("classical", 10), ("free", 12)])
def test_enum_matches_recursion(kind, R, rng):
    for _ in range(50):
        c = random_cumulants(rng, kind, R)
        a = moments_from_cumulants_enum(c).as_array()
        b = moments_from_cumulants_recursive(c).as_array()
        scale = abs_scale(c, R)
        assert np.all(np.abs(a - b) <= 1e-10 * np.maximum(1.0, scale))


def test_order_errors():
    c = target_cumulants("classical", 6)
    with pytest.raises(InvalidInputError):
        moments_from_cumulants_recursive(c, 7)
    with pytest.raises(InvalidInputError):
        moments_from_cumulants_enum(c, 8)
    big = target_cumulants("classical", 14)
    with pytest.raises(CapacityError):
        moments_from_cumulants_enum(big, 13)


# inversion -------------------------------------------------------------------

def test_inversion_examples():
    c = cumulants_from_moments(MomentSequence("classical", (0, 1, 0, 9)))
    assert c[4] == 6
    c = cumulants_from_moments(MomentSequence("free", (0, 1, 0, 2.5)))
    assert c[4] == pytest.approx(0.5, rel=1e-15)


def test_inversion_requires_centering():
    with pytest.raises(InvalidInputError):
        cumulants_from_moments(MomentSequence("classical", (0.1, 1, 0, 3)))
    with pytest.raises(InvalidInputError):
        cumulants_from_moments(MomentSequence("free", (Fraction(1, 10**20), 1)))


@pytest.mark.parametrize("kind", ["classical", "free"])
def test_inversion_round_trip(kind, rng):
    for _ in range(100):
        c = random_cumulants(rng, kind, 10)
        m = moments_from_cumulants_enum(c)
        back = cumulants_from_moments(m).as_array()
        scale = abs_scale(c, 10)
        assert np.all(np.abs(back - c.as_array()) <= 1e-9 * np.maximum(1.0, scale))


def test_classical_inversion_fourth_order_closed_form(rng):
    for _ in range(50):
        c = random_cumulants(rng, "classical", 4)
        m = moments_from_cumulants_recursive(c)
        assert m[4] - 3 * m[2] ** 2 == pytest.approx(c[4], abs=1e-12 * max(1, abs(m[4])))


def catalan_weighted_inversion(mu, n):
    # sum over NC partitions weighted by (-1)^(|pi|-1) Catalan(|pi|-1)
    total = 0
    for p in enumerate_noncrossing_partitions(n):
        k = len(p)
        total += (-1) ** (k - 1) * catalan_number(k - 1) * math.prod(mu[len(b)] for b in p.blocks)
    return total


def test_catalan_weighted_inversion_is_only_valid_at_low_order():
    # Weighting every non-crossing partition by the Moebius value of a full
    # lattice of its block count agrees with the true inversion at order 4
    # but not at order 6 (pairings would get weight 2 each, giving 10 m2^3
    # instead of the correct 7 m2^3 on centered input).
    mu = {1: Fraction(0), 2: Fraction(1), 3: Fraction(0), 4: Fraction(2), 5: Fraction(0), 6: Fraction(5)}
    seq = MomentSequence("free", tuple(mu[i] for i in range(1, 7)))
    exact = cumulants_from_moments(seq)
    assert catalan_weighted_inversion(mu, 4) == exact[4] == 0
    assert exact[6] == 0  # the semicircle has no free cumulants beyond order 2
    assert catalan_weighted_inversion(mu, 6) == 3


def test_free_inversion_sixth_order_closed_form():
    # kappa_6 = m6 - 6 m4 m2 - 3 m3^2 + 7 m2^3 on centered input
    m2, m3, m4, m5, m6 = (Fraction(x) for x in (1, Fraction(1, 3), Fraction(5, 2), 2, Fraction(33, 4)))
    c = cumulants_from_moments(MomentSequence("free", (0, m2, m3, m4, m5, m6)))
    assert c[6] == m6 - 6 * m4 * m2 - 3 * m3**2 + 7 * m2**3


# target laws -----------------------------------------------------------------

def test_classical_target_moments_exact():
    m = target_moments("classical", 16)
    c = target_cumulants("classical", 16)
    for r in range(1, 9):
        assert m[2 * r] == (factorial(2 * r) // (factorial(r) * 2**r)) ** 2
        assert c[2 * r] == factorial(2 * r - 1)
        assert m[2 * r - 1] == 0 and c[2 * r - 1] == 0
    assert m[16] == 2027025**2 == 4108830350625


def test_free_target_moments_exact():
    m = target_moments("free", 6)
    assert (m[2], m[4], m[6]) == (1, Fraction(5, 2), Fraction(33, 4))
    assert target_cumulants("free", 6)[6] == Fraction(1, 4)
    assert target_cumulants("classical", 8)[8] == 5040
    assert target_cumulants("free", 3)[3] == 0


@pytest.mark.parametrize("kind", ["classical", "free"])
def test_target_moments_from_target_cumulants_exactly(kind):
    c = target_cumulants(kind, 16)
    assert moments_from_cumulants_recursive(c).values == target_moments(kind, 16).values
    assert cumulants_from_moments(target_moments(kind, 16)).values == c.values


def test_target_cumulants_cross_checked_by_inversion():
    assert cumulants_from_moments(target_moments("classical", 8))[8] == 5040


def test_tetilla_three_ways():
    closed = target_moments("free", 12).as_array()
    nc_sum = moments_from_cumulants_enum(target_cumulants("free", 12)).as_array()
    spectral = moments_from_coefficients(target_coefficients("free"), 12).as_array()
    np.testing.assert_allclose(nc_sum, closed, rtol=1e-15)
    np.testing.assert_allclose(spectral, closed, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("r", range(1, 6))
def test_impostor_moments(r):
    expected = sum((-1) ** s * factorial(2 * r) // factorial(2 * r - s) for s in range(2 * r + 1))
    impostor = CoefficientSequence("classical", [1 / math.sqrt(2)] * 2)
    got = moments_from_coefficients(impostor, 2 * r)[2 * r]
    assert got == pytest.approx(expected, rel=1e-12)
    if r == 2:
        assert expected == 9
    if r == 3:
        assert expected == 265


def test_impostor_moments_by_integration():
    # (N1^2 + N2^2 - 2)/2 is Exp(1) - 1; integrate against the density
    from scipy import integrate

    for r in (2, 3, 4):
        val, _ = integrate.quad(lambda x: (x - 1) ** (2 * r) * math.exp(-x), 0, np.inf)
        impostor = CoefficientSequence("classical", [1 / math.sqrt(2)] * 2)
        assert moments_from_coefficients(impostor, 2 * r)[2 * r] == pytest.approx(val, rel=1e-9)


def test_target_order_validation():
    with pytest.raises(InvalidInputError):
        target_moments("classical", 1)
    with pytest.raises(InvalidInputError):
        target_cumulants("free", 0)


def test_exact_arithmetic_survives_recursion():
    c = CumulantSequence("classical", (0, Fraction(1, 3), Fraction(1, 7), Fraction(2, 5)))
    m = moments_from_cumulants_recursive(c)
    assert m.is_exact()
    assert m[4] == Fraction(2, 5) + 3 * Fraction(1, 9)
