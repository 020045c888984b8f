import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sturmbeta.beta_expansion import BetaNumber, solve_beta, sturmian_beta
from sturmbeta.errors import SlopeMismatch
from sturmbeta.numeric import SQRT2_MINUS_1, TAU_INV2, QuadraticSurd, RealBall
from sturmbeta.parry_measure import (birkhoff_frequencies, density, density_grid,
                                     frequency_report, normalizing_factor, proof_case,
                                     series_I, series_J)
from sturmbeta.words import upper_mechanical

from oracles import F_TAU, H_TAU_HALF, close

SQRT5_MINUS_2 = QuadraticSurd(-2, 1, 5, 1)


@pytest.fixture(scope="module")
def tau():
    return solve_beta("11")


@pytest.fixture(scope="module")
def beta01():
    return sturmian_beta(TAU_INV2, 0, 1)


@pytest.fixture(scope="module")
def beta13():
    return sturmian_beta(TAU_INV2, 1, 3)


def float_series(alpha, a, b, beta, weight, n=400):
    """Plain double-precision sum of weight(n, ceil(alpha n), eps_n) / beta^(n+1)."""
    eps = [a + (b - a) * d for d in upper_mechanical(alpha, 0).prefix(n)]
    al = float(alpha.ball(64).mid)
    return sum(weight(k, math.ceil(al * k), e) / beta ** (k + 1) for k, e in enumerate(eps))


# ------------------------------------------------------------ normalizing F
def test_normalizing_factor_golden(tau):
    F = normalizing_factor(tau, bits=160)
    assert close(F, F_TAU)
    assert F.rad < Fraction(1, 10 ** 45)


def test_normalizing_factor_integer_base():
    # T^n 1 = 0 for n >= 1, so only the n = 0 term survives
    F = normalizing_factor(BetaNumber.from_integer(2))
    assert F.lower_fraction() <= 1 <= F.upper_fraction()
    assert F.rad < Fraction(1, 2 ** 100)


def test_normalizing_factor_float_oracle(beta01):
    bf = float(beta01.value.mid)
    want = float_series(TAU_INV2, 0, 1, bf, lambda k, c, e: (k + 1) * e)
    assert abs(float(normalizing_factor(beta01).mid) - want) < 1e-12


# ------------------------------------------------------------------ density
def test_density_golden_half(tau):
    h = density(tau, Fraction(1, 2), bits=160)
    assert close(h, H_TAU_HALF)


def test_density_vanishes_at_one(tau, beta01):
    for beta in (tau, beta01):
        h = density(beta, 1)
        assert h.lower_fraction() <= 0 <= h.upper_fraction()


def test_density_bounds(beta01):
    # 1/F <= h <= 1/(F (1 - 1/beta)) on [0, 1)
    F = normalizing_factor(beta01)
    inv = beta01.value.inverse()
    for x in (Fraction(0), Fraction(1, 7), Fraction(1, 2), Fraction(9, 10)):
        h = density(beta01, x, F=F)
        assert h >= 0
        assert not h > 1 / (F * (1 - inv))


@pytest.mark.parametrize("slope,a,b", [(TAU_INV2, 0, 1), (TAU_INV2, 1, 3), (SQRT2_MINUS_1, 0, 1)])
def test_density_integrates_to_one(slope, a, b):
    beta = sturmian_beta(slope, a, b)
    xs = (np.arange(200_000) + 0.5) / 200_000
    assert abs(density_grid(beta, xs).mean() - 1.0) < 1e-3


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1))
def test_density_grid_nonincreasing(x, y):
    beta = sturmian_beta(TAU_INV2, 0, 1, 64)
    lo, hi = sorted((x, y))
    h = density_grid(beta, np.array([lo, hi]), N=500)
    assert h[0] >= h[1]


# ------------------------------------------------------------ series I and J
def test_series_I_float_oracle(beta01, beta13):
    for beta, a, b in ((beta01, 0, 1), (beta13, 1, 3)):
        bf = float(beta.value.mid)
        want = float_series(TAU_INV2, a, b, bf, lambda k, c, e: c * e)
        assert abs(float(series_I(beta, TAU_INV2).mid) - want) < 1e-12


def test_series_J_float_oracle(beta01, beta13):
    for beta, a, b in ((beta01, 0, 1), (beta13, 1, 3)):
        bf = float(beta.value.mid)
        want = float_series(TAU_INV2, a, b, bf,
                            lambda k, c, e: (e == b) + (k - c) * e)
        assert abs(float(series_J(beta, TAU_INV2, a, b).mid) - want) < 1e-12


def test_series_rejects_wrong_slope(beta01):
    with pytest.raises(SlopeMismatch):
        series_I(beta01, SQRT2_MINUS_1)


# ---------------------------------------------------------------- defects
def test_proof_cases():
    assert proof_case(TAU_INV2, 0, 1) == ("a=0", "defect_b")
    assert proof_case(TAU_INV2, 1, 3) == ("a>=1,b*alpha>1", "defect_b")
    assert proof_case(SQRT5_MINUS_2, 1, 4) == ("a>=1,b*alpha<1", "defect_a")


@pytest.mark.parametrize("slope,a,b,approx", [
    (TAU_INV2, 0, 1, 0.1414), (TAU_INV2, 1, 3, 0.2490), (SQRT5_MINUS_2, 1, 4, 0.5277)])
def test_asserted_defect_positive(slope, a, b, approx):
    rep = frequency_report(slope, a, b)
    d = getattr(rep, rep.asserted)
    assert d.certainly_positive()
    assert abs(float(d.mid) - approx) < 5e-4


def test_frequencies_are_probabilities(beta01):
    rep = frequency_report(TAU_INV2, 0, 1)
    for m in (rep.mu_a, rep.mu_b):
        assert m >= 0 and m <= 1
    # beta < 2: only digits 0 and 1 occur
    total = rep.mu_a + rep.mu_b
    assert total.lower_fraction() <= 1 <= total.upper_fraction()


@pytest.mark.parametrize("slope,a,b", [(TAU_INV2, 0, 1), (TAU_INV2, 1, 3), (SQRT5_MINUS_2, 1, 4)])
def test_birkhoff_agrees(slope, a, b):
    rep = frequency_report(slope, a, b, birkhoff=True)
    assert rep.birkhoff["max_abs_error"] < 0.01


def test_birkhoff_seeded(beta01):
    f1 = birkhoff_frequencies(beta01, 0, 1, points=4, length=2000, seed=7)
    f2 = birkhoff_frequencies(beta01, 0, 1, points=4, length=2000, seed=7)
    assert np.array_equal(f1, f2)
    assert f1.shape == (4, 2)


def test_expansion_of_one_letter_frequency(beta01):
    w = beta01.expansion_of_one().prefix(100_000)
    assert abs(sum(w) / len(w) - float(TAU_INV2.ball(64).mid)) < 1e-3


def test_report_json(beta01):
    rep = frequency_report(TAU_INV2, 0, 1)
    j = json.loads(json.dumps(rep.to_json()))
    assert j["case"] == "a=0" and j["asserted"] == "defect_b"
    assert set(j["defect_b"]) >= {"midpoint", "radius"}
