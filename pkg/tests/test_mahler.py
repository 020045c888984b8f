import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sturmbeta.errors import DivergentInput
from sturmbeta.mahler import identity_check, mahler_f, series_tail
from sturmbeta.numeric import SQRT2_MINUS_1, TAU_INV2, RealBall

from oracles import IDENTITY_TAU2_01, IDENTITY_TAU2_13, close


def exact_partial(w: Fraction, z: Fraction, n: int) -> Fraction:
    return sum(math.floor(k * w) * z ** k for k in range(1, n + 1))


def test_rational_weight_closed_form():
    # floor(n/2) summed against z^n is z^2 / ((1 - z)(1 - z^2))
    v = mahler_f(Fraction(1, 2), Fraction(1, 3), bits=128).value
    assert v.lower_fraction() <= Fraction(3, 16) <= v.upper_fraction()
    assert v.rad < Fraction(1, 2 ** 120)


def test_integer_weight_closed_form():
    # w = 1: sum n z^n = z / (1 - z)^2
    z = Fraction(-2, 5)
    v = mahler_f(1, z).value
    assert v.lower_fraction() <= z / (1 - z) ** 2 <= v.upper_fraction()


def test_zero_argument():
    ev = mahler_f(TAU_INV2, 0)
    assert ev.value.is_exact() and ev.value.man == 0
    assert ev.terms_used == 0


@pytest.mark.parametrize("z", [Fraction(1), Fraction(-1), Fraction(3, 2)])
def test_divergent_input(z):
    with pytest.raises(DivergentInput):
        mahler_f(TAU_INV2, z)


def test_divergent_ball_straddling_one():
    z = RealBall.exact(1, 64).add_error(Fraction(1, 2 ** 40))
    with pytest.raises(DivergentInput):
        mahler_f(TAU_INV2, z)


@settings(max_examples=100, deadline=None)
@given(st.fractions(Fraction(-3), Fraction(3), max_denominator=50),
       st.fractions(Fraction(-9, 10), Fraction(9, 10), max_denominator=50))
def test_agrees_with_exact_partial_sums(w, z):
    v = mahler_f(w, z, bits=64).value
    n = 200
    head = exact_partial(w, z, n)
    m = abs(w) + 1
    r = abs(z)
    tail = m * (n * r ** (n + 1) / (1 - r) + r ** (n + 1) / (1 - r) ** 2)
    assert v.lower_fraction() - tail <= head <= v.upper_fraction() + tail


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 400), st.fractions(Fraction(1, 100), Fraction(99, 100), max_denominator=100))
def test_series_tail_is_an_upper_bound(N, r):
    bound = series_tail(RealBall.exact(r, 128), N)
    part = sum(k * r ** k for k in range(N + 1, N + 60))
    assert part <= bound


def test_tail_decreases_with_terms():
    r = RealBall.exact(Fraction(2, 3), 128)
    tails = [series_tail(r, n) for n in (10, 20, 40, 80)]
    assert tails == sorted(tails, reverse=True)


def test_refinement_consistent():
    coarse = mahler_f(SQRT2_MINUS_1, Fraction(1, 2), bits=64).value
    fine = mahler_f(SQRT2_MINUS_1, Fraction(1, 2), bits=256).value
    assert coarse.overlaps(fine)
    assert fine.rad < coarse.rad


@pytest.mark.parametrize("a,b,oracle", [(0, 1, IDENTITY_TAU2_01), (1, 3, IDENTITY_TAU2_13)])
def test_identity(a, b, oracle):
    rep = identity_check(TAU_INV2, a, b, bits=512)
    for v in rep.values.values():
        assert close(v, oracle)
        assert v.rad < Fraction(1, 10 ** 40)
    assert rep.max_gap < Fraction(1, 10 ** 40)


def test_identity_report_json():
    rep = identity_check(SQRT2_MINUS_1, 0, 1, bits=256)
    j = json.loads(json.dumps(rep.to_json()))
    assert set(j["values"]) == {"digit_series", "mahler", "closed_form"}
    assert float(j["max_gap"]) < 1e-40
