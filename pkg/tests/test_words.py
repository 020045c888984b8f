from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sturmbeta.numeric import SQRT2_MINUS_1, SQRT3_MINUS_1_HALF, TAU_INV2, CFStream
from sturmbeta.words import (DigitWord, Order, characteristic, complexity, exchange, factor_set,
                             fibonacci_word, first_difference, frequency, height,
                             height_spread, is_balanced, lex_compare, lower_mechanical, rename,
                             shift, slope_of, upper_mechanical)

from oracles import LOWER_26, UPPER_26, RENAMED_13_27, FIB_34

SLOPES = [TAU_INV2, SQRT2_MINUS_1, SQRT3_MINUS_1_HALF]


def fib_oracle(n):
    """Fibonacci word from the substitution 0 -> 01, 1 -> 0."""
    w = "0"
    while len(w) < n:
        w = "".join("01" if c == "0" else "0" for c in w)
    return w[:n]


def test_fibonacci_word_matches_displayed_prefix():
    assert fibonacci_word(34).to_str() == FIB_34
    assert fibonacci_word(2).to_str() == "01"
    assert fibonacci_word(5000).to_str() == fib_oracle(5000)


def test_fibonacci_word_is_characteristic_word_of_tau_inv2():
    f = fibonacci_word(3000).to_str()
    assert characteristic(TAU_INV2).to_str(3000) == f
    assert lower_mechanical(TAU_INV2, TAU_INV2).to_str(3000) == f
    # s_{alpha,0} = 0 c_alpha, so it is f shifted right by one letter
    assert lower_mechanical(TAU_INV2, 0).to_str(3001) == "0" + f


def test_tau2_prefixes():
    assert upper_mechanical(TAU_INV2, 0).to_str(26) == UPPER_26
    assert lower_mechanical(TAU_INV2, 0).to_str(26) == LOWER_26


def test_rename_to_digits_1_3():
    assert rename(upper_mechanical(TAU_INV2, 0), 1, 3).to_str(27) == RENAMED_13_27


@pytest.mark.parametrize("alpha", SLOPES)
def test_upper_and_lower_share_characteristic_tail(alpha):
    lo, up, c = (w.to_str(2000) for w in
                 (lower_mechanical(alpha, 0), upper_mechanical(alpha, 0), characteristic(alpha)))
    assert lo == "0" + c[:1999] and up == "1" + c[:1999]


@pytest.mark.parametrize("alpha", SLOPES)
def test_heights_follow_floor(alpha):
    w = lower_mechanical(alpha, 0)
    for n in (1, 10, 100, 1000, 5000):
        assert height(w.prefix(n)) == alpha.floor_affine(n)


def test_slope_of_prefix_converges():
    w = lower_mechanical(TAU_INV2, 0)
    assert abs(float(slope_of(w.prefix(10000))) - float(TAU_INV2)) < 1e-3


def test_frequency_of_one():
    assert abs(float(frequency(characteristic(TAU_INV2), "1", 10000)) - 0.381966) < 1e-3


@pytest.mark.parametrize("alpha", SLOPES)
def test_sturmian_complexity(alpha):
    w = lower_mechanical(alpha, 0)
    assert [complexity(w, n, 20000) for n in range(1, 16)] == list(range(2, 17))


def test_factor_set_sorted_json():
    fs = factor_set(characteristic(TAU_INV2), 3, 1000)
    assert fs.to_json() == sorted(fs.to_json()) and len(fs) == 4


def test_periodic_word_complexity_bounded():
    w = DigitWord.periodic([0, 1, 1])
    assert complexity(w, 10, 1000) == 3


@pytest.mark.parametrize("alpha", SLOPES)
def test_balanced_and_spread_oracle(alpha):
    w = lower_mechanical(alpha, 0)
    assert is_balanced(w, 5000)
    for n in (1, 5, 17, 60):
        assert height_spread(w, n, 5000) <= 1


def test_unbalanced_word_has_witness():
    v = is_balanced(DigitWord.periodic([0, 0, 1, 1]), 100)
    assert not v and v.witness is not None


@given(st.lists(st.integers(0, 1), min_size=1, max_size=40))
def test_balance_agrees_with_height_spread(digits):
    w = DigitWord.finite(digits)
    spread_ok = all(height_spread(w, n, len(digits)) <= 1 for n in range(1, len(digits) + 1))
    assert bool(is_balanced(w, len(digits))) == spread_ok


def test_first_difference_and_lex_compare():
    x, y = DigitWord.finite("0101100"), DigitWord.finite("0101010")
    assert first_difference(x, y, 7) == 4
    assert lex_compare(x, y, 7) is Order.GREATER
    assert lex_compare(x, x, 7) is Order.EQUAL_TO_DEPTH


def test_morphisms():
    w = DigitWord.finite("0010")
    assert exchange(w).to_str() == "1101"
    assert rename(w, 2, 5).to_str() == "2252"
    assert shift(w, 1).to_str() == "010"


# ------------------------------------------------------------- order laws
@st.composite
def cf_slopes(draw):
    head = (0,) + tuple(draw(st.lists(st.integers(1, 6), min_size=1, max_size=6)))
    return CFStream(head, tuple(draw(st.lists(st.integers(1, 3), min_size=1, max_size=2))))


@settings(max_examples=200)
@given(st.sampled_from(SLOPES), st.integers(0, 999), st.integers(0, 999))
def test_intercept_monotonicity(alpha, i, j):
    r1, r2 = Fraction(i, 1000), Fraction(j, 1000)
    o = lex_compare(lower_mechanical(alpha, r1), lower_mechanical(alpha, r2), 10_000)
    expected = Order.EQUAL_TO_DEPTH if i == j else (Order.LESS if i < j else Order.GREATER)
    assert o is expected


@settings(max_examples=200)
@given(cf_slopes(), cf_slopes())
def test_characteristic_slope_monotonicity(a1, a2):
    # equal values may have different expansions; refinement cannot decide equality
    if abs(float(a1) - float(a2)) < 1e-4:
        return
    d = a1.compare(a2)
    o = lex_compare(characteristic(a1), characteristic(a2), 10_000)
    assert o is (Order.LESS if d < 0 else Order.GREATER)


@settings(max_examples=200)
@given(st.sampled_from(SLOPES), st.integers(1, 20), st.fractions(0, 1, max_denominator=50))
def test_sturmian_orbit_between_extremes(alpha, n, rho):
    """0c < s_{alpha,rho} < 1c for 0 < rho < 1, and 0c < sigma^n(1c) < 1c."""
    lo, up = lower_mechanical(alpha, 0), upper_mechanical(alpha, 0)
    assert lex_compare(lo, up, 10_000, 0, n) is Order.LESS
    assert lex_compare(up, up, 10_000, n, 0) is Order.LESS
    if 0 < rho < 1:
        s = lower_mechanical(alpha, rho)
        assert lex_compare(lo, s, 10_000) is Order.LESS
        assert lex_compare(s, up, 10_000) is Order.LESS


def test_array_matches_prefix():
    w = characteristic(SQRT2_MINUS_1)
    assert w.array(50, 10).tolist() == list(w.prefix(60)[10:])
    assert w.array(5).dtype == np.int64
